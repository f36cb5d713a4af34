#include <algser/linalg.hpp>

#include <cassert>

namespace algser {

void LinearSystem::add_row(Row coeffs, RatFunc rhs) {
  for (auto it = coeffs.begin(); it != coeffs.end();)
    it = it->second.is_zero() ? coeffs.erase(it) : std::next(it);
  if (coeffs.empty() && rhs.is_zero()) return;
  rows_.push_back({std::move(coeffs), std::move(rhs)});
}

struct LinearSystem::Echelon {
  // Each reduced row remembers its pivot column.
  std::vector<std::pair<Row, RatFunc>> rows;
  std::vector<std::optional<std::size_t>> pivot_row_of_col;
  bool inconsistent = false;

  explicit Echelon(std::size_t ncols) : pivot_row_of_col(ncols) {}

  void insert(Row r, RatFunc b) {
    while (true) {
      // Reduce against existing pivots.
      auto lead = r.begin();
      if (lead == r.end()) {
        if (!b.is_zero()) inconsistent = true;
        return;
      }
      std::size_t col = lead->first;
      auto prow = pivot_row_of_col[col];
      if (!prow) {
        // Normalize so the pivot entry is 1 and register.
        RatFunc inv = lead->second.inverse();
        for (auto& [c, v] : r) v = v * inv;
        b = b * inv;
        pivot_row_of_col[col] = rows.size();
        rows.push_back({std::move(r), std::move(b)});
        return;
      }
      const auto& [pr, pb] = rows[*prow];
      RatFunc f = lead->second;  // pivot of pr is 1
      for (const auto& [c, v] : pr) {
        auto it = r.find(c);
        RatFunc nv = (it == r.end() ? RatFunc(v.characteristic()) : it->second) - f * v;
        if (nv.is_zero()) {
          if (it != r.end()) r.erase(it);
        } else if (it == r.end()) {
          r.emplace(c, std::move(nv));
        } else {
          it->second = std::move(nv);
        }
      }
      b = b - f * pb;
    }
  }
};

std::optional<std::vector<RatFunc>> LinearSystem::solve() const {
  std::uint32_t p = 0;
  if (!rows_.empty()) p = rows_.front().second.characteristic();
  Echelon ech(ncols_);
  for (const auto& [r, b] : rows_) {
    ech.insert(r, b);
    if (ech.inconsistent) return std::nullopt;
  }
  // Back-substitute from the highest pivot column down; free columns are 0.
  std::vector<RatFunc> x(ncols_, RatFunc(p));
  for (std::size_t col = ncols_; col-- > 0;) {
    auto prow = ech.pivot_row_of_col[col];
    if (!prow) continue;
    const auto& [r, b] = ech.rows[*prow];
    RatFunc v = b;
    for (const auto& [c, coeff] : r)
      if (c != col) v = v - coeff * x[c];
    x[col] = std::move(v);
  }
  return x;
}

std::optional<std::vector<RatFunc>> LinearSystem::solve_kernel() const {
  std::uint32_t p = 0;
  if (!rows_.empty()) p = rows_.front().second.characteristic();
  Echelon ech(ncols_);
  for (const auto& [r, b] : rows_) ech.insert(r, RatFunc(p));
  std::optional<std::size_t> free_col;
  for (std::size_t col = 0; col < ncols_; ++col)
    if (!ech.pivot_row_of_col[col]) {
      free_col = col;
      break;
    }
  if (!free_col) return std::nullopt;
  std::vector<RatFunc> x(ncols_, RatFunc(p));
  x[*free_col] = RatFunc::constant(p, Rat(1));
  for (std::size_t col = ncols_; col-- > 0;) {
    auto prow = ech.pivot_row_of_col[col];
    if (!prow) continue;
    const auto& [r, b] = ech.rows[*prow];
    RatFunc v(p);
    for (const auto& [c, coeff] : r)
      if (c != col) v = v - coeff * x[c];
    x[col] = std::move(v);
  }
  return x;
}

}  // namespace algser
