#pragma once

#include <algser/ratfunc.hpp>

#include <map>
#include <optional>
#include <vector>

namespace algser {

// Exact sparse Gaussian elimination over the base rational function field.
// Rows are added incrementally; solve() finds any solution of A z = rhs with
// unpivoted unknowns set to zero, solve_kernel() a nontrivial element of the
// nullspace of A (rhs ignored), both deterministically.
class LinearSystem {
 public:
  explicit LinearSystem(std::size_t ncols) : ncols_(ncols) {}

  using Row = std::map<std::size_t, RatFunc>;
  void add_row(Row coeffs, RatFunc rhs);
  std::size_t ncols() const { return ncols_; }
  std::size_t nrows() const { return rows_.size(); }

  std::optional<std::vector<RatFunc>> solve() const;
  std::optional<std::vector<RatFunc>> solve_kernel() const;

 private:
  struct Echelon;
  std::size_t ncols_;
  std::vector<std::pair<Row, RatFunc>> rows_;
};

}  // namespace algser
