#include <algser/bivar.hpp>

#include <algorithm>
#include <sstream>
#include <vector>

namespace algser {

namespace {

// Grades (xe + yd, yd) lexicographically; the greatest term under this order
// is the normalization pivot.
bool graded_less(const BivarPoly::Key& a, const BivarPoly::Key& b) {
  Rat ta = a.first + Rat(a.second);
  Rat tb = b.first + Rat(b.second);
  if (ta != tb) return ta < tb;
  return a.second < b.second;
}

}  // namespace

BivarPoly::BivarPoly(TowerPtr t) : tow_(std::move(t)) {
  require(tow_ != nullptr, Errc::validation_error, "bivariate polynomial needs a tower");
}

unsigned long BivarPoly::ydeg() const {
  unsigned long d = 0;
  for (const auto& [k, c] : c_) d = std::max(d, k.second);
  return d;
}

Rat BivarPoly::xdeg() const {
  Rat d(0);
  for (const auto& [k, c] : c_)
    if (k.first > d) d = k.first;
  return d;
}

void BivarPoly::add_term(const Rat& xe, unsigned long yd, const Elem& c) {
  if (c.is_zero()) return;
  Key k{xe, yd};
  auto it = c_.find(k);
  if (it == c_.end()) {
    c_.emplace(k, c);
    return;
  }
  Elem s = it->second + c;
  if (s.is_zero())
    c_.erase(it);
  else
    it->second = std::move(s);
}

Elem BivarPoly::coeff(const Rat& xe, unsigned long yd) const {
  auto it = c_.find({xe, yd});
  if (it == c_.end()) return Elem::zero(tow_);
  return it->second;
}

BivarPoly BivarPoly::monomial(TowerPtr t, const Rat& xe, unsigned long yd, Elem c) {
  BivarPoly p(std::move(t));
  p.add_term(xe, yd, c);
  return p;
}

BivarPoly BivarPoly::operator+(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.c_) r.add_term(k.first, k.second, c);
  return r;
}

BivarPoly BivarPoly::operator-(const BivarPoly& o) const {
  BivarPoly r = *this;
  for (const auto& [k, c] : o.c_) r.add_term(k.first, k.second, -c);
  return r;
}

BivarPoly BivarPoly::operator*(const BivarPoly& o) const {
  BivarPoly r(tow_);
  for (const auto& [ka, ca] : c_)
    for (const auto& [kb, cb] : o.c_)
      r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

BivarPoly BivarPoly::scaled(const Elem& c) const {
  BivarPoly r(tow_);
  if (c.is_zero()) return r;
  for (const auto& [k, v] : c_) r.c_.emplace(k, v * c);
  return r;
}

BivarPoly BivarPoly::yslice(unsigned long j) const {
  BivarPoly r(tow_);
  for (const auto& [k, c] : c_)
    if (k.second == j) r.c_.emplace(Key{k.first, 0ul}, c);
  return r;
}

BivarPoly BivarPoly::normalized() const {
  if (c_.empty()) return *this;
  const Key* best = nullptr;
  for (const auto& [k, c] : c_)
    if (best == nullptr || graded_less(*best, k)) best = &k;
  Elem lead = c_.at(*best);
  BivarPoly r(tow_);
  Elem inv = lead.inverse();
  for (const auto& [k, c] : c_) r.c_.emplace(k, c * inv);
  return r;
}

YSeriesPoly BivarPoly::to_ypoly() const {
  YSeriesPoly p;
  unsigned long d = ydeg();
  std::vector<std::vector<Term>> rows(d + 1);
  for (const auto& [k, c] : c_) rows[k.second].push_back({k.first, c});
  p.coeff.reserve(d + 1);
  for (unsigned long j = 0; j <= d; ++j)
    p.coeff.push_back(Series::explicit_terms(tow_, std::move(rows[j])));
  return p;
}

std::string BivarPoly::to_string() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print highest y degree first, then descending x exponent, the way a
  // human writes an annihilator.
  std::vector<const std::pair<const Key, Elem>*> order;
  order.reserve(c_.size());
  for (const auto& kv : c_) order.push_back(&kv);
  std::sort(order.begin(), order.end(), [](auto* a, auto* b) {
    if (a->first.second != b->first.second) return a->first.second > b->first.second;
    return a->first.first > b->first.first;
  });
  for (auto* kv : order) {
    const auto& [k, c] = *kv;
    if (!first) os << " + ";
    first = false;
    os << "(" << c.to_string() << ")";
    if (k.first != 0) os << "*x^" << rat_to_string(k.first);
    if (k.second == 1)
      os << "*y";
    else if (k.second > 1)
      os << "*y^" << k.second;
  }
  return os.str();
}

bool divides_in_y(const BivarPoly& g, const BivarPoly& f) {
  require(!g.is_zero(), Errc::validation_error, "division by the zero polynomial");
  if (f.is_zero()) return true;
  unsigned long dg = g.ydeg();
  BivarPoly lead = g.yslice(dg);
  BivarPoly rem = f;
  // Pseudo-divide: scale the remainder by the leading y-coefficient of g so
  // each elimination step stays polynomial.  Exactness in y over the
  // x-fraction field is equivalent to the pseudo-remainder vanishing.
  while (!rem.is_zero() && rem.ydeg() >= dg) {
    unsigned long dr = rem.ydeg();
    BivarPoly top = rem.yslice(dr);
    BivarPoly shift(g.tower());
    for (const auto& [k, c] : top.terms()) shift.add_term(k.first, dr - dg, c);
    BivarPoly next = rem * lead - g * shift;
    if (!next.is_zero() && next.ydeg() >= dr) {
      // Leading terms failed to cancel; only possible on malformed input.
      fail(Errc::internal, "pseudo-division failed to reduce the y degree");
    }
    rem = std::move(next);
  }
  return rem.is_zero();
}

}  // namespace algser
