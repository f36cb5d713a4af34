#include <algser/ratfunc.hpp>

#include <cassert>

namespace algser {

RatFunc::RatFunc(MPoly num, MPoly den) : num_(std::move(num)), den_(std::move(den)) {
  require(!den_.is_zero(), Errc::validation_error, "zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = MPoly::constant(den_.characteristic(), Int(1));
    return;
  }
  if (den_.is_one()) return;
  MPoly g = MPoly::gcd(num_, den_);
  if (!g.is_one()) {
    num_ = *num_.try_div(g);
    den_ = *den_.try_div(g);
  }
  if (num_.characteristic() == 0) {
    // Remove the shared integer content, keep den's leading coefficient > 0.
    Int cn = num_.content(), cd = den_.content();
    Int cg;
    mpz_gcd(cg.get_mpz_t(), cn.get_mpz_t(), cd.get_mpz_t());
    if (cd < 0) cg = -cg;
    if (cg != 1) {
      num_ = num_.divide_content(cg);
      den_ = den_.divide_content(cg);
    }
  } else {
    Int lc = den_.leading_coeff();
    if (lc != 1) {
      num_ = num_.divide_content(lc);
      den_ = den_.divide_content(lc);
    }
  }
}

RatFunc RatFunc::from_poly(MPoly f) {
  RatFunc r(f.characteristic());
  r.num_ = std::move(f);
  return r;
}

RatFunc RatFunc::constant(std::uint32_t p, const Rat& q) {
  return RatFunc(MPoly::constant(p, Int(q.get_num())), MPoly::constant(p, Int(q.get_den())));
}

RatFunc RatFunc::variable(std::uint32_t p, VarKey v) { return from_poly(MPoly::variable(p, v)); }

Rat RatFunc::rat_value() const {
  assert(is_rat_const());
  Rat q(num_.constant_value(), den_.constant_value());
  q.canonicalize();
  return q;
}

RatFunc RatFunc::operator+(const RatFunc& o) const {
  if (is_zero()) return o;
  if (o.is_zero()) return *this;
  // Pre-reduce by the denominator gcd so the final normalization works on
  // small, usually coprime operands.
  MPoly g = MPoly::gcd(den_, o.den_);
  if (g.is_one()) return RatFunc(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  MPoly d1 = *den_.try_div(g), d2 = *o.den_.try_div(g);
  return RatFunc(num_ * d2 + o.num_ * d1, den_ * d2);
}

RatFunc RatFunc::operator-(const RatFunc& o) const { return *this + (-o); }

RatFunc RatFunc::operator-() const {
  RatFunc r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFunc RatFunc::operator*(const RatFunc& o) const {
  if (is_zero() || o.is_zero()) return RatFunc(characteristic());
  // Cross-reduce before multiplying to keep the gcd in normalize() trivial.
  MPoly g1 = MPoly::gcd(num_, o.den_);
  MPoly g2 = MPoly::gcd(o.num_, den_);
  MPoly n1 = g1.is_one() ? num_ : *num_.try_div(g1);
  MPoly d2 = g1.is_one() ? o.den_ : *o.den_.try_div(g1);
  MPoly n2 = g2.is_one() ? o.num_ : *o.num_.try_div(g2);
  MPoly d1 = g2.is_one() ? den_ : *den_.try_div(g2);
  return RatFunc(n1 * n2, d1 * d2);
}

RatFunc RatFunc::operator/(const RatFunc& o) const {
  require(!o.is_zero(), Errc::validation_error, "division by zero");
  return RatFunc(num_ * o.den_, den_ * o.num_);
}

RatFunc RatFunc::inverse() const {
  require(!is_zero(), Errc::validation_error, "inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc RatFunc::pow(std::uint64_t e) const {
  RatFunc r = constant(characteristic(), Rat(1));
  RatFunc b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = (e >>= 1) ? b * b : b;
  }
  return r;
}

RatFunc RatFunc::frobenius(unsigned long r) const {
  std::uint32_t p = characteristic();
  if (p == 0 || r == 0) return *this;
  RatFunc out = *this;
  for (unsigned long i = 0; i < r; ++i) {
    // (f/g)^p: over F_p raising to the p substitutes t -> t^p termwise.
    out.num_ = out.num_.stretch_all(p);
    out.den_ = out.den_.stretch_all(p);
  }
  return out;  // already canonical: gcd and normalization survive stretching
}

std::optional<RatFunc> RatFunc::try_pth_root() const {
  std::uint32_t p = characteristic();
  if (p == 0) return *this;
  // In lowest terms f/g is a p-th power iff f and g both are: if (a/b)^p = f/g
  // with gcd(a,b)=1 then a^p/b^p is already reduced, and reduced forms are
  // unique up to units; unit normalization is Frobenius-stable.
  auto rn = num_.try_pth_root();
  if (!rn) return std::nullopt;
  auto rd = den_.try_pth_root();
  if (!rd) return std::nullopt;
  RatFunc r(p);
  r.num_ = std::move(*rn);
  r.den_ = std::move(*rd);
  return r;
}

std::map<Monomial, RatFunc> RatFunc::padic_decompose() const {
  std::uint32_t p = characteristic();
  assert(p != 0);
  // f/g = f*g^(p-1) / g^p; g^p = g(t^p), so each residue class E of the
  // numerator's exponents mod p contributes (h_E / g)^p * t^E.
  MPoly h = num_ * den_.pow(p - 1);
  std::map<Monomial, MPoly> buckets;
  for (const auto& [m, c] : h.terms()) {
    std::vector<Monomial::Factor> rem, quo;
    for (const auto& [v, e] : m.factors()) {
      if (e % p) rem.push_back({v, e % p});
      if (e / p) quo.push_back({v, e / p});
    }
    Monomial E = Monomial::from_factors(std::move(rem));
    Monomial Q = Monomial::from_factors(std::move(quo));
    auto [it, fresh] = buckets.emplace(E, MPoly(p));
    it->second = it->second + MPoly::monomial(p, Q, c);
  }
  std::map<Monomial, RatFunc> out;
  for (auto& [E, hq] : buckets) {
    RatFunc r(MPoly(hq), den_);
    if (!r.is_zero()) out.emplace(E, std::move(r));
  }
  return out;
}

std::string RatFunc::to_string(const VarNamer& namer) const {
  if (is_poly()) return num_.to_string(namer);
  std::string n = num_.to_string(namer);
  std::string d = den_.to_string(namer);
  bool npar = num_.term_count() > 1;
  bool dpar = den_.term_count() > 1;
  std::string out;
  out += npar ? "(" + n + ")" : n;
  out += "/";
  out += dpar ? "(" + d + ")" : d;
  return out;
}

}  // namespace algser
