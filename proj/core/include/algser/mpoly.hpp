#pragma once

#include <algser/defs.hpp>

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace algser {

// Identifies one variable.  Base-field variables (transcendental family members
// and standalone generators) get name_rank = position of the name in the base
// field's sorted name table, index = family index (0 for standalone).  Tower
// step generators live above all base variables: name_rank = step_rank_base +
// adjunction position.  Comparing keys therefore yields the canonical variable
// order: base names alphabetically, family members by index, then algebraic
// generators in adjunction order.
struct VarKey {
  std::uint32_t name_rank = 0;
  std::uint32_t index = 0;

  static constexpr std::uint32_t step_rank_base = 1u << 30;

  friend auto operator<=>(const VarKey&, const VarKey&) = default;
  bool is_step_var() const { return name_rank >= step_rank_base; }
};

// A power product of variables.  Factors are sorted by VarKey with strictly
// positive exponents; the empty product is 1.  Ordered graded-lex: total degree
// first, ties broken by giving earlier variables higher significance.
class Monomial {
 public:
  using Factor = std::pair<VarKey, std::uint64_t>;

  Monomial() = default;
  explicit Monomial(VarKey v, std::uint64_t e = 1);
  static Monomial from_factors(std::vector<Factor> fs);  // sorts and merges

  bool is_one() const { return factors_.empty(); }
  std::uint64_t total_degree() const;
  std::uint64_t degree_in(VarKey v) const;
  const std::vector<Factor>& factors() const { return factors_; }

  Monomial operator*(const Monomial& o) const;
  bool divides(const Monomial& o) const;
  Monomial divide(const Monomial& o) const;  // this / o, requires o.divides(*this)
  Monomial pow(std::uint64_t e) const;

  // Divide every exponent by d; requires divisibility.
  Monomial root(std::uint64_t d) const;
  bool exponents_divisible(std::uint64_t d) const;

  // Restrict to / drop one variable.
  Monomial without(VarKey v) const;

  friend bool operator==(const Monomial&, const Monomial&) = default;
  std::strong_ordering operator<=>(const Monomial& o) const;

  std::string to_string(const struct VarNamer& namer) const;

 private:
  std::vector<Factor> factors_;
};

// Callback used when printing: maps a VarKey to a display name.
struct VarNamer {
  virtual ~VarNamer() = default;
  virtual std::string name_of(VarKey v) const = 0;
};

// Sparse multivariate polynomial with exact integer coefficients, tagged with a
// characteristic: p == 0 means Z (fraction fields handle denominators one level
// up), p prime means F_p with coefficients normalized into [1, p-1].
class MPoly {
 public:
  MPoly() : p_(0) {}
  explicit MPoly(std::uint32_t p) : p_(p) {}
  static MPoly zero(std::uint32_t p) { return MPoly(p); }
  static MPoly constant(std::uint32_t p, Int c);
  static MPoly variable(std::uint32_t p, VarKey v);
  static MPoly monomial(std::uint32_t p, Monomial m, Int c);

  std::uint32_t characteristic() const { return p_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Int constant_value() const;  // requires is_constant()
  bool is_one() const;

  const std::map<Monomial, Int>& terms() const { return terms_; }
  std::size_t term_count() const { return terms_.size(); }

  MPoly operator+(const MPoly& o) const;
  MPoly operator-(const MPoly& o) const;
  MPoly operator-() const;
  MPoly operator*(const MPoly& o) const;
  MPoly mul_term(const Monomial& m, const Int& c) const;
  MPoly pow(std::uint64_t e) const;

  friend bool operator==(const MPoly&, const MPoly&) = default;

  std::uint64_t degree_in(VarKey v) const;
  std::uint64_t total_degree() const;
  std::set<VarKey> vars() const;

  // Leading data in the graded-lex order.
  const Monomial& leading_monomial() const;  // requires !is_zero()
  const Int& leading_coeff() const;

  // View as a univariate polynomial in v: result[i] = coefficient of v^i,
  // an MPoly free of v.  Size degree_in(v) + 1 (empty for the zero poly).
  std::vector<MPoly> coeffs_in(VarKey v) const;
  static MPoly from_coeffs(VarKey v, const std::vector<MPoly>& cs);

  // Exact division; nullopt if the division leaves a remainder.
  std::optional<MPoly> try_div(const MPoly& d) const;

  MPoly derivative(VarKey v) const;

  // Substitute v^e for every occurrence of v (exponent scaling).
  MPoly stretch(VarKey v, std::uint64_t e) const;

  // Integer content (char 0: gcd of coefficients, sign of leading coeff;
  // char p: leading coefficient).  Zero polynomial has content 0.
  Int content() const;
  MPoly divide_content(const Int& c) const;  // exact scalar division

  // Multivariate gcd by primitive PRS; unit-normal (char 0: positive leading
  // integer content; char p: monic leading coefficient recursively).
  static MPoly gcd(const MPoly& a, const MPoly& b);

  // In characteristic p > 0: the unique g with g^p == *this, if it exists
  // (all exponents divisible by p; F_p coefficients are their own p-th roots).
  std::optional<MPoly> try_pth_root() const;

  // this(vars -> vars^s): exponent scaling of every variable.
  MPoly stretch_all(std::uint64_t s) const;

  std::string to_string(const VarNamer& namer) const;

 private:
  void add_term(const Monomial& m, Int c);  // in-place accumulate + normalize
  std::uint32_t p_;
  std::map<Monomial, Int> terms_;
};

// Pseudo-remainder of a by b in variable v: lc(b)^(da-db+1) * a = q*b + r.
MPoly pseudo_rem(const MPoly& a, const MPoly& b, VarKey v);

}  // namespace algser
