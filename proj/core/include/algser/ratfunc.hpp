#pragma once

#include <algser/mpoly.hpp>

#include <map>

namespace algser {

// Element of the rational function field over the prime field in the base
// variables: a quotient num/den of MPoly, kept canonical (gcd 1; char 0: den
// with positive leading coefficient; char p: den graded-lex monic).  Equality
// is therefore structural.
class RatFunc {
 public:
  RatFunc() : num_(MPoly::zero(0)), den_(MPoly::constant(0, Int(1))) {}
  explicit RatFunc(std::uint32_t p)
      : num_(MPoly::zero(p)), den_(MPoly::constant(p, Int(1))) {}
  RatFunc(MPoly num, MPoly den);  // reduces and normalizes

  static RatFunc from_poly(MPoly f);
  static RatFunc constant(std::uint32_t p, const Rat& q);
  static RatFunc variable(std::uint32_t p, VarKey v);

  std::uint32_t characteristic() const { return num_.characteristic(); }
  const MPoly& num() const { return num_; }
  const MPoly& den() const { return den_; }
  bool is_zero() const { return num_.is_zero(); }
  bool is_one() const { return num_.is_one() && den_.is_one(); }
  bool is_poly() const { return den_.is_one(); }
  bool is_rat_const() const { return num_.is_constant() && den_.is_constant(); }
  Rat rat_value() const;  // requires is_rat_const()

  RatFunc operator+(const RatFunc& o) const;
  RatFunc operator-(const RatFunc& o) const;
  RatFunc operator-() const;
  RatFunc operator*(const RatFunc& o) const;
  RatFunc operator/(const RatFunc& o) const;
  RatFunc inverse() const;
  RatFunc pow(std::uint64_t e) const;

  friend bool operator==(const RatFunc&, const RatFunc&) = default;

  // Frobenius endomorphism of the base field (char p); identity in char 0.
  RatFunc frobenius(unsigned long r = 1) const;

  // The unique p-th root, when one exists (char p; identity map in char 0).
  std::optional<RatFunc> try_pth_root() const;

  // p-adic decomposition over the monomial p-basis: *this == sum over E of
  // r_E^p * t^E with every exponent of E in [0, p).  Char p only.
  std::map<Monomial, RatFunc> padic_decompose() const;

  std::string to_string(const VarNamer& namer) const;

 private:
  void normalize();
  MPoly num_, den_;
};

}  // namespace algser
