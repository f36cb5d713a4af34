#pragma once

#include <algser/series.hpp>

#include <map>
#include <string>
#include <utility>

namespace algser {

// Finitely supported polynomial in x and y over a field tower.  The x
// exponents are exact rationals (relations on a Puiseux lattice are
// first-class), the y exponents plain naturals.  Zero coefficients are
// never stored, so is_zero() is emptiness and equality is structural.
class BivarPoly {
 public:
  using Key = std::pair<Rat, unsigned long>;  // (x exponent, y degree)

  explicit BivarPoly(TowerPtr t);

  const TowerPtr& tower() const { return tow_; }
  const std::map<Key, Elem>& terms() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  unsigned long ydeg() const;
  Rat xdeg() const;  // largest x exponent present; zero polynomial gives 0

  // Adds into the (xe, yd) slot, dropping the entry if the sum cancels.
  void add_term(const Rat& xe, unsigned long yd, const Elem& c);
  Elem coeff(const Rat& xe, unsigned long yd) const;

  static BivarPoly monomial(TowerPtr t, const Rat& xe, unsigned long yd, Elem c);

  BivarPoly operator+(const BivarPoly& o) const;
  BivarPoly operator-(const BivarPoly& o) const;
  BivarPoly operator*(const BivarPoly& o) const;
  BivarPoly scaled(const Elem& c) const;
  friend bool operator==(const BivarPoly& a, const BivarPoly& b) { return a.c_ == b.c_; }

  // The coefficient of y^j as a polynomial in x alone.
  BivarPoly yslice(unsigned long j) const;

  // Scalar normalization: divide through so the graded-lex greatest term
  // (largest x exponent + y degree, ties to the larger y degree) has
  // coefficient one.  Fixes the representative among scalar multiples.
  BivarPoly normalized() const;

  // View as a polynomial in y whose x-coefficients become explicit series,
  // ready for substitution of a series for y.
  YSeriesPoly to_ypoly() const;

  std::string to_string() const;

 private:
  TowerPtr tow_;
  std::map<Key, Elem> c_;
};

// Exact divisibility of f by g in y over the x-fraction field, decided by
// pseudo-division (zero pseudo-remainder).  Used to recognize reconstructed
// annihilators that are factors of a reducible input.
bool divides_in_y(const BivarPoly& g, const BivarPoly& f);

}  // namespace algser
