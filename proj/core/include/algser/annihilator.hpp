#pragma once

#include <algser/bivar.hpp>
#include <algser/series.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

namespace algser {

// An automorphism of a tower over its base field, recorded by the image of
// every step generator inside the same tower.
struct Conjugation {
  TowerPtr tower;
  std::vector<Elem> images;  // images[i] conjugates the generator of step i
  bool is_identity() const;
};

// Optional per-step candidate images, keyed by step index.  Supplied when a
// step's conjugates cannot be enumerated from its shape alone; every
// candidate is still validated as a root before use.
using DeclaredConjugates = std::map<std::size_t, std::vector<Elem>>;

// All automorphisms of M over its base field.  Steps are enumerable when the
// degree is at most two, for Artin-Schreier shape Y^p - Y - c, and for
// radical shape Y^d - c with d up to four when the needed root of unity is
// visible (another step's generator or a prime-field scalar); anything else
// takes a declared list.  Requires the full count [M:k] of distinct maps,
// the group condition; fewer means M is not normal or a step is inseparable,
// and the call refuses rather than return a partial set.
std::vector<Conjugation> enumerate_conjugations(TowerPtr M, const DeclaredConjugates& declared = {});

// Apply a conjugation to an element of its tower (or of a prefix).
Elem conjugate(const Conjugation& c, const Elem& a);

// Apply a conjugation to every coefficient of a series, exponents unchanged.
Series conjugate_series(const Conjugation& c, const Series& s);

// The product of (y - tau(s)) over all conjugations tau of M, as a monic
// polynomial in y with lazy series coefficients.  The coefficients are fixed
// by the whole group, so they take base-field values, and the polynomial
// vanishes at s by construction.  M must contain the coefficient tower of s.
YSeriesPoly galois_annihilator(const Series& s, TowerPtr M, const DeclaredConjugates& declared = {});

// Reconstruct a nonzero polynomial g(x, y) with base-field coefficients,
// y-degree at most ydeg_bound and x-degree at most xdeg_bound, from a finite
// series prefix, such that g(x, s) has no term with exponent inside the
// prefix's range.  The x-exponent lattice is refined through divisors of the
// observed denominators, coarsest first, and within each lattice the linear
// system is solved with the most constraints first, so exact polynomial
// inputs resolve before truncation effects are forgiven.  Absence means no
// relation within the bounds is visible at this prefix length.
std::optional<BivarPoly> ann_poly_reconstruct(const Segment& prefix, unsigned long ydeg_bound,
                                              unsigned long xdeg_bound);

}  // namespace algser
