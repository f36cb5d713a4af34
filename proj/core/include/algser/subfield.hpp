#pragma once

#include <algser/tower.hpp>

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace algser {

// A finitely generated subfield of an ambient tower, tracked as an abstract
// tower over the same base field together with the ambient image of each
// generator.  Membership tests, preimages and minimal polynomials reduce to
// exact linear algebra over the ambient coordinate basis.
class Subfield {
 public:
  // The base field itself, viewed inside the given ambient tower.
  static Subfield trivial(TowerPtr ambient);
  // The ambient tower viewed inside itself (identity images).
  static Subfield whole(TowerPtr ambient);

  const TowerPtr& ambient() const { return ambient_; }
  const TowerPtr& field() const { return field_; }
  const std::vector<Elem>& images() const { return images_; }
  Int degree() const { return field_->degree(); }

  // Evaluate an element of field() in the ambient tower.
  Elem embed(const Elem& x) const;
  bool contains(const Elem& a) const;
  // Coordinates of an ambient element over field(), if it lies there.
  std::optional<Elem> preimage(const Elem& a) const;

  // Monic minimal polynomial of an ambient element over the subfield,
  // coefficients in field() coordinates.  Found by the first linear
  // dependence among powers, so minimality certifies irreducibility.
  UPoly minimal_polynomial(const Elem& alpha) const;

  // Grow the subfield by an ambient element.  In characteristic p a mixed
  // minimal polynomial psi(Y^(p^m)) is split into a separable step for
  // alpha^(p^m) followed by a purely inseparable one, so field() always
  // carries honest step tags.  An element already inside is a no-op.
  void adjoin(const Elem& alpha, const std::string& gen_name);

  // Grow by an ambient element whose monic minimal polynomial over field()
  // is already known; validated by evaluating it at the element.
  void adjoin_with(const Elem& alpha, UPoly minpoly, StepKind kind, unsigned insep_height,
                   IrredStatus irred, const std::string& gen_name);

 private:
  explicit Subfield(TowerPtr ambient);
  void rebuild_basis();

  TowerPtr ambient_;
  TowerPtr field_;
  std::vector<Elem> images_;        // ambient image of each field() generator
  std::vector<Monomial> basis_;     // multiplicative basis of field()
  std::vector<Elem> basis_images_;  // ambient values of basis_
};

// The compositum k.L^(p^r) inside L, generated over the base field by the
// p^r-th powers of all step generators.  Radical towers (every step of shape
// Y^(p^e_j) - t_j) get a closed-form construction at any depth; other towers
// go through generic adjunction, which may refuse when too large.
Subfield compositum_twist(TowerPtr L, unsigned long r);

// Split a tower into its relative separable closure M over the base field
// and a purely inseparable remainder: every step generator g gets its
// separable part g^(p^m) adjoined to M, and a positive m is reported with
// the preimage of g^(p^m) in M coordinates.
struct SeparableSplit {
  Subfield sep;
  struct Insep {
    std::size_t step;        // generator's index in the ambient tower
    unsigned long height;    // minimal m with g^(p^m) in sep
    Elem power_in_sep;       // g^(p^m) in sep.field() coordinates
  };
  std::vector<Insep> insep;
};
SeparableSplit separable_closure_split(TowerPtr t);

}  // namespace algser
