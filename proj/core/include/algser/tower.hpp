#pragma once

#include <algser/ratfunc.hpp>

#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace algser {

class Tower;
using TowerPtr = std::shared_ptr<const Tower>;

// The ground field: Q or F_p, with declared transcendental families (lazily
// indexed: t1, t2, ... on demand) and standalone transcendental generators.
class BaseField {
 public:
  BaseField(std::uint32_t characteristic, std::vector<std::string> families,
            std::vector<std::string> standalone);

  std::uint32_t characteristic() const { return p_; }
  const std::vector<std::string>& names() const { return names_; }
  bool is_family(std::size_t rank) const { return family_[rank]; }

  // Family member (index >= 1) or standalone generator (index == 0).
  VarKey var(const std::string& name, std::uint32_t index) const;
  // Parse a token like "t3" or "u" into a key; nullopt if unknown.
  std::optional<VarKey> parse_var(const std::string& token) const;
  std::string display(VarKey v) const;
  bool knows_name(const std::string& name) const;

  friend bool operator==(const BaseField& a, const BaseField& b) {
    return a.p_ == b.p_ && a.names_ == b.names_ && a.family_ == b.family_;
  }

 private:
  std::uint32_t p_;
  std::vector<std::string> names_;  // sorted; rank = position
  std::vector<bool> family_;
};

using BasePtr = std::shared_ptr<const BaseField>;

enum class StepKind { separable, inseparable };
enum class IrredStatus { proved, checked, declared };

class Elem;

// One algebraic extension step: a generator adjoined by a monic minimal
// polynomial over the tower below it.
struct Step {
  std::string gen;
  std::vector<Elem> minpoly;  // size deg+1, coefficients over the parent tower
  StepKind kind = StepKind::separable;
  unsigned insep_height = 0;  // e for shape Y^(p^e) - c
  IrredStatus irred = IrredStatus::proved;
};

// Element of a tower: sparse polynomial in the step generators (exponents
// reduced below each step degree) with RatFunc coefficients over the base.
// The representation is canonical, so equality is structural.
class Elem {
 public:
  Elem() = default;  // unattached zero; attach before use
  static Elem zero(TowerPtr t);
  static Elem one(TowerPtr t);
  static Elem from_base(TowerPtr t, RatFunc v);
  static Elem from_rat(TowerPtr t, const Rat& q);
  static Elem generator(TowerPtr t);                 // top generator
  static Elem generator_at(TowerPtr t, std::size_t step_index);
  static Elem from_terms(TowerPtr t, std::map<Monomial, RatFunc> terms);  // reduces

  TowerPtr tower() const { return tower_; }
  const std::map<Monomial, RatFunc>& terms() const { return terms_; }
  bool attached() const { return tower_ != nullptr; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool in_base() const;
  RatFunc base_value() const;
  bool is_rat_const() const;
  Rat rat_value() const;

  // Depth actually used by the terms (max step index + 1; 0 if in base).
  std::size_t used_depth() const;
  Elem lift_to(TowerPtr deeper) const;
  Elem project_to(TowerPtr shallower) const;  // requires used_depth() <= its depth
  Elem minimized() const;                     // project to used_depth prefix

  Elem operator+(const Elem& o) const;
  Elem operator-(const Elem& o) const;
  Elem operator-() const;
  Elem operator*(const Elem& o) const;
  Elem operator/(const Elem& o) const;
  Elem inverse() const;
  Elem pow(const Int& e) const;

  friend bool operator==(const Elem& a, const Elem& b);

  // x -> x^(p^r); the identity in characteristic zero.
  Elem frobenius(unsigned long r = 1) const;
  // The unique y with y^p == *this if it exists; nullopt when provably no
  // root exists.  Throws NotApplicable if the tower is outside the decidable
  // regimes (see pth_root_supported).
  std::optional<Elem> try_pth_root() const;

  std::string to_string() const;

 private:
  void reduce();
  TowerPtr tower_;
  std::map<Monomial, RatFunc> terms_;
};

// Immutable extension-tower node; shared parent chains make prefix towers
// cheap to keep around.
class Tower : public std::enable_shared_from_this<Tower> {
 public:
  static TowerPtr make_base(BasePtr b);
  TowerPtr adjoin(Step s) const;  // validates monicity, shape, separability tag

  BasePtr base() const { return base_; }
  std::uint32_t characteristic() const { return base_->characteristic(); }
  TowerPtr parent() const { return parent_; }
  std::size_t depth() const { return depth_; }
  const Step& top_step() const;
  const Step& step_at(std::size_t i) const;  // 0-based from the bottom
  TowerPtr prefix(std::size_t d) const;      // ancestor with depth() == d

  std::uint64_t step_degree() const;  // top step's minpoly degree
  Int degree() const;                 // product over all steps
  VarKey gen_var() const;             // key of the top generator
  static VarKey gen_var_at(std::size_t step_index);

  bool is_prefix_of(const Tower& deeper) const;
  // The deeper of two prefix-related towers; throws RebasingFailed otherwise.
  static TowerPtr join(const TowerPtr& a, const TowerPtr& b);

  bool has_declared_irreducibility() const;
  unsigned total_insep_height() const;  // sum of inseparable step heights

  const VarNamer& namer() const;
  std::string describe() const;  // "F_5(t_*) (a1: deg 5, insep) ..."

 private:
  Tower(BasePtr b);
  Tower(TowerPtr parent, Step s);
  BasePtr base_;
  TowerPtr parent_;
  std::optional<Step> step_;
  std::size_t depth_ = 0;
  struct Namer;
  std::shared_ptr<Namer> namer_;
};

// Pattern used by the fast arithmetic paths: a tower whose every step is
// Y^(p^e_j) - t_j for pairwise distinct base variables t_j.  Such a tower is
// isomorphic to a rational function field (replace t_j by a free variable
// rho_j with t_j = rho_j^(p^e_j)), which makes p-th roots, membership and
// twisted-compositum degrees computable at any depth.
struct RadicalPattern {
  struct Entry {
    VarKey base_var;
    unsigned height;  // e_j
  };
  std::vector<Entry> steps;
};
std::optional<RadicalPattern> radical_pattern(const Tower& t);

bool pth_root_supported(const Tower& t);

// Multiplicative basis of the tower over its base field: all monomials in the
// step generators with exponents below each step degree, mixed-radix order.
std::vector<Monomial> tower_basis(const Tower& t);

// Dense univariate polynomials over tower elements, little-endian in Y.
// The zero polynomial is the empty vector.
using UPoly = std::vector<Elem>;

namespace up {
UPoly trim(UPoly f);
bool is_zero(const UPoly& f);
std::size_t deg(const UPoly& f);  // requires !is_zero
UPoly add(const UPoly& a, const UPoly& b);
UPoly sub(const UPoly& a, const UPoly& b);
UPoly neg(const UPoly& a);
UPoly mul(const UPoly& a, const UPoly& b);
UPoly scale(const UPoly& a, const Elem& c);
UPoly shift_up(const UPoly& a, std::size_t k);  // * Y^k
Elem eval(const UPoly& f, const Elem& x);
UPoly derivative(const UPoly& f);
bool is_monic(const UPoly& f);
UPoly make_monic(const UPoly& f);
// Division with remainder; the divisor's leading coefficient must be
// invertible (any nonzero element of a field tower is).
std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b);
// g = gcd(a,b) monic, plus u with u*a == g mod b (enough to invert a mod b).
struct Egcd {
  UPoly g, u;
};
Egcd half_egcd(const UPoly& a, const UPoly& b);
UPoly lift_to(const UPoly& f, TowerPtr t);
std::string to_string(const UPoly& f, const std::string& var);
}  // namespace up

}  // namespace algser
