#pragma once

#include <algser/subfield.hpp>

#include <functional>
#include <memory>
#include <optional>
#include <variant>
#include <vector>

namespace algser {

// One series term: coefficient times x^e with an exact rational exponent.
struct Term {
  Rat e;
  Elem c;
};

// Truncation request: the first n nonzero terms, or every term with
// exponent strictly below b.
struct TermCount {
  std::size_t n;
};
struct ExponentBound {
  Rat b;
};
using Truncation = std::variant<TermCount, ExponentBound>;

// A fully evaluated initial segment: strictly increasing exponents, nonzero
// coefficients, all lifted into one tower.
struct Segment {
  std::vector<Term> terms;
  TowerPtr tower;
};

// Grows a coefficient tower on demand as rule-defined series request roots
// of indexed transcendentals.  Every series participating in one
// computation should share a context so their towers stay prefix-related.
class TowerCtx {
 public:
  explicit TowerCtx(TowerPtr start) : cur_(std::move(start)) {}
  const TowerPtr& current() const { return cur_; }
  // t_index^(1/p^e) inside current(), adjoining the radical step on first
  // use; e == 0 is the plain variable.
  Elem family_root(const std::string& family, std::uint32_t index, unsigned e);

 private:
  TowerPtr cur_;
  std::map<VarKey, std::pair<std::size_t, unsigned>> roots_;  // var -> (step index, height)
};
using CtxPtr = std::shared_ptr<TowerCtx>;

// Exponent templates: affine i -> a + b i (b > 0) for i = 1, 2, ..., and
// the shape 1 - p^{-i} whose exponents accumulate at 1.
struct AffineExp {
  Rat a, b;
};
struct OneMinusPPow {};
using ExpTemplate = std::variant<AffineExp, OneMinusPPow>;

// Coefficient templates: a fixed element, the p^e-th root of the i-th
// member of a transcendental family, or Frobenius powers kappa^(p^(e i)).
struct CoefConst {
  Elem c;
};
struct CoefIndexedRoot {
  std::string family;
  unsigned root_e = 0;
};
struct CoefFrobenius {
  Elem kappa;
  unsigned e = 1;
};
using CoefTemplate = std::variant<CoefConst, CoefIndexedRoot, CoefFrobenius>;

struct TemplateInfo {
  ExpTemplate exp;
  CoefTemplate coef;
  CtxPtr ctx;
};

// Driver callback for series defined as branches of algebraic curves: asked
// for at least min_total terms, returns the full known prefix (shorter only
// when the branch is exactly a polynomial that has ended).
using BranchDriver = std::function<std::vector<Term>(std::size_t min_total)>;

// Lazily produced exact series with rational exponents over a field tower.
// Values share their memoized prefix; all operations are exact, and
// production either yields a term, proves exhaustion, or fails loudly when
// a cancellation run exceeds the stall budget.
class Series {
 public:
  struct Node;  // opaque production node; one per rule, shared by copies

  static Series zero(TowerPtr t);
  static Series explicit_terms(TowerPtr t, std::vector<Term> terms);
  static Series monomial(TowerPtr t, const Rat& e, Elem c);
  static Series templated(CtxPtr ctx, ExpTemplate exp, CoefTemplate coef);
  static Series branch(TowerPtr t, std::vector<Term> seed, BranchDriver driver);

  Series operator+(const Series& o) const;
  Series operator-(const Series& o) const;
  Series operator*(const Series& o) const;
  Series shift_x(const Rat& q) const;  // multiply by x^q
  // Characteristic p only: the p^r-th power computed termwise through the
  // additivity of the p-power map, x^e -> x^(p^r e) and c -> c^(p^r).
  // Unlike the repeated product this keeps support enumeration exact for
  // series whose exponents accumulate.
  Series frobenius_power(unsigned long r) const;
  // Reciprocal of a series with a nonzero leading coefficient (any leading
  // exponent); production fails on the zero series.
  Series inverse_unit() const;
  Series operator/(const Series& o) const;
  // Termwise application of a zero-preserving ring map to every coefficient,
  // exponents unchanged.  Used to carry field conjugations onto series.
  Series mapped_coefficients(std::function<Elem(const Elem&)> f) const;

  // Deepest coefficient tower seen so far; grows as terms are produced.
  TowerPtr tower() const;
  // Declared accumulation point of the exponent support, when the rule
  // structure exposes one.
  std::optional<Rat> accumulation_point() const;
  std::optional<TemplateInfo> template_info() const;

  Segment truncate(const Truncation& how) const;
  // The first n candidate terms including exact cancellations, in production
  // order; used by residue checks that must distinguish "all produced terms
  // were zero" from "nothing was produced".  Idempotent: candidates are
  // memoized, so repeated calls see the same stream.
  std::vector<Term> produce_raw(std::size_t n) const;

  std::string to_string(std::size_t max_terms = 8) const;

 private:
  explicit Series(std::shared_ptr<Node> n) : node_(std::move(n)) {}
  friend Series hensel_unit_root(const Series& u, unsigned long m);
  std::shared_ptr<Node> node_;
};

// Polynomial in y with series coefficients (index = power of y).
struct YSeriesPoly {
  std::vector<Series> coeff;
};

// Initial segment of g(x, s) under the budget: TermCount counts production
// steps at the top combination (an empty result means every candidate
// canceled), ExponentBound keeps terms with exponent strictly below b.
Segment substitute(const YSeriesPoly& g, const Series& s, const Truncation& budget);

// The unique m-th root with the same unit constant term, by termwise
// discrepancy correction; requires gcd(m, p) = 1 in characteristic p.
Series hensel_unit_root(const Series& u, unsigned long m);

// Subfield generated by the first i nonzero coefficients of s.
Subfield coefficient_prefix_tower(const Series& s, std::size_t i);

}  // namespace algser
