#include <algser/linalg.hpp>
#include <algser/subfield.hpp>

#include <cstdint>
#include <utility>

namespace algser {

namespace {

// Hard ceiling on the dimension of any subfield we materialize; the linear
// algebra is dense in the number of basis monomials, so beyond this the
// computation would not finish in reasonable time anyway.
constexpr std::uint64_t kSubfieldDimCap = 4096;

// Degrees tried in the minimal-polynomial search before giving up.
constexpr std::size_t kMinpolyDegreeCap = 64;

std::size_t step_index_of(VarKey v) {
  return static_cast<std::size_t>(v.name_rank - VarKey::step_rank_base);
}

}  // namespace

Subfield::Subfield(TowerPtr ambient)
    : ambient_(std::move(ambient)), field_(Tower::make_base(ambient_->base())) {
  rebuild_basis();
}

Subfield Subfield::trivial(TowerPtr ambient) { return Subfield(std::move(ambient)); }

Subfield Subfield::whole(TowerPtr ambient) {
  Subfield s(ambient);
  s.field_ = ambient;
  for (std::size_t i = 0; i < ambient->depth(); ++i)
    s.images_.push_back(Elem::generator_at(ambient, i));
  s.rebuild_basis();
  return s;
}

void Subfield::rebuild_basis() {
  require(field_->degree() <= Int(kSubfieldDimCap), Errc::not_applicable,
          "subfield dimension exceeds the supported cap");
  basis_ = tower_basis(*field_);
  std::vector<std::vector<Elem>> pows(images_.size());
  for (std::size_t j = 0; j < images_.size(); ++j) {
    std::uint64_t d = field_->step_at(j).minpoly.size() - 1;
    pows[j].reserve(d);
    pows[j].push_back(Elem::one(ambient_));
    for (std::uint64_t e = 1; e < d; ++e) pows[j].push_back(pows[j].back() * images_[j]);
  }
  basis_images_.clear();
  basis_images_.reserve(basis_.size());
  for (const Monomial& m : basis_) {
    Elem v = Elem::one(ambient_);
    for (const auto& [var, e] : m.factors()) v = v * pows[step_index_of(var)][e];
    basis_images_.push_back(std::move(v));
  }
}

Elem Subfield::embed(const Elem& x) const {
  require(x.attached() && *x.tower()->base() == *field_->base(), Errc::validation_error,
          "element does not belong to the subfield's abstract tower");
  Elem acc = Elem::zero(ambient_);
  for (const auto& [m, c] : x.terms()) {
    Elem v = Elem::from_base(ambient_, c);
    for (const auto& [var, e] : m.factors()) {
      std::size_t j = step_index_of(var);
      require(j < images_.size(), Errc::validation_error,
              "element uses a generator beyond the subfield's tower");
      v = v * images_[j].pow(Int(static_cast<unsigned long>(e)));
    }
    acc = acc + v;
  }
  return acc;
}

bool Subfield::contains(const Elem& a) const { return preimage(a).has_value(); }

std::optional<Elem> Subfield::preimage(const Elem& a) const {
  Elem target = a.tower().get() == ambient_.get() ? a : a.lift_to(ambient_);
  LinearSystem sys(basis_.size());
  std::map<Monomial, LinearSystem::Row> rows;
  for (std::size_t j = 0; j < basis_.size(); ++j)
    for (const auto& [m, c] : basis_images_[j].terms()) rows[m][j] = c;
  for (const auto& [m, c] : target.terms()) rows.try_emplace(m);
  RatFunc zero(ambient_->characteristic());
  for (auto& [m, row] : rows) {
    auto it = target.terms().find(m);
    sys.add_row(std::move(row), it == target.terms().end() ? zero : it->second);
  }
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  std::map<Monomial, RatFunc> terms;
  for (std::size_t j = 0; j < basis_.size(); ++j)
    if (!(*sol)[j].is_zero()) terms.emplace(basis_[j], (*sol)[j]);
  Elem out = Elem::from_terms(field_, std::move(terms));
  require(embed(out) == target, Errc::internal, "subfield preimage failed verification");
  return out;
}

UPoly Subfield::minimal_polynomial(const Elem& alpha) const {
  Elem a = alpha.tower().get() == ambient_.get() ? alpha : alpha.lift_to(ambient_);
  std::size_t dim = basis_.size();
  std::vector<Elem> pows{Elem::one(ambient_)};
  std::vector<std::vector<Elem>> prods;
  for (std::size_t d = 1; d <= kMinpolyDegreeCap; ++d) {
    pows.push_back(pows.back() * a);
    prods.emplace_back();
    prods.back().reserve(dim);
    for (const Elem& bi : basis_images_) prods.back().push_back(pows[d - 1] * bi);
    // Solve alpha^d == sum over (j, m) of c_{j,m} * basis_m * alpha^j; the
    // first consistent system gives the minimal polynomial, and minimality
    // makes it irreducible outright.
    LinearSystem sys(d * dim);
    std::map<Monomial, LinearSystem::Row> rows;
    for (std::size_t j = 0; j < d; ++j)
      for (std::size_t m = 0; m < dim; ++m)
        for (const auto& [mon, c] : prods[j][m].terms()) rows[mon][j * dim + m] = c;
    for (const auto& [mon, c] : pows[d].terms()) rows.try_emplace(mon);
    RatFunc zero(ambient_->characteristic());
    for (auto& [mon, row] : rows) {
      auto it = pows[d].terms().find(mon);
      sys.add_row(std::move(row), it == pows[d].terms().end() ? zero : it->second);
    }
    auto sol = sys.solve();
    if (!sol) continue;
    UPoly mu(d + 1);
    mu[d] = Elem::one(field_);
    for (std::size_t j = 0; j < d; ++j) {
      std::map<Monomial, RatFunc> terms;
      for (std::size_t m = 0; m < dim; ++m)
        if (!(*sol)[j * dim + m].is_zero()) terms.emplace(basis_[m], -(*sol)[j * dim + m]);
      mu[j] = Elem::from_terms(field_, std::move(terms));
    }
    UPoly amb(d + 1);
    for (std::size_t j = 0; j <= d; ++j) amb[j] = embed(mu[j]);
    require(up::eval(amb, a).is_zero(), Errc::internal,
            "minimal polynomial candidate failed verification");
    return mu;
  }
  fail(Errc::not_applicable, "no linear dependence among powers up to the degree cap");
}

void Subfield::adjoin_with(const Elem& alpha, UPoly minpoly, StepKind kind, unsigned insep_height,
                           IrredStatus irred, const std::string& gen_name) {
  Elem a = alpha.tower().get() == ambient_.get() ? alpha : alpha.lift_to(ambient_);
  require(up::is_monic(minpoly), Errc::not_monic, "subfield step polynomial must be monic");
  UPoly amb(minpoly.size());
  for (std::size_t j = 0; j < minpoly.size(); ++j) amb[j] = embed(minpoly[j]);
  require(up::eval(amb, a).is_zero(), Errc::validation_error,
          "claimed minimal polynomial does not vanish at the adjoined element");
  Step s;
  s.gen = gen_name;
  s.minpoly = std::move(minpoly);
  s.kind = kind;
  s.insep_height = insep_height;
  s.irred = irred;
  field_ = field_->adjoin(std::move(s));
  images_.push_back(std::move(a));
  rebuild_basis();
}

void Subfield::adjoin(const Elem& alpha, const std::string& gen_name) {
  Elem a = alpha.tower().get() == ambient_.get() ? alpha : alpha.lift_to(ambient_);
  UPoly mu = minimal_polynomial(a);
  std::size_t d = mu.size() - 1;
  if (d == 1) return;  // already inside
  std::uint32_t p = ambient_->characteristic();
  unsigned m = 0;
  if (p != 0) {
    // Largest p-power dividing every exponent that carries a coefficient; a
    // positive value means the polynomial is psi(Y^(p^m)) for separable psi.
    auto all_divisible = [&](unsigned mm) {
      Int q = pow_uint(p, mm);
      if (Int(static_cast<unsigned long>(d)) % q != 0) return false;
      for (std::size_t j = 1; j < d; ++j)
        if (!mu[j].is_zero() && Int(static_cast<unsigned long>(j)) % q != 0) return false;
      return true;
    };
    while (all_divisible(m + 1)) ++m;
  }
  if (m == 0) {
    adjoin_with(a, std::move(mu), StepKind::separable, 0, IrredStatus::proved, gen_name);
    return;
  }
  std::uint64_t q = pow_uint(p, m).get_ui();
  std::size_t dpsi = d / q;
  if (dpsi == 1) {
    adjoin_with(a, std::move(mu), StepKind::inseparable, m, IrredStatus::proved, gen_name);
    return;
  }
  // Mixed polynomial: adjoin the separable part alpha^(p^m) first, then the
  // element itself by a pure p-power step on top.
  UPoly psi(dpsi + 1);
  for (std::size_t i = 0; i <= dpsi; ++i) psi[i] = mu[i * q];
  Elem beta = a.pow(Int(static_cast<unsigned long>(q)));
  adjoin_with(beta, std::move(psi), StepKind::separable, 0, IrredStatus::proved, gen_name + "s");
  UPoly tail(q + 1, Elem::zero(field_));
  tail[q] = Elem::one(field_);
  tail[0] = -Elem::generator(field_);
  adjoin_with(a, std::move(tail), StepKind::inseparable, m, IrredStatus::proved, gen_name);
}

Subfield compositum_twist(TowerPtr L, unsigned long r) {
  std::uint32_t p = L->characteristic();
  if (r == 0 || p == 0) return Subfield::whole(L);
  if (auto pat = radical_pattern(*L)) {
    // Such towers stay radical after twisting: the p^r-th power of a step
    // generator still satisfies a pure p-power relation over the same base
    // variable, or drops into the base field when the height is used up.
    Subfield s = Subfield::trivial(L);
    for (std::size_t j = 0; j < pat->steps.size(); ++j) {
      unsigned e = pat->steps[j].height;
      if (e <= r) continue;
      Elem img = Elem::generator_at(L, j).frobenius(r);
      unsigned h = e - static_cast<unsigned>(r);
      std::uint64_t q = pow_uint(p, h).get_ui();
      UPoly mp(q + 1, Elem::zero(s.field()));
      mp[q] = Elem::one(s.field());
      mp[0] = -Elem::from_base(s.field(), RatFunc::variable(p, pat->steps[j].base_var));
      s.adjoin_with(img, std::move(mp), StepKind::inseparable, h, IrredStatus::proved,
                    L->step_at(j).gen);
    }
    return s;
  }
  Subfield s = Subfield::trivial(L);
  for (std::size_t j = 0; j < L->depth(); ++j)
    s.adjoin(Elem::generator_at(L, j).frobenius(r), L->step_at(j).gen);
  return s;
}

SeparableSplit separable_closure_split(TowerPtr t) {
  SeparableSplit out{Subfield::trivial(t), {}};
  std::uint32_t p = t->characteristic();
  for (std::size_t i = 0; i < t->depth(); ++i) {
    const Step& st = t->step_at(i);
    Elem g = Elem::generator_at(t, i);
    if (st.kind == StepKind::separable) {
      // Cheap path: when the declared minimal polynomial's coefficients all
      // lie in the closure built so far, it stays irreducible there (a
      // factorization over the subfield would be one over the full prefix)
      // and can be reused as the step polynomial.
      std::vector<Elem> coeffs;
      bool ok = true;
      for (const Elem& c : st.minpoly) {
        auto pre = out.sep.preimage(c.lift_to(t));
        if (!pre) {
          ok = false;
          break;
        }
        coeffs.push_back(std::move(*pre));
      }
      if (ok) {
        out.sep.adjoin_with(g, std::move(coeffs), StepKind::separable, 0, st.irred, st.gen);
        continue;
      }
    }
    // General path: over the closure the generator's minimal polynomial is
    // psi(Y^(p^m)); adjoin the separable part and report the inseparable
    // tail.  This covers generators that are separable over their own prefix
    // but not over the closure alone.
    UPoly mu = out.sep.minimal_polynomial(g);
    std::size_t d = mu.size() - 1;
    if (d == 1) continue;
    unsigned m = 0;
    if (p != 0) {
      auto all_divisible = [&](unsigned mm) {
        Int q = pow_uint(p, mm);
        if (Int(static_cast<unsigned long>(d)) % q != 0) return false;
        for (std::size_t j = 1; j < d; ++j)
          if (!mu[j].is_zero() && Int(static_cast<unsigned long>(j)) % q != 0) return false;
        return true;
      };
      while (all_divisible(m + 1)) ++m;
    }
    if (m == 0) {
      out.sep.adjoin_with(g, std::move(mu), StepKind::separable, 0, IrredStatus::proved, st.gen);
      continue;
    }
    std::uint64_t q = pow_uint(p, m).get_ui();
    std::size_t dpsi = d / q;
    Elem beta = g.pow(Int(static_cast<unsigned long>(q)));
    if (dpsi > 1) {
      UPoly psi(dpsi + 1);
      for (std::size_t k = 0; k <= dpsi; ++k) psi[k] = mu[k * q];
      out.sep.adjoin_with(beta, std::move(psi), StepKind::separable, 0, IrredStatus::proved,
                          st.gen + "s");
    }
    auto pre = out.sep.preimage(beta);
    require(pre.has_value(), Errc::internal, "separable part escaped the closure");
    out.insep.push_back({i, m, std::move(*pre)});
  }
  return out;
}

}  // namespace algser
