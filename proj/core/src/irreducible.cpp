#include <algser/irreducible.hpp>

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <vector>

namespace algser {

namespace {

// Finite towers up to this size get a complete root sweep, and up to the
// pair cap a complete monic-quadratic-factor sweep for quartics.
constexpr std::uint64_t kRootEnumCap = 4096;
constexpr std::uint64_t kPairEnumCap = 256;
// Candidate budget for the integer quadratic-factor enumeration and for the
// syntactic pool sweeps.
constexpr std::uint64_t kIntCandidateCap = 200000;
constexpr std::size_t kPoolCap = 160;

[[noreturn]] void report_factor(const UPoly& factor) {
  fail(Errc::reducible_witness, "found factor " + up::to_string(factor, "Y"));
}

void try_root(const UPoly& f, const Elem& cand, TowerPtr t) {
  if (up::eval(f, cand).is_zero()) report_factor(UPoly{-cand, Elem::one(t)});
}

void try_monic_quadratic(const UPoly& f, const Elem& c, const Elem& b, TowerPtr t) {
  UPoly g{c, b, Elem::one(t)};
  auto [q, r] = up::divmod(f, g);
  if (up::is_zero(r)) report_factor(g);
}

bool all_rat_const(const UPoly& f) {
  for (const Elem& c : f)
    if (!c.is_rat_const()) return false;
  return true;
}

// Every element of a finite tower (positive characteristic, no
// transcendental generators), as coordinate sweeps over the monomial basis.
std::optional<std::vector<Elem>> all_elements(const TowerPtr& t, std::uint64_t cap) {
  std::uint32_t p = t->characteristic();
  if (p == 0 || !t->base()->names().empty()) return std::nullopt;
  if (t->degree() > Int(64)) return std::nullopt;
  unsigned long dim = t->degree().get_ui();
  Int size = pow_int(Int(p), dim);
  if (size > Int(cap)) return std::nullopt;
  std::vector<Monomial> basis = tower_basis(*t);
  std::vector<Elem> out;
  out.reserve(size.get_ui());
  std::vector<std::uint32_t> digits(dim, 0);
  while (true) {
    std::map<Monomial, RatFunc> terms;
    for (unsigned long i = 0; i < dim; ++i)
      if (digits[i] != 0) terms.emplace(basis[i], RatFunc::constant(p, Rat(digits[i])));
    out.push_back(Elem::from_terms(t, std::move(terms)));
    unsigned long i = 0;
    while (i < dim && ++digits[i] == p) digits[i++] = 0;
    if (i == dim) break;
  }
  return out;
}

// Divisors of |n| by trial division; gives up on large unfactored parts.
std::optional<std::vector<Int>> divisors_of(const Int& n0) {
  Int n = abs(n0);
  if (n == 0 || n > pow_uint(10, 40)) return std::nullopt;
  std::vector<std::pair<Int, unsigned>> fac;
  for (unsigned long d = 2; d <= 100000 && Int(d) * d <= n; ++d) {
    unsigned e = 0;
    while (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
      n /= d;
      ++e;
    }
    if (e) fac.push_back({Int(d), e});
  }
  if (n > 1) {
    if (!mpz_probab_prime_p(n.get_mpz_t(), 30)) return std::nullopt;
    fac.push_back({n, 1});
  }
  std::vector<Int> divs{Int(1)};
  for (const auto& [q, e] : fac) {
    std::size_t old = divs.size();
    Int qe(1);
    for (unsigned i = 1; i <= e; ++i) {
      qe *= q;
      for (std::size_t j = 0; j < old; ++j) {
        divs.push_back(divs[j] * qe);
        if (divs.size() > 10000) return std::nullopt;
      }
    }
  }
  return divs;
}

// Complete search for rational-constant polynomials over a depth-zero
// tower: algebraic factor coefficients must themselves be rational there,
// so the rational root theorem covers linear factors and a bounded integer
// sweep covers quadratic factors of monic integer quartics.
bool search_rationals(const TowerPtr& t, const UPoly& f) {
  std::size_t d = up::deg(f);
  std::vector<Rat> co(d + 1);
  Int den_lcm(1);
  for (std::size_t i = 0; i <= d; ++i) {
    co[i] = f[i].rat_value();
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), co[i].get_den().get_mpz_t());
  }
  std::vector<Int> a(d + 1);
  for (std::size_t i = 0; i <= d; ++i) {
    Rat scaled = co[i] * Rat(den_lcm);
    a[i] = scaled.get_num();
  }
  if (a[0] == 0) report_factor(UPoly{Elem::zero(t), Elem::one(t)});
  auto du = divisors_of(a[0]);
  auto dv = divisors_of(a[d]);
  if (du && dv && du->size() * dv->size() * 2 <= kIntCandidateCap) {
    for (const Int& u : *du)
      for (const Int& v : *dv) {
        try_root(f, Elem::from_rat(t, Rat(u) / Rat(v)), t);
        try_root(f, Elem::from_rat(t, Rat(-u) / Rat(v)), t);
      }
  }
  if (d == 4 && den_lcm == 1 && du) {
    // monic integer quartic: a monic quadratic factor Y^2 + bY + c has
    // integer b, c with c dividing a_0 and |b| at most twice the Cauchy
    // root bound
    Int m(1);
    for (std::size_t i = 0; i < 4; ++i) {
      Int ai = abs(a[i]);
      if (ai > m) m = ai;
    }
    Int bmax = 2 * (m + 1);
    if (bmax * 2 * Int(du->size()) <= Int(kIntCandidateCap)) {
      for (const Int& c0 : *du)
        for (int sc : {1, -1})
          for (Int b = -bmax; b <= bmax; ++b)
            try_monic_quadratic(f, Elem::from_rat(t, Rat(sc * c0)), Elem::from_rat(t, Rat(b)), t);
    }
  }
  return true;
}

// Bounded syntactic pool for towers we cannot enumerate: small scalars,
// the transcendental variables appearing in the polynomial, and the tower
// generators, each with small scalar multiples.
std::vector<Elem> candidate_pool(const TowerPtr& t, const UPoly& f) {
  std::uint32_t p = t->characteristic();
  std::vector<Rat> scalars;
  if (p == 0) {
    for (int x : {1, -1, 2, -2, 3, -3}) scalars.push_back(Rat(x));
    for (int x : {1, -1, 3, -3}) scalars.push_back(Rat(x, 2));
    for (int x : {1, -1, 2, -2}) scalars.push_back(Rat(x, 3));
  } else {
    for (std::uint32_t x = 1; x < std::min(p, 8u); ++x) scalars.push_back(Rat(x));
  }
  std::vector<Elem> pool{Elem::zero(t)};
  for (const Rat& s : scalars) pool.push_back(Elem::from_rat(t, s));
  std::set<VarKey> vars;
  for (const Elem& c : f)
    for (const auto& [m, rf] : c.terms()) {
      for (VarKey v : rf.num().vars()) vars.insert(v);
      for (VarKey v : rf.den().vars()) vars.insert(v);
    }
  std::vector<Elem> structural;
  for (VarKey v : vars)
    structural.push_back(Elem::from_base(t, RatFunc::variable(p, v)));
  for (std::size_t i = 0; i < t->depth(); ++i)
    structural.push_back(Elem::generator_at(t, i));
  for (const Elem& s : structural) {
    pool.push_back(s);
    for (const Rat& c : scalars) {
      if (pool.size() >= kPoolCap) return pool;
      pool.push_back(s * Elem::from_rat(t, c));
    }
    for (int c : {1, -1, 2}) {
      if (pool.size() >= kPoolCap) return pool;
      pool.push_back(s + Elem::from_rat(t, Rat(c)));
    }
  }
  return pool;
}

void sweep(const TowerPtr& t, const UPoly& f, const std::vector<Elem>& cands, bool pairs) {
  for (const Elem& c : cands) try_root(f, c, t);
  if (!pairs) return;
  for (const Elem& c : cands)
    for (const Elem& b : cands) try_monic_quadratic(f, c, b, t);
}

}  // namespace

IrredStatus certify_irreducible(TowerPtr below, const UPoly& minpoly, StepKind kind) {
  UPoly f = up::trim(minpoly);
  require(!up::is_zero(f) && up::deg(f) >= 1, Errc::validation_error,
          "step polynomial must be nonconstant");
  require(up::is_monic(f), Errc::not_monic, "step polynomial must be monic");
  std::size_t d = up::deg(f);
  if (d == 1) return IrredStatus::proved;
  std::uint32_t p = below->characteristic();

  if (kind == StepKind::inseparable) {
    require(p != 0, Errc::bad_inseparable_shape,
            "inseparable steps need positive characteristic");
    std::uint64_t q = 1;
    while (q < d) q *= p;
    require(q == d, Errc::bad_inseparable_shape,
            "inseparable degree must be a power of the characteristic");
    for (std::size_t i = 1; i < d; ++i)
      require(f[i].is_zero(), Errc::bad_inseparable_shape,
              "inseparable polynomials carry only the leading and constant terms");
    Elem c = -f[0];
    std::optional<Elem> root;
    bool decided = true;
    try {
      root = c.try_pth_root();
    } catch (const Error& err) {
      if (err.code() != Errc::not_applicable) throw;
      decided = false;
    }
    if (!decided) return IrredStatus::declared;
    if (root.has_value()) {
      UPoly g(d / p + 1, Elem::zero(below));
      g[d / p] = Elem::one(below);
      g[0] = -*root;
      report_factor(g);
    }
    return IrredStatus::proved;
  }

  if (d > 4) return IrredStatus::declared;

  if (auto all = all_elements(below, kRootEnumCap)) {
    sweep(below, f, *all, d == 4 && all->size() <= kPairEnumCap);
    return IrredStatus::checked;
  }
  if (below->depth() == 0 && all_rat_const(f)) {
    if (p == 0) {
      search_rationals(below, f);
      return IrredStatus::checked;
    }
    if (p <= kRootEnumCap) {
      // factor coefficients of a prime-field polynomial stay in the prime
      // field even when the base has transcendentals
      std::vector<Elem> cands;
      cands.reserve(p);
      for (std::uint32_t x = 0; x < p; ++x) cands.push_back(Elem::from_rat(below, Rat(x)));
      sweep(below, f, cands, d == 4 && p <= kPairEnumCap);
      return IrredStatus::checked;
    }
  }
  std::vector<Elem> pool = candidate_pool(below, f);
  sweep(below, f, pool, d == 4 && pool.size() * pool.size() <= kIntCandidateCap);
  return IrredStatus::checked;
}

TowerPtr adjoin_certified(TowerPtr below, const std::string& gen, UPoly minpoly, StepKind kind) {
  minpoly = up::trim(std::move(minpoly));
  IrredStatus st = certify_irreducible(below, minpoly, kind);
  Step s;
  s.gen = gen;
  s.kind = kind;
  if (kind == StepKind::inseparable) {
    std::uint32_t p = below->characteristic();
    std::size_t d = up::deg(minpoly);
    unsigned e = 0;
    for (std::uint64_t q = 1; q < d; q *= p) ++e;
    s.insep_height = e;
  }
  s.minpoly = std::move(minpoly);
  s.irred = st;
  return below->adjoin(std::move(s));
}

}  // namespace algser
