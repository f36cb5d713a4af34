#include <algser/mpoly.hpp>

#include <algorithm>
#include <cassert>
#include <mutex>
#include <sstream>

namespace algser {

const char* errc_name(Errc c) {
  switch (c) {
    case Errc::duplicate_generator: return "DuplicateGenerator";
    case Errc::non_prime_characteristic: return "NonPrimeCharacteristic";
    case Errc::not_monic: return "NotMonic";
    case Errc::bad_inseparable_shape: return "BadInseparableShape";
    case Errc::reducible_witness: return "ReducibleWitness";
    case Errc::rebasing_failed: return "RebasingFailed";
    case Errc::not_separable: return "NotSeparable";
    case Errc::not_purely_inseparable: return "NotPurelyInseparable";
    case Errc::lambda_not_minimal: return "LambdaNotMinimal";
    case Errc::infinite_truncation: return "InfiniteTruncation";
    case Errc::ramified_root: return "RamifiedRoot";
    case Errc::conjugates_unavailable: return "ConjugatesUnavailable";
    case Errc::budget_too_small: return "BudgetTooSmall";
    case Errc::oracle_stuck: return "OracleStuck";
    case Errc::no_power_series_branch: return "NoPowerSeriesBranch";
    case Errc::value_exceeds_budget: return "ValueExceedsBudget";
    case Errc::not_applicable: return "NotApplicable";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
    case Errc::internal: return "InternalError";
  }
  return "UnknownError";
}

std::string rat_to_string(const Rat& q) {
  std::ostringstream os;
  os << q;
  return os.str();
}

Monomial::Monomial(VarKey v, std::uint64_t e) {
  if (e > 0) factors_.push_back({v, e});
}

Monomial Monomial::from_factors(std::vector<Factor> fs) {
  std::sort(fs.begin(), fs.end(), [](const Factor& a, const Factor& b) { return a.first < b.first; });
  Monomial m;
  for (auto& [v, e] : fs) {
    if (e == 0) continue;
    if (!m.factors_.empty() && m.factors_.back().first == v)
      m.factors_.back().second += e;
    else
      m.factors_.push_back({v, e});
  }
  return m;
}

std::uint64_t Monomial::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [v, e] : factors_) d += e;
  return d;
}

std::uint64_t Monomial::degree_in(VarKey v) const {
  for (const auto& [w, e] : factors_)
    if (w == v) return e;
  return 0;
}

Monomial Monomial::operator*(const Monomial& o) const {
  Monomial r;
  std::size_t i = 0, j = 0;
  while (i < factors_.size() || j < o.factors_.size()) {
    if (j == o.factors_.size() || (i < factors_.size() && factors_[i].first < o.factors_[j].first))
      r.factors_.push_back(factors_[i++]);
    else if (i == factors_.size() || o.factors_[j].first < factors_[i].first)
      r.factors_.push_back(o.factors_[j++]);
    else {
      r.factors_.push_back({factors_[i].first, factors_[i].second + o.factors_[j].second});
      ++i, ++j;
    }
  }
  return r;
}

bool Monomial::divides(const Monomial& o) const {
  for (const auto& [v, e] : factors_)
    if (o.degree_in(v) < e) return false;
  return true;
}

Monomial Monomial::divide(const Monomial& o) const {
  Monomial r;
  for (const auto& [v, e] : factors_) {
    std::uint64_t d = o.degree_in(v);
    assert(d <= e);
    if (e > d) r.factors_.push_back({v, e - d});
  }
  return r;
}

Monomial Monomial::pow(std::uint64_t e) const {
  Monomial r;
  if (e == 0) return r;
  r.factors_ = factors_;
  for (auto& f : r.factors_) f.second *= e;
  return r;
}

Monomial Monomial::root(std::uint64_t d) const {
  Monomial r;
  r.factors_ = factors_;
  for (auto& f : r.factors_) {
    assert(f.second % d == 0);
    f.second /= d;
  }
  return r;
}

bool Monomial::exponents_divisible(std::uint64_t d) const {
  for (const auto& [v, e] : factors_)
    if (e % d != 0) return false;
  return true;
}

Monomial Monomial::without(VarKey v) const {
  Monomial r;
  for (const auto& f : factors_)
    if (f.first != v) r.factors_.push_back(f);
  return r;
}

std::strong_ordering Monomial::operator<=>(const Monomial& o) const {
  std::uint64_t da = total_degree(), db = o.total_degree();
  if (da != db) return da <=> db;
  std::size_t i = 0, j = 0;
  while (i < factors_.size() && j < o.factors_.size()) {
    const auto& [va, ea] = factors_[i];
    const auto& [vb, eb] = o.factors_[j];
    if (va != vb) {
      // The side owning the earlier variable has positive degree where the
      // other has zero, so it wins the lex comparison.
      return va < vb ? std::strong_ordering::greater : std::strong_ordering::less;
    }
    if (ea != eb) return ea <=> eb;
    ++i, ++j;
  }
  if (i < factors_.size()) return std::strong_ordering::greater;
  if (j < o.factors_.size()) return std::strong_ordering::less;
  return std::strong_ordering::equal;
}

std::string Monomial::to_string(const VarNamer& namer) const {
  if (is_one()) return "1";
  std::ostringstream os;
  bool first = true;
  for (const auto& [v, e] : factors_) {
    if (!first) os << "*";
    first = false;
    os << namer.name_of(v);
    if (e != 1) os << "^" << e;
  }
  return os.str();
}

namespace {
Int mod_norm(Int c, std::uint32_t p) {
  if (p == 0) return c;
  Int r;
  mpz_fdiv_r_ui(r.get_mpz_t(), c.get_mpz_t(), p);
  return r;
}
}  // namespace

MPoly MPoly::constant(std::uint32_t p, Int c) {
  MPoly r(p);
  r.add_term(Monomial(), std::move(c));
  return r;
}

MPoly MPoly::variable(std::uint32_t p, VarKey v) {
  MPoly r(p);
  r.add_term(Monomial(v), Int(1));
  return r;
}

MPoly MPoly::monomial(std::uint32_t p, Monomial m, Int c) {
  MPoly r(p);
  r.add_term(m, std::move(c));
  return r;
}

bool MPoly::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Int MPoly::constant_value() const {
  if (terms_.empty()) return Int(0);
  assert(is_constant());
  return terms_.begin()->second;
}

bool MPoly::is_one() const { return is_constant() && constant_value() == 1; }

void MPoly::add_term(const Monomial& m, Int c) {
  c = mod_norm(std::move(c), p_);
  if (c == 0) return;
  auto [it, fresh] = terms_.emplace(m, c);
  if (!fresh) {
    it->second = mod_norm(it->second + c, p_);
    if (it->second == 0) terms_.erase(it);
  }
}

MPoly MPoly::operator+(const MPoly& o) const {
  assert(p_ == o.p_);
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, c);
  return r;
}

MPoly MPoly::operator-(const MPoly& o) const {
  assert(p_ == o.p_);
  MPoly r = *this;
  for (const auto& [m, c] : o.terms_) r.add_term(m, -c);
  return r;
}

MPoly MPoly::operator-() const {
  MPoly r(p_);
  for (const auto& [m, c] : terms_) r.add_term(m, -c);
  return r;
}

MPoly MPoly::operator*(const MPoly& o) const {
  assert(p_ == o.p_);
  MPoly r(p_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

MPoly MPoly::mul_term(const Monomial& m, const Int& c) const {
  MPoly r(p_);
  for (const auto& [mm, cc] : terms_) r.add_term(mm * m, cc * c);
  return r;
}

MPoly MPoly::pow(std::uint64_t e) const {
  MPoly r = constant(p_, Int(1));
  MPoly b = *this;
  while (e > 0) {
    if (e & 1) r = r * b;
    b = (e >>= 1) ? b * b : b;
  }
  return r;
}

std::uint64_t MPoly::degree_in(VarKey v) const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.degree_in(v));
  return d;
}

std::uint64_t MPoly::total_degree() const {
  std::uint64_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
  return d;
}

std::set<VarKey> MPoly::vars() const {
  std::set<VarKey> vs;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, e] : m.factors()) vs.insert(v);
  return vs;
}

const Monomial& MPoly::leading_monomial() const {
  assert(!terms_.empty());
  return terms_.rbegin()->first;
}

const Int& MPoly::leading_coeff() const {
  assert(!terms_.empty());
  return terms_.rbegin()->second;
}

std::vector<MPoly> MPoly::coeffs_in(VarKey v) const {
  if (is_zero()) return {};
  std::vector<MPoly> cs(degree_in(v) + 1, MPoly(p_));
  for (const auto& [m, c] : terms_) cs[m.degree_in(v)].add_term(m.without(v), c);
  return cs;
}

MPoly MPoly::from_coeffs(VarKey v, const std::vector<MPoly>& cs) {
  MPoly r(cs.empty() ? 0 : cs.front().characteristic());
  for (std::size_t i = 0; i < cs.size(); ++i) {
    Monomial vi(v, i);
    for (const auto& [m, c] : cs[i].terms_) r.add_term(m * vi, c);
  }
  return r;
}

namespace {
// Inverse of c modulo prime p.
Int inv_mod(const Int& c, std::uint32_t p) {
  Int r, pp(static_cast<unsigned long>(p));
  int ok = mpz_invert(r.get_mpz_t(), c.get_mpz_t(), pp.get_mpz_t());
  (void)ok;
  assert(ok);
  return r;
}
}  // namespace

std::optional<MPoly> MPoly::try_div(const MPoly& d) const {
  assert(p_ == d.p_);
  if (d.is_zero()) return std::nullopt;
  MPoly q(p_), r = *this;
  const Monomial& dm = d.leading_monomial();
  const Int& dc = d.leading_coeff();
  while (!r.is_zero()) {
    const Monomial& rm = r.leading_monomial();
    const Int& rc = r.leading_coeff();
    if (!dm.divides(rm)) return std::nullopt;
    Int qc;
    if (p_ == 0) {
      Int rem;
      mpz_tdiv_qr(qc.get_mpz_t(), rem.get_mpz_t(), rc.get_mpz_t(), dc.get_mpz_t());
      if (rem != 0) return std::nullopt;
    } else {
      qc = mod_norm(rc * inv_mod(dc, p_), p_);
    }
    Monomial qm = rm.divide(dm);
    q.add_term(qm, qc);
    r = r - d.mul_term(qm, qc);
  }
  return q;
}

MPoly MPoly::derivative(VarKey v) const {
  MPoly r(p_);
  for (const auto& [m, c] : terms_) {
    std::uint64_t e = m.degree_in(v);
    if (e == 0) continue;
    Monomial m2 = m.without(v) * Monomial(v, e - 1);
    r.add_term(m2, c * Int(static_cast<unsigned long>(e)));
  }
  return r;
}

MPoly MPoly::stretch(VarKey v, std::uint64_t e) const {
  MPoly r(p_);
  for (const auto& [m, c] : terms_) {
    std::uint64_t d = m.degree_in(v);
    r.add_term(m.without(v) * Monomial(v, d * e), c);
  }
  return r;
}

MPoly MPoly::stretch_all(std::uint64_t s) const {
  MPoly r(p_);
  for (const auto& [m, c] : terms_) r.add_term(m.pow(s), c);
  return r;
}

Int MPoly::content() const {
  if (is_zero()) return Int(0);
  if (p_ != 0) return leading_coeff();
  Int g(0);
  for (const auto& [m, c] : terms_) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    if (g == 1) break;
  }
  if (leading_coeff() < 0) g = -g;
  return g;
}

MPoly MPoly::divide_content(const Int& c) const {
  assert(c != 0);
  MPoly r(p_);
  if (p_ == 0) {
    for (const auto& [m, cc] : terms_) {
      Int q;
      mpz_divexact(q.get_mpz_t(), cc.get_mpz_t(), c.get_mpz_t());
      r.add_term(m, q);
    }
  } else {
    Int ci = inv_mod(c, p_);
    for (const auto& [m, cc] : terms_) r.add_term(m, cc * ci);
  }
  return r;
}

MPoly pseudo_rem(const MPoly& a, const MPoly& b, VarKey v) {
  // Standard pseudo-remainder: lc(b)^(deg a - deg b + 1) * a = q*b + r.
  std::uint64_t da = a.degree_in(v), db = b.degree_in(v);
  MPoly r = a;
  if (da < db) return r;
  auto bc = b.coeffs_in(v);
  const MPoly& lcb = bc.back();
  std::uint64_t steps = 0;
  while (!r.is_zero()) {
    std::uint64_t dr = r.degree_in(v);
    if (dr < db) break;
    auto rc = r.coeffs_in(v);
    const MPoly& lcr = rc.back();
    // r <- lc(b)*r - lc(r)*v^(dr-db)*b
    MPoly shift = MPoly::monomial(a.characteristic(), Monomial(v, dr - db), Int(1));
    r = r * lcb - b * shift * lcr;
    ++steps;
    assert(r.degree_in(v) < dr || r.is_zero());
  }
  // Top coefficients that vanished early still owe a factor of lc(b) so the
  // result matches the lc^(delta+1) normalization exactly.
  for (std::uint64_t i = steps; i < da - db + 1; ++i) r = r * lcb;
  return r;
}

namespace {
constexpr std::uint64_t kProbeMod = 2305843009213693951ull;  // 2^61 - 1

std::uint64_t mulmod_probe(std::uint64_t a, std::uint64_t b) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % kProbeMod);
}

std::uint64_t powmod_probe(std::uint64_t a, std::uint64_t e) {
  std::uint64_t r = 1;
  while (e) {
    if (e & 1) r = mulmod_probe(r, a);
    a = mulmod_probe(a, a);
    e >>= 1;
  }
  return r;
}

std::uint64_t probe_point(VarKey v, std::uint64_t salt) {
  std::uint64_t h = (static_cast<std::uint64_t>(v.name_rank) << 32) ^ v.index ^ (salt * 0x9e3779b97f4a7c15ull);
  h ^= h >> 33;
  h *= 0xff51afd7ed558ccdull;
  h ^= h >> 33;
  return 2 + h % 97;
}

// Specialize every variable except v at small points and reduce mod a word
// prime; returns the coefficient vector in v, or nullopt if everything
// vanished.
std::optional<std::vector<std::uint64_t>> probe_uni(const MPoly& f, VarKey v, std::uint64_t salt) {
  std::vector<std::uint64_t> c(f.degree_in(v) + 1, 0);
  for (const auto& [m, co] : f.terms()) {
    std::uint64_t acc = mpz_fdiv_ui(co.get_mpz_t(), kProbeMod);
    std::size_t idx = 0;
    for (const auto& [w, e] : m.factors()) {
      if (w == v)
        idx = e;
      else
        acc = mulmod_probe(acc, powmod_probe(probe_point(w, salt), e));
    }
    c[idx] = (c[idx] + acc) % kProbeMod;
  }
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.empty()) return std::nullopt;
  return c;
}

std::size_t probe_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b) {
  auto trimv = [](std::vector<std::uint64_t>& x) {
    while (!x.empty() && x.back() == 0) x.pop_back();
  };
  while (!b.empty()) {
    // a mod b over F_q
    std::uint64_t lead_inv = powmod_probe(b.back(), kProbeMod - 2);
    while (a.size() >= b.size()) {
      std::uint64_t f = mulmod_probe(a.back(), lead_inv);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) {
        std::uint64_t sub = mulmod_probe(f, b[i]);
        a[off + i] = (a[off + i] + kProbeMod - sub) % kProbeMod;
      }
      trimv(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
    trimv(b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// In characteristic p the probe needs points from an extension GF(p^k) large
// enough that random specializations rarely hit the resultant's zero locus.
// Dense little-endian coefficient vectors over F_p, entries kept in [0, p).
std::uint64_t addm(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return (a + b) % m; }
std::uint64_t subm(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return (a + m - b) % m; }
std::uint64_t mulm(std::uint64_t a, std::uint64_t b, std::uint64_t m) { return a * b % m; }

std::uint64_t powm(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  while (e) {
    if (e & 1) r = mulm(r, a, m);
    a = mulm(a, a, m);
    e >>= 1;
  }
  return r;
}

using FpPoly = std::vector<std::uint64_t>;

void fp_trim(FpPoly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b, std::uint64_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<unsigned __int128> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] += a[i] * b[j];
  FpPoly r(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) r[i] = static_cast<std::uint64_t>(acc[i] % p);
  fp_trim(r);
  return r;
}

// Remainder modulo a monic polynomial.
void fp_mod(FpPoly& a, const FpPoly& f, std::uint64_t p) {
  std::size_t k = f.size() - 1;
  while (a.size() > k) {
    std::uint64_t c = a.back();
    std::size_t off = a.size() - 1 - k;
    if (c != 0)
      for (std::size_t i = 0; i < k; ++i) a[off + i] = subm(a[off + i], mulm(c, f[i], p), p);
    a.pop_back();
    fp_trim(a);
  }
}

FpPoly fp_powmod(FpPoly base, std::uint64_t e, const FpPoly& f, std::uint64_t p) {
  FpPoly r{1};
  fp_mod(base, f, p);
  while (e) {
    if (e & 1) {
      r = fp_mul(r, base, p);
      fp_mod(r, f, p);
    }
    base = fp_mul(base, base, p);
    fp_mod(base, f, p);
    e >>= 1;
  }
  return r;
}

bool fp_gcd_is_const(FpPoly a, FpPoly b, std::uint64_t p) {
  fp_trim(a);
  fp_trim(b);
  while (!b.empty()) {
    std::uint64_t inv = powm(b.back(), p - 2, p);
    while (a.size() >= b.size()) {
      std::uint64_t f = mulm(a.back(), inv, p);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = subm(a[off + i], mulm(f, b[i], p), p);
      fp_trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
    fp_trim(b);
  }
  return a.size() == 1;
}

// Rabin's criterion: monic f of degree k is irreducible over F_p iff
// z^(p^k) == z mod f and gcd(z^(p^(k/q)) - z, f) = 1 for every prime q | k.
bool fp_irreducible(const FpPoly& f, std::uint64_t p) {
  std::size_t k = f.size() - 1;
  std::vector<FpPoly> iter(k + 1);
  iter[0] = {0, 1};
  fp_mod(iter[0], f, p);
  for (std::size_t i = 1; i <= k; ++i) iter[i] = fp_powmod(iter[i - 1], p, f, p);
  FpPoly z{0, 1};
  fp_mod(z, f, p);
  if (iter[k] != z) return false;
  for (std::size_t q = 2; q <= k; ++q) {
    if (k % q != 0) continue;
    bool prime = true;
    for (std::size_t d = 2; d * d <= q; ++d)
      if (q % d == 0) prime = false;
    if (!prime) continue;
    FpPoly g = iter[k / q];
    if (g.size() < 2) g.resize(2, 0);
    g[1] = subm(g[1], 1, p);
    fp_trim(g);
    if (g.empty()) return false;
    if (!fp_gcd_is_const(f, g, p)) return false;
  }
  return true;
}

std::uint64_t splitmix(std::uint64_t& s) {
  s += 0x9e3779b97f4a7c15ull;
  std::uint64_t z = s;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

struct GFCtx {
  std::uint64_t p = 0;
  std::size_t k = 0;
  FpPoly mod;                // monic irreducible of degree k
  unsigned __int128 q = 0;   // p^k
};

using GFel = std::vector<std::uint64_t>;  // length k

const GFCtx& gf_ctx(std::uint64_t p) {
  static std::mutex mx;
  static std::map<std::uint64_t, GFCtx> cache;
  std::lock_guard<std::mutex> lock(mx);
  auto it = cache.find(p);
  if (it != cache.end()) return it->second;
  GFCtx c;
  c.p = p;
  std::size_t k = 2;
  unsigned __int128 q = static_cast<unsigned __int128>(p) * p;
  while (q < (static_cast<unsigned __int128>(1) << 26)) {
    q *= p;
    ++k;
  }
  c.k = k;
  c.q = q;
  std::uint64_t seed = 0x6a09e667f3bcc908ull ^ p;
  while (true) {
    FpPoly f(k + 1, 0);
    f[k] = 1;
    for (std::size_t i = 0; i < k; ++i) f[i] = splitmix(seed) % p;
    if (f[0] == 0) f[0] = 1;
    if (fp_irreducible(f, p)) {
      c.mod = std::move(f);
      break;
    }
  }
  return cache.emplace(p, std::move(c)).first->second;
}

bool gf_is_zero(const GFel& a) {
  for (std::uint64_t x : a)
    if (x) return false;
  return true;
}

GFel gf_scalar(const GFCtx& c, std::uint64_t s) {
  GFel r(c.k, 0);
  r[0] = s % c.p;
  return r;
}

void gf_add_into(const GFCtx& c, GFel& a, const GFel& b) {
  for (std::size_t i = 0; i < c.k; ++i) a[i] = addm(a[i], b[i], c.p);
}

GFel gf_sub(const GFCtx& c, const GFel& a, const GFel& b) {
  GFel r(c.k);
  for (std::size_t i = 0; i < c.k; ++i) r[i] = subm(a[i], b[i], c.p);
  return r;
}

GFel gf_mul(const GFCtx& c, const GFel& a, const GFel& b) {
  std::vector<unsigned __int128> acc(2 * c.k - 1, 0);
  for (std::size_t i = 0; i < c.k; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < c.k; ++j) acc[i + j] += a[i] * b[j];
  }
  std::vector<std::uint64_t> t(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) t[i] = static_cast<std::uint64_t>(acc[i] % c.p);
  for (std::size_t d = t.size(); d-- > c.k;) {
    std::uint64_t co = t[d];
    if (co == 0) continue;
    for (std::size_t i = 0; i < c.k; ++i)
      t[d - c.k + i] = subm(t[d - c.k + i], mulm(co, c.mod[i], c.p), c.p);
    t[d] = 0;
  }
  t.resize(c.k);
  return t;
}

GFel gf_pow(const GFCtx& c, GFel a, unsigned __int128 e) {
  GFel r = gf_scalar(c, 1);
  while (e) {
    if (e & 1) r = gf_mul(c, r, a);
    a = gf_mul(c, a, a);
    e >>= 1;
  }
  return r;
}

GFel gf_inv(const GFCtx& c, const GFel& a) { return gf_pow(c, a, c.q - 2); }

GFel gf_probe_point(const GFCtx& c, VarKey v, std::uint64_t salt) {
  std::uint64_t s = (static_cast<std::uint64_t>(v.name_rank) << 32) ^ v.index ^ (salt * 0xd1342543de82ef95ull);
  GFel r(c.k);
  for (std::size_t i = 0; i < c.k; ++i) r[i] = splitmix(s) % c.p;
  if (gf_is_zero(r)) r[0] = 1;
  return r;
}

std::optional<std::vector<GFel>> gf_probe_uni(const GFCtx& c, const MPoly& f, VarKey v, std::uint64_t salt) {
  std::vector<GFel> out(f.degree_in(v) + 1, GFel(c.k, 0));
  for (const auto& [m, co] : f.terms()) {
    GFel acc = gf_scalar(c, mpz_fdiv_ui(co.get_mpz_t(), c.p));
    std::size_t idx = 0;
    for (const auto& [w, e] : m.factors()) {
      if (w == v)
        idx = e;
      else
        acc = gf_mul(c, acc, gf_pow(c, gf_probe_point(c, w, salt), e));
    }
    gf_add_into(c, out[idx], acc);
  }
  while (!out.empty() && gf_is_zero(out.back())) out.pop_back();
  if (out.empty()) return std::nullopt;
  return out;
}

std::size_t gf_probe_gcd_degree(const GFCtx& c, std::vector<GFel> a, std::vector<GFel> b) {
  auto trimv = [](std::vector<GFel>& x) {
    while (!x.empty() && gf_is_zero(x.back())) x.pop_back();
  };
  while (!b.empty()) {
    GFel inv = gf_inv(c, b.back());
    while (a.size() >= b.size()) {
      GFel f = gf_mul(c, a.back(), inv);
      std::size_t off = a.size() - b.size();
      for (std::size_t i = 0; i < b.size(); ++i) a[off + i] = gf_sub(c, a[off + i], gf_mul(c, f, b[i]));
      trimv(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
    trimv(b);
  }
  return a.empty() ? 0 : a.size() - 1;
}

// Sound filter: if a specialization that preserves deg_v(a) yields a gcd of
// degree 0, the true gcd is free of v (the specialized gcd degree can only
// overshoot, never undershoot, when the leading coefficient survives).
bool gcd_free_of(const MPoly& a, const MPoly& b, VarKey v) {
  if (a.characteristic() == 0) {
    for (std::uint64_t salt = 1; salt <= 2; ++salt) {
      auto pa = probe_uni(a, v, salt);
      auto pb = probe_uni(b, v, salt);
      if (!pa || !pb) continue;
      if (pa->size() != a.degree_in(v) + 1 && pb->size() != b.degree_in(v) + 1) continue;
      if (probe_gcd_degree(*pa, *pb) == 0) return true;
    }
    return false;
  }
  const GFCtx& c = gf_ctx(a.characteristic());
  for (std::uint64_t salt = 1; salt <= 2; ++salt) {
    auto pa = gf_probe_uni(c, a, v, salt);
    auto pb = gf_probe_uni(c, b, v, salt);
    if (!pa || !pb) continue;
    if (pa->size() != a.degree_in(v) + 1 && pb->size() != b.degree_in(v) + 1) continue;
    if (gf_probe_gcd_degree(c, *pa, *pb) == 0) return true;
  }
  return false;
}

// Content of f viewed as a univariate polynomial in v (gcd of its
// coefficients, themselves polynomials in the remaining variables).
MPoly content_in(const MPoly& f, VarKey v) {
  MPoly g(f.characteristic());
  for (const MPoly& c : f.coeffs_in(v)) {
    if (c.is_zero()) continue;
    g = MPoly::gcd(g, c);
    if (g.is_one()) break;
  }
  return g;
}

MPoly unit_normal(const MPoly& f) {
  if (f.is_zero()) return f;
  if (f.characteristic() == 0) return f.leading_coeff() < 0 ? -f : f;
  return f.divide_content(f.leading_coeff());
}
}  // namespace

MPoly MPoly::gcd(const MPoly& a, const MPoly& b) {
  assert(a.p_ == b.p_);
  if (a.is_zero()) return unit_normal(b);
  if (b.is_zero()) return unit_normal(a);
  if (a.is_constant() || b.is_constant()) {
    if (a.p_ != 0) return constant(a.p_, Int(1));
    Int g;
    Int ca = a.content(), cb = b.content();
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), ca.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), cb.get_mpz_t());
    return constant(0, g);
  }
  if (a.terms().size() == 1 || b.terms().size() == 1) {
    // gcd against a monomial: per-variable minimum exponent over the other
    // operand, with the coefficient gcd in characteristic 0.
    const MPoly& mono = a.terms().size() == 1 ? a : b;
    const MPoly& other = a.terms().size() == 1 ? b : a;
    std::map<VarKey, std::uint64_t> low;
    for (const auto& [v, e] : mono.terms().begin()->first.factors()) low[v] = e;
    Int c = a.p_ == 0 ? mono.terms().begin()->second : Int(1);
    if (c < 0) c = -c;
    for (const auto& [m, co] : other.terms()) {
      for (auto it = low.begin(); it != low.end();) {
        std::uint64_t e = 0;
        for (const auto& [v, ve] : m.factors())
          if (v == it->first) e = ve;
        it->second = std::min(it->second, e);
        it = it->second == 0 ? low.erase(it) : std::next(it);
      }
      if (a.p_ == 0) mpz_gcd(c.get_mpz_t(), c.get_mpz_t(), co.get_mpz_t());
      if (low.empty() && c == 1) break;
    }
    std::vector<Monomial::Factor> fs(low.begin(), low.end());
    return monomial(a.p_, Monomial::from_factors(std::move(fs)), c);
  }
  auto va = a.vars(), vb = b.vars();
  // Main variable: the smallest key present in both; if the supports are
  // disjoint in some variable, the gcd is free of it, so recurse on content.
  std::optional<VarKey> common;
  for (VarKey v : va)
    if (vb.count(v)) {
      common = v;
      break;
    }
  if (!common) {
    VarKey v = *va.begin();
    if (!vb.count(v)) return gcd(content_in(a, v), b);
    v = *vb.begin();
    return gcd(a, content_in(b, v));
  }
  VarKey v = *common;
  if (a.degree_in(v) == 0) return gcd(a, content_in(b, v));
  if (b.degree_in(v) == 0) return gcd(content_in(a, v), b);
  if (gcd_free_of(a, b, v)) return gcd(content_in(a, v), content_in(b, v));

  MPoly ca = content_in(a, v), cb = content_in(b, v);
  MPoly pa = *a.try_div(ca), pb = *b.try_div(cb);
  MPoly cg = gcd(ca, cb);
  if (pa.degree_in(v) < pb.degree_in(v)) std::swap(pa, pb);
  // Subresultant PRS: intermediate remainders carry known exact divisors, so
  // no per-step content computation is needed and coefficient growth stays
  // polynomial.
  MPoly g = constant(a.p_, Int(1)), h = constant(a.p_, Int(1));
  MPoly res(a.p_);
  while (true) {
    std::uint64_t delta = pa.degree_in(v) - pb.degree_in(v);
    MPoly r = pseudo_rem(pa, pb, v);
    if (r.is_zero()) {
      res = pb;
      break;
    }
    if (r.degree_in(v) == 0) {
      res = constant(a.p_, Int(1));
      break;
    }
    pa = pb;
    auto q = r.try_div(g * h.pow(delta));
    assert(q.has_value());
    pb = std::move(*q);
    g = pa.coeffs_in(v).back();
    if (delta == 1) {
      h = g;
    } else if (delta > 1) {
      auto hh = g.pow(delta).try_div(h.pow(delta - 1));
      assert(hh.has_value());
      h = std::move(*hh);
    }
  }
  if (!res.is_constant()) res = *res.try_div(content_in(res, v));
  return unit_normal(cg * res);
}

std::optional<MPoly> MPoly::try_pth_root() const {
  assert(p_ != 0);
  MPoly r(p_);
  for (const auto& [m, c] : terms_) {
    if (!m.exponents_divisible(p_)) return std::nullopt;
    r.add_term(m.root(p_), c);  // c^(1/p) == c in F_p
  }
  return r;
}

std::string MPoly::to_string(const VarNamer& namer) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    Int ac = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (m.is_one())
      os << ac.get_str();
    else if (ac == 1)
      os << m.to_string(namer);
    else
      os << ac.get_str() << "*" << m.to_string(namer);
  }
  return os.str();
}

}  // namespace algser
