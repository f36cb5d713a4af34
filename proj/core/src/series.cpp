#include <algser/irreducible.hpp>
#include <algser/series.hpp>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>
#include <utility>

namespace algser {

namespace {

// Longest run of consecutive exact cancellations tolerated while hunting for
// a nonzero term.
constexpr std::size_t kStallCap = 100000;
// Pull ceiling for discrepancy searches (reciprocals, unit roots) whose next
// term must be certified against a finite prefix of the operand; each round
// rescans the operand, so this cap is deliberately much smaller.
constexpr std::size_t kDiscrepancyPullCap = 4096;

Elem lift_if(const Elem& e, const TowerPtr& t) {
  return e.tower().get() == t.get() ? e : e.lift_to(t);
}

TowerPtr join_tw(const TowerPtr& a, const TowerPtr& b) {
  if (!a) return b;
  if (!b) return a;
  return Tower::join(a, b);
}

}  // namespace

// Shared production node.  step() yields candidates with strictly increasing
// exponents; zero coefficients are real candidates (exact cancellations).
// Every candidate is memoized, so the stream is observationally pure no
// matter how many consumers pull from it.  Sums, shifts and products iterate
// the raw streams of their children, which lets cancellation evidence
// propagate to the top of an expression instead of stalling a lower node;
// only the discrepancy-driven nodes (reciprocal, unit root) require certified
// nonzero terms, and they stall honestly when certification is impossible.
struct Series::Node {
  virtual ~Node() = default;

  virtual std::optional<Term> step() = 0;
  virtual std::optional<Rat> accumulation() { return std::nullopt; }

  std::vector<Term> raw;        // every candidate, zeros included
  std::vector<std::size_t> nz;  // positions of the nonzero candidates
  bool done = false;
  TowerPtr tow;

  void note_tower(const TowerPtr& t) { tow = join_tw(tow, t); }

  const Term& term_at(std::size_t i) const { return raw[nz[i]]; }

  // Memoize at least k raw candidates; false once the stream ends earlier.
  bool raw_ensure(std::size_t k) {
    while (raw.size() < k && !done) {
      auto t = step();
      if (!t) {
        done = true;
        break;
      }
      require(t->c.attached(), Errc::internal, "series produced an unattached coefficient");
      if (!raw.empty())
        require(raw.back().e < t->e, Errc::internal, "series exponents failed to increase");
      if (!t->c.is_zero()) {
        note_tower(t->c.tower());
        nz.push_back(raw.size());
      }
      raw.push_back(std::move(*t));
    }
    return raw.size() >= k;
  }

  // Memoize at least n nonzero terms; false once the stream ends earlier.
  // Fails loudly when the run of cancellations since the last nonzero term
  // exceeds the stall budget.
  bool ensure(std::size_t n) {
    while (nz.size() < n && !done) {
      raw_ensure(raw.size() + 1);
      std::size_t run = raw.size() - (nz.empty() ? 0 : nz.back() + 1);
      require(run <= kStallCap, Errc::budget_too_small,
              "series production stalled on a run of exact cancellations");
    }
    return nz.size() >= n;
  }
};

namespace {

using NodePtr = std::shared_ptr<Series::Node>;

// Finite sorted zero-free term list.
struct ExplicitNode final : Series::Node {
  std::vector<Term> all;
  std::size_t idx = 0;

  std::optional<Term> step() override {
    if (idx >= all.size()) return std::nullopt;
    return all[idx++];
  }
};

// Rule-driven infinite family, i = 1, 2, ...
struct TemplateNode final : Series::Node {
  CtxPtr ctx;
  ExpTemplate exp;
  CoefTemplate coef;
  std::uint32_t p = 0;
  unsigned long i = 0;

  std::optional<Term> step() override {
    ++i;
    Rat e;
    if (const auto* a = std::get_if<AffineExp>(&exp)) {
      e = a->a + a->b * Rat(i);
    } else {
      Int q = pow_uint(p, i);
      Int qm = q - 1;
      e = Rat(qm) / Rat(q);
    }
    Elem c;
    if (const auto* cc = std::get_if<CoefConst>(&coef)) {
      c = cc->c;
    } else if (const auto* ir = std::get_if<CoefIndexedRoot>(&coef)) {
      c = ctx->family_root(ir->family, static_cast<std::uint32_t>(i), ir->root_e);
    } else {
      const auto& fr = std::get<CoefFrobenius>(coef);
      c = fr.kappa.frobenius(static_cast<unsigned long>(fr.e) * i);
    }
    return Term{std::move(e), std::move(c)};
  }

  std::optional<Rat> accumulation() override {
    if (std::holds_alternative<OneMinusPPow>(exp)) return Rat(1);
    return std::nullopt;
  }
};

// Externally driven prefix (branches of plane curves).  The driver returns
// the full known prefix; returning no new terms ends the stream.
struct BranchNode final : Series::Node {
  std::vector<Term> known;
  std::size_t idx = 0;
  BranchDriver driver;

  std::optional<Term> step() override {
    if (idx >= known.size()) {
      if (!driver) return std::nullopt;
      auto ext = driver(known.size() + 1);
      require(ext.size() >= known.size(), Errc::internal, "branch driver shrank its prefix");
      if (ext.size() == known.size()) {
        driver = nullptr;
        return std::nullopt;
      }
      known = std::move(ext);
    }
    return known[idx++];
  }
};

struct ShiftNode final : Series::Node {
  NodePtr child;
  Rat q;
  std::size_t idx = 0;

  std::optional<Term> step() override {
    if (!child->raw_ensure(idx + 1)) return std::nullopt;
    const Term& t = child->raw[idx++];
    return Term{t.e + q, t.c};
  }

  std::optional<Rat> accumulation() override {
    if (auto a = child->accumulation()) return *a + q;
    return std::nullopt;
  }
};

// Termwise p^r-th power in characteristic p; exact by additivity of the
// p-power map, and order preserving since e -> p^r e is monotone.
struct FrobNode final : Series::Node {
  NodePtr child;
  Rat q;  // p^r
  unsigned long r = 0;
  std::size_t idx = 0;

  std::optional<Term> step() override {
    if (!child->raw_ensure(idx + 1)) return std::nullopt;
    const Term& t = child->raw[idx++];
    return Term{t.e * q, t.c.frobenius(r)};
  }

  std::optional<Rat> accumulation() override {
    if (auto a = child->accumulation()) return *a * q;
    return std::nullopt;
  }
};

// Termwise coefficient transform; the map must send zero to zero so the
// candidate stream keeps its meaning.
struct MapNode final : Series::Node {
  NodePtr child;
  std::function<Elem(const Elem&)> f;
  std::size_t idx = 0;

  std::optional<Term> step() override {
    if (!child->raw_ensure(idx + 1)) return std::nullopt;
    const Term& t = child->raw[idx++];
    Elem c = f(t.c);
    require(c.attached(), Errc::validation_error, "coefficient map produced a detached element");
    require(!t.c.is_zero() || c.is_zero(), Errc::validation_error,
            "coefficient map must preserve zero");
    return Term{t.e, std::move(c)};
  }

  std::optional<Rat> accumulation() override { return child->accumulation(); }
};

// Merge of two candidate streams; equal exponents are combined, and both
// inherited and fresh cancellations surface as zero candidates.
struct AddNode final : Series::Node {
  NodePtr a, b;
  bool negate_b = false;
  std::size_t ia = 0, ib = 0;

  std::optional<Term> step() override {
    bool ha = a->raw_ensure(ia + 1);
    bool hb = b->raw_ensure(ib + 1);
    if (!ha && !hb) return std::nullopt;
    if (ha && (!hb || a->raw[ia].e < b->raw[ib].e)) {
      const Term& t = a->raw[ia++];
      return Term{t.e, t.c};
    }
    if (hb && (!ha || b->raw[ib].e < a->raw[ia].e)) {
      const Term& t = b->raw[ib++];
      return Term{t.e, negate_b ? -t.c : t.c};
    }
    const Term& x = a->raw[ia++];
    const Term& y = b->raw[ib++];
    TowerPtr t = join_tw(x.c.tower(), y.c.tower());
    Elem cx = lift_if(x.c, t);
    Elem cy = lift_if(y.c, t);
    return Term{x.e, negate_b ? cx - cy : cx + cy};
  }

  std::optional<Rat> accumulation() override {
    auto x = a->accumulation();
    auto y = b->accumulation();
    if (x && y) return std::min(*x, *y);
    return x ? x : y;
  }
};

// Cauchy product by a frontier walk over the raw candidate grid.  Exponent
// streams strictly increase, so popping every minimal-sum pair and pushing
// its two successors visits each pair once in strictly increasing sum order.
// Walking raw candidates rather than certified nonzero terms matters: a
// factor that is finite but cannot prove it (say a quotient that happens to
// divide exactly) keeps emitting zero candidates, and those must pass
// through the product cheaply instead of triggering a certification hunt.
struct MulNode final : Series::Node {
  NodePtr a, b;
  std::set<std::tuple<Rat, std::size_t, std::size_t>> frontier;
  bool started = false;

  void push(std::size_t i, std::size_t j) {
    if (!a->raw_ensure(i + 1) || !b->raw_ensure(j + 1)) return;
    frontier.insert({a->raw[i].e + b->raw[j].e, i, j});
  }

  std::optional<Term> step() override {
    if (!started) {
      started = true;
      push(0, 0);
    }
    if (frontier.empty()) return std::nullopt;
    Rat s0 = std::get<0>(*frontier.begin());
    TowerPtr t;
    Elem acc;
    while (!frontier.empty() && std::get<0>(*frontier.begin()) == s0) {
      auto [s, i, j] = *frontier.begin();
      frontier.erase(frontier.begin());
      TowerPtr tt = join_tw(a->raw[i].c.tower(), b->raw[j].c.tower());
      Elem prod = lift_if(a->raw[i].c, tt) * lift_if(b->raw[j].c, tt);
      if (!t) {
        t = prod.tower();
        acc = std::move(prod);
      } else {
        t = join_tw(t, prod.tower());
        acc = lift_if(acc, t) + lift_if(prod, t);
      }
      push(i + 1, j);
      push(i, j + 1);
    }
    return Term{s0, std::move(acc)};
  }

  std::optional<Rat> accumulation() override {
    auto aa = a->accumulation();
    auto ab = b->accumulation();
    if (!aa && !ab) return std::nullopt;
    if (!a->ensure(1) || !b->ensure(1)) return std::nullopt;
    const Rat& fa = a->term_at(0).e;
    const Rat& fb = b->term_at(0).e;
    std::optional<Rat> best;
    auto consider = [&best](Rat v) {
      if (!best || v < *best) best = std::move(v);
    };
    if (aa) consider(*aa + fb);
    if (ab) consider(fa + *ab);
    if (aa && ab) consider(*aa + *ab);
    return best;
  }
};

// Exact finite-support arithmetic used by the discrepancy loops below.
using SegMap = std::map<Rat, Elem>;

void seg_insert(SegMap& m, const Rat& e, const Elem& c) {
  if (c.is_zero()) return;
  auto it = m.find(e);
  if (it == m.end()) {
    m.emplace(e, c);
    return;
  }
  TowerPtr t = join_tw(it->second.tower(), c.tower());
  Elem s = lift_if(it->second, t) + lift_if(c, t);
  if (s.is_zero())
    m.erase(it);
  else
    it->second = std::move(s);
}

SegMap seg_mul(const SegMap& a, const SegMap& b) {
  SegMap out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      TowerPtr t = join_tw(ca.tower(), cb.tower());
      seg_insert(out, ea + eb, lift_if(ca, t) * lift_if(cb, t));
    }
  return out;
}

SegMap seg_pow(const SegMap& a, unsigned long m) {
  SegMap out = a;
  for (unsigned long k = 1; k < m; ++k) out = seg_mul(out, a);
  return out;
}

// Reciprocal by discrepancy correction: z starts at c0^-1 x^-d and each
// round cancels the least exponent where u z differs from 1.  The search is
// only trusted through the exponents u has examined, raw candidates
// included, so a finite reciprocal of a stream that never exhausts stalls
// honestly instead of terminating.
struct InvNode final : Series::Node {
  NodePtr u;
  std::vector<Term> z;
  std::size_t emitted = 0;
  bool complete = false;
  bool init = false;
  Rat d;
  Elem c0inv;

  void initialize() {
    init = true;
    require(u->ensure(1), Errc::validation_error, "cannot invert the zero series");
    d = u->term_at(0).e;
    c0inv = u->term_at(0).c.inverse();
    z.push_back(Term{-d, c0inv});
  }

  std::optional<Term> step() override {
    if (!init) initialize();
    if (emitted < z.size()) return z[emitted++];
    if (complete) return std::nullopt;
    extend();
    if (emitted < z.size()) return z[emitted++];
    return std::nullopt;
  }

  void extend() {
    std::size_t pulls = std::max<std::size_t>(4, 2 * u->raw.size());
    while (true) {
      require(pulls <= kDiscrepancyPullCap, Errc::budget_too_small,
              "reciprocal production cannot certify its next term");
      u->raw_ensure(pulls);
      SegMap res;
      for (std::size_t k = 0; k < u->nz.size(); ++k)
        for (const auto& zt : z) {
          const Term& ut = u->term_at(k);
          TowerPtr t = join_tw(ut.c.tower(), zt.c.tower());
          seg_insert(res, ut.e + zt.e, lift_if(ut.c, t) * lift_if(zt.c, t));
        }
      seg_insert(res, Rat(0), -Elem::one(u->term_at(0).c.tower()));
      std::optional<Rat> valid_to;
      if (!u->done) valid_to = u->raw.back().e - d;
      if (!res.empty()) {
        const auto& [e, c] = *res.begin();
        if (!valid_to || e <= *valid_to) {
          TowerPtr t = join_tw(c.tower(), c0inv.tower());
          Elem w = -(lift_if(c, t) * lift_if(c0inv, t));
          z.push_back(Term{e - d, std::move(w)});
          return;
        }
      }
      if (u->done) {
        complete = true;
        return;
      }
      pulls *= 2;
    }
  }
};

// The unique m-th root of a unit with constant term one, by the same
// discrepancy scheme: u - z^m = g x^e forces the correction (g/m) x^e.
struct HenselNode final : Series::Node {
  NodePtr u;
  unsigned long m = 1;
  std::vector<Term> z;
  std::size_t emitted = 0;
  bool complete = false;

  std::optional<Term> step() override {
    if (z.empty()) {
      u->ensure(1);
      z.push_back(Term{Rat(0), Elem::one(u->term_at(0).c.tower())});
    }
    if (emitted < z.size()) return z[emitted++];
    if (complete) return std::nullopt;
    extend();
    if (emitted < z.size()) return z[emitted++];
    return std::nullopt;
  }

  std::optional<Rat> accumulation() override { return u->accumulation(); }

  void extend() {
    std::size_t pulls = std::max<std::size_t>(4, 2 * u->raw.size());
    while (true) {
      require(pulls <= kDiscrepancyPullCap, Errc::budget_too_small,
              "root production cannot certify its next term");
      u->raw_ensure(pulls);
      SegMap zs;
      for (const auto& t : z) seg_insert(zs, t.e, t.c);
      SegMap res;
      for (const auto& [e, c] : seg_pow(zs, m)) seg_insert(res, e, -c);
      for (std::size_t k = 0; k < u->nz.size(); ++k)
        seg_insert(res, u->term_at(k).e, u->term_at(k).c);
      std::optional<Rat> valid_to;
      if (!u->done) valid_to = u->raw.back().e;
      if (!res.empty()) {
        const auto& [e, c] = *res.begin();
        if (!valid_to || e <= *valid_to) {
          Elem w = c * Elem::from_rat(c.tower(), Rat(1, m));
          z.push_back(Term{e, std::move(w)});
          return;
        }
      }
      if (u->done) {
        complete = true;
        return;
      }
      pulls *= 2;
    }
  }
};

}  // namespace

Series Series::zero(TowerPtr t) {
  require(t != nullptr, Errc::validation_error, "series needs a coefficient tower");
  auto n = std::make_shared<ExplicitNode>();
  n->tow = std::move(t);
  return Series(std::move(n));
}

Series Series::explicit_terms(TowerPtr t, std::vector<Term> terms) {
  require(t != nullptr, Errc::validation_error, "series needs a coefficient tower");
  SegMap merged;
  TowerPtr deep = t;
  for (auto& tm : terms) {
    require(tm.c.attached(), Errc::validation_error, "series term without a tower");
    deep = join_tw(deep, tm.c.tower());
    seg_insert(merged, tm.e, tm.c);
  }
  auto n = std::make_shared<ExplicitNode>();
  n->tow = std::move(deep);
  n->all.reserve(merged.size());
  for (auto& [e, c] : merged) n->all.push_back(Term{e, c});
  return Series(std::move(n));
}

Series Series::monomial(TowerPtr t, const Rat& e, Elem c) {
  std::vector<Term> one;
  one.push_back(Term{e, std::move(c)});
  return explicit_terms(std::move(t), std::move(one));
}

Series Series::templated(CtxPtr ctx, ExpTemplate exp, CoefTemplate coef) {
  require(ctx != nullptr, Errc::validation_error, "templated series needs a context");
  auto n = std::make_shared<TemplateNode>();
  n->p = ctx->current()->characteristic();
  if (std::holds_alternative<OneMinusPPow>(exp))
    require(n->p != 0, Errc::validation_error,
            "the exponent shape 1 - p^-i needs positive characteristic");
  if (const auto* a = std::get_if<AffineExp>(&exp))
    require(a->b > 0, Errc::validation_error, "template exponents must strictly increase");
  if (const auto* cc = std::get_if<CoefConst>(&coef))
    require(cc->c.attached(), Errc::validation_error, "constant coefficient without a tower");
  if (const auto* ir = std::get_if<CoefIndexedRoot>(&coef)) {
    require(ctx->current()->base()->knows_name(ir->family), Errc::validation_error,
            "unknown transcendental family");
    if (ir->root_e > 0)
      require(n->p != 0, Errc::validation_error, "p-power roots need positive characteristic");
  }
  if (const auto* fr = std::get_if<CoefFrobenius>(&coef))
    require(fr->kappa.attached(), Errc::validation_error, "frobenius seed without a tower");
  n->ctx = std::move(ctx);
  n->exp = std::move(exp);
  n->coef = std::move(coef);
  n->tow = n->ctx->current();
  return Series(std::move(n));
}

Series Series::branch(TowerPtr t, std::vector<Term> seed, BranchDriver driver) {
  require(t != nullptr, Errc::validation_error, "series needs a coefficient tower");
  auto n = std::make_shared<BranchNode>();
  n->tow = std::move(t);
  for (std::size_t k = 0; k < seed.size(); ++k) {
    require(seed[k].c.attached(), Errc::validation_error, "branch seed term without a tower");
    if (k)
      require(seed[k - 1].e < seed[k].e, Errc::validation_error,
              "branch seed exponents must strictly increase");
    n->tow = join_tw(n->tow, seed[k].c.tower());
  }
  n->known = std::move(seed);
  n->driver = std::move(driver);
  return Series(std::move(n));
}

Series Series::operator+(const Series& o) const {
  auto n = std::make_shared<AddNode>();
  n->a = node_;
  n->b = o.node_;
  n->tow = join_tw(node_->tow, o.node_->tow);
  return Series(std::move(n));
}

Series Series::operator-(const Series& o) const {
  auto n = std::make_shared<AddNode>();
  n->a = node_;
  n->b = o.node_;
  n->negate_b = true;
  n->tow = join_tw(node_->tow, o.node_->tow);
  return Series(std::move(n));
}

Series Series::operator*(const Series& o) const {
  auto n = std::make_shared<MulNode>();
  n->a = node_;
  n->b = o.node_;
  n->tow = join_tw(node_->tow, o.node_->tow);
  return Series(std::move(n));
}

Series Series::shift_x(const Rat& q) const {
  auto n = std::make_shared<ShiftNode>();
  n->child = node_;
  n->q = q;
  n->tow = node_->tow;
  return Series(std::move(n));
}

Series Series::frobenius_power(unsigned long r) const {
  std::uint32_t p = node_->tow->characteristic();
  require(p != 0, Errc::validation_error, "frobenius powers need positive characteristic");
  if (r == 0) return *this;
  auto n = std::make_shared<FrobNode>();
  n->child = node_;
  n->q = Rat(pow_uint(p, r));
  n->r = r;
  n->tow = node_->tow;
  return Series(std::move(n));
}

Series Series::mapped_coefficients(std::function<Elem(const Elem&)> f) const {
  require(f != nullptr, Errc::validation_error, "coefficient map is empty");
  auto n = std::make_shared<MapNode>();
  n->child = node_;
  n->f = std::move(f);
  n->tow = node_->tow;
  return Series(std::move(n));
}

Series Series::inverse_unit() const {
  auto n = std::make_shared<InvNode>();
  n->u = node_;
  n->tow = node_->tow;
  return Series(std::move(n));
}

Series Series::operator/(const Series& o) const { return *this * o.inverse_unit(); }

TowerPtr Series::tower() const { return node_->tow; }

std::optional<Rat> Series::accumulation_point() const { return node_->accumulation(); }

std::optional<TemplateInfo> Series::template_info() const {
  if (const auto* tn = dynamic_cast<const TemplateNode*>(node_.get()))
    return TemplateInfo{tn->exp, tn->coef, tn->ctx};
  return std::nullopt;
}

Segment Series::truncate(const Truncation& how) const {
  std::vector<Term> out;
  if (const auto* tc = std::get_if<TermCount>(&how)) {
    node_->ensure(tc->n);
    std::size_t n = std::min(tc->n, node_->nz.size());
    for (std::size_t k = 0; k < n; ++k) out.push_back(node_->term_at(k));
  } else {
    const Rat& b = std::get<ExponentBound>(how).b;
    if (auto a = node_->accumulation(); a && b >= *a)
      fail(Errc::infinite_truncation,
           "exponent bound reaches the declared accumulation point of the support");
    // Walk raw candidates so that stretches of exact cancellations still
    // terminate once their exponents pass the bound.
    std::size_t guard = 0;
    while (!node_->done && (node_->raw.empty() || node_->raw.back().e < b)) {
      node_->raw_ensure(node_->raw.size() + 1);
      require(++guard <= kStallCap, Errc::budget_too_small,
              "exponent bound needs too many production steps");
    }
    for (std::size_t k = 0; k < node_->nz.size(); ++k) {
      const Term& t = node_->term_at(k);
      if (!(t.e < b)) break;
      out.push_back(t);
    }
  }
  TowerPtr t = node_->tow;
  for (auto& tm : out) tm.c = lift_if(tm.c, t);
  return Segment{std::move(out), std::move(t)};
}

std::vector<Term> Series::produce_raw(std::size_t n) const {
  node_->raw_ensure(n);
  std::size_t k = std::min(n, node_->raw.size());
  return std::vector<Term>(node_->raw.begin(),
                           node_->raw.begin() + static_cast<std::ptrdiff_t>(k));
}

std::string Series::to_string(std::size_t max_terms) const {
  try {
    node_->ensure(max_terms);
  } catch (const Error&) {
    // format whatever was certified before the stall
  }
  std::ostringstream os;
  std::size_t n = std::min(max_terms, node_->nz.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (k) os << " + ";
    const Term& t = node_->term_at(k);
    os << "(" << t.c.to_string() << ")*x^(" << rat_to_string(t.e) << ")";
  }
  if (n < node_->nz.size() || !node_->done) {
    os << (n ? " + ..." : "...");
  } else if (n == 0) {
    os << "0";
  }
  return os.str();
}

Elem TowerCtx::family_root(const std::string& family, std::uint32_t index, unsigned e) {
  std::uint32_t p = cur_->characteristic();
  VarKey v = cur_->base()->var(family, index);
  if (e == 0 || p == 0) return Elem::from_base(cur_, RatFunc::variable(p, v));
  auto it = roots_.find(v);
  if (it != roots_.end() && it->second.second >= e) {
    const auto& [step, h] = it->second;
    return Elem::generator_at(cur_, step).frobenius(h - e);
  }
  UPoly mp;
  std::string gen = family + std::to_string(index) + "r";
  if (it == roots_.end()) {
    Int deg = pow_uint(p, e);
    require(deg.fits_ulong_p(), Errc::validation_error, "root height too large");
    mp.assign(deg.get_ui() + 1, Elem::zero(cur_));
    mp.back() = Elem::one(cur_);
    mp.front() = -Elem::from_base(cur_, RatFunc::variable(p, v));
  } else {
    // deepen an existing root: a p^(e-h)-th root of the current generator
    const auto& [step, h] = it->second;
    Int deg = pow_uint(p, e - h);
    require(deg.fits_ulong_p(), Errc::validation_error, "root height too large");
    mp.assign(deg.get_ui() + 1, Elem::zero(cur_));
    mp.back() = Elem::one(cur_);
    mp.front() = -Elem::generator_at(cur_, step);
    gen += std::to_string(e);
  }
  cur_ = adjoin_certified(cur_, gen, std::move(mp), StepKind::inseparable);
  roots_[v] = {cur_->depth() - 1, e};
  return Elem::generator(cur_);
}

Segment substitute(const YSeriesPoly& g, const Series& s, const Truncation& budget) {
  require(!g.coeff.empty(), Errc::validation_error, "substitution needs a nonempty polynomial");
  Series acc = g.coeff.back();
  for (std::size_t j = g.coeff.size() - 1; j-- > 0;) acc = acc * s + g.coeff[j];
  if (const auto* tc = std::get_if<TermCount>(&budget)) {
    auto raw = acc.produce_raw(tc->n);
    std::vector<Term> out;
    for (auto& t : raw)
      if (!t.c.is_zero()) out.push_back(std::move(t));
    TowerPtr t = acc.tower();
    for (auto& tm : out) tm.c = lift_if(tm.c, t);
    return Segment{std::move(out), std::move(t)};
  }
  return acc.truncate(budget);
}

Series hensel_unit_root(const Series& u, unsigned long m) {
  require(m >= 1, Errc::validation_error, "root exponent must be positive");
  std::uint32_t p = u.tower()->characteristic();
  if (p != 0)
    require(m % p != 0, Errc::ramified_root,
            "m-th roots with p dividing m are ramified and have no unit branch");
  NodePtr un = u.node_;
  require(un->ensure(1) && un->term_at(0).e == Rat(0) && un->term_at(0).c.is_one(),
          Errc::validation_error, "hensel root requires constant term one");
  if (m == 1) return u;
  auto n = std::make_shared<HenselNode>();
  n->u = std::move(un);
  n->m = m;
  n->tow = u.tower();
  return Series(std::move(n));
}

Subfield coefficient_prefix_tower(const Series& s, std::size_t i) {
  Segment seg = s.truncate(TermCount{i});
  Subfield sub = Subfield::trivial(seg.tower);
  std::size_t k = 0;
  for (const auto& t : seg.terms) sub.adjoin(t.c, "c" + std::to_string(++k));
  return sub;
}

}  // namespace algser
