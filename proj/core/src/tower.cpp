#include <algser/tower.hpp>

#include <algser/linalg.hpp>

#include <algorithm>
#include <cassert>
#include <cctype>
#include <sstream>

namespace algser {

namespace {
bool is_prime_u32(std::uint32_t p) {
  if (p < 2) return false;
  Int n(static_cast<unsigned long>(p));
  return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}
}  // namespace

BaseField::BaseField(std::uint32_t characteristic, std::vector<std::string> families,
                     std::vector<std::string> standalone)
    : p_(characteristic) {
  require(p_ == 0 || is_prime_u32(p_), Errc::non_prime_characteristic,
          "characteristic must be 0 or prime, got " + std::to_string(p_));
  std::vector<std::pair<std::string, bool>> all;
  for (auto& n : families) all.push_back({n, true});
  for (auto& n : standalone) all.push_back({n, false});
  std::sort(all.begin(), all.end());
  for (std::size_t i = 0; i < all.size(); ++i) {
    require(!all[i].first.empty(), Errc::validation_error, "empty generator name");
    require(i == 0 || all[i].first != all[i - 1].first, Errc::duplicate_generator,
            "base name declared twice: " + all[i].first);
    names_.push_back(all[i].first);
    family_.push_back(all[i].second);
  }
}

VarKey BaseField::var(const std::string& name, std::uint32_t index) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  require(it != names_.end() && *it == name, Errc::validation_error, "unknown base name: " + name);
  std::size_t rank = static_cast<std::size_t>(it - names_.begin());
  if (family_[rank])
    require(index >= 1, Errc::validation_error, "family index must be >= 1 for " + name);
  else
    require(index == 0, Errc::validation_error, name + " is not an indexed family");
  return VarKey{static_cast<std::uint32_t>(rank), index};
}

bool BaseField::knows_name(const std::string& name) const {
  return std::binary_search(names_.begin(), names_.end(), name);
}

std::optional<VarKey> BaseField::parse_var(const std::string& token) const {
  if (knows_name(token)) {
    auto it = std::lower_bound(names_.begin(), names_.end(), token);
    std::size_t rank = static_cast<std::size_t>(it - names_.begin());
    if (!family_[rank]) return VarKey{static_cast<std::uint32_t>(rank), 0};
    return std::nullopt;  // family name needs an index
  }
  std::size_t cut = token.size();
  while (cut > 0 && std::isdigit(static_cast<unsigned char>(token[cut - 1]))) --cut;
  if (cut == 0 || cut == token.size()) return std::nullopt;
  std::string head = token.substr(0, cut);
  if (!knows_name(head)) return std::nullopt;
  auto it = std::lower_bound(names_.begin(), names_.end(), head);
  std::size_t rank = static_cast<std::size_t>(it - names_.begin());
  if (!family_[rank]) return std::nullopt;
  unsigned long idx = std::stoul(token.substr(cut));
  if (idx < 1) return std::nullopt;
  return VarKey{static_cast<std::uint32_t>(rank), static_cast<std::uint32_t>(idx)};
}

std::string BaseField::display(VarKey v) const {
  assert(!v.is_step_var() && v.name_rank < names_.size());
  const std::string& n = names_[v.name_rank];
  return family_[v.name_rank] ? n + std::to_string(v.index) : n;
}

struct Tower::Namer : VarNamer {
  BasePtr base;
  std::vector<std::string> gens;
  std::string name_of(VarKey v) const override {
    if (v.is_step_var()) {
      std::size_t i = v.name_rank - VarKey::step_rank_base;
      return i < gens.size() ? gens[i] : "?g" + std::to_string(i);
    }
    return base->display(v);
  }
};

Tower::Tower(BasePtr b) : base_(std::move(b)) {
  auto nm = std::make_shared<Namer>();
  nm->base = base_;
  namer_ = std::move(nm);
}

Tower::Tower(TowerPtr parent, Step s)
    : base_(parent->base_), parent_(std::move(parent)), step_(std::move(s)),
      depth_(parent_->depth_ + 1) {
  auto nm = std::make_shared<Namer>();
  nm->base = base_;
  nm->gens.reserve(depth_);
  for (std::size_t i = 0; i + 1 < depth_; ++i) nm->gens.push_back(parent_->step_at(i).gen);
  nm->gens.push_back(step_->gen);
  namer_ = std::move(nm);
}

TowerPtr Tower::make_base(BasePtr b) { return TowerPtr(new Tower(std::move(b))); }

const Step& Tower::top_step() const {
  assert(step_);
  return *step_;
}

const Step& Tower::step_at(std::size_t i) const {
  assert(i < depth_);
  const Tower* t = this;
  while (t->depth_ > i + 1) t = t->parent_.get();
  return *t->step_;
}

TowerPtr Tower::prefix(std::size_t d) const {
  assert(d <= depth_);
  TowerPtr t = shared_from_this();
  while (t->depth_ > d) t = t->parent_;
  return t;
}

std::uint64_t Tower::step_degree() const {
  assert(step_);
  return step_->minpoly.size() - 1;
}

Int Tower::degree() const {
  Int d(1);
  for (const Tower* t = this; t->step_; t = t->parent_.get())
    d *= Int(static_cast<unsigned long>(t->step_->minpoly.size() - 1));
  return d;
}

VarKey Tower::gen_var() const {
  assert(depth_ > 0);
  return gen_var_at(depth_ - 1);
}

VarKey Tower::gen_var_at(std::size_t step_index) {
  return VarKey{VarKey::step_rank_base + static_cast<std::uint32_t>(step_index), 0};
}

bool Tower::is_prefix_of(const Tower& deeper) const {
  if (!(*base_ == *deeper.base_)) return false;
  if (depth_ > deeper.depth_) return false;
  const Tower* t = &deeper;
  while (t->depth_ > depth_) t = t->parent_.get();
  return t == this;
}

TowerPtr Tower::join(const TowerPtr& a, const TowerPtr& b) {
  if (a->is_prefix_of(*b)) return b;
  if (b->is_prefix_of(*a)) return a;
  fail(Errc::rebasing_failed, "towers are not prefix-related");
}

bool Tower::has_declared_irreducibility() const {
  for (const Tower* t = this; t->step_; t = t->parent_.get())
    if (t->step_->irred == IrredStatus::declared) return true;
  return false;
}

unsigned Tower::total_insep_height() const {
  unsigned h = 0;
  for (const Tower* t = this; t->step_; t = t->parent_.get())
    if (t->step_->kind == StepKind::inseparable) h += t->step_->insep_height;
  return h;
}

const VarNamer& Tower::namer() const { return *namer_; }

std::string Tower::describe() const {
  std::ostringstream os;
  if (characteristic() == 0)
    os << "Q";
  else
    os << "F_" << characteristic();
  bool any = false;
  for (std::size_t r = 0; r < base_->names().size(); ++r) {
    os << (any ? ", " : "(");
    any = true;
    os << base_->names()[r];
    if (base_->is_family(r)) os << "_*";
  }
  if (any) os << ")";
  std::vector<const Step*> steps;
  for (const Tower* t = this; t->step_; t = t->parent_.get()) steps.push_back(&*t->step_);
  for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
    os << " (" << (*it)->gen << ": deg " << ((*it)->minpoly.size() - 1);
    if ((*it)->kind == StepKind::inseparable) os << ", insep";
    if ((*it)->irred == IrredStatus::declared) os << ", declared";
    os << ")";
  }
  return os.str();
}

TowerPtr Tower::adjoin(Step s) const {
  require(s.minpoly.size() >= 3, Errc::validation_error,
          "adjoined minimal polynomial must have degree >= 2");
  TowerPtr self = shared_from_this();
  for (auto& c : s.minpoly) {
    require(c.attached(), Errc::validation_error, "unattached minpoly coefficient");
    require(c.tower()->is_prefix_of(*self) || c.tower().get() == this, Errc::rebasing_failed,
            "minpoly coefficient not over the parent tower");
    c = c.lift_to(self);
  }
  require(s.minpoly.back().is_one(), Errc::not_monic, "minimal polynomial must be monic");
  require(!base_->knows_name(s.gen), Errc::duplicate_generator,
          "generator name collides with a base name: " + s.gen);
  for (const Tower* t = this; t->step_; t = t->parent_.get())
    require(t->step_->gen != s.gen, Errc::duplicate_generator,
            "generator name already adjoined: " + s.gen);

  std::size_t deg = s.minpoly.size() - 1;
  std::uint32_t p = characteristic();
  if (s.kind == StepKind::inseparable) {
    require(p != 0, Errc::bad_inseparable_shape,
            "purely inseparable step requires positive characteristic");
    require(s.insep_height >= 1, Errc::bad_inseparable_shape, "inseparable height must be >= 1");
    Int want = pow_uint(p, s.insep_height);
    require(want == Int(static_cast<unsigned long>(deg)), Errc::bad_inseparable_shape,
            "degree must be p^height for a purely inseparable step");
    for (std::size_t j = 1; j < deg; ++j)
      require(s.minpoly[j].is_zero(), Errc::bad_inseparable_shape,
              "purely inseparable step must have shape Y^(p^e) - c");
  } else {
    require(s.insep_height == 0, Errc::validation_error,
            "separable step cannot carry an inseparable height");
    // Formal derivative must be nonzero, otherwise the step is inseparable.
    bool dz = true;
    for (std::size_t j = 1; j < s.minpoly.size(); ++j) {
      Elem c = s.minpoly[j] * Elem::from_rat(self, Rat(static_cast<unsigned long>(j)));
      if (!c.is_zero()) {
        dz = false;
        break;
      }
    }
    require(!dz, Errc::not_separable, "minimal polynomial has zero derivative");
  }
  return TowerPtr(new Tower(self, std::move(s)));
}

// ---------------------------------------------------------------------------
// Elem

Elem Elem::zero(TowerPtr t) {
  Elem e;
  e.tower_ = std::move(t);
  return e;
}

Elem Elem::one(TowerPtr t) { return from_rat(std::move(t), Rat(1)); }

Elem Elem::from_base(TowerPtr t, RatFunc v) {
  Elem e;
  e.tower_ = std::move(t);
  if (!v.is_zero()) e.terms_.emplace(Monomial(), std::move(v));
  return e;
}

Elem Elem::from_rat(TowerPtr t, const Rat& q) {
  std::uint32_t p = t->characteristic();
  return from_base(std::move(t), RatFunc::constant(p, q));
}

Elem Elem::generator(TowerPtr t) {
  require(t->depth() > 0, Errc::validation_error, "base tower has no generator");
  VarKey v = t->gen_var();
  Elem e;
  e.tower_ = std::move(t);
  e.terms_.emplace(Monomial(v), RatFunc::constant(e.tower_->characteristic(), Rat(1)));
  return e;
}

Elem Elem::generator_at(TowerPtr t, std::size_t step_index) {
  require(step_index < t->depth(), Errc::validation_error, "step index out of range");
  VarKey v = Tower::gen_var_at(step_index);
  Elem e;
  e.tower_ = std::move(t);
  e.terms_.emplace(Monomial(v), RatFunc::constant(e.tower_->characteristic(), Rat(1)));
  return e;
}

Elem Elem::from_terms(TowerPtr t, std::map<Monomial, RatFunc> terms) {
  Elem e;
  e.tower_ = std::move(t);
  std::uint32_t p = e.tower_->characteristic();
  // Canonical form keeps only step generators in the keys; base-variable
  // factors are folded into the coefficient.
  for (auto& [m, c] : terms) {
    if (c.is_zero()) continue;
    bool mixed = false;
    for (const auto& [v, ex] : m.factors())
      if (!v.is_step_var()) {
        mixed = true;
        break;
      }
    Monomial key = m;
    RatFunc coeff = c;
    if (mixed) {
      std::vector<Monomial::Factor> step_part, base_part;
      for (const auto& [v, ex] : m.factors())
        (v.is_step_var() ? step_part : base_part).push_back({v, ex});
      key = Monomial::from_factors(std::move(step_part));
      coeff = coeff * RatFunc::from_poly(
                          MPoly::monomial(p, Monomial::from_factors(std::move(base_part)), Int(1)));
    }
    auto [it, fresh] = e.terms_.emplace(key, coeff);
    if (!fresh) {
      it->second = it->second + coeff;
      if (it->second.is_zero()) e.terms_.erase(it);
    }
  }
  for (auto it = e.terms_.begin(); it != e.terms_.end();)
    it = it->second.is_zero() ? e.terms_.erase(it) : std::next(it);
  e.reduce();
  return e;
}

bool Elem::is_one() const {
  return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second.is_one();
}

bool Elem::in_base() const {
  for (const auto& [m, c] : terms_)
    for (const auto& [v, ex] : m.factors())
      if (v.is_step_var()) return false;
  return true;
}

RatFunc Elem::base_value() const {
  assert(attached() && in_base());
  if (terms_.empty()) return RatFunc(tower_->characteristic());
  return terms_.begin()->second;
}

bool Elem::is_rat_const() const {
  if (terms_.empty()) return true;
  return terms_.size() == 1 && terms_.begin()->first.is_one() && terms_.begin()->second.is_rat_const();
}

Rat Elem::rat_value() const {
  if (terms_.empty()) return Rat(0);
  assert(is_rat_const());
  return terms_.begin()->second.rat_value();
}

std::size_t Elem::used_depth() const {
  std::size_t d = 0;
  for (const auto& [m, c] : terms_)
    for (const auto& [v, ex] : m.factors())
      if (v.is_step_var()) d = std::max<std::size_t>(d, v.name_rank - VarKey::step_rank_base + 1);
  return d;
}

Elem Elem::lift_to(TowerPtr deeper) const {
  assert(attached());
  require(tower_->is_prefix_of(*deeper), Errc::rebasing_failed, "lift target is not an extension");
  Elem e = *this;
  e.tower_ = std::move(deeper);
  return e;
}

Elem Elem::project_to(TowerPtr shallower) const {
  assert(attached());
  require(shallower->is_prefix_of(*tower_), Errc::rebasing_failed, "not a prefix tower");
  require(used_depth() <= shallower->depth(), Errc::rebasing_failed,
          "element uses generators above the target tower");
  Elem e = *this;
  e.tower_ = std::move(shallower);
  return e;
}

Elem Elem::minimized() const { return project_to(tower_->prefix(used_depth())); }

void Elem::reduce() {
  if (!tower_ || terms_.empty()) return;
  for (std::size_t s = used_depth(); s-- > 0;) {
    VarKey gv = Tower::gen_var_at(s);
    std::uint64_t d = tower_->prefix(s + 1)->step_degree();
    const auto& mp = tower_->prefix(s + 1)->top_step().minpoly;
    // Rewrite g^d as -(lower part of the minimal polynomial) until all
    // exponents of this generator drop below d.
    while (true) {
      auto off = terms_.end();
      for (auto it = terms_.begin(); it != terms_.end(); ++it)
        if (it->first.degree_in(gv) >= d) {
          off = it;
          break;
        }
      if (off == terms_.end()) break;
      Monomial m = off->first;
      RatFunc c = off->second;
      terms_.erase(off);
      std::uint64_t e = m.degree_in(gv);
      Monomial rest = m.without(gv) * Monomial(gv, e - d);
      for (std::size_t j = 0; j + 1 < mp.size(); ++j) {
        for (const auto& [rm, rc] : mp[j].terms_) {
          Monomial nm = rest * rm * Monomial(gv, j);
          RatFunc nc = -(c * rc);
          auto [it, fresh] = terms_.emplace(nm, nc);
          if (!fresh) {
            it->second = it->second + nc;
            if (it->second.is_zero()) terms_.erase(it);
          }
        }
      }
    }
  }
}

Elem Elem::operator+(const Elem& o) const {
  assert(attached() && o.attached());
  TowerPtr t = Tower::join(tower_, o.tower_);
  std::map<Monomial, RatFunc> terms = terms_;
  for (const auto& [m, c] : o.terms_) {
    auto [it, fresh] = terms.emplace(m, c);
    if (!fresh) {
      it->second = it->second + c;
      if (it->second.is_zero()) terms.erase(it);
    }
  }
  Elem e;
  e.tower_ = std::move(t);
  e.terms_ = std::move(terms);  // sum of reduced is reduced
  return e;
}

Elem Elem::operator-(const Elem& o) const { return *this + (-o); }

Elem Elem::operator-() const {
  Elem e = *this;
  for (auto& [m, c] : e.terms_) c = -c;
  return e;
}

Elem Elem::operator*(const Elem& o) const {
  assert(attached() && o.attached());
  TowerPtr t = Tower::join(tower_, o.tower_);
  std::map<Monomial, RatFunc> terms;
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) {
      Monomial m = ma * mb;
      RatFunc c = ca * cb;
      auto [it, fresh] = terms.emplace(m, c);
      if (!fresh) {
        it->second = it->second + c;
        if (it->second.is_zero()) terms.erase(it);
      }
    }
  return from_terms(std::move(t), std::move(terms));
}

Elem Elem::operator/(const Elem& o) const { return *this * o.inverse(); }

bool operator==(const Elem& a, const Elem& b) {
  if (a.tower_ == b.tower_) return a.terms_ == b.terms_;
  if (!a.attached() || !b.attached()) return a.terms_ == b.terms_;
  Tower::join(a.tower_, b.tower_);  // validates compatibility
  return a.terms_ == b.terms_;
}

Elem Elem::pow(const Int& e) const {
  assert(attached());
  require(e >= 0, Errc::validation_error, "negative exponent; use inverse()");
  Elem r = one(tower_);
  if (e == 0) return r;
  std::size_t bits = mpz_sizeinbase(e.get_mpz_t(), 2);
  for (std::size_t i = bits; i-- > 0;) {
    r = r * r;
    if (mpz_tstbit(e.get_mpz_t(), i)) r = r * *this;
  }
  return r;
}

namespace {
UPoly elem_to_upoly(const Elem& e) {
  // View an element of a depth-s tower as a polynomial in the top generator
  // with coefficients in the parent tower.
  TowerPtr t = e.tower();
  assert(t->depth() > 0);
  VarKey gv = t->gen_var();
  std::map<std::uint64_t, std::map<Monomial, RatFunc>> by_deg;
  for (const auto& [m, c] : e.terms()) by_deg[m.degree_in(gv)].emplace(m.without(gv), c);
  UPoly f;
  if (by_deg.empty()) return f;
  std::uint64_t top = by_deg.rbegin()->first;
  for (std::uint64_t j = 0; j <= top; ++j) {
    auto it = by_deg.find(j);
    f.push_back(it == by_deg.end() ? Elem::zero(t->parent())
                                   : Elem::from_terms(t->parent(), std::move(it->second)));
  }
  return f;
}

Elem upoly_to_elem(TowerPtr t, const UPoly& f) {
  VarKey gv = t->gen_var();
  Elem acc = Elem::zero(t);
  for (std::size_t j = 0; j < f.size(); ++j) {
    std::map<Monomial, RatFunc> terms;
    for (const auto& [m, c] : f[j].terms()) terms.emplace(m * Monomial(gv, j), c);
    acc = acc + Elem::from_terms(t, std::move(terms));
  }
  return acc;
}
}  // namespace

Elem Elem::inverse() const {
  assert(attached());
  require(!is_zero(), Errc::validation_error, "inverse of zero");
  if (in_base()) return from_base(tower_, base_value().inverse());
  std::size_t sd = used_depth();
  TowerPtr sub = tower_->prefix(sd);
  Elem e = project_to(sub);
  std::uint32_t p = tower_->characteristic();
  if (p != 0) {
    // Purely inseparable prefix: raising to p^H with H the summed step
    // heights lands in the base field, so 1/e = e^(p^H - 1) / e^(p^H) with a
    // scalar division at the end.  This sidesteps the Euclidean route, whose
    // remainder coefficients blow up in rational-function towers.
    unsigned long H = 0;
    bool all_insep = true;
    for (std::size_t i = 0; i < sub->depth(); ++i) {
      const Step& s = sub->step_at(i);
      if (s.kind != StepKind::inseparable) {
        all_insep = false;
        break;
      }
      H += s.insep_height;
    }
    if (all_insep) {
      Elem num = e.pow(pow_uint(p, H) - 1);
      Elem den = e.frobenius(H);
      require(den.in_base(), Errc::internal, "p^H power escaped the base field");
      return (num * from_base(sub, den.base_value().inverse())).lift_to(tower_);
    }
  }
  UPoly a = elem_to_upoly(e);
  UPoly m = sub->top_step().minpoly;
  for (auto& c : m) c = c.project_to(sub->parent());
  auto eg = up::half_egcd(a, m);
  if (up::deg(eg.g) != 0) {
    // A nonunit gcd with the minimal polynomial exhibits a factor: the step
    // was declared irreducible but is not.
    fail(Errc::reducible_witness,
         "minimal polynomial of " + sub->top_step().gen + " has proper factor " +
             up::to_string(eg.g, "Y"));
  }
  UPoly u = up::scale(eg.u, eg.g[0].inverse());
  return upoly_to_elem(sub, u).lift_to(tower_);
}

Elem Elem::frobenius(unsigned long r) const {
  assert(attached());
  std::uint32_t p = tower_->characteristic();
  if (p == 0 || r == 0) return *this;
  Elem out = *this;
  for (unsigned long i = 0; i < r; ++i) {
    std::map<Monomial, RatFunc> terms;
    for (const auto& [m, c] : out.terms_) {
      auto [it, fresh] = terms.emplace(m.pow(p), c.frobenius(1));
      assert(fresh);
      (void)fresh;
    }
    out = from_terms(tower_, std::move(terms));
  }
  return out;
}

// --- p-th roots ------------------------------------------------------------

std::optional<RadicalPattern> radical_pattern(const Tower& t) {
  RadicalPattern pat;
  std::set<VarKey> seen;
  for (std::size_t i = 0; i < t.depth(); ++i) {
    const Step& s = t.step_at(i);
    if (s.kind != StepKind::inseparable) return std::nullopt;
    const Elem& c0 = s.minpoly[0];
    // want minpoly Y^(p^e) - t_var, so the constant coefficient is a plain
    // base-field monomial -t_var
    if (!c0.in_base()) return std::nullopt;
    RatFunc bv = c0.base_value();
    if (!bv.is_poly() || bv.num().terms().size() != 1) return std::nullopt;
    const auto& [m, co] = *bv.num().terms().begin();
    if (m.factors().size() != 1 || m.factors()[0].second != 1) return std::nullopt;
    VarKey v = m.factors()[0].first;
    if (v.is_step_var()) return std::nullopt;
    Int minus_one = Int(t.characteristic()) - 1;
    if (co != minus_one) return std::nullopt;
    if (seen.count(v)) return std::nullopt;
    seen.insert(v);
    pat.steps.push_back({v, s.insep_height});
  }
  return pat;
}

std::vector<Monomial> tower_basis(const Tower& t) {
  std::vector<Monomial> basis{Monomial()};
  for (std::size_t i = 0; i < t.depth(); ++i) {
    std::uint64_t d = t.step_at(i).minpoly.size() - 1;
    VarKey gv = Tower::gen_var_at(i);
    std::vector<Monomial> next;
    next.reserve(basis.size() * d);
    for (std::uint64_t e = 0; e < d; ++e)
      for (const Monomial& m : basis) next.push_back(m * Monomial(gv, e));
    basis = std::move(next);
  }
  return basis;
}

namespace {
constexpr std::uint64_t kGenericPthRootCap = 512;

// Monomial rewrite for the radical-view isomorphism: adjoined base variables
// become powers of their step generator.
Monomial view_monomial(const Monomial& m, const RadicalPattern& pat, std::uint32_t p) {
  std::vector<Monomial::Factor> fs;
  for (const auto& [v, e] : m.factors()) {
    bool hit = false;
    for (std::size_t j = 0; j < pat.steps.size(); ++j) {
      if (pat.steps[j].base_var == v) {
        Int scale = pow_uint(p, pat.steps[j].height);
        fs.push_back({Tower::gen_var_at(j), e * scale.get_ui()});
        hit = true;
        break;
      }
    }
    if (!hit) fs.push_back({v, e});
  }
  return Monomial::from_factors(std::move(fs));
}

MPoly view_mpoly(const MPoly& f, const RadicalPattern& pat, std::uint32_t p) {
  MPoly r(p);
  for (const auto& [m, c] : f.terms()) r = r + MPoly::monomial(p, view_monomial(m, pat, p), c);
  return r;
}

RatFunc view_elem(const Elem& e, const RadicalPattern& pat) {
  std::uint32_t p = e.tower()->characteristic();
  RatFunc out(p);
  for (const auto& [m, c] : e.terms()) {
    Monomial vm = view_monomial(m, pat, p);
    RatFunc vc(view_mpoly(c.num(), pat, p), view_mpoly(c.den(), pat, p));
    out = out + vc * RatFunc::from_poly(MPoly::monomial(p, vm, Int(1)));
  }
  return out;
}

Elem unview_mpoly(TowerPtr t, const MPoly& f, const RadicalPattern& pat, std::uint32_t p) {
  Elem acc = Elem::zero(t);
  for (const auto& [m, c] : f.terms()) {
    std::vector<Monomial::Factor> step_part, base_part;
    for (const auto& [v, e] : m.factors()) {
      if (v.is_step_var()) {
        std::size_t j = v.name_rank - VarKey::step_rank_base;
        Int scale = pow_uint(p, pat.steps[j].height);
        std::uint64_t s = scale.get_ui();
        if (e % s) step_part.push_back({v, e % s});
        if (e / s) base_part.push_back({pat.steps[j].base_var, e / s});
      } else {
        base_part.push_back({v, e});
      }
    }
    MPoly coeff = MPoly::monomial(p, Monomial::from_factors(std::move(base_part)), c);
    std::map<Monomial, RatFunc> terms;
    terms.emplace(Monomial::from_factors(std::move(step_part)), RatFunc::from_poly(coeff));
    acc = acc + Elem::from_terms(t, std::move(terms));
  }
  return acc;
}

Elem unview_ratfunc(TowerPtr t, const RatFunc& r, const RadicalPattern& pat) {
  std::uint32_t p = t->characteristic();
  Elem num = unview_mpoly(t, r.num(), pat, p);
  Elem den = unview_mpoly(t, r.den(), pat, p);
  return num / den;
}

std::optional<Elem> pth_root_generic(const Elem& e) {
  TowerPtr t = e.tower();
  std::uint32_t p = t->characteristic();
  std::vector<Monomial> basis = tower_basis(*t);
  // Write z = sum z_b * basis_b; z^p = sum z_b^p * basis_b^p.  Expanding the
  // p-th powers of basis monomials in the basis and splitting every base
  // coordinate along its p-adic monomial decomposition makes the equation
  // z^p == e linear in the z_b over the base field.
  std::map<std::pair<Monomial, Monomial>, std::size_t> row_ids;
  auto row_of = [&](const Monomial& coord, const Monomial& E) {
    return row_ids.emplace(std::make_pair(coord, E), row_ids.size()).first->second;
  };
  std::vector<LinearSystem::Row> rows;
  std::vector<RatFunc> rhs;
  auto ensure_row = [&](std::size_t id) {
    while (rows.size() <= id) {
      rows.push_back({});
      rhs.push_back(RatFunc(p));
    }
  };
  for (std::size_t b = 0; b < basis.size(); ++b) {
    Elem bp = Elem::from_terms(t, {{basis[b], RatFunc::constant(p, Rat(1))}}).frobenius(1);
    for (const auto& [coord, val] : bp.terms()) {
      for (const auto& [E, r] : val.padic_decompose()) {
        std::size_t id = row_of(coord, E);
        ensure_row(id);
        rows[id][b] = r;
      }
    }
  }
  for (const auto& [coord, val] : e.terms()) {
    for (const auto& [E, r] : val.padic_decompose()) {
      std::size_t id = row_of(coord, E);
      ensure_row(id);
      rhs[id] = r;
    }
  }
  LinearSystem sys(basis.size());
  for (std::size_t i = 0; i < rows.size(); ++i) sys.add_row(std::move(rows[i]), std::move(rhs[i]));
  auto sol = sys.solve();
  if (!sol) return std::nullopt;
  std::map<Monomial, RatFunc> terms;
  for (std::size_t b = 0; b < basis.size(); ++b)
    if (!(*sol)[b].is_zero()) terms.emplace(basis[b], (*sol)[b]);
  Elem z = Elem::from_terms(t, std::move(terms));
  require(z.frobenius(1) == e, Errc::internal, "p-th root solver produced a non-root");
  return z;
}
}  // namespace

bool pth_root_supported(const Tower& t) {
  if (t.depth() == 0) return true;
  if (radical_pattern(t)) return true;
  return t.degree() <= Int(static_cast<unsigned long>(kGenericPthRootCap));
}

std::optional<Elem> Elem::try_pth_root() const {
  assert(attached());
  std::uint32_t p = tower_->characteristic();
  if (p == 0) return *this;
  if (in_base()) {
    // A root inside the base field settles it; a miss does not, since the
    // adjoined generators may supply the root (t itself once t^{1/p} is a
    // generator).
    auto r = base_value().try_pth_root();
    if (r) return from_base(tower_, std::move(*r));
    if (tower_->depth() == 0) return std::nullopt;
  }
  if (auto pat = radical_pattern(*tower_)) {
    RatFunc v = view_elem(*this, *pat);
    auto vr = v.try_pth_root();
    if (!vr) return std::nullopt;
    return unview_ratfunc(tower_, *vr, *pat);
  }
  if (tower_->degree() <= Int(static_cast<unsigned long>(kGenericPthRootCap)))
    return pth_root_generic(*this);
  // The ambient tower is out of reach; a root found in the element's own
  // prefix still lifts, but absence there proves nothing about the ambient
  // tower, so that outcome stays an error rather than a definite no.
  std::size_t sd = used_depth();
  if (sd < tower_->depth()) {
    TowerPtr sub = tower_->prefix(sd);
    if (radical_pattern(*sub) ||
        sub->degree() <= Int(static_cast<unsigned long>(kGenericPthRootCap))) {
      auto r = project_to(sub).try_pth_root();
      if (r) return r->lift_to(tower_);
    }
  }
  fail(Errc::not_applicable,
       "p-th root undecidable here: tower is neither of radical-variable shape nor small");
}

std::string Elem::to_string() const {
  if (!attached() || terms_.empty()) return "0";
  const VarNamer& nm = tower_->namer();
  std::ostringstream os;
  bool first = true;
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) os << " + ";
    first = false;
    std::string cs = c.to_string(nm);
    if (m.is_one()) {
      os << cs;
    } else if (c.is_one()) {
      os << m.to_string(nm);
    } else {
      bool par = c.num().term_count() > 1 && c.is_poly();
      os << (par ? "(" + cs + ")" : cs) << "*" << m.to_string(nm);
    }
  }
  return os.str();
}

// --- dense univariate helpers ----------------------------------------------

namespace up {

UPoly trim(UPoly f) {
  while (!f.empty() && f.back().is_zero()) f.pop_back();
  return f;
}

bool is_zero(const UPoly& f) {
  for (const auto& c : f)
    if (!c.is_zero()) return false;
  return true;
}

std::size_t deg(const UPoly& f) {
  std::size_t d = f.size();
  while (d > 0 && f[d - 1].is_zero()) --d;
  assert(d > 0);
  return d - 1;
}

UPoly add(const UPoly& a, const UPoly& b) {
  UPoly r = a;
  if (r.size() < b.size()) r.resize(b.size(), Elem::zero(b.front().tower()));
  for (std::size_t i = 0; i < b.size(); ++i) r[i] = r[i] + b[i];
  return trim(std::move(r));
}

UPoly neg(const UPoly& a) {
  UPoly r = a;
  for (auto& c : r) c = -c;
  return r;
}

UPoly sub(const UPoly& a, const UPoly& b) { return add(a, neg(b)); }

UPoly mul(const UPoly& a, const UPoly& b) {
  if (a.empty() || b.empty()) return {};
  UPoly r(a.size() + b.size() - 1, Elem::zero(a.front().tower()));
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (b[j].is_zero()) continue;
      r[i + j] = r[i + j] + a[i] * b[j];
    }
  }
  return trim(std::move(r));
}

UPoly scale(const UPoly& a, const Elem& c) {
  UPoly r = a;
  for (auto& x : r) x = x * c;
  return trim(std::move(r));
}

UPoly shift_up(const UPoly& a, std::size_t k) {
  if (a.empty()) return {};
  UPoly r(a.size() + k, Elem::zero(a.front().tower()));
  for (std::size_t i = 0; i < a.size(); ++i) r[i + k] = a[i];
  return r;
}

Elem eval(const UPoly& f, const Elem& x) {
  Elem r = Elem::zero(x.tower());
  for (std::size_t i = f.size(); i-- > 0;) r = r * x + f[i];
  return r;
}

UPoly derivative(const UPoly& f) {
  if (f.size() <= 1) return {};
  UPoly r;
  r.reserve(f.size() - 1);
  for (std::size_t i = 1; i < f.size(); ++i)
    r.push_back(f[i] * Elem::from_rat(f[i].tower(), Rat(static_cast<unsigned long>(i))));
  return trim(std::move(r));
}

bool is_monic(const UPoly& f) { return !f.empty() && f.back().is_one(); }

UPoly make_monic(const UPoly& f) {
  UPoly g = trim(f);
  require(!g.empty(), Errc::validation_error, "cannot normalize the zero polynomial");
  if (g.back().is_one()) return g;
  return scale(g, g.back().inverse());
}

std::pair<UPoly, UPoly> divmod(const UPoly& a, const UPoly& b) {
  UPoly r = trim(a), bb = trim(b);
  require(!bb.empty(), Errc::validation_error, "division by zero polynomial");
  std::size_t db = bb.size() - 1;
  Elem lci = bb.back().inverse();
  if (r.size() <= db) return {{}, r};
  UPoly q(r.size() - db, Elem::zero(bb.back().tower()));
  while (r.size() > db) {
    Elem c = r.back() * lci;
    std::size_t k = r.size() - 1 - db;
    q[k] = c;
    for (std::size_t i = 0; i <= db; ++i) r[k + i] = r[k + i] - c * bb[i];
    r.pop_back();
    while (!r.empty() && r.back().is_zero()) r.pop_back();
    if (r.size() <= db) break;
  }
  return {trim(std::move(q)), trim(std::move(r))};
}

Egcd half_egcd(const UPoly& a, const UPoly& b) {
  TowerPtr t = !a.empty() ? a.front().tower() : b.front().tower();
  UPoly r0 = trim(a), r1 = trim(b);
  UPoly u0{Elem::one(t)}, u1{};
  while (!r1.empty()) {
    auto [q, r] = divmod(r0, r1);
    UPoly u2 = sub(u0, mul(q, u1));
    r0 = std::move(r1);
    r1 = trim(std::move(r));
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  return {std::move(r0), std::move(u0)};
}

UPoly lift_to(const UPoly& f, TowerPtr t) {
  UPoly r = f;
  for (auto& c : r) c = c.lift_to(t);
  return r;
}

std::string to_string(const UPoly& f, const std::string& var) {
  if (is_zero(f)) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = f.size(); i-- > 0;) {
    if (f[i].is_zero()) continue;
    if (!first) os << " + ";
    first = false;
    std::string cs = f[i].to_string();
    bool needs_par = f[i].terms().size() > 1;
    if (i == 0) {
      os << cs;
    } else {
      if (f[i].is_one())
        os << var;
      else
        os << (needs_par ? "(" + cs + ")" : cs) << "*" << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

}  // namespace up

}  // namespace algser
