#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algser/irreducible.hpp>

#include <random>

using namespace algser;

namespace {

TowerPtr rationals() {
  auto b = std::make_shared<BaseField>(0, std::vector<std::string>{}, std::vector<std::string>{});
  return Tower::make_base(b);
}

TowerPtr f2() {
  auto b = std::make_shared<BaseField>(2, std::vector<std::string>{}, std::vector<std::string>{});
  return Tower::make_base(b);
}

TowerPtr f5() {
  auto b = std::make_shared<BaseField>(5, std::vector<std::string>{}, std::vector<std::string>{});
  return Tower::make_base(b);
}

TowerPtr f5t() {
  auto b = std::make_shared<BaseField>(5, std::vector<std::string>{"t"}, std::vector<std::string>{});
  return Tower::make_base(b);
}

UPoly qpoly(TowerPtr t, std::vector<Rat> cs) {
  UPoly f;
  f.reserve(cs.size());
  for (const Rat& c : cs) f.push_back(Elem::from_rat(t, c));
  return f;
}

template <class F>
Errc thrown_code(F&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::internal;
}

}  // namespace

TEST_CASE("linear polynomials are irreducible outright") {
  TowerPtr q = rationals();
  CHECK(certify_irreducible(q, qpoly(q, {Rat(-7), Rat(1)}), StepKind::separable) ==
        IrredStatus::proved);
  TowerPtr t5 = f5t();
  VarKey t1 = t5->base()->var("t", 1);
  UPoly f{-Elem::from_base(t5, RatFunc::variable(5, t1)), Elem::one(t5)};
  CHECK(certify_irreducible(t5, f, StepKind::separable) == IrredStatus::proved);
}

TEST_CASE("rational quadratics and cubics get a complete root search") {
  TowerPtr q = rationals();
  CHECK(certify_irreducible(q, qpoly(q, {Rat(-2), Rat(0), Rat(1)}), StepKind::separable) ==
        IrredStatus::checked);
  CHECK(certify_irreducible(q, qpoly(q, {Rat(1), Rat(0), Rat(1)}), StepKind::separable) ==
        IrredStatus::checked);
  CHECK(certify_irreducible(q, qpoly(q, {Rat(-2), Rat(0), Rat(0), Rat(1)}), StepKind::separable) ==
        IrredStatus::checked);
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(-4), Rat(0), Rat(1)}), StepKind::separable);
        }) == Errc::reducible_witness);
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(-8), Rat(0), Rat(0), Rat(1)}), StepKind::separable);
        }) == Errc::reducible_witness);
  // non-integer rational root 1/2
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(-1, 4), Rat(0), Rat(1)}), StepKind::separable);
        }) == Errc::reducible_witness);
}

TEST_CASE("integer quartics get a complete quadratic-factor search") {
  TowerPtr q = rationals();
  CHECK(certify_irreducible(q, qpoly(q, {Rat(1), Rat(0), Rat(-10), Rat(0), Rat(1)}),
                            StepKind::separable) == IrredStatus::checked);
  // Y^4 + 4 = (Y^2 - 2Y + 2)(Y^2 + 2Y + 2) has no rational root
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(4), Rat(0), Rat(0), Rat(0), Rat(1)}),
                              StepKind::separable);
        }) == Errc::reducible_witness);
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(-4), Rat(0), Rat(0), Rat(0), Rat(1)}),
                              StepKind::separable);
        }) == Errc::reducible_witness);
}

TEST_CASE("finite towers are swept completely") {
  TowerPtr b2 = f2();
  UPoly art = qpoly(b2, {Rat(1), Rat(1), Rat(1)});
  CHECK(certify_irreducible(b2, art, StepKind::separable) == IrredStatus::checked);
  CHECK(thrown_code([&] {
          certify_irreducible(b2, qpoly(b2, {Rat(1), Rat(0), Rat(1)}), StepKind::separable);
        }) == Errc::reducible_witness);

  UPoly cubic = qpoly(b2, {Rat(1), Rat(1), Rat(0), Rat(1)});
  CHECK(certify_irreducible(b2, cubic, StepKind::separable) == IrredStatus::checked);

  TowerPtr f4 = adjoin_certified(b2, "w", art, StepKind::separable);
  CHECK(f4->degree() == 2);
  CHECK(f4->top_step().irred == IrredStatus::checked);
  CHECK_FALSE(f4->has_declared_irreducibility());
  // Y^3 + Y + 1 has no root in F_4 (no subfield of index coprime drop)
  CHECK(certify_irreducible(f4, up::lift_to(cubic, f4), StepKind::separable) ==
        IrredStatus::checked);

  TowerPtr f8 = adjoin_certified(b2, "c", cubic, StepKind::separable);
  CHECK(f8->degree() == 3);
  // the generator of F_8 is a root of its own defining polynomial
  CHECK(thrown_code([&] {
          certify_irreducible(f8, up::lift_to(cubic, f8), StepKind::separable);
        }) == Errc::reducible_witness);

  CHECK(certify_irreducible(b2, qpoly(b2, {Rat(1), Rat(1), Rat(0), Rat(0), Rat(1)}),
                            StepKind::separable) == IrredStatus::checked);
  // Y^4 + Y^2 + 1 = (Y^2 + Y + 1)^2 has no root but a quadratic factor
  CHECK(thrown_code([&] {
          certify_irreducible(b2, qpoly(b2, {Rat(1), Rat(0), Rat(1), Rat(0), Rat(1)}),
                              StepKind::separable);
        }) == Errc::reducible_witness);
}

TEST_CASE("pure p-power shapes are decided by p-th root extraction") {
  TowerPtr t5 = f5t();
  VarKey t1 = t5->base()->var("t", 1);
  VarKey t2 = t5->base()->var("t", 2);
  Elem t1e = Elem::from_base(t5, RatFunc::variable(5, t1));

  UPoly rad5(6, Elem::zero(t5));
  rad5[0] = -t1e;
  rad5[5] = Elem::one(t5);
  CHECK(certify_irreducible(t5, rad5, StepKind::inseparable) == IrredStatus::proved);

  UPoly rad25(26, Elem::zero(t5));
  rad25[0] = -t1e;
  rad25[25] = Elem::one(t5);
  CHECK(certify_irreducible(t5, rad25, StepKind::inseparable) == IrredStatus::proved);

  UPoly redu(6, Elem::zero(t5));
  redu[0] = -t1e.pow(Int(5));
  redu[5] = Elem::one(t5);
  CHECK(thrown_code([&] { certify_irreducible(t5, redu, StepKind::inseparable); }) ==
        Errc::reducible_witness);

  TowerPtr ext = adjoin_certified(t5, "a1", rad5, StepKind::inseparable);
  CHECK(ext->top_step().insep_height == 1);
  CHECK(ext->top_step().irred == IrredStatus::proved);
  UPoly over(6, Elem::zero(ext));
  over[0] = -Elem::generator(ext);
  over[5] = Elem::one(ext);
  CHECK(certify_irreducible(ext, over, StepKind::inseparable) == IrredStatus::proved);
  UPoly sibling(6, Elem::zero(ext));
  sibling[0] = -Elem::from_base(ext, RatFunc::variable(5, t2));
  sibling[5] = Elem::one(ext);
  CHECK(certify_irreducible(ext, sibling, StepKind::inseparable) == IrredStatus::proved);

  TowerPtr ext25 = adjoin_certified(t5, "b", rad25, StepKind::inseparable);
  CHECK(ext25->top_step().insep_height == 2);
}

TEST_CASE("malformed inseparable shapes are rejected") {
  TowerPtr t5 = f5t();
  VarKey t1 = t5->base()->var("t", 1);
  Elem t1e = Elem::from_base(t5, RatFunc::variable(5, t1));

  UPoly deg6(7, Elem::zero(t5));
  deg6[0] = -t1e;
  deg6[6] = Elem::one(t5);
  CHECK(thrown_code([&] { certify_irreducible(t5, deg6, StepKind::inseparable); }) ==
        Errc::bad_inseparable_shape);

  UPoly mixed(6, Elem::zero(t5));
  mixed[0] = -t1e;
  mixed[1] = -Elem::one(t5);
  mixed[5] = Elem::one(t5);
  CHECK(thrown_code([&] { certify_irreducible(t5, mixed, StepKind::inseparable); }) ==
        Errc::bad_inseparable_shape);

  TowerPtr q = rationals();
  CHECK(thrown_code([&] {
          certify_irreducible(q, qpoly(q, {Rat(-2), Rat(0), Rat(1)}), StepKind::inseparable);
        }) == Errc::bad_inseparable_shape);
}

TEST_CASE("degree beyond four is carried as a declared certificate") {
  TowerPtr q = rationals();
  UPoly f = qpoly(q, {Rat(-2), Rat(0), Rat(0), Rat(0), Rat(0), Rat(1)});
  CHECK(certify_irreducible(q, f, StepKind::separable) == IrredStatus::declared);
  TowerPtr ext = adjoin_certified(q, "r", f, StepKind::separable);
  CHECK(ext->top_step().irred == IrredStatus::declared);
  CHECK(ext->has_declared_irreducibility());
}

TEST_CASE("the candidate pool finds structural roots in towers and function fields") {
  TowerPtr q = rationals();
  TowerPtr q2 = adjoin_certified(q, "r2", qpoly(q, {Rat(-2), Rat(0), Rat(1)}),
                                 StepKind::separable);
  CHECK(thrown_code([&] {
          certify_irreducible(q2, qpoly(q2, {Rat(-2), Rat(0), Rat(1)}), StepKind::separable);
        }) == Errc::reducible_witness);
  CHECK(certify_irreducible(q2, qpoly(q2, {Rat(-3), Rat(0), Rat(1)}), StepKind::separable) ==
        IrredStatus::checked);

  TowerPtr t5 = f5t();
  Elem t1e = Elem::from_base(t5, RatFunc::variable(5, t5->base()->var("t", 1)));
  UPoly sq{-t1e * t1e, Elem::zero(t5), Elem::one(t5)};
  CHECK(thrown_code([&] { certify_irreducible(t5, sq, StepKind::separable); }) ==
        Errc::reducible_witness);
  UPoly irr{-t1e, Elem::zero(t5), Elem::one(t5)};
  CHECK(certify_irreducible(t5, irr, StepKind::separable) == IrredStatus::checked);
}

TEST_CASE("constructed factorizations are always detected") {
  std::mt19937_64 rng(0x1dd5eedull);
  std::uniform_int_distribution<int> num(-9, 9), den(1, 4), small(-4, 4);
  TowerPtr q = rationals();
  TowerPtr b5 = f5();

  for (int i = 0; i < 40; ++i) {
    Rat r(num(rng), den(rng)), s(num(rng), den(rng));
    UPoly f = up::mul(qpoly(q, {-r, Rat(1)}), qpoly(q, {-s, Rat(1)}));
    CHECK(thrown_code([&] { certify_irreducible(q, f, StepKind::separable); }) ==
          Errc::reducible_witness);
  }
  for (int i = 0; i < 30; ++i) {
    Rat r(num(rng), den(rng));
    UPoly f = up::mul(qpoly(q, {-r, Rat(1)}),
                      qpoly(q, {Rat(small(rng)), Rat(small(rng)), Rat(1)}));
    CHECK(thrown_code([&] { certify_irreducible(q, f, StepKind::separable); }) ==
          Errc::reducible_witness);
  }
  for (int i = 0; i < 30; ++i) {
    UPoly f = up::mul(qpoly(q, {Rat(small(rng)), Rat(small(rng)), Rat(1)}),
                      qpoly(q, {Rat(small(rng)), Rat(small(rng)), Rat(1)}));
    CHECK(thrown_code([&] { certify_irreducible(q, f, StepKind::separable); }) ==
          Errc::reducible_witness);
  }
  std::uniform_int_distribution<int> mod5(0, 4);
  for (int i = 0; i < 40; ++i) {
    UPoly f = up::mul(qpoly(b5, {Rat(mod5(rng)), Rat(1)}), qpoly(b5, {Rat(mod5(rng)), Rat(1)}));
    CHECK(thrown_code([&] { certify_irreducible(b5, f, StepKind::separable); }) ==
          Errc::reducible_witness);
  }
}
