#include <doctest.h>

#include <cmath>
#include <numbers>

#include "iontrap/closed_forms.hpp"
#include "iontrap/error.hpp"
#include "iontrap/hamiltonians.hpp"
#include "iontrap/oracle.hpp"
#include "support.hpp"

using namespace iontrap;
using iontrap::testing::desk_space;

namespace {

BhParams resonant(double lambda, double eta_breve = 0.0) { return BhParams{1.0, 1.0, eta_breve, lambda}; }

struct Ladders {
    Operator a, ad, sp, sm;
    explicit Ladders(const SpaceConfig& s)
        : a(annihilation(s)), ad(creation(s)), sp(pauli(Pauli::plus, s)), sm(pauli(Pauli::minus, s)) {}
};

void check_engine_agrees(const BhParams& p, RegimeKind kind) {
    const SpaceConfig s = desk_space();
    const Regime r = make_regime(kind, p);
    const FirstSecondOrder closed = bh_first_second_order(p, r, s);
    const FirstSecondOrder engine = engine_first_second_order(p, r, s);
    CAPTURE(regime_name(kind));
    CAPTURE(p.delta_breve);
    CHECK(interior_distance(closed.C1, engine.C1) <= 1e-8);
    CHECK(interior_distance(closed.Z1, engine.Z1) <= 1e-8);
    CHECK(interior_distance(closed.C2, engine.C2) <= 1e-8);
}

}  // namespace

TEST_CASE("regime_construction") {
    CHECK(make_regime(RegimeKind::eta_much_less, resonant(0.05)).resonant);
    CHECK_FALSE(make_regime(RegimeKind::eta_much_less, BhParams{1.0, 1.3, 0.0, 0.05}).resonant);
    CHECK_THROWS_AS(make_regime(RegimeKind::near_resonant, BhParams{1.0, 1.3, 0.0, 0.05}), InvalidArgument);
    CHECK_NOTHROW(make_regime(RegimeKind::near_resonant, BhParams{1.0, 1.05, 0.0, 0.05}));
}

TEST_CASE("engine_reproduces_every_regime") {
    const double lam = 0.05;
    for (double db : {1.0, std::numbers::phi, 2.0, 0.6}) {
        check_engine_agrees(BhParams{1.0, db, 0.001, lam}, RegimeKind::eta_much_less);
        check_engine_agrees(BhParams{1.0, db, 0.05, lam}, RegimeKind::eta_comparable);
        check_engine_agrees(BhParams{1.0, db, 0.4, lam}, RegimeKind::eta_much_greater);
    }
    for (double db : {1.0, 1.04, 0.93}) check_engine_agrees(BhParams{1.0, db, 0.02, lam}, RegimeKind::near_resonant);
}

TEST_CASE("first_order_constants") {
    const SpaceConfig s = desk_space();
    const Ladders l(s);
    const BhParams p = resonant(0.05, 0.01);
    const FirstSecondOrder f = bh_first_second_order(p, make_regime(RegimeKind::eta_much_less, p), s);
    CHECK(interior_norm(commutator(f.C1, bh_reference(p, s))) <= 1e-10);
    // the resonant generator is −½λ(aσ₋ + a†σ₊)
    CHECK(interior_distance(f.Z1, (-0.5 * p.lambda) * (l.a * l.sm + l.ad * l.sp)) <= 1e-12);

    const BhParams off{1.0, std::numbers::phi, 0.001, 0.05};
    const FirstSecondOrder g = bh_first_second_order(off, make_regime(RegimeKind::eta_much_less, off), s);
    CHECK(op_norm(g.C1) == 0.0);
}

TEST_CASE("two_phonon_resonance_term") {
    const SpaceConfig s = desk_space();
    const BhParams p{1.0, 2.0, 0.05, 0.05};
    const FirstSecondOrder f = bh_first_second_order(p, make_regime(RegimeKind::eta_comparable, p), s);
    const Complex elem = f.C2({0, Spin::e}, {2, Spin::g});
    CHECK(elem.real() == doctest::Approx(-p.lambda * p.eta_breve * p.nu * std::sqrt(2.0)).epsilon(1e-12));
    const FirstSecondOrder g = bh_first_second_order(p, make_regime(RegimeKind::eta_much_less, p), s);
    CHECK(std::abs(g.C2({0, Spin::e}, {2, Spin::g})) == 0.0);
}

TEST_CASE("jc_evolutor_closed_form") {
    const SpaceConfig s = desk_space();
    const JCParams p{1.0, 1.0, 0.07};
    const double t = 0.7 / (p.lambda * p.nu);
    const Operator u = jc_evolutor(t, p, s);
    const Operator ref = expm(-kI * t * jc_constants(p, s).coupling);
    CHECK(interior_distance(u, ref) <= 1e-9);
    CHECK(unitarity_defect(u) <= 1e-10);
    CHECK(op_norm(jc_evolutor(0.0, p, s) - Operator::identity(s)) < 1e-15);
    CHECK(std::abs(u({0, Spin::g}, {0, Spin::g}) - 1.0) == 0.0);
    CHECK_THROWS_AS(jc_evolutor(1.0, JCParams{1.0, 1.2, 0.07}, s), InvalidArgument);
}

TEST_CASE("jc_evolutor_breve_and_rwa") {
    const SpaceConfig s = desk_space();
    const Ladders l(s);
    const BhParams p = resonant(0.08, 0.02);
    const double t = 2.3;
    const Operator c1 = kI * (p.lambda * p.nu) * (l.a * l.sp - l.ad * l.sm);
    CHECK(interior_distance(jc_evolutor_breve(t, p, s), expm(-kI * t * c1)) <= 1e-9);
    CHECK(unitarity_defect(jc_evolutor_breve(t, p, s)) <= 1e-10);

    CHECK(op_norm(rwa_evolutor(0.0, p, s) - Operator::identity(s)) < 1e-15);
    CHECK(unitarity_defect(rwa_evolutor(t, p, s)) <= 1e-10);
    const BhParams free = resonant(0.0);
    CHECK(op_norm(rwa_evolutor(t, free, s) - exact_propagator(bh_reference(free, s), t)) < 1e-12);
    CHECK_THROWS_AS(rwa_evolutor(t, BhParams{1.0, 1.2, 0.0, 0.05}, s), InvalidArgument);
}

TEST_CASE("first_order_evolutor_structure") {
    const SpaceConfig s = desk_space();
    const BhParams p = resonant(0.05, 0.01);
    const Regime r = make_regime(RegimeKind::eta_much_less, p);
    const double t = 3.0;
    const Operator e1 = first_order_evolutor(t, p, r, s);
    CHECK(unitarity_defect(e1) <= 1e-10);
    const FirstSecondOrder f = bh_first_second_order(p, r, s);
    const Operator ez = expm(kI * f.Z1);
    const Operator merged = ez.adjoint() * exact_propagator(bh_reference(p, s) + f.C1, t) * ez;
    CHECK(op_norm(e1 - merged) <= 1e-10);

    const BhParams free = resonant(0.0);
    const Regime rf = make_regime(RegimeKind::eta_much_less, free);
    CHECK(op_norm(first_order_evolutor(t, free, rf, s) - exact_propagator(bh_reference(free, s), t)) < 1e-12);
}

TEST_CASE("exp_z1_and_sandwich") {
    const SpaceConfig s = desk_space();
    const Ladders l(s);
    for (double lam : {0.03, 0.1, 0.16}) {
        const BhParams p = resonant(lam, 0.3 * lam);
        const Operator z1 = (-0.5 * lam) * (l.a * l.sm + l.ad * l.sp);
        CHECK(interior_distance(exp_z1(p, s), expm(kI * z1)) <= 1e-9);
        for (double t : {0.0, 0.9, 3.0}) {
            const Operator direct = expm(-kI * z1) * exact_propagator(bh_reference(p, s), t) * expm(kI * z1);
            CHECK(interior_distance(sandwich(t, p, s), direct) <= 1e-9);
        }
    }
    const BhParams p = resonant(0.1);
    CHECK(op_norm(sandwich(0.0, p, s) - Operator::identity(s)) < 1e-14);

    // α + β = 1 is cos² + sin²; κ ≈ −iλ/2 up to λ³n/12 on level n
    const Operator kappa = sandwich_kappa(p, s);
    const Operator target = (-0.5 * kI * p.lambda) * Operator::identity(s);
    const int levels = 12;
    CHECK(testing::block_norm((kappa - target).matrix(), 2 * (levels + 1)) <= std::pow(p.lambda, 3));
}

TEST_CASE("y1_integral_is_a_generator_difference") {
    const SpaceConfig s = desk_space();
    const Ladders l(s);
    const BhParams p = resonant(0.08, 0.01);
    const Operator z1 = (-0.5 * p.lambda) * (l.a * l.sm + l.ad * l.sp);
    for (double t : {0.4, 1.7, 3.0}) {
        const Operator u = exact_propagator(bh_reference(p, s), t);
        const Operator moved = u * z1 * u.adjoint();  // Z₁(−t)
        CHECK(op_norm(y1_integral(t, p, s) - (z1 - moved)) < 1e-12);
        CHECK(hermiticity_defect(y1_integral(t, p, s)) < 1e-14);
    }
    const double period = std::numbers::pi / p.nu;
    CHECK(op_norm(y1_integral(period, p, s)) < 1e-12);
    CHECK(op_norm(y1_relation(period, p, s) - rwa_evolutor(period, p, s)) < 1e-10);
    const BhParams free = resonant(0.0);
    CHECK(op_norm(y1_relation(1.1, free, s) - rwa_evolutor(1.1, free, s)) < 1e-14);
}

TEST_CASE("second_order_spectrum_formulas") {
    const BhParams p{1.0, 1.03, 0.02, 0.0};
    const SecondOrderSpectrum zero = spectrum_second_order(p, 10);
    for (const Level& lv : zero.levels) {
        CHECK(lv.E_plus == doctest::Approx(lv.n - 0.5 + 0.5 * 0.03));
        CHECK(lv.E_minus == doctest::Approx(lv.n - 0.5 - 0.5 * 0.03));
    }
    const BhParams q{1.0, 1.03, 0.02, 0.05};
    const SecondOrderSpectrum sp = spectrum_second_order(q, 10);
    CHECK(sp.levels.size() == 10);
    for (const Level& lv : sp.levels) CHECK(lv.E_plus >= lv.E_minus);
    CHECK_THROWS_AS(spectrum_second_order(BhParams{1.0, 1.5, 0.0, 0.05}, 3), InvalidArgument);
}

TEST_CASE("second_order_levels_diagonalize_the_effective_operator") {
    // H₀' + C₁ + C₂ of the near-resonant split, diagonalized directly
    const SpaceConfig s = desk_space();
    const BhParams p{1.0, 1.02, 0.01, 0.06};
    const Regime r = make_regime(RegimeKind::near_resonant, p);
    const FirstSecondOrder f = bh_first_second_order(p, r, s);
    const Operator h2 = regime_reference(p, r, s) + f.C1 + f.C2;
    const SecondOrderSpectrum sp = spectrum_second_order(p, 10);
    CHECK(exact_vacuum_level(h2) == doctest::Approx(sp.E0).epsilon(1e-12));
    for (const Level& lv : sp.levels) {
        const auto [lo, hi] = exact_pair(lv.n, h2);
        CHECK(lo == doctest::Approx(lv.E_minus).epsilon(1e-12));
        CHECK(hi == doctest::Approx(lv.E_plus).epsilon(1e-12));
    }
}

TEST_CASE("first_order_levels_are_the_rwa_levels") {
    const SpaceConfig s = desk_space();
    for (double db : {1.0, 1.04, 0.97}) {
        const BhParams p{1.0, db, 0.01, 0.07};
        const SecondOrderSpectrum first = spectrum_first_order(p, 10);
        const Ladders l(s);
        const Operator rwa = bh_reference(p, s) + kI * (p.lambda * p.nu) * (l.a * l.sp - l.ad * l.sm);
        for (const Level& lv : first.levels) {
            const auto [lo, hi] = exact_pair(lv.n, rwa);
            CHECK(lo == doctest::Approx(lv.E_minus).epsilon(1e-12));
            CHECK(hi == doctest::Approx(lv.E_plus).epsilon(1e-12));
        }
    }
}

TEST_CASE("transition_probability_and_shift") {
    const Complex c(0.0, 0.3);
    CHECK(transition_probability(std::numbers::pi / (2 * 0.3), 0.0, c) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(transition_probability(0.0, 0.1, c) == 0.0);
    for (double t : {0.3, 1.1, 7.0}) CHECK(transition_probability(t, 0.2, c) <= 0.09 / (0.04 + 0.09) + 1e-15);

    const BhParams p{1.0, 1.0, 0.0, 0.05};
    CHECK(anticrossing_shift(3, p) == doctest::Approx(0.5 * 0.0025 * 3));
    CHECK_THROWS_AS(anticrossing_shift(0, p), InvalidArgument);

    ModelParams m;
    m.nu = 1.0;
    m.omega_L = 1.0;
    m.omega_ge = 1.0 + 0.866;
    m.Omega_R = 0.25;
    m.eta = 0.2;
    CHECK(anticrossing_shift(2, m) == doctest::Approx(0.5 * m.lambda() * m.lambda() * 2));
}
