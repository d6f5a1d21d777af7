#include <doctest.h>

#include <cmath>
#include <numbers>

#include "iontrap/error.hpp"
#include "iontrap/hamiltonians.hpp"
#include "iontrap/oracle.hpp"
#include "support.hpp"

using namespace iontrap;
using iontrap::testing::desk_space;

namespace {

ModelParams reference_point() {
    ModelParams p;
    p.nu = 1.0;
    p.omega_L = 1.0;
    p.omega_ge = 1.9;
    p.Omega_R = 0.25;
    p.eta = 0.1;
    return p;
}

// Eigenvalues of the interior-adjacent low spectrum, for equivalence checks.
Eigen::VectorXd low_spectrum(const Operator& h, int count) {
    return exact_eigs(h).values.head(count);
}

}  // namespace

TEST_CASE("derived_parameters") {
    const ModelParams p = reference_point();
    CHECK(p.detuning() == doctest::Approx(0.9));
    CHECK(p.reduced_detuning() == doctest::Approx(3.6));
    const double root = std::sqrt(4.0 + 3.6 * 3.6);
    CHECK(p.balanced_detuning() == doctest::Approx(std::sqrt(0.25 + 0.81)));
    CHECK(p.lambda() == doctest::Approx(0.1 / root));
    CHECK(p.eta_breve() == doctest::Approx(3.6 * 0.1 / root));
    CHECK(std::tan(p.theta()) == doctest::Approx(1.8));
    ModelParams q = p;
    q.Omega_R = 0.0;
    CHECK_THROWS_AS(q.reduced_detuning(), InvalidArgument);
}

TEST_CASE("jc_constants_commute") {
    const SpaceConfig s = desk_space();
    const JCParams p{1.0, 1.3, 0.07};
    const JCConstants k = jc_constants(p, s);
    CHECK(op_norm(jc_hamiltonian(p, s) - k.excitation - k.coupling) < 1e-14);
    CHECK(interior_norm(commutator(k.excitation, k.coupling)) < 1e-12);
    const JCConstants k0 = jc_constants(JCParams{1.0, 1.3, 0.0}, s);
    CHECK(op_norm(k0.coupling - (0.5 * 0.3) * pauli(Pauli::z, s)) < 1e-15);
    // |0,e> and |1,g> share the N eigenvalue ν/2
    CHECK(k.excitation({0, Spin::e}, {0, Spin::e}).real() == doctest::Approx(0.5));
    CHECK(k.excitation({1, Spin::g}, {1, Spin::g}).real() == doctest::Approx(0.5));
}

TEST_CASE("ith_basic_properties") {
    const SpaceConfig s = desk_space();
    ModelParams p = reference_point();
    for (double t : {0.0, 0.37, 5.0}) CHECK(hermiticity_defect(ith(t, p, s)) < 1e-12);
    const double period = 2.0 * std::numbers::pi / p.omega_L;
    CHECK(op_norm(ith(0.4 + period, p, s) - ith(0.4, p, s)) < 1e-12);
    p.Omega_R = 0.0;
    const Operator free = p.nu * number(s) + 0.5 * p.omega_ge * pauli(Pauli::z, s);
    CHECK(op_norm(ith(2.0, p, s) - free) == 0.0);
}

TEST_CASE("rfh_is_the_rotating_frame_of_ith") {
    const SpaceConfig s = desk_space();
    const ModelParams p = reference_point();
    const double t = 1.3;
    const Operator r = rotating_frame(t, p.omega_L, s);
    const Operator lhs = r * (ith(t, p, s) - (0.5 * p.omega_L) * pauli(Pauli::z, s)) * r.adjoint();
    CHECK(interior_distance(lhs, rfh(p, s)) < 1e-10);

    ModelParams flat = p;
    flat.eta = 0.0;
    const Operator expect = flat.nu * number(s) + 0.5 * flat.detuning() * pauli(Pauli::z, s) +
                            flat.Omega_R * pauli(Pauli::x, s);
    CHECK(op_norm(rfh(flat, s) - expect) < 1e-14);
}

TEST_CASE("rwa_effective_commutes_at_resonance") {
    const SpaceConfig s = desk_space();
    ModelParams p = reference_point();
    p = p.with_detuning(p.nu);
    CHECK(interior_norm(commutator(rwa_effective(RwaKind::plus, p, s), rfh_reference(p, s))) < 1e-12);
    p = p.with_detuning(-p.nu);
    CHECK(interior_norm(commutator(rwa_effective(RwaKind::minus, p, s), rfh_reference(p, s))) < 1e-12);
    CHECK(op_norm(rwa_effective(RwaKind::carrier, p, s) - p.Omega_R * pauli(Pauli::x, s)) == 0.0);
}

TEST_CASE("t_delta_coefficients_at_zero_detuning") {
    const TDeltaCoefficients c = t_delta_coefficients(0.0);
    CHECK(c.kappa_plus == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(c.kappa_minus == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-15));
    CHECK(c.eps_plus == 0.5);
    CHECK(c.eps_minus == -0.5);
    // κ₊² + κ₋² = 1 for any Δ
    for (double d : {-7.0, -0.3, 0.2, 4.0}) {
        const TDeltaCoefficients k = t_delta_coefficients(d);
        CHECK(k.kappa_plus * k.kappa_plus + k.kappa_minus * k.kappa_minus == doctest::Approx(1.0));
    }
}

TEST_CASE("t_delta_is_the_product_of_three_unitaries") {
    const SpaceConfig s = desk_space();
    for (double delta : {0.9, -0.4, 0.0}) {
        ModelParams p = reference_point().with_detuning(delta);
        for (const Operator& u : {t1(p, s), t2(p, s), t3(p, s), t_delta(p, s)}) CHECK(unitarity_defect(u) < 1e-10);
        CHECK(op_norm(t_delta(p, s) - t3(p, s) * t2(p, s) * t1(p, s)) < 1e-10);
    }
    ModelParams zero = reference_point();
    zero.Omega_R = 0.0;
    CHECK_THROWS_AS(t_delta(zero, s), InvalidArgument);
}

TEST_CASE("t_delta_field_limits") {
    const SpaceConfig s = desk_space();
    ModelParams p = reference_point();
    p.Omega_R = 1.0;
    p = p.with_detuning(1e6);  // Δ = 10⁶, weak field
    CHECK(interior_norm(t_delta(p, s) - Operator::identity(s)) <= 1e-3);
    p = p.with_detuning(1e-6);  // Δ = 10⁻⁶, strong field
    CHECK(interior_norm(t_delta(p, s) - t1(p, s)) <= 1e-3);

    // ‖T_Δ − I‖ decreases for Δ ≥ 10
    double previous = 1e9;
    for (double d : {10.0, 20.0, 40.0, 80.0, 160.0}) {
        const double dist = interior_norm(t_delta(p.with_detuning(d), s) - Operator::identity(s));
        CHECK(dist < previous);
        previous = dist;
    }
}

TEST_CASE("bh_routes_agree") {
    const SpaceConfig s = desk_space();
    const ModelParams p = reference_point();
    const Operator closed = bh(p, s, BhRoute::closed_form);
    const Operator conj = bh(p, s, BhRoute::conjugation);
    const Operator id = Operator::identity(s);
    CHECK(interior_distance(closed + bh_scalar_offset(p) * id, conj) <= 1e-8);
    // the offset is a pure scalar: removing the trace difference leaves nothing
    const double lam = p.lambda();
    CHECK(bh_scalar_offset(p) == doctest::Approx((lam * lam - lam * p.eta_breve()) * p.nu));
    CHECK(interior_distance(closed, conj) == doctest::Approx(std::abs(bh_scalar_offset(p))).epsilon(1e-6));
    CHECK(hermiticity_defect(closed) < 1e-12);

    const BhParams b = BhParams::from_model(p);
    const Operator h0 = bh_reference(b, s);
    const Operator bare = b.nu * number(s) + 0.5 * b.delta_breve * pauli(Pauli::z, s);
    const double shift = ((h0 - bare).matrix().trace() / static_cast<double>(s.dim())).real();
    CHECK(shift == doctest::Approx(b.lambda * b.eta_breve * b.nu).epsilon(1e-12));
}

TEST_CASE("bh_spectrum_matches_rfh") {
    const SpaceConfig s = desk_space();
    const ModelParams p = reference_point();
    const BhParams b = BhParams::from_model(p);
    const int k = 30;
    const Eigen::VectorXd e1 = low_spectrum(rfh(p, s), k);
    const Eigen::VectorXd e2 = low_spectrum(bh(p, s, BhRoute::conjugation), k);
    const Eigen::VectorXd e3 = low_spectrum(h_check(b, s), k);
    CHECK((e1 - e2).cwiseAbs().maxCoeff() < 1e-6);
    const Eigen::VectorXd offset = Eigen::VectorXd::Constant(k, bh_scalar_offset(p));
    CHECK((e2 - e3 - offset).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("bh_series_terms") {
    const SpaceConfig s = desk_space();
    const BhParams b = BhParams::from_model(reference_point());
    const Operator a = annihilation(s), ad = creation(s);
    const Operator sp = pauli(Pauli::plus, s), sm = pauli(Pauli::minus, s);

    const Operator direct = kI * (b.lambda * b.nu) * ((a - ad) * (sp + sm));
    CHECK(op_norm(bh_interaction_term(0, b, s) - direct) == 0.0);
    CHECK(op_norm(bh_interaction_series(b, 1, s) - bh_interaction_truncated(b, s, true)) < 1e-12);

    double previous = 1e9;
    for (int m = 0; m <= 4; ++m) {
        const Operator t = bh_interaction_term(m, b, s);
        CHECK(hermiticity_defect(t) < 1e-12);
        const double size = interior_norm(t);
        if (m >= 1) CHECK(size < previous);
        previous = size;
    }

    BhParams flat = b;
    flat.eta_breve = 0.0;
    CHECK(op_norm(bh_interaction_series(flat, 6, s) - bh_interaction_term(0, flat, s)) == 0.0);
    CHECK(bh_series_order(flat, s) == 0);
    CHECK(bh_series_order(b, s) >= 3);
}

TEST_CASE("check_transform_formulae") {
    const SpaceConfig s = desk_space();
    const Operator t = check_transform(s);
    CHECK(unitarity_defect(t) < 1e-14);
    const Operator expect = expm(kI * (std::numbers::pi / 2) * (number(s) * pauli(Pauli::x, s)));
    CHECK(op_norm(t - expect) < 1e-12);

    const Operator a = annihilation(s), sx = pauli(Pauli::x, s), sz = pauli(Pauli::z, s);
    CHECK(interior_norm(t * a * t.adjoint() + kI * (a * sx)) <= 1e-10);
    CHECK(interior_distance(t * sz * t.adjoint(), parity(s) * sz) <= 1e-10);
    CHECK(interior_distance(t * number(s) * t.adjoint(), number(s)) <= 1e-10);
}

TEST_CASE("h_check_routes_agree") {
    const SpaceConfig s = desk_space();
    const ModelParams p = reference_point();
    const BhParams b = BhParams::from_model(p);
    const Operator t = check_transform(s);
    const Operator conj = t * bh(b, s) * t.adjoint();
    CHECK(interior_distance(h_check(b, s), conj) <= 1e-8);
    for (int m = 0; m <= 4; ++m) {
        const Operator term = t * bh_interaction_term(m, b, s) * t.adjoint();
        CHECK(interior_distance(h_check_interaction_term(m, b, s), term) <= 1e-10);
    }

    const Operator h0 = h_check_reference(b, s);
    for (int n = 0; n <= 5; ++n) {
        const double sign = n % 2 == 0 ? 1.0 : -1.0;
        const double shift = b.lambda * b.eta_breve * b.nu;
        CHECK(h0({n, Spin::e}, {n, Spin::e}).real() == doctest::Approx(n + 0.5 * b.delta_breve * sign + shift));
        CHECK(h0({n, Spin::g}, {n, Spin::g}).real() == doctest::Approx(n - 0.5 * b.delta_breve * sign + shift));
    }
    CHECK((h0.matrix() - Matrix(h0.matrix().diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0);

    // with only the m = 0 term the spin sectors decouple
    const Operator h = h_check(b, s, 0);
    const Operator pe = spin_projector(Spin::e, s), pg = spin_projector(Spin::g, s);
    CHECK(interior_norm(pe * h * pg) <= 1e-10);
    CHECK(interior_norm(pg * h * pe) <= 1e-10);
}

TEST_CASE("boundedness_in_the_rabi_frequency") {
    ModelParams p = reference_point();
    double max_lambda = 0.0, max_eta = 0.0;
    for (int k = 0; k <= 600; ++k) {
        p.Omega_R = std::pow(10.0, -3.0 + 6.0 * k / 600.0);
        max_lambda = std::max(max_lambda, std::abs(p.lambda()));
        max_eta = std::max(max_eta, std::abs(p.eta_breve()));
    }
    CHECK(max_lambda <= std::abs(p.eta) / 2 + 1e-15);
    CHECK(max_eta <= std::abs(p.eta) + 1e-15);
}
