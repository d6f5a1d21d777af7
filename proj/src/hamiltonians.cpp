#include "iontrap/hamiltonians.hpp"

#include <cmath>
#include <numbers>

#include "iontrap/error.hpp"

namespace iontrap {

namespace {

struct Ladder {
    Operator a, ad, n, sz, sp, sm, id;

    explicit Ladder(const SpaceConfig& space)
        : a(annihilation(space)),
          ad(creation(space)),
          n(number(space)),
          sz(pauli(Pauli::z, space)),
          sp(pauli(Pauli::plus, space)),
          sm(pauli(Pauli::minus, space)),
          id(Operator::identity(space)) {}
};

Operator hermitian_part(const Operator& x) { return 0.5 * (x + x.adjoint()); }

Operator power(const Operator& x, int k) {
    Operator r = Operator::identity(x.space());
    for (int i = 0; i < k; ++i) r = r * x;
    return r;
}

double factorial(int m) { return std::tgamma(static_cast<double>(m) + 1.0); }

/// D(i x) = exp(i x (a + a†)) for real x.
Operator position_phase(double x, const SpaceConfig& space) {
    return displacement(Complex(0.0, x), space);
}

}  // namespace

Operator jc_hamiltonian(const JCParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    return p.nu * l.n + 0.5 * p.omega * l.sz + (p.lambda * p.nu) * (l.a * l.sp + l.ad * l.sm);
}

JCConstants jc_constants(const JCParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    return JCConstants{
        p.nu * (l.n + 0.5 * l.sz),
        0.5 * (p.omega - p.nu) * l.sz + (p.lambda * p.nu) * (l.a * l.sp + l.ad * l.sm),
    };
}

Operator rotating_frame(double t, double omega_L, const SpaceConfig& space) {
    const double phase = 0.5 * omega_L * t;
    return diagonal(space, [phase](int, Spin s) {
        return std::exp(kI * (s == Spin::e ? phase : -phase));
    });
}

Operator ith(double t, const ModelParams& p, const SpaceConfig& space) {
    p.validate();
    const Ladder l(space);
    const Operator d = position_phase(p.eta, space);
    const Complex up = std::exp(-kI * (p.omega_L * t));
    Operator h = p.nu * l.n + 0.5 * p.omega_ge * l.sz;
    if (p.Omega_R != 0.0)
        h += p.Omega_R * (std::conj(up) * (l.sm * d.adjoint()) + up * (l.sp * d));
    return h;
}

Operator rfh_reference(const ModelParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    return p.nu * l.n + 0.5 * p.detuning() * l.sz;
}

Operator rfh(const ModelParams& p, const SpaceConfig& space) {
    p.validate();
    const Ladder l(space);
    const Operator d = position_phase(p.eta, space);
    return rfh_reference(p, space) + p.Omega_R * (l.sm * d.adjoint() + l.sp * d);
}

Operator rwa_effective(RwaKind which, const ModelParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    const Complex coupling = kI * (p.eta * p.Omega_R);
    switch (which) {
        case RwaKind::carrier: return p.Omega_R * (l.sm + l.sp);
        case RwaKind::minus: return coupling * (l.ad * l.sp - l.a * l.sm);
        case RwaKind::plus: return coupling * (l.a * l.sp - l.ad * l.sm);
    }
    throw InvalidArgument("unknown RWA kind");
}

TDeltaCoefficients t_delta_coefficients(double reduced_detuning) {
    const double d = reduced_detuning;
    const double root = std::sqrt(4.0 + d * d);
    const double inv = 1.0 / (2.0 * root);
    const double sign = d < 0.0 ? -1.0 : 1.0;
    const double first = std::sqrt(0.25 + inv);
    const double second = std::sqrt(std::max(0.0, 0.25 - inv));
    TDeltaCoefficients c;
    c.kappa_plus = first + sign * second;
    c.kappa_minus = first - sign * second;
    c.eps_plus = d / (2.0 * root) + 0.5;
    c.eps_minus = d / (2.0 * root) - 0.5;
    return c;
}

Operator t1(const ModelParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    const Operator d = position_phase(0.5 * p.eta, space);
    const Operator dd = d.adjoint();
    const Operator pe = spin_projector(Spin::e, space);
    const Operator pg = spin_projector(Spin::g, space);
    // (1/√2) [[𝒟†, 𝒟], [−𝒟†, 𝒟]] in the (e, g) layout.
    return (1.0 / std::numbers::sqrt2) * (dd * pe + d * l.sp - dd * l.sm + d * pg);
}

Operator t2_angle(double theta, const SpaceConfig& space) {
    const Ladder l(space);
    return std::cos(0.5 * theta) * l.id - std::sin(0.5 * theta) * (l.sp - l.sm);
}

Operator t2(const ModelParams& p, const SpaceConfig& space) { return t2_angle(p.theta(), space); }

Operator t3(const ModelParams& p, const SpaceConfig& space) {
    const Operator d = position_phase(0.5 * p.eta_breve(), space);
    return d * spin_projector(Spin::e, space) + d.adjoint() * spin_projector(Spin::g, space);
}

Operator t_delta(const ModelParams& p, const SpaceConfig& space) {
    p.validate();
    const Ladder l(space);
    const TDeltaCoefficients c = t_delta_coefficients(p.reduced_detuning());
    const Operator d_minus = position_phase(c.eps_minus * p.eta, space);
    const Operator d_plus = position_phase(c.eps_plus * p.eta, space);
    return c.kappa_plus * (d_minus * spin_projector(Spin::e, space)) +
           c.kappa_minus * (d_plus * l.sp) - c.kappa_minus * (d_plus.adjoint() * l.sm) +
           c.kappa_plus * (d_minus.adjoint() * spin_projector(Spin::g, space));
}

Operator bh_reference(const BhParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    return p.nu * l.n + 0.5 * p.delta_breve * l.sz + (p.lambda * p.eta_breve * p.nu) * l.id;
}

Operator bh_interaction_term(int m, const BhParams& p, const SpaceConfig& space) {
    if (m < 0) throw InvalidArgument("bh_interaction_term: m must be >= 0");
    const Ladder l(space);
    const Complex prefactor = kI * (p.lambda * p.nu);
    if (m == 0) return prefactor * ((l.a - l.ad) * (l.sp + l.sm));
    const Complex coeff = prefactor * std::pow(kI * p.eta_breve, m) / factorial(m);
    const Operator x = l.a + l.ad;
    const Operator spin = l.sp + (m % 2 == 0 ? 1.0 : -1.0) * l.sm;
    const Operator poly = l.a * l.a - l.ad * l.ad + (1.0 - m) * l.id;
    return hermitian_part(coeff * (poly * power(x, m - 1) * spin));
}

Operator bh_interaction_series(const BhParams& p, int max_order, const SpaceConfig& space) {
    if (max_order < 0) throw InvalidArgument("bh_interaction_series: M must be >= 0");
    Operator sum = bh_interaction_term(0, p, space);
    if (p.eta_breve == 0.0 || max_order == 0) return sum;
    // Same terms as bh_interaction_term. The boson factors are real, so they
    // are summed as real matrices, one per spin factor, with the powers of
    // a + a† carried along.
    const Ladder l(space);
    const Eigen::MatrixXd x = (l.a + l.ad).matrix().real();
    const Eigen::MatrixXd a2 = (l.a * l.a - l.ad * l.ad).matrix().real();
    const Eigen::Index d = x.rows();
    Eigen::MatrixXd xpow = Eigen::MatrixXd::Identity(d, d);
    Matrix boson[2] = {Matrix::Zero(d, d), Matrix::Zero(d, d)};  // even m, odd m
    for (int m = 1; m <= max_order; ++m) {
        if (m > 1) xpow = xpow * x;
        const Complex coeff = kI * (p.lambda * p.nu) * std::pow(kI * p.eta_breve, m) / factorial(m);
        const Eigen::MatrixXd term = a2 * xpow + (1.0 - m) * xpow;
        boson[m % 2] += coeff * term.cast<Complex>();
    }
    const Operator rest = Operator(space, boson[0]) * (l.sp + l.sm) + Operator(space, boson[1]) * (l.sp - l.sm);
    return sum + hermitian_part(rest);
}

int bh_series_order(const BhParams& p, const SpaceConfig& space) {
    const double eta = std::abs(p.eta_breve);
    if (eta == 0.0) return 0;
    const Ladder l(space);
    // ‖a + a†‖ on the interior block: real symmetric, so the largest |eigenvalue|
    const int k = space.interior_dim();
    const Eigen::MatrixXd xi = (l.a + l.ad).matrix().real().topLeftCorner(k, k);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(xi, Eigen::EigenvaluesOnly).eigenvalues();
    const double x = ev.cwiseAbs().maxCoeff();
    for (int m = 0; m < 200; ++m) {
        const double bound = std::pow(eta, m + 1) * std::pow(x, m) * std::numbers::e / factorial(m + 1);
        if (bound < 1e-12) return m;
    }
    throw NumericalDiagnostic("bh_series_order: series does not converge below 1e-12");
}

Operator bh_interaction_truncated(const BhParams& p, const SpaceConfig& space, bool with_eta_term) {
    const Ladder l(space);
    Operator h = kI * (p.lambda * p.nu) * ((l.a - l.ad) * (l.sp + l.sm));
    if (with_eta_term)
        h += (p.lambda * p.eta_breve * p.nu) * ((l.ad * l.ad - l.a * l.a) * (l.sp - l.sm));
    return h;
}

Operator bh(const ModelParams& p, const SpaceConfig& space, BhRoute route) {
    p.validate();
    if (route == BhRoute::conjugation) {
        const Operator t = t_delta(p, space);
        const Operator h = t * rfh(p, space) * t.adjoint();
        return hermitian_part(h);
    }
    return bh(BhParams::from_model(p), space);
}

double bh_scalar_offset(const ModelParams& p) {
    p.validate();
    const double l = p.lambda();
    return (l * l - l * p.eta_breve()) * p.nu;
}

Operator bh(const BhParams& p, const SpaceConfig& space) {
    p.validate();
    return bh_reference(p, space) + bh_interaction_series(p, bh_series_order(p, space), space);
}

Operator check_transform(const SpaceConfig& space) {
    const Operator sx = pauli(Pauli::x, space);
    // cos(πn/2) and sin(πn/2) cycle through (1,0), (0,1), (−1,0), (0,−1).
    const Operator c = fock_function(space, [](int n) {
        static constexpr double table[4] = {1.0, 0.0, -1.0, 0.0};
        return Complex(table[n % 4], 0.0);
    });
    const Operator s = fock_function(space, [](int n) {
        static constexpr double table[4] = {0.0, 1.0, 0.0, -1.0};
        return Complex(table[n % 4], 0.0);
    });
    return c + kI * (s * sx);
}

Operator h_check_reference(const BhParams& p, const SpaceConfig& space) {
    const Ladder l(space);
    return p.nu * l.n + 0.5 * p.delta_breve * (parity(space) * l.sz) +
           (p.lambda * p.eta_breve * p.nu) * l.id;
}

Operator h_check_interaction_term(int m, const BhParams& p, const SpaceConfig& space) {
    if (m < 0) throw InvalidArgument("h_check_interaction_term: m must be >= 0");
    const Ladder l(space);
    const double prefactor = p.lambda * p.nu;
    if (m == 0) return prefactor * (l.a + l.ad);
    const double coeff = prefactor * std::pow(p.eta_breve, m) / factorial(m);
    const Operator poly = l.ad * l.ad - l.a * l.a + (1.0 - m) * l.id;
    const Operator boson = coeff * (poly * power(l.ad - l.a, m - 1));
    // even m: T maps the σ_x of the term onto σ_x·σ_x, no spin factor survives
    if (m % 2 == 0) return hermitian_part(boson);
    return hermitian_part(boson * parity(space) * (l.sm - l.sp));
}

Operator h_check(const BhParams& p, const SpaceConfig& space, int max_order) {
    p.validate();
    const int order = max_order < 0 ? bh_series_order(p, space) : max_order;
    Operator h = h_check_reference(p, space) + h_check_interaction_term(0, p, space);
    if (p.eta_breve == 0.0) return h;
    for (int m = 1; m <= order; ++m) h += h_check_interaction_term(m, p, space);
    return h;
}

}  // namespace iontrap
