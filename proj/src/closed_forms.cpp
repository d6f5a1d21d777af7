#include "iontrap/closed_forms.hpp"

#include <cmath>
#include <sstream>

#include "iontrap/error.hpp"
#include "iontrap/hamiltonians.hpp"

namespace iontrap {

namespace {

struct Ops {
    Operator a, ad, n, sz, sp, sm, id, pe, pg;

    explicit Ops(const SpaceConfig& space)
        : a(annihilation(space)),
          ad(creation(space)),
          n(number(space)),
          sz(pauli(Pauli::z, space)),
          sp(pauli(Pauli::plus, space)),
          sm(pauli(Pauli::minus, space)),
          id(Operator::identity(space)),
          pe(spin_projector(Spin::e, space)),
          pg(spin_projector(Spin::g, space)) {}
};

/// sin(x√k)/√k, with the k = 0 limit x.
double sinc_root(double x, int k) {
    if (k == 0) return x;
    const double r = std::sqrt(static_cast<double>(k));
    return std::sin(x * r) / r;
}

Operator of_n(const SpaceConfig& space, const std::function<Complex(int)>& f) { return fock_function(space, f); }

/// Eigenvalue of aa† at Fock level n on the truncated space: n + 1, and 0 at
/// the cutoff. Using it keeps the closed forms exactly unitary there.
int aad(int n, int n_max) { return n < n_max ? n + 1 : 0; }

void require_resonant(const BhParams& p, const char* what) {
    p.validate();
    if (!p.resonant()) {
        std::ostringstream msg;
        msg << what << " needs nu = delta_breve (got nu=" << p.nu << ", delta_breve=" << p.delta_breve << ")";
        throw InvalidArgument(msg.str());
    }
}

void require_near_resonant(const BhParams& p, double rho) {
    p.validate();
    if (std::abs(p.nu - p.delta_breve) > rho * p.nu) {
        std::ostringstream msg;
        msg << "near-resonant regime needs |nu - delta_breve| <= " << rho << " nu (got " << std::abs(p.nu - p.delta_breve)
            << ")";
        throw InvalidArgument(msg.str());
    }
}

}  // namespace

Regime make_regime(RegimeKind kind, const BhParams& p, double rho, double eps_deg) {
    p.validate();
    if (!(rho > 0.0)) throw InvalidArgument("regime: rho must be > 0");
    if (kind == RegimeKind::near_resonant) require_near_resonant(p, rho);
    Regime r;
    r.kind = kind;
    r.rho = rho;
    r.eps_deg = eps_deg;
    r.resonant = std::abs(p.nu - p.delta_breve) <= eps_deg * p.nu;
    return r;
}

const char* regime_name(RegimeKind kind) {
    switch (kind) {
        case RegimeKind::eta_much_less: return "eta_much_less";
        case RegimeKind::eta_comparable: return "eta_comparable";
        case RegimeKind::eta_much_greater: return "eta_much_greater";
        case RegimeKind::near_resonant: return "near_resonant";
    }
    return "unknown";
}

FirstSecondOrder bh_first_second_order(const BhParams& p, const Regime& regime, const SpaceConfig& space) {
    p.validate();
    const Ops o(space);
    const double nu = p.nu;
    const double lam = p.lambda;
    const Operator np_half = o.n + 0.5 * o.id;

    if (regime.kind == RegimeKind::near_resonant) {
        require_near_resonant(p, regime.rho);
        return FirstSecondOrder{
            0.5 * (p.delta_breve - nu) * o.sz + kI * (lam * nu) * (o.a * o.sp - o.ad * o.sm),
            (-0.5 * lam) * (o.a * o.sm + o.ad * o.sp),
            (0.5 * lam * lam * nu) * (np_half * o.sz - 0.5 * o.id),
        };
    }

    const double eps = regime.eps_deg * nu;
    const double diff = nu - p.delta_breve;
    const double g = gamma(diff, eps);
    const double sum = nu + p.delta_breve;

    Operator c1 = (chi(diff, eps) * lam * nu) * (kI * (o.a * o.sp - o.ad * o.sm));
    Operator z1 = (-lam * nu * g) * (o.a * o.sp + o.ad * o.sm) - (lam * nu / sum) * (o.a * o.sm + o.ad * o.sp);
    Operator c2 = (lam * lam * nu * nu / sum) * (np_half * o.sz - 0.5 * o.id) -
                  (lam * lam * nu * nu * g) * (np_half * o.sz + 0.5 * o.id);
    if (regime.kind != RegimeKind::eta_much_less) {
        c2 -= (lam * p.eta_breve * nu * chi(2.0 * nu - p.delta_breve, eps)) *
              (o.a * o.a * o.sp + o.ad * o.ad * o.sm);
    }
    return FirstSecondOrder{std::move(c1), std::move(z1), std::move(c2)};
}

Operator regime_reference(const BhParams& p, const Regime& regime, const SpaceConfig& space) {
    if (regime.kind != RegimeKind::near_resonant) return bh_reference(p, space);
    const Ops o(space);
    return p.nu * (o.n + 0.5 * o.sz) + (p.lambda * p.eta_breve * p.nu) * o.id;
}

EngineProblem engine_problem(const BhParams& p, const Regime& regime, const SpaceConfig& space) {
    p.validate();
    const Ops o(space);
    EngineProblem prob{regime_reference(p, regime, space), {}, p.lambda};
    Operator h1 = kI * p.nu * ((o.a - o.ad) * (o.sp + o.sm));
    if (regime.kind == RegimeKind::near_resonant) {
        require_near_resonant(p, regime.rho);
        if (p.lambda == 0.0) throw InvalidArgument("near-resonant split needs lambda != 0");
        h1 += ((p.delta_breve - p.nu) / (2.0 * p.lambda)) * o.sz;
    }
    prob.series.terms.push_back(std::move(h1));
    if (regime.kind == RegimeKind::eta_comparable || regime.kind == RegimeKind::eta_much_greater) {
        if (p.lambda == 0.0) throw InvalidArgument("eta term encoding needs lambda != 0");
        prob.series.terms.push_back((p.eta_breve / p.lambda * p.nu) * ((o.ad * o.ad - o.a * o.a) * (o.sp - o.sm)));
    }
    return prob;
}

FirstSecondOrder engine_first_second_order(const BhParams& p, const Regime& regime, const SpaceConfig& space) {
    const EngineProblem prob = engine_problem(p, regime, space);
    const SpectralDecomposition spec = decompose(prob.h0, regime.eps_deg * p.nu);
    const PerturbativeSolution sol = solve(spec, prob.series, 2);
    const double lam = prob.lambda;
    return FirstSecondOrder{lam * sol.C[0], lam * sol.Z[0], (lam * lam) * sol.C[1]};
}

Operator jc_evolutor(double t, const JCParams& p, const SpaceConfig& space) {
    if (!p.resonant()) throw InvalidArgument("jc_evolutor closed form needs nu = omega; use expm(-i S t) instead");
    const Ops o(space);
    const int top = space.n_max;
    const double x = p.lambda * p.nu * t;
    const Operator cos_g = of_n(space, [x](int n) { return Complex(std::cos(x * std::sqrt(double(n)))); });
    const Operator cos_e = of_n(space, [x, top](int n) { return Complex(std::cos(x * std::sqrt(double(aad(n, top))))); });
    const Operator s_n = of_n(space, [x](int n) { return Complex(sinc_root(x, n)); });
    const Operator s_n1 = of_n(space, [x, top](int n) { return Complex(sinc_root(x, aad(n, top))); });
    return cos_g * o.pg + cos_e * o.pe - kI * (s_n1 * o.a * o.sp + s_n * o.ad * o.sm);
}

Operator jc_evolutor_breve(double t, const BhParams& p, const SpaceConfig& space) {
    require_resonant(p, "jc_evolutor_breve");
    const Ops o(space);
    const int top = space.n_max;
    const double x = p.lambda * p.nu * t;
    const Operator cos_g = of_n(space, [x](int n) { return Complex(std::cos(x * std::sqrt(double(n)))); });
    const Operator cos_e = of_n(space, [x, top](int n) { return Complex(std::cos(x * std::sqrt(double(aad(n, top))))); });
    const Operator s_n = of_n(space, [x](int n) { return Complex(sinc_root(x, n)); });
    const Operator s_n1 = of_n(space, [x, top](int n) { return Complex(sinc_root(x, aad(n, top))); });
    return cos_e * o.pe + cos_g * o.pg + s_n1 * o.a * o.sp - s_n * o.ad * o.sm;
}

Operator bh_reference_evolutor(double t, const BhParams& p, const SpaceConfig& space) {
    const double shift = p.lambda * p.eta_breve * p.nu;
    return diagonal(space, [&](int n, Spin s) {
        const double e = p.nu * n + (s == Spin::e ? 0.5 : -0.5) * p.delta_breve + shift;
        return std::exp(-kI * (e * t));
    });
}

Operator rwa_evolutor(double t, const BhParams& p, const SpaceConfig& space) {
    return bh_reference_evolutor(t, p, space) * jc_evolutor_breve(t, p, space);
}

Operator first_order_evolutor(double t, const BhParams& p, const Regime& regime, const SpaceConfig& space) {
    if (!regime.resonant && regime.kind != RegimeKind::near_resonant)
        throw InvalidArgument("first_order_evolutor needs a resonant or near-resonant regime");
    const FirstSecondOrder f = bh_first_second_order(p, regime, space);
    const Operator href = regime_reference(p, regime, space);
    const Operator ez = expm(kI * f.Z1);
    return ez.adjoint() * expm(-kI * t * href) * expm(-kI * t * f.C1) * ez;
}

Operator exp_z1(const BhParams& p, const SpaceConfig& space) {
    require_resonant(p, "exp_z1");
    const Ops o(space);
    const int top = space.n_max;
    const double x = 0.5 * p.lambda;
    const Operator cos_n = of_n(space, [x](int n) { return Complex(std::cos(x * std::sqrt(double(n)))); });
    const Operator cos_n1 = of_n(space, [x, top](int n) { return Complex(std::cos(x * std::sqrt(double(aad(n, top))))); });
    const Operator s_n = of_n(space, [x](int n) { return Complex(sinc_root(x, n)); });
    const Operator s_n1 = of_n(space, [x, top](int n) { return Complex(sinc_root(x, aad(n, top))); });
    return cos_n * o.pe + cos_n1 * o.pg - kI * (s_n * o.ad * o.sp) - kI * (s_n1 * o.a * o.sm);
}

Operator sandwich_kappa(const BhParams& p, const SpaceConfig& space) {
    const double x = 0.5 * p.lambda;
    return of_n(space, [x](int n) { return -kI * std::cos(x * std::sqrt(double(n))) * sinc_root(x, n); });
}

Operator sandwich(double t, const BhParams& p, const SpaceConfig& space) {
    require_resonant(p, "sandwich");
    const Ops o(space);
    const int top = space.n_max;
    const double nu = p.nu;
    const double x = 0.5 * p.lambda;
    const Complex up = std::exp(kI * (2.0 * nu * t));
    const Complex down = std::conj(up);
    auto alpha = [x](int n) { const double c = std::cos(x * std::sqrt(double(n))); return c * c; };
    auto beta = [x](int n) { const double s = std::sin(x * std::sqrt(double(n))); return s * s; };
    auto kappa = [x](int n) { return -kI * std::cos(x * std::sqrt(double(n))) * sinc_root(x, n); };
    auto phase_plus = [nu, t](int n) { return std::exp(-kI * (nu * (n + 0.5) * t)); };
    auto phase_minus = [nu, t](int n) { return std::exp(-kI * (nu * (n - 0.5) * t)); };

    const Operator ee = of_n(space, [&](int n) { return (alpha(n) + beta(n) * up) * phase_plus(n); });
    const Operator eg = of_n(space, [&](int n) { return kappa(n) * (1.0 - up) * phase_plus(n); });
    const Operator ge = of_n(space, [&](int n) { return kappa(aad(n, top)) * (1.0 - down) * phase_minus(n); });
    const Operator gg = of_n(space, [&](int n) { return (alpha(aad(n, top)) + beta(aad(n, top)) * down) * phase_minus(n); });
    const Complex global = std::exp(-kI * (p.lambda * p.eta_breve * nu * t));
    return global * (ee * o.pe + eg * o.ad * o.sp + ge * o.a * o.sm + gg * o.pg);
}

Operator y1_integral(double t, const BhParams& p, const SpaceConfig& space) {
    const Ops o(space);
    const double w = 2.0 * p.nu;
    // ∫₀ᵗ e^{iwτ}dτ and its conjugate
    const Complex i_plus = (std::exp(kI * (w * t)) - 1.0) / (kI * w);
    const Complex i_minus = std::conj(i_plus);
    return kI * (p.lambda * p.nu) * (i_plus * (o.a * o.sm) - i_minus * (o.ad * o.sp));
}

Operator y1_relation(double t, const BhParams& p, const SpaceConfig& space) {
    return expm(-kI * y1_integral(t, p, space)) * rwa_evolutor(t, p, space);
}

namespace {

SecondOrderSpectrum build_spectrum(const BhParams& p, int n_levels, double rho, bool second_order) {
    require_near_resonant(p, rho);
    if (n_levels < 0) throw InvalidArgument("spectrum: n_levels must be >= 0");
    const double nu = p.nu;
    const double lam2 = second_order ? p.lambda * p.lambda : 0.0;
    const double shift = p.lambda * p.eta_breve * nu;
    SecondOrderSpectrum s;
    // |0,g> is uncoupled; at second order it picks up the diagonal −½λ²ν.
    s.E0 = -0.5 * p.delta_breve + shift - 0.5 * lam2 * nu;
    for (int n = 1; n <= n_levels; ++n) {
        const double a = nu * (n - 0.5) + shift - 0.5 * lam2 * nu;
        const double b = 0.5 * (p.delta_breve - nu) + 0.5 * lam2 * nu * n;
        const double r = std::sqrt(b * b + p.lambda * p.lambda * nu * nu * n);
        s.A.push_back(a);
        s.B.push_back(b);
        s.levels.push_back(Level{n, a - r, a + r});
    }
    return s;
}

}  // namespace

SecondOrderSpectrum spectrum_second_order(const BhParams& p, int n_levels, double rho) {
    return build_spectrum(p, n_levels, rho, true);
}

SecondOrderSpectrum spectrum_first_order(const BhParams& p, int n_levels, double rho) {
    return build_spectrum(p, n_levels, rho, false);
}

double transition_probability(double t, double b, Complex c) {
    const double c2 = std::norm(c);
    const double w2 = b * b + c2;
    if (w2 == 0.0) return 0.0;
    const double s = std::sin(std::sqrt(w2) * t);
    return c2 / w2 * s * s;
}

double anticrossing_shift(int n, const BhParams& p) {
    if (n < 1) throw InvalidArgument("anticrossing_shift: n must be >= 1 (n = 0 has no two-level block)");
    return 0.5 * p.lambda * p.lambda * p.nu * n;
}

double anticrossing_shift(int n, const ModelParams& p) {
    p.validate();
    BhParams b;
    b.nu = p.nu;
    b.lambda = p.lambda();
    return anticrossing_shift(n, b);
}

}  // namespace iontrap
