#include "iontrap/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "iontrap/error.hpp"
#include "iontrap/hamiltonians.hpp"

namespace iontrap {

EigenSystem exact_eigs(const Operator& h) {
    const double defect = hermiticity_defect(h);
    if (defect > 1e-10 * std::max(1.0, op_norm(h))) {
        std::ostringstream msg;
        msg << "exact_eigs: operator is not hermitian (defect " << defect << ")";
        throw InvalidArgument(msg.str());
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h.matrix() + h.matrix().adjoint()));
    if (es.info() != Eigen::Success) throw NumericalDiagnostic("exact_eigs: eigensolver failed");
    return EigenSystem{es.eigenvalues(), es.eigenvectors()};
}

Operator exact_propagator(const Operator& h, double t) { return expm(-kI * t * h); }

namespace {

struct IthParts {
    Matrix h0;
    Matrix drive;  // Ω_R σ₋ D(iη)†; H(t) = h0 + e^{iω_L t} drive + h.c.
    double omega_L;

    Matrix at(double t) const {
        const Complex ph = std::exp(kI * (omega_L * t));
        return h0 + ph * drive + std::conj(ph) * drive.adjoint();
    }
};

IthParts ith_parts(const ModelParams& p, const SpaceConfig& space) {
    p.validate();
    const Operator d = displacement(Complex(0.0, p.eta), space);
    const Operator h0 = p.nu * number(space) + 0.5 * p.omega_ge * pauli(Pauli::z, space);
    const Operator drive = p.Omega_R * (pauli(Pauli::minus, space) * d.adjoint());
    return IthParts{h0.matrix(), drive.matrix(), p.omega_L};
}

int step_count(const ModelParams& p, double t, int steps_per_unit) {
    if (steps_per_unit < 1) throw InvalidArgument("steps_per_unit must be >= 1");
    return std::max(1, static_cast<int>(std::ceil(steps_per_unit * p.nu * std::abs(t) - 1e-9)));
}

}  // namespace

Operator magnus2_ith(const ModelParams& p, double t, const SpaceConfig& space, int steps_per_unit) {
    const IthParts parts = ith_parts(p, space);
    const int steps = step_count(p, t, steps_per_unit);
    const double h = t / steps;
    Matrix u = Matrix::Identity(space.dim(), space.dim());
    for (int k = 0; k < steps; ++k) {
        const double mid = (k + 0.5) * h;
        u = expm(Matrix(-kI * h * parts.at(mid))) * u;
    }
    return Operator(space, std::move(u));
}

Operator magnus4_ith(const ModelParams& p, double t, const SpaceConfig& space, int steps_per_unit) {
    const IthParts parts = ith_parts(p, space);
    const int steps = step_count(p, t, steps_per_unit);
    const double h = t / steps;
    const double c = std::sqrt(3.0) / 6.0;
    Matrix u = Matrix::Identity(space.dim(), space.dim());
    for (int k = 0; k < steps; ++k) {
        const Matrix a1 = -kI * parts.at((k + 0.5 - c) * h);
        const Matrix a2 = -kI * parts.at((k + 0.5 + c) * h);
        const Matrix omega = 0.5 * h * (a1 + a2) + (std::sqrt(3.0) * h * h / 12.0) * (a2 * a1 - a1 * a2);
        u = expm(omega) * u;
    }
    return Operator(space, std::move(u));
}

Operator frame_chain(const ModelParams& p, double t, const SpaceConfig& space, ChainRoute route) {
    const Operator td = t_delta(p, space);
    Operator hb = bh(p, space, route == ChainRoute::closed_form ? BhRoute::closed_form : BhRoute::conjugation);
    if (route == ChainRoute::closed_form) hb += bh_scalar_offset(p) * Operator::identity(space);
    return rotating_frame(t, p.omega_L, space).adjoint() * td.adjoint() * exact_propagator(hb, t) * td;
}

ConvergenceFit fit_order(const std::vector<double>& grid, const std::vector<double>& residuals) {
    if (grid.size() < 4) throw InvalidArgument("fit_order: need at least 4 grid points");
    if (grid.size() != residuals.size()) throw InvalidArgument("fit_order: grid and residuals differ in length");
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (!(grid[i] > 0.0)) throw InvalidArgument("fit_order: grid must be strictly positive");
        if (!(residuals[i] > 0.0)) {
            std::ostringstream msg;
            msg << "fit_order: non-positive residual " << residuals[i] << " at lambda = " << grid[i]
                << " (exact cancellation; shrink the tolerance)";
            throw NumericalDiagnostic(msg.str());
        }
    }
    const std::size_t n = grid.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = std::log(grid[i]);
        y[i] = std::log(residuals[i]);
    }
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit_order: grid points must differ");
    ConvergenceFit fit;
    fit.lambdas = grid;
    fit.residuals = residuals;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r_squared = syy == 0.0 ? 0.0 : (sxy * sxy) / (sxx * syy);
    return fit;
}

ConvergenceFit fit_order(const std::function<double(double)>& residual_fn, const std::vector<double>& grid) {
    std::vector<double> r;
    r.reserve(grid.size());
    for (double l : grid) r.push_back(residual_fn(l));
    return fit_order(grid, r);
}

namespace {

constexpr double kOverlapThreshold = 0.8;

double weight(const Matrix& vectors, int col, const std::vector<int>& rows) {
    double w = 0.0;
    for (int r : rows) w += std::norm(vectors(r, col));
    return w;
}

}  // namespace

std::pair<double, double> exact_pair(int n, const Operator& h) {
    if (n < 1) throw InvalidArgument("exact_pair: n must be >= 1");
    const SpaceConfig& space = h.space();
    if (n > space.interior_top()) throw InvalidArgument("exact_pair: n lies outside the interior block");
    const EigenSystem es = exact_eigs(h);
    const std::vector<int> rows{BasisIndex{n - 1, Spin::e}.flat(), BasisIndex{n, Spin::g}.flat()};
    int best = -1, second = -1;
    double wb = -1.0, ws = -1.0;
    for (int j = 0; j < es.vectors.cols(); ++j) {
        const double w = weight(es.vectors, j, rows);
        if (w > wb) {
            second = best, ws = wb;
            best = j, wb = w;
        } else if (w > ws) {
            second = j, ws = w;
        }
    }
    if (wb < kOverlapThreshold || ws < kOverlapThreshold) {
        std::ostringstream msg;
        msg << "exact_pair: overlap ambiguity for n = " << n << " (weights " << wb << ", " << ws << " < "
            << kOverlapThreshold << ")";
        throw NumericalDiagnostic(msg.str());
    }
    const double e1 = es.values(best), e2 = es.values(second);
    return {std::min(e1, e2), std::max(e1, e2)};
}

double exact_vacuum_level(const Operator& h) {
    const EigenSystem es = exact_eigs(h);
    const std::vector<int> rows{BasisIndex{0, Spin::g}.flat()};
    int best = 0;
    double wb = -1.0;
    for (int j = 0; j < es.vectors.cols(); ++j) {
        const double w = weight(es.vectors, j, rows);
        if (w > wb) best = j, wb = w;
    }
    if (wb < kOverlapThreshold) throw NumericalDiagnostic("exact_vacuum_level: overlap ambiguity");
    return es.values(best);
}

namespace {

void refine_minimum(GapScan& scan) {
    const auto& offsets = scan.detuning_offsets;
    const auto it = std::min_element(scan.gaps.begin(), scan.gaps.end());
    const std::size_t i = static_cast<std::size_t>(it - scan.gaps.begin());
    scan.argmin = offsets[i];
    scan.min_gap = *it;
    if (i > 0 && i + 1 < offsets.size()) {
        // parabola through the three points around the grid minimum
        const double x0 = offsets[i - 1], x1 = offsets[i], x2 = offsets[i + 1];
        const double y0 = scan.gaps[i - 1], y1 = scan.gaps[i], y2 = scan.gaps[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
        const double curv = (d12 - d01) / (x2 - x0);
        if (curv > 0.0) {
            const double xm = 0.5 * (x0 + x1) - d01 / (2.0 * curv);
            scan.argmin = xm;
            scan.min_gap = y1 + d01 * (xm - x1) + curv * (xm - x0) * (xm - x1);
        }
    }
    scan.half_detuning_argmin = 0.5 * scan.argmin;
}

}  // namespace

GapScan scan_gap(int n, const BhParams& p_base, const std::vector<double>& offsets, const SpaceConfig& space) {
    if (n < 1) throw InvalidArgument("scan_gap: n must be >= 1");
    if (offsets.size() < 3) throw InvalidArgument("scan_gap: need at least 3 offsets");
    GapScan scan;
    scan.detuning_offsets = offsets;
    for (double off : offsets) {
        BhParams p = p_base;
        p.delta_breve = p_base.nu + off;
        const auto [lo, hi] = exact_pair(n, bh(p, space));
        scan.gaps.push_back(hi - lo);
    }
    refine_minimum(scan);
    return scan;
}

BhParams scan_point(const ModelParams& p_base, double offset) {
    p_base.validate();
    const double db = p_base.nu + offset;
    const double four_omega2 = 4.0 * p_base.Omega_R * p_base.Omega_R;
    if (db * db < four_omega2) {
        std::ostringstream msg;
        msg << "scan_gap: delta_breve = " << db << " is below 2 Omega_R = " << 2.0 * p_base.Omega_R;
        throw InvalidArgument(msg.str());
    }
    const double sign = p_base.detuning() < 0.0 ? -1.0 : 1.0;
    const double delta = sign * std::sqrt(db * db - four_omega2);
    const double lambda = p_base.lambda();
    BhParams p;
    p.nu = p_base.nu;
    p.delta_breve = db;
    p.lambda = lambda;
    if (p_base.Omega_R == 0.0) {
        p.eta_breve = p_base.eta;
    } else {
        const double eta = lambda * db / p_base.Omega_R;
        p.eta_breve = delta * eta / db;
    }
    return p;
}

GapScan scan_gap(int n, const ModelParams& p_base, const std::vector<double>& offsets, const SpaceConfig& space) {
    if (n < 1) throw InvalidArgument("scan_gap: n must be >= 1");
    if (offsets.size() < 3) throw InvalidArgument("scan_gap: need at least 3 offsets");
    GapScan scan;
    scan.detuning_offsets = offsets;
    for (double off : offsets) {
        const auto [lo, hi] = exact_pair(n, bh(scan_point(p_base, off), space));
        scan.gaps.push_back(hi - lo);
    }
    refine_minimum(scan);
    return scan;
}

}  // namespace iontrap
