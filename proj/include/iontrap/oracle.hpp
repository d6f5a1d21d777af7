// oracle.hpp — ground truth: exact diagonalization and propagation, an
// independent Magnus integrator for H(t), log-log order fits, gap scans

#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "iontrap/operators.hpp"
#include "iontrap/params.hpp"

namespace iontrap {

struct EigenSystem {
    Eigen::VectorXd values;  // ascending
    Matrix vectors;          // columns
};

/// Symmetrizes H; rejects a hermiticity defect above 1e−10·max(1, ‖H‖).
EigenSystem exact_eigs(const Operator& h);

/// expm(−iHt).
Operator exact_propagator(const Operator& h, double t);

/// Time-ordered propagator of H(t) from 0 to t with the exponential midpoint
/// rule (second-order Magnus), ceil(steps_per_unit·ν|t|) uniform steps.
Operator magnus2_ith(const ModelParams& p, double t, const SpaceConfig& space, int steps_per_unit = 200);

/// Fourth-order Magnus (two Gauss points) on the same grid; used to tell
/// integrator error apart from frame-chain error.
Operator magnus4_ith(const ModelParams& p, double t, const SpaceConfig& space, int steps_per_unit = 200);

/// R_t† T_Δ† e^{−iH̆t} T_Δ, with H̆ by conjugation or from the closed-form
/// series plus bh_scalar_offset.
enum class ChainRoute { closed_form, conjugation };
Operator frame_chain(const ModelParams& p, double t, const SpaceConfig& space,
                     ChainRoute route = ChainRoute::conjugation);

struct ConvergenceFit {
    std::vector<double> lambdas;
    std::vector<double> residuals;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;

    bool conclusive() const { return r_squared >= 0.95; }
};

/// Least squares of log residual against log λ. Needs ≥ 4 positive grid
/// points; a non-positive residual throws NumericalDiagnostic.
ConvergenceFit fit_order(const std::function<double(double)>& residual_fn, const std::vector<double>& grid);
ConvergenceFit fit_order(const std::vector<double>& grid, const std::vector<double>& residuals);

/// The standard λ grid.
inline const std::vector<double> kLambdaGrid{0.02, 0.04, 0.08, 0.16};

struct GapScan {
    std::vector<double> detuning_offsets;  // δ̆ − ν
    std::vector<double> gaps;              // exact E_{n,+} − E_{n,−}
    double argmin = 0.0;                   // in δ̆ − ν
    double half_detuning_argmin = 0.0;     // in ½(δ̆ − ν)
    double min_gap = 0.0;
};

/// Pair (n−1, e) / (n, g) tracked by overlap (≥ 0.8) across δ̆ = ν + offset,
/// with λ and Δ = η̆/λ held fixed.
GapScan scan_gap(int n, const BhParams& p_base, const std::vector<double>& offsets, const SpaceConfig& space);
/// Laser-parameter form: δ moves at fixed Ω_R, η rescaled so λ stays put,
/// η̆ recomputed.
GapScan scan_gap(int n, const ModelParams& p_base, const std::vector<double>& offsets, const SpaceConfig& space);

/// The BhParams used by the laser-parameter scan at one offset.
BhParams scan_point(const ModelParams& p_base, double offset);

/// Exact E_{n,−}, E_{n,+} of H̆ by overlap with span{|n−1,e>, |n,g>}.
std::pair<double, double> exact_pair(int n, const Operator& h);
/// Exact eigenvalue with the largest |0,g> weight.
double exact_vacuum_level(const Operator& h);

}  // namespace iontrap
