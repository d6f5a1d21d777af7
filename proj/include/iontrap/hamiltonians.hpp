// hamiltonians.hpp — JC model, ion-trap Hamiltonian, rotating frame, the
// T_Δ chain to the balanced Hamiltonian and the exp(iπ n̂ σ_x/2) picture.
//
// Block-matrix conventions follow the two-component (e, g) layout: the upper
// row/column is the excited state, so σ_z = diag(1, −1) and σ_+ = |e><g|.
//
// Degeneracy of the balanced reference H̆₀ = ν n̂ + ½δ̆σ_z + λη̆ν happens when
// an integer number of trap quanta matches the spin gap, m ν = δ̆ (the same
// condition also appears written as ν = m δ̆). Nothing here depends on which
// reading is meant: the perturbation engine clusters eigenvalues numerically.

#pragma once

#include <utility>

#include "iontrap/operators.hpp"
#include "iontrap/params.hpp"

namespace iontrap {

// --- Jaynes-Cummings ------------------------------------------------------

/// H_JC = ν n̂ + ½ω σ_z + λν(aσ₊ + a†σ₋).
Operator jc_hamiltonian(const JCParams& p, const SpaceConfig& space);

struct JCConstants {
    Operator excitation;  // 𝒩 = ν(n̂ + ½σ_z)
    Operator coupling;    // 𝒮 = ½(ω−ν)σ_z + λν(aσ₊ + a†σ₋)
};
JCConstants jc_constants(const JCParams& p, const SpaceConfig& space);

// --- ion trap and rotating frame ------------------------------------------

/// R_t = exp(i½ω_L t σ_z).
Operator rotating_frame(double t, double omega_L, const SpaceConfig& space);

/// H(t) = ν n̂ + ½ω_ge σ_z + Ω_R(e^{iω_L t}σ₋D(iη)† + e^{−iω_L t}σ₊D(iη)).
Operator ith(double t, const ModelParams& p, const SpaceConfig& space);

/// H̃ = ν n̂ + ½δσ_z + Ω_R(σ₋D(iη)† + σ₊D(iη)).
Operator rfh(const ModelParams& p, const SpaceConfig& space);

/// H̃₀ = ν n̂ + ½δσ_z.
Operator rfh_reference(const ModelParams& p, const SpaceConfig& space);

/// The three Lamb-Dicke RWA interactions: carrier (δ ≃ 0), minus (δ + ν ≃ 0)
/// and plus (δ − ν ≃ 0).
enum class RwaKind { carrier, minus, plus };
Operator rwa_effective(RwaKind which, const ModelParams& p, const SpaceConfig& space);

// --- the T_Δ chain --------------------------------------------------------

struct TDeltaCoefficients {
    double kappa_plus = 0.0;
    double kappa_minus = 0.0;
    double eps_plus = 0.0;
    double eps_minus = 0.0;
};
/// κ_Δ^± and ε_Δ^±, with sign(0) taken as +1.
TDeltaCoefficients t_delta_coefficients(double reduced_detuning);

/// Moya-Cessa transformation, 𝒟 = D(iη/2).
Operator t1(const ModelParams& p, const SpaceConfig& space);
/// Spin rotation by θ about y.
Operator t2(const ModelParams& p, const SpaceConfig& space);
Operator t2_angle(double theta, const SpaceConfig& space);
/// diag(D(iη̆/2), D(iη̆/2)†).
Operator t3(const ModelParams& p, const SpaceConfig& space);
/// Closed-form T_Δ (equals T₃T₂T₁).
Operator t_delta(const ModelParams& p, const SpaceConfig& space);

// --- balanced Hamiltonian -------------------------------------------------

/// H̆₀ = ν n̂ + ½δ̆σ_z + λη̆ν.
Operator bh_reference(const BhParams& p, const SpaceConfig& space);

/// Term m of the H̆↕ expansion: m = 0 is iλν(a − a†)(σ₊ + σ₋), and for m ≥ 1
/// iλν (iη̆)^m/m! (a² − a†² + 1 − m)(a + a†)^{m−1}(σ₊ + (−1)^m σ₋).
/// Returned as its hermitian part (identical away from the truncation edge).
Operator bh_interaction_term(int m, const BhParams& p, const SpaceConfig& space);
Operator bh_interaction_series(const BhParams& p, int max_order, const SpaceConfig& space);

/// Smallest M with η̆^{M+1}‖a+a†‖_int^M e/(M+1)! < 1e−12.
int bh_series_order(const BhParams& p, const SpaceConfig& space);

/// iλν(a − a†)(σ₊ + σ₋) [+ λη̆ν(a†² − a²)(σ₊ − σ₋) when with_eta_term].
Operator bh_interaction_truncated(const BhParams& p, const SpaceConfig& space, bool with_eta_term);

enum class BhRoute { closed_form, conjugation };

/// H̆ = T_Δ H̃ T_Δ† (conjugation) or H̆₀ + H̆↕ summed to bh_series_order.
/// The two routes differ by the scalar bh_scalar_offset(p).
Operator bh(const ModelParams& p, const SpaceConfig& space, BhRoute route);

/// T_Δ H̃ T_Δ† − (H̆₀ + H̆↕) = (λ² − λη̆)ν. H̆₀ keeps the constant λη̆ν so the
/// closed forms built on it stay as written; exact conjugation gives λ²ν.
double bh_scalar_offset(const ModelParams& p);
/// Closed-form route from the reduced parameter set.
Operator bh(const BhParams& p, const SpaceConfig& space);

// --- the exp(iπ n̂ σ_x/2) picture ------------------------------------------

/// T = cos(π n̂/2) + i sin(π n̂/2)σ_x, evaluated exactly.
Operator check_transform(const SpaceConfig& space);

/// Ȟ₀ = ν n̂ + ½δ̆ e^{iπn̂}σ_z + λη̆ν.
Operator h_check_reference(const BhParams& p, const SpaceConfig& space);

/// m = 0: λν(a + a†); m ≥ 1: λν η̆^m/m! (a†² − a² + 1 − m)(a† − a)^{m−1}
/// times e^{iπn̂}(σ₋ − σ₊) for odd m and times 1 for even m, so that
/// T·(term m of H̆↕)·T† holds term by term. Hermitian part.
Operator h_check_interaction_term(int m, const BhParams& p, const SpaceConfig& space);

/// Ȟ = Ȟ₀ + Ȟ↕ summed to max_order (default: bh_series_order).
Operator h_check(const BhParams& p, const SpaceConfig& space, int max_order = -1);

}  // namespace iontrap
