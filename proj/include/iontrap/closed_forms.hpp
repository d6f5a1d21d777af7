// closed_forms.hpp — explicit first/second-order operators of the balanced
// Hamiltonian, JC-type evolutors, the first-order evolutor and the
// second-order spectrum.
//
// All operators carry their λ powers. Functions of n̂ are diagonal in the
// Fock basis; sin(x√k)/√k at k = 0 takes its limit x.

#pragma once

#include <vector>

#include "iontrap/operators.hpp"
#include "iontrap/params.hpp"
#include "iontrap/perturbation.hpp"

namespace iontrap {

enum class RegimeKind { eta_much_less, eta_comparable, eta_much_greater, near_resonant };

struct Regime {
    RegimeKind kind = RegimeKind::eta_much_less;
    bool resonant = false;  // ν = δ̆ within eps_deg
    double rho = 0.1;       // near_resonant needs |ν − δ̆| ≤ ρν
    double eps_deg = kDefaultDegeneracyTol;
};

/// The kind is caller intent and never inferred; this only checks the
/// near-resonant bound and fills the resonant flag.
Regime make_regime(RegimeKind kind, const BhParams& p, double rho = 0.1, double eps_deg = kDefaultDegeneracyTol);
const char* regime_name(RegimeKind kind);

struct FirstSecondOrder {
    Operator C1;
    Operator Z1;
    Operator C2;
};

FirstSecondOrder bh_first_second_order(const BhParams& p, const Regime& regime, const SpaceConfig& space);

/// Input handed to the engine for a regime: λ is factored out of the series.
struct EngineProblem {
    Operator h0;
    InteractionSeries series;
    double lambda = 0.0;
};
EngineProblem engine_problem(const BhParams& p, const Regime& regime, const SpaceConfig& space);

/// Engine output for the same regime, rescaled to carry λ powers.
FirstSecondOrder engine_first_second_order(const BhParams& p, const Regime& regime, const SpaceConfig& space);

/// Reference operator the first-order constants commute with: H̆₀, or
/// ν(n̂ + ½σ_z) + λη̆ν in the near-resonant split.
Operator regime_reference(const BhParams& p, const Regime& regime, const SpaceConfig& space);

// --- evolutors ------------------------------------------------------------

/// exp(−i𝒮t) in closed form; needs ν = ω.
Operator jc_evolutor(double t, const JCParams& p, const SpaceConfig& space);
/// exp(−iC̆₁t), C̆₁ = iλν(aσ₊ − a†σ₋), in closed form; needs ν = δ̆.
Operator jc_evolutor_breve(double t, const BhParams& p, const SpaceConfig& space);
/// exp(−iH̆₀t) (diagonal).
Operator bh_reference_evolutor(double t, const BhParams& p, const SpaceConfig& space);
/// ℜ(t) = exp(−iH̆₀t) JC̆(t).
Operator rwa_evolutor(double t, const BhParams& p, const SpaceConfig& space);
/// 𝔈₁(t) = e^{−iZ₁} e^{−iH_ref t} e^{−iC₁t} e^{iZ₁}.
Operator first_order_evolutor(double t, const BhParams& p, const Regime& regime, const SpaceConfig& space);
/// exp(iZ̆₁) in closed form; needs ν = δ̆.
Operator exp_z1(const BhParams& p, const SpaceConfig& space);
/// e^{−iZ̆₁} e^{−iH̆₀t} e^{iZ̆₁} from its α/β/κ block form; needs ν = δ̆.
Operator sandwich(double t, const BhParams& p, const SpaceConfig& space);
/// κ_λ(n̂) as a Fock-diagonal operator.
Operator sandwich_kappa(const BhParams& p, const SpaceConfig& space);
/// ∫₀ᵗ Y̆₁(τ)dτ with Y̆₁(t) = iλν(aσ₋e^{i2νt} − a†σ₊e^{−i2νt}).
Operator y1_integral(double t, const BhParams& p, const SpaceConfig& space);
/// exp(−i∫₀ᵗY̆₁) ℜ(t).
Operator y1_relation(double t, const BhParams& p, const SpaceConfig& space);

// --- second-order spectrum ------------------------------------------------

struct Level {
    int n = 0;
    double E_minus = 0.0;
    double E_plus = 0.0;
};

struct SecondOrderSpectrum {
    double E0 = 0.0;  // the unpaired |0, g> level
    std::vector<Level> levels;  // n = 1 … n_levels
    std::vector<double> A;      // 𝔄_n
    std::vector<double> B;      // 𝔅_n
};

/// Needs |ν − δ̆| ≤ ρν.
SecondOrderSpectrum spectrum_second_order(const BhParams& p, int n_levels, double rho = 0.1);
/// Same formulas with every λ² term outside the coupling dropped.
SecondOrderSpectrum spectrum_first_order(const BhParams& p, int n_levels, double rho = 0.1);

/// |c|²/(b² + |c|²) sin²(√(b² + |c|²) t).
double transition_probability(double t, double b, Complex c);

/// ½λ²νn; n ≥ 1.
double anticrossing_shift(int n, const BhParams& p);
/// Same shift from the laser parameters, λ = Ω_R η/√(4Ω_R² + δ²).
double anticrossing_shift(int n, const ModelParams& p);

}  // namespace iontrap
