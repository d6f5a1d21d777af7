// params.hpp — physical inputs and the quantities derived from them

#pragma once

namespace iontrap {

/// Single trapped ion driven by a traveling-wave laser. Frequencies are
/// angular; canonical units set nu = 1.
struct ModelParams {
    double nu = 1.0;        // trap frequency
    double omega_ge = 1.0;  // internal transition
    double omega_L = 0.0;   // laser
    double Omega_R = 0.0;   // Rabi frequency
    double eta = 0.0;       // Lamb-Dicke factor

    void validate() const;

    /// δ = ω_ge − ω_L.
    double detuning() const { return omega_ge - omega_L; }
    /// Δ = δ/Ω_R; throws InvalidArgument when Ω_R = 0.
    double reduced_detuning() const;
    /// δ̆ = sqrt(4Ω_R² + δ²).
    double balanced_detuning() const;
    /// η̆ = δη/δ̆ (= Δη/sqrt(4+Δ²)).
    double eta_breve() const;
    /// λ = Ω_R η/δ̆ (= η/sqrt(4+Δ²)).
    double lambda() const;
    /// θ in [−π/2, π/2] with tan θ = Δ/2.
    double theta() const;

    /// Copy with ω_ge shifted so that δ = delta (ω_L unchanged).
    ModelParams with_detuning(double delta) const;
};

/// Jaynes-Cummings model.
struct JCParams {
    double nu = 1.0;
    double omega = 1.0;
    double lambda = 0.0;

    bool resonant(double tol = 1e-8) const;
};

/// The four numbers the balanced Hamiltonian depends on.
struct BhParams {
    double nu = 1.0;
    double delta_breve = 1.0;
    double eta_breve = 0.0;
    double lambda = 0.0;

    void validate() const;

    static BhParams from_model(const ModelParams& p);

    /// Δ = η̆/λ; throws InvalidArgument when λ = 0.
    double reduced_detuning() const;

    /// Same Δ = η̆/λ, new λ (η̆ rescaled). When λ = 0 the current η̆ is kept.
    BhParams with_lambda(double new_lambda) const;

    /// Resonance ν = δ̆ within tol·ν.
    bool resonant(double tol = 1e-8) const;
};

}  // namespace iontrap
