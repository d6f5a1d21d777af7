// perturbation.hpp — order-by-order constants of motion C_n and minimal
// generators Z_n with e^{iZ(λ)} H(λ) e^{−iZ(λ)} = H₀ + C(λ) + O(λ^{N+1})

#pragma once

#include <vector>

#include "iontrap/operators.hpp"

namespace iontrap {

/// χ(x) = 1 if |x| ≤ eps else 0.
double chi(double x, double eps = 1e-12);
/// γ(x) = 0 if |x| ≤ eps else 1/x.
double gamma(double x, double eps = 1e-12);

/// Default clustering tolerance; absolute, in units where ν = 1.
inline constexpr double kDefaultDegeneracyTol = 1e-8;

struct SpectralDecomposition {
    Eigen::VectorXd eigenvalues;          // ascending
    Matrix eigenbasis;                    // columns are eigenvectors
    std::vector<int> cluster_of;          // cluster id per eigen-index
    std::vector<std::vector<int>> clusters;
    double eps_deg = kDefaultDegeneracyTol;
    SpaceConfig space;

    /// Σ E ‖n⟩⟨n‖.
    Operator reconstruct() const;
    /// Σ_{j∈cluster} ‖j⟩⟨j‖.
    Operator projector(int cluster) const;
};

/// Diagonalizes a hermitian H₀ and groups eigenvalues whose neighbours lie
/// within eps_deg. Throws ClusteringAmbiguous when a gap falls in
/// (eps_deg, 3 eps_deg).
SpectralDecomposition decompose(const Operator& h0, double eps_deg = kDefaultDegeneracyTol);

struct Split {
    Operator block_diag;
    Operator off_diag;
};
/// Σ_m P_m G P_m and the remainder.
Split diagonal_split(const Operator& g, const SpectralDecomposition& spec);

/// Terms H₁, H₂, …; term m multiplies λ^m.
struct InteractionSeries {
    std::vector<Operator> terms;

    /// H_m, or zero past the end.
    Operator term(int m, const SpaceConfig& space) const;
    void validate(const SpaceConfig& space) const;
};

/// G_n: every contribution to the order-n equation except i[Z_n, H₀].
/// z_prev holds Z₁ … Z_{n−1}.
Operator build_G(int n, const Operator& h0, const InteractionSeries& series,
                 const std::vector<Operator>& z_prev);

struct PerturbativeSolution {
    int order = 0;
    std::vector<Operator> C;  // C₁ … C_N
    std::vector<Operator> Z;  // Z₁ … Z_N
    std::vector<double> commutator_defect;  // ‖[C_n, H₀]‖ per order
    std::vector<double> tol_comm;           // 1e−9(‖H₀‖ + ‖G_n‖) per order
};

/// Minimal solution up to order N. Throws NumericalDiagnostic when an
/// invariant (hermiticity, commutation, minimality) fails.
PerturbativeSolution solve(const SpectralDecomposition& spec, const InteractionSeries& series, int N);

/// Z_n alone from G_n, in the minimal gauge.
Operator minimal_generator(const Operator& g, const SpectralDecomposition& spec);

struct Assembled {
    Operator h0n;  // e^{−iW} H₀ e^{iW}
    Operator cn;   // e^{−iW} Σ λ^k C_k e^{iW}
};
/// W = Σ_{k≤n} λ^k Z_k.
Assembled assemble(const Operator& h0, const PerturbativeSolution& sol, double lambda, int n);

/// H(λ) = H₀ + Σ λ^m H_m.
Operator full_hamiltonian(const Operator& h0, const InteractionSeries& series, double lambda);

/// ‖e^{iW} H(λ) e^{−iW} − H₀ − Σ_{k≤n} λ^k C_k‖ on the interior.
double residual(const Operator& h0, const InteractionSeries& series, const PerturbativeSolution& sol,
                double lambda, int n);

}  // namespace iontrap
