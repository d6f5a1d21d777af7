#include "iontrap/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "iontrap/error.hpp"

namespace iontrap {

double chi(double x, double eps) { return std::abs(x) <= eps ? 1.0 : 0.0; }

double gamma(double x, double eps) { return std::abs(x) <= eps ? 0.0 : 1.0 / x; }

namespace {

double scale_of(const Operator& x) { return std::max(1.0, op_norm(x)); }

void require_hermitian(const Operator& x, double tol, const char* what, int n) {
    const double defect = hermiticity_defect(x);
    if (defect > tol * scale_of(x)) {
        std::ostringstream msg;
        msg << what << " at order " << n << " is not hermitian (defect " << defect << ")";
        throw NumericalDiagnostic(msg.str());
    }
}

Matrix to_eigenbasis(const Operator& x, const SpectralDecomposition& spec) {
    return spec.eigenbasis.adjoint() * x.matrix() * spec.eigenbasis;
}

Operator from_eigenbasis(const Matrix& x, const SpectralDecomposition& spec) {
    return Operator(spec.space, spec.eigenbasis * x * spec.eigenbasis.adjoint());
}

// Sums over compositions by applying ad_{Z_k} from the inside out; the
// coefficient i^j/j! only depends on the number of parts j.
void expand(const Operator& x, int remaining, int depth, const std::vector<Operator>& z, int excluded_single,
            Operator& acc) {
    if (remaining == 0) {
        double fact = 1.0;
        for (int j = 2; j <= depth; ++j) fact *= j;
        acc += (std::pow(kI, depth) / fact) * x;
        return;
    }
    for (int k = 1; k <= remaining; ++k) {
        if (depth == 0 && k == excluded_single) continue;
        if (k > static_cast<int>(z.size())) continue;
        expand(commutator(z[k - 1], x), remaining - k, depth + 1, z, excluded_single, acc);
    }
}

}  // namespace

Operator SpectralDecomposition::reconstruct() const {
    return Operator(space, eigenbasis * eigenvalues.cast<Complex>().asDiagonal() * eigenbasis.adjoint());
}

Operator SpectralDecomposition::projector(int cluster) const {
    Matrix p = Matrix::Zero(eigenbasis.rows(), eigenbasis.cols());
    for (int j : clusters.at(cluster)) p += eigenbasis.col(j) * eigenbasis.col(j).adjoint();
    return Operator(space, std::move(p));
}

SpectralDecomposition decompose(const Operator& h0, double eps_deg) {
    if (!(eps_deg > 0.0)) throw InvalidArgument("decompose: eps_deg must be > 0");
    const double defect = hermiticity_defect(h0);
    if (defect > 1e-12 * scale_of(h0)) throw InvalidArgument("decompose: H0 is not hermitian");

    Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h0.matrix() + h0.matrix().adjoint()));
    if (es.info() != Eigen::Success) throw NumericalDiagnostic("decompose: eigensolver failed");

    SpectralDecomposition spec;
    spec.space = h0.space();
    spec.eps_deg = eps_deg;
    spec.eigenvalues = es.eigenvalues();
    spec.eigenbasis = es.eigenvectors();

    const auto& e = spec.eigenvalues;
    const int dim = static_cast<int>(e.size());
    spec.cluster_of.assign(dim, 0);
    spec.clusters.push_back({0});
    for (int j = 1; j < dim; ++j) {
        const double gap = e(j) - e(j - 1);
        if (gap > eps_deg && gap < 3.0 * eps_deg) {
            std::ostringstream msg;
            msg << "ambiguous clustering: gap " << gap << " between eigenvalues " << j - 1 << " and " << j
                << " lies in (eps_deg, 3 eps_deg) with eps_deg = " << eps_deg;
            throw ClusteringAmbiguous(msg.str());
        }
        if (gap > eps_deg) spec.clusters.emplace_back();
        spec.clusters.back().push_back(j);
        spec.cluster_of[j] = static_cast<int>(spec.clusters.size()) - 1;
    }
    for (const auto& c : spec.clusters) {
        if (e(c.back()) - e(c.front()) > eps_deg)
            throw ClusteringAmbiguous("ambiguous clustering: a chain of near-degenerate eigenvalues spans more than eps_deg");
    }
    return spec;
}

Split diagonal_split(const Operator& g, const SpectralDecomposition& spec) {
    require_same_space(g, Operator::zero(spec.space));
    const Matrix ge = to_eigenbasis(g, spec);
    Matrix block = Matrix::Zero(ge.rows(), ge.cols());
    for (const auto& c : spec.clusters)
        for (int j : c)
            for (int k : c) block(j, k) = ge(j, k);
    Operator block_diag = from_eigenbasis(block, spec);
    Operator off_diag = g - block_diag;
    return Split{std::move(block_diag), std::move(off_diag)};
}

Operator InteractionSeries::term(int m, const SpaceConfig& space) const {
    if (m < 1 || m > static_cast<int>(terms.size())) return Operator::zero(space);
    return terms[m - 1];
}

void InteractionSeries::validate(const SpaceConfig& space) const {
    for (std::size_t m = 0; m < terms.size(); ++m) {
        require_same_space(terms[m], Operator::zero(space));
        require_hermitian(terms[m], 1e-12, "interaction term", static_cast<int>(m) + 1);
    }
}

Operator build_G(int n, const Operator& h0, const InteractionSeries& series, const std::vector<Operator>& z_prev) {
    if (n < 1) throw InvalidArgument("build_G: n must be >= 1");
    if (static_cast<int>(z_prev.size()) != n - 1) throw InvalidArgument("build_G: Z_prev must hold n-1 generators");
    Operator g = Operator::zero(h0.space());
    expand(h0, n, 0, z_prev, n, g);
    for (int m = 1; m <= n; ++m) expand(series.term(m, h0.space()), n - m, 0, z_prev, 0, g);
    return g;
}

Operator minimal_generator(const Operator& g, const SpectralDecomposition& spec) {
    const Matrix ge = to_eigenbasis(g, spec);
    const auto& e = spec.eigenvalues;
    Matrix z = Matrix::Zero(ge.rows(), ge.cols());
    for (int j = 0; j < z.rows(); ++j) {
        for (int k = 0; k < z.cols(); ++k) {
            if (spec.cluster_of[j] == spec.cluster_of[k]) continue;
            z(j, k) = kI * (1.0 / (e(k) - e(j))) * ge(j, k);
        }
    }
    return from_eigenbasis(z, spec);
}

PerturbativeSolution solve(const SpectralDecomposition& spec, const InteractionSeries& series, int N) {
    if (N < 1) throw InvalidArgument("solve: N must be >= 1");
    series.validate(spec.space);
    const Operator h0 = spec.reconstruct();
    const double h0_norm = op_norm(h0);

    PerturbativeSolution sol;
    sol.order = N;
    for (int n = 1; n <= N; ++n) {
        const Operator g = build_G(n, h0, series, sol.Z);
        require_hermitian(g, 1e-10, "G", n);
        Operator c = diagonal_split(g, spec).block_diag;
        Operator z = minimal_generator(g, spec);
        require_hermitian(c, 1e-10, "C", n);
        require_hermitian(z, 1e-10, "Z", n);

        const double tol = 1e-9 * (h0_norm + op_norm(g));
        const double comm = op_norm(commutator(c, h0));
        if (comm > tol) {
            std::ostringstream msg;
            msg << "[C_" << n << ", H0] = " << comm << " exceeds tol_comm = " << tol;
            throw NumericalDiagnostic(msg.str());
        }
        // the order-n equation itself: i[Z_n, H0] + G_n = C_n
        const double eq = op_norm(kI * commutator(z, h0) + g - c);
        if (eq > tol) {
            std::ostringstream msg;
            msg << "order-" << n << " equation residual " << eq << " exceeds tol_comm = " << tol;
            throw NumericalDiagnostic(msg.str());
        }
        sol.C.push_back(std::move(c));
        sol.Z.push_back(std::move(z));
        sol.commutator_defect.push_back(comm);
        sol.tol_comm.push_back(tol);
    }
    return sol;
}

namespace {

Operator generator_sum(const PerturbativeSolution& sol, double lambda, int n, const SpaceConfig& space) {
    Operator w = Operator::zero(space);
    double power = 1.0;
    for (int k = 1; k <= n; ++k) {
        power *= lambda;
        w += power * sol.Z[k - 1];
    }
    return w;
}

Operator constant_sum(const PerturbativeSolution& sol, double lambda, int n, const SpaceConfig& space) {
    Operator c = Operator::zero(space);
    double power = 1.0;
    for (int k = 1; k <= n; ++k) {
        power *= lambda;
        c += power * sol.C[k - 1];
    }
    return c;
}

void require_order(const PerturbativeSolution& sol, int n) {
    if (n < 0 || n > sol.order) throw InvalidArgument("requested order exceeds the solution order");
}

}  // namespace

Assembled assemble(const Operator& h0, const PerturbativeSolution& sol, double lambda, int n) {
    require_order(sol, n);
    const Operator u = expm(kI * generator_sum(sol, lambda, n, h0.space()));  // e^{iW}
    const Operator ud = u.adjoint();
    return Assembled{ud * h0 * u, ud * constant_sum(sol, lambda, n, h0.space()) * u};
}

Operator full_hamiltonian(const Operator& h0, const InteractionSeries& series, double lambda) {
    Operator h = h0;
    double power = 1.0;
    for (const auto& term : series.terms) {
        power *= lambda;
        h += power * term;
    }
    return h;
}

double residual(const Operator& h0, const InteractionSeries& series, const PerturbativeSolution& sol, double lambda,
                int n) {
    require_order(sol, n);
    const Operator u = expm(kI * generator_sum(sol, lambda, n, h0.space()));
    const Operator transformed = u * full_hamiltonian(h0, series, lambda) * u.adjoint();
    return interior_norm(transformed - h0 - constant_sum(sol, lambda, n, h0.space()));
}

}  // namespace iontrap
