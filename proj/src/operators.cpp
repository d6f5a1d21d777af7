// operators.cpp — truncated Fock ⊗ spin-½ operator algebra

#include "iontrap/operators.hpp"

#include <cmath>
#include <sstream>

#include <unsupported/Eigen/MatrixFunctions>

#include "iontrap/error.hpp"

namespace iontrap {

void SpaceConfig::validate() const {
    if (n_max < 4 || interior_margin < 1 || n_max - interior_margin < 2) {
        std::ostringstream msg;
        msg << "invalid SpaceConfig (n_max=" << n_max << ", interior_margin=" << interior_margin
            << "): need n_max >= 4, interior_margin >= 1, n_max - interior_margin >= 2";
        throw InvalidArgument(msg.str());
    }
}

BasisIndex BasisIndex::from_flat(int index) {
    if (index < 0) throw InvalidArgument("negative basis index");
    return BasisIndex{index / 2, (index % 2) == 0 ? Spin::g : Spin::e};
}

Operator::Operator(const SpaceConfig& space, Matrix entries) : space_(space), m_(std::move(entries)) {
    space_.validate();
    if (m_.rows() != space_.dim() || m_.cols() != space_.dim()) {
        std::ostringstream msg;
        msg << "operator of size " << m_.rows() << "x" << m_.cols() << " does not match space dim "
            << space_.dim();
        throw DimensionMismatch(msg.str());
    }
    if (!m_.allFinite()) throw NumericalDiagnostic("operator has non-finite entries");
}

Operator Operator::zero(const SpaceConfig& space) {
    return Operator(space, Matrix::Zero(space.dim(), space.dim()));
}

Operator Operator::identity(const SpaceConfig& space) {
    return Operator(space, Matrix::Identity(space.dim(), space.dim()));
}

Operator Operator::adjoint() const { return Operator(space_, m_.adjoint()); }

void require_same_space(const Operator& a, const Operator& b) {
    if (!(a.space() == b.space())) {
        std::ostringstream msg;
        msg << "operators live on different spaces (dim " << a.dim() << " vs " << b.dim() << ")";
        throw DimensionMismatch(msg.str());
    }
}

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_space(*this, rhs);
    m_ += rhs.m_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_space(*this, rhs);
    m_ -= rhs.m_;
    return *this;
}

Operator& Operator::operator*=(Complex s) {
    m_ *= s;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same_space(lhs, rhs);
    return Operator(lhs.space_, lhs.m_ * rhs.m_);
}

// --- elementary operators -------------------------------------------------

Operator annihilation(const SpaceConfig& space) {
    space.validate();
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    for (int n = 1; n <= space.n_max; ++n) {
        const double amp = std::sqrt(static_cast<double>(n));
        for (int s = 0; s < 2; ++s) m(2 * (n - 1) + s, 2 * n + s) = amp;
    }
    return Operator(space, std::move(m));
}

Operator creation(const SpaceConfig& space) { return annihilation(space).adjoint(); }

Operator number(const SpaceConfig& space) {
    return fock_function(space, [](int n) { return Complex(n, 0.0); });
}

Operator pauli(Pauli which, const SpaceConfig& space) {
    space.validate();
    // 2x2 block in (g, e) order.
    Eigen::Matrix2cd s = Eigen::Matrix2cd::Zero();
    switch (which) {
        case Pauli::z: s << -1, 0, 0, 1; break;
        case Pauli::plus: s(1, 0) = 1; break;  // |e><g|
        case Pauli::minus: s(0, 1) = 1; break;  // |g><e|
        case Pauli::x: s << 0, 1, 1, 0; break;
        case Pauli::y: s(1, 0) = -kI; s(0, 1) = kI; break;  // −i(σ₊ − σ₋)
    }
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n <= space.n_max; ++n) m.block<2, 2>(2 * n, 2 * n) = s;
    return Operator(space, std::move(m));
}

Operator spin_projector(Spin s, const SpaceConfig& space) {
    return diagonal(space, [s](int, Spin spin) { return spin == s ? Complex(1.0) : Complex(0.0); });
}

Operator fock_function(const SpaceConfig& space, const std::function<Complex(int)>& f) {
    return diagonal(space, [&f](int n, Spin) { return f(n); });
}

Operator diagonal(const SpaceConfig& space, const std::function<Complex(int, Spin)>& f) {
    space.validate();
    Matrix m = Matrix::Zero(space.dim(), space.dim());
    for (int n = 0; n <= space.n_max; ++n) {
        m(2 * n, 2 * n) = f(n, Spin::g);
        m(2 * n + 1, 2 * n + 1) = f(n, Spin::e);
    }
    return Operator(space, std::move(m));
}

Operator parity(const SpaceConfig& space) {
    return fock_function(space, [](int n) { return Complex(n % 2 == 0 ? 1.0 : -1.0, 0.0); });
}

Operator displacement(Complex alpha, const SpaceConfig& space) {
    const Operator a = annihilation(space);
    const Operator generator = alpha * a.adjoint() - std::conj(alpha) * a;
    return expm(generator);
}

// --- numerical primitives -------------------------------------------------

namespace {

enum class Symmetry { hermitian, anti_hermitian, general };

Symmetry classify(const Matrix& a) {
    const double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
    const double tol = 1e-14 * scale;
    if ((a - a.adjoint()).cwiseAbs().maxCoeff() <= tol) return Symmetry::hermitian;
    if ((a + a.adjoint()).cwiseAbs().maxCoeff() <= tol) return Symmetry::anti_hermitian;
    return Symmetry::general;
}

Matrix spectral_exp(const Matrix& h, Complex factor) {
    // exp(factor * h) for hermitian h.
    const Matrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(sym);
    if (es.info() != Eigen::Success) throw NumericalDiagnostic("eigendecomposition failed in expm");
    const Eigen::VectorXcd phases =
        (factor * es.eigenvalues().cast<Complex>()).array().exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace

Matrix expm(const Matrix& a) {
    if (!a.allFinite()) throw NumericalDiagnostic("expm: non-finite input");
    switch (classify(a)) {
        case Symmetry::hermitian: return spectral_exp(a, Complex(1.0, 0.0));
        case Symmetry::anti_hermitian: return spectral_exp(-kI * a, kI);
        case Symmetry::general: break;
    }
    Matrix result = a.exp();
    if (!result.allFinite()) throw NumericalDiagnostic("expm: overflow");
    return result;
}

Operator expm(const Operator& a) { return Operator(a.space(), expm(a.matrix())); }

double op_norm(const Matrix& a) {
    if (a.size() == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(a);
    return svd.singularValues()(0);
}

double op_norm(const Operator& a) { return op_norm(a.matrix()); }

Operator commutator(const Operator& a, const Operator& b) { return a * b - b * a; }

Operator adjoint(const Operator& a) { return a.adjoint(); }

Operator interior_project(const Operator& a) {
    const int k = a.space().interior_dim();
    Matrix m = Matrix::Zero(a.dim(), a.dim());
    m.topLeftCorner(k, k) = a.matrix().topLeftCorner(k, k);
    return Operator(a.space(), std::move(m));
}

double interior_norm(const Operator& a) {
    // With the 2*fock + spin ordering, P A P is the leading principal block.
    const int k = a.space().interior_dim();
    return op_norm(Matrix(a.matrix().topLeftCorner(k, k)));
}

double interior_distance(const Operator& a, const Operator& b) { return interior_norm(a - b); }

double hermiticity_defect(const Operator& a) { return op_norm(a.matrix() - a.matrix().adjoint()); }

double unitarity_defect(const Operator& u) {
    return op_norm(Matrix(u.matrix().adjoint() * u.matrix() - Matrix::Identity(u.dim(), u.dim())));
}

}  // namespace iontrap
