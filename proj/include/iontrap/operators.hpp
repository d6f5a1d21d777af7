// operators.hpp — truncated Fock ⊗ spin-½ operator algebra

#pragma once

#include <complex>
#include <functional>

#include <Eigen/Dense>

namespace iontrap {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

enum class Spin { g = 0, e = 1 };

/// Truncation of the oscillator: Fock levels 0..n_max are kept, and levels
/// above n_max - interior_margin are excluded whenever two operators are
/// compared ("interior block").
struct SpaceConfig {
    int n_max = 40;
    int interior_margin = 10;

    /// Throws InvalidArgument unless n_max >= 4, margin >= 1 and
    /// n_max - margin >= 2.
    void validate() const;

    int dim() const { return 2 * (n_max + 1); }
    /// Highest Fock level inside the interior block.
    int interior_top() const { return n_max - interior_margin; }
    int interior_dim() const { return 2 * (interior_top() + 1); }

    friend bool operator==(const SpaceConfig&, const SpaceConfig&) = default;
};

/// |fock> ⊗ |spin>, flattened as 2*fock + spin.
struct BasisIndex {
    int fock = 0;
    Spin spin = Spin::g;

    int flat() const { return 2 * fock + static_cast<int>(spin); }
    static BasisIndex from_flat(int index);

    friend bool operator==(const BasisIndex&, const BasisIndex&) = default;
};

/// Dense complex operator on a fixed SpaceConfig. Entries are always finite;
/// combining operators from different spaces throws DimensionMismatch.
class Operator {
public:
    Operator(const SpaceConfig& space, Matrix entries);

    static Operator zero(const SpaceConfig& space);
    static Operator identity(const SpaceConfig& space);

    const SpaceConfig& space() const { return space_; }
    const Matrix& matrix() const { return m_; }
    int dim() const { return static_cast<int>(m_.rows()); }

    Complex operator()(const BasisIndex& row, const BasisIndex& col) const {
        return m_(row.flat(), col.flat());
    }

    Operator adjoint() const;

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex s);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);
    friend Operator operator*(Complex s, Operator op) { return op *= s; }
    friend Operator operator*(Operator op, Complex s) { return op *= s; }
    friend Operator operator*(double s, Operator op) { return op *= Complex(s, 0.0); }
    friend Operator operator-(Operator op) { return op *= Complex(-1.0, 0.0); }

private:
    SpaceConfig space_;
    Matrix m_;
};

void require_same_space(const Operator& a, const Operator& b);

// --- elementary operators -------------------------------------------------

Operator annihilation(const SpaceConfig& space);
Operator creation(const SpaceConfig& space);
Operator number(const SpaceConfig& space);

enum class Pauli { z, plus, minus, x, y };
Operator pauli(Pauli which, const SpaceConfig& space);

/// |s><s| on the spin factor.
Operator spin_projector(Spin s, const SpaceConfig& space);

/// f(n̂) ⊗ I.
Operator fock_function(const SpaceConfig& space, const std::function<Complex(int)>& f);

/// Diagonal operator with entry f(n, spin) on |n> ⊗ |spin>.
Operator diagonal(const SpaceConfig& space, const std::function<Complex(int, Spin)>& f);

/// exp(iπ n̂), evaluated exactly as (-1)^n.
Operator parity(const SpaceConfig& space);

/// D(α) = exp(α a† − α* a), exponentiated on the truncated space.
Operator displacement(Complex alpha, const SpaceConfig& space);

// --- numerical primitives -------------------------------------------------

/// Matrix exponential. Hermitian and anti-hermitian arguments go through an
/// eigendecomposition (exactly unitary results for anti-hermitian input);
/// anything else through Padé scaling-and-squaring. Throws NumericalDiagnostic
/// on non-finite input.
Matrix expm(const Matrix& a);
Operator expm(const Operator& a);

/// Largest singular value.
double op_norm(const Matrix& a);
double op_norm(const Operator& a);

Operator commutator(const Operator& a, const Operator& b);
Operator adjoint(const Operator& a);

/// P A P, P = projector onto Fock levels <= n_max - interior_margin.
Operator interior_project(const Operator& a);

/// op_norm(interior_project(a)).
double interior_norm(const Operator& a);
double interior_distance(const Operator& a, const Operator& b);

double hermiticity_defect(const Operator& a);
double unitarity_defect(const Operator& u);

}  // namespace iontrap
