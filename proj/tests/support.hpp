// support.hpp — shared helpers and independent oracles for the unit tests

#pragma once

#include <cmath>

#include "iontrap/operators.hpp"

namespace iontrap::testing {

inline SpaceConfig desk_space() { return SpaceConfig{40, 10}; }

/// exp(A) by scaling, a plain Taylor sum and squaring. Deliberately shares
/// nothing with the library's expm.
inline Matrix taylor_expm(const Matrix& a) {
    double norm = 0.0;
    for (int j = 0; j < a.cols(); ++j) norm = std::max(norm, a.col(j).cwiseAbs().sum());
    int squarings = 0;
    while (norm > 0.25) {
        norm *= 0.5;
        ++squarings;
    }
    const Matrix scaled = a / std::pow(2.0, squarings);
    Matrix term = Matrix::Identity(a.rows(), a.cols());
    Matrix sum = term;
    for (int k = 1; k <= 30; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int s = 0; s < squarings; ++s) sum = sum * sum;
    return sum;
}

inline Operator taylor_expm(const Operator& a) { return Operator(a.space(), taylor_expm(a.matrix())); }

/// Spectral norm of the leading k×k block of a matrix.
inline double block_norm(const Matrix& m, int k) {
    Eigen::JacobiSVD<Matrix> svd(Matrix(m.topLeftCorner(k, k)));
    return svd.singularValues()(0);
}

}  // namespace iontrap::testing
