// hermitian_basis.hpp — orthonormal hermitian operator basis and real coordinates.
//
// Canonical enumeration of d^2 hermitian matrices, orthonormal under
// tr(A^dag B): the normalized identity 1/sqrt(d) first, then for each pair
// j < k (lexicographic) the symmetric and antisymmetric generalized
// Gell-Mann matrices, then the d-1 diagonal ones. Coordinates in this basis
// give an isometry between hermitian matrices and R^{d^2}; skew-hermitian
// X are handled through the hermitian matrix -iX.

#pragma once

#include "qsysid/operator.hpp"

#include <functional>

namespace qsysid {

class HermitianBasisIndex {
public:
    explicit HermitianBasisIndex(Eigen::Index d);

    Eigen::Index dim() const { return d_; }
    Eigen::Index size() const { return d_ * d_; }

    // Materialize the a-th basis matrix.
    Matrix element(Eigen::Index a) const;

    // Real coordinates of a hermitian matrix (length d^2). The inverse maps
    // any real vector back to a hermitian matrix.
    RealVector coords(const Matrix& x) const;
    Matrix from_coords(const RealVector& c) const;

    // Same frame restricted to skew-hermitian X = i * hermitian.
    RealVector skew_coords(const Matrix& x) const { return coords(Matrix(Complex(0, -1) * x)); }
    Matrix skew_from_coords(const RealVector& c) const {
        return Complex(0, 1) * from_coords(c);
    }

private:
    Eigen::Index d_;
};

// Matrix of a real-linear, hermiticity-preserving map in basis coordinates
// (column a = coords(map(element(a)))).
RealMatrix real_rep(const HermitianBasisIndex& basis,
                    const std::function<Matrix(const Matrix&)>& map);

}  // namespace qsysid
