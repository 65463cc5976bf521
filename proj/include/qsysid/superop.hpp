// superop.hpp — superoperators on vectorized operators, Liouvillians.
//
// Vectorization stacks matrix rows: vec(X)(i*d + j) = X(i, j). Under this
// convention vec(A X B) = (A ⊗ B^T) vec(X), so left multiplication is
// (A ⊗ 1) and right multiplication is (1 ⊗ B^T). Fixed repo-wide.

#pragma once

#include "qsysid/operator.hpp"

namespace qsysid {

Vector vectorize(const Matrix& x);
Matrix unvectorize(const Vector& v, Eigen::Index d);

// A complex d^2 x d^2 matrix acting on row-stacked vectorized operators.
struct Superoperator {
    Eigen::Index dim = 0;  // Hilbert dimension d; matrix is d^2 x d^2
    Matrix mat;

    Matrix apply(const Matrix& x) const;
};

Superoperator superop_identity(Eigen::Index d);

// L_H = -i [H, .]  =  -i (H ⊗ 1 - 1 ⊗ H^T). Requires hermitian H.
Superoperator liouvillian(const Operator& h);
Superoperator liouvillian(const Matrix& h);

// X -> U X U^dag as a superoperator, i.e. U ⊗ conj(U).
Superoperator conjugation_superop(const Matrix& u);

// -i [H, X] computed directly on matrices; equals liouvillian(h).apply(x).
Matrix apply_liouvillian(const Matrix& h, const Matrix& x);

}  // namespace qsysid
