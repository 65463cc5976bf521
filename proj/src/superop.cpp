// superop.cpp

#include "qsysid/superop.hpp"

namespace qsysid {

Vector vectorize(const Matrix& x) {
    const Eigen::Index d = x.rows();
    Vector v(d * x.cols());
    for (Eigen::Index i = 0; i < d; ++i) {
        v.segment(i * x.cols(), x.cols()) = x.row(i).transpose();
    }
    return v;
}

Matrix unvectorize(const Vector& v, Eigen::Index d) {
    if (v.size() != d * d) throw std::invalid_argument("unvectorize: size mismatch");
    Matrix x(d, d);
    for (Eigen::Index i = 0; i < d; ++i) {
        x.row(i) = v.segment(i * d, d).transpose();
    }
    return x;
}

Matrix Superoperator::apply(const Matrix& x) const {
    if (x.rows() != dim || x.cols() != dim) {
        throw std::invalid_argument("Superoperator::apply: dimension mismatch");
    }
    return unvectorize(mat * vectorize(x), dim);
}

Superoperator superop_identity(Eigen::Index d) {
    return Superoperator{d, Matrix::Identity(d * d, d * d)};
}

Superoperator liouvillian(const Matrix& h) {
    if (!is_hermitian(h)) throw std::invalid_argument("liouvillian: non-hermitian input");
    const Eigen::Index d = h.rows();
    const Matrix eye = Matrix::Identity(d, d);
    Matrix m = Complex(0.0, -1.0) * (kron(h, eye) - kron(eye, h.transpose()));
    return Superoperator{d, std::move(m)};
}

Superoperator liouvillian(const Operator& h) {
    if (!h.has(OpFlag::hermitian)) {
        throw std::invalid_argument("liouvillian: operator not flagged hermitian");
    }
    return liouvillian(h.mat);
}

Superoperator conjugation_superop(const Matrix& u) {
    if (!is_unitary(u)) throw std::invalid_argument("conjugation_superop: non-unitary input");
    return Superoperator{u.rows(), kron(u, u.conjugate())};
}

Matrix apply_liouvillian(const Matrix& h, const Matrix& x) {
    return Complex(0.0, -1.0) * commutator(h, x);
}

}  // namespace qsysid
