// operator.cpp — structural flag checks and dense operator primitives.

#include "qsysid/operator.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>

namespace qsysid {

namespace {

double scale_of(const Matrix& m) { return std::max(1.0, m.norm()); }

void require_square(const Matrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(who) + ": matrix must be square and nonempty");
    }
}

}  // namespace

bool is_hermitian(const Matrix& m, double tol) {
    return (m - m.adjoint()).norm() <= tol * scale_of(m);
}

bool is_skew_hermitian(const Matrix& m, double tol) {
    return (m + m.adjoint()).norm() <= tol * scale_of(m);
}

bool is_traceless(const Matrix& m, double tol) {
    return std::abs(m.trace()) <= tol * scale_of(m);
}

bool is_unitary(const Matrix& m, double tol) {
    const Matrix gram = m.adjoint() * m;
    return (gram - Matrix::Identity(m.rows(), m.cols())).norm() <= tol * scale_of(gram);
}

bool is_density(const Matrix& m, double tol) {
    if (!is_hermitian(m, tol)) return false;
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > tol * scale_of(m)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) return false;
    return es.eigenvalues().minCoeff() >= -tol;
}

double identity_component_residual(const Matrix& m) {
    const double d = double(m.rows());
    const Matrix residual = m - (m.trace() / d) * Matrix::Identity(m.rows(), m.cols());
    return residual.norm() / std::max(1e-300, m.norm());
}

OpFlag detect_flags(const Matrix& m, double tol) {
    OpFlag f = OpFlag::none;
    if (is_hermitian(m, tol)) f = f | OpFlag::hermitian;
    if (is_skew_hermitian(m, tol)) f = f | OpFlag::skew_hermitian;
    if (is_traceless(m, tol)) f = f | OpFlag::traceless;
    if (is_unitary(m, tol)) f = f | OpFlag::unitary;
    if (is_density(m, tol)) f = f | OpFlag::density;
    return f;
}

Operator make_operator(Matrix m, OpFlag flags, double tol) {
    require_square(m, "make_operator");
    if (!m.allFinite()) throw std::invalid_argument("make_operator: non-finite entries");
    if (any(flags & OpFlag::hermitian) && !is_hermitian(m, tol))
        throw std::invalid_argument("make_operator: hermitian flag violated");
    if (any(flags & OpFlag::skew_hermitian) && !is_skew_hermitian(m, tol))
        throw std::invalid_argument("make_operator: skew_hermitian flag violated");
    if (any(flags & OpFlag::traceless) && !is_traceless(m, tol))
        throw std::invalid_argument("make_operator: traceless flag violated");
    if (any(flags & OpFlag::unitary) && !is_unitary(m, tol))
        throw std::invalid_argument("make_operator: unitary flag violated");
    if (any(flags & OpFlag::density)) {
        if (!is_density(m, tol)) throw std::invalid_argument("make_operator: density flag violated");
        flags = flags | OpFlag::hermitian;
    }
    return Operator{std::move(m), flags};
}

Operator hermitian_operator(Matrix m, double tol) {
    OpFlag f = OpFlag::hermitian;
    if (is_traceless(m, tol)) f = f | OpFlag::traceless;
    return make_operator(std::move(m), f, tol);
}

Operator density_operator(Matrix m, double tol) {
    return make_operator(std::move(m), OpFlag::density | OpFlag::hermitian, tol);
}

Matrix commutator(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("commutator: dimension mismatch");
    }
    return a * b - b * a;
}

Operator commutator(const Operator& a, const Operator& b) {
    Matrix m = commutator(a.mat, b.mat);
    OpFlag f = OpFlag::traceless;
    const bool ah = a.has(OpFlag::hermitian), bh = b.has(OpFlag::hermitian);
    const bool as = a.has(OpFlag::skew_hermitian), bs = b.has(OpFlag::skew_hermitian);
    if ((ah && bh) || (as && bs)) f = f | OpFlag::skew_hermitian;
    else if ((ah && bs) || (as && bh)) f = f | OpFlag::hermitian;
    return Operator{std::move(m), f};
}

Complex hs_inner(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw std::invalid_argument("hs_inner: dimension mismatch");
    }
    return (a.adjoint() * b).trace();
}

Complex hs_inner(const Operator& a, const Operator& b) { return hs_inner(a.mat, b.mat); }

Matrix expm_hermitian_prop(const Matrix& h, double t) {
    require_square(h, "expm_hermitian_prop");
    if (!h.allFinite() || !std::isfinite(t)) {
        throw std::invalid_argument("expm_hermitian_prop: non-finite input");
    }
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success) {
        throw std::runtime_error("expm_hermitian_prop: eigendecomposition failed");
    }
    const Vector phases =
        (Complex(0.0, -t) * es.eigenvalues().cast<Complex>().array()).exp().matrix();
    return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

Operator expm_hermitian_prop(const Operator& h, double t) {
    if (!h.has(OpFlag::hermitian)) {
        throw std::invalid_argument("expm_hermitian_prop: operator not flagged hermitian");
    }
    return Operator{expm_hermitian_prop(h.mat, t), OpFlag::unitary};
}

Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

Matrix pauli_x() {
    Matrix m(2, 2);
    m << 0.0, 1.0, 1.0, 0.0;
    return m;
}

Matrix pauli_y() {
    Matrix m(2, 2);
    m << 0.0, Complex(0.0, -1.0), Complex(0.0, 1.0), 0.0;
    return m;
}

Matrix pauli_z() {
    Matrix m(2, 2);
    m << 1.0, 0.0, 0.0, -1.0;
    return m;
}

Matrix basis_op(Eigen::Index d, Eigen::Index i, Eigen::Index j) {
    if (i < 0 || j < 0 || i >= d || j >= d) throw std::out_of_range("basis_op: index out of range");
    Matrix m = Matrix::Zero(d, d);
    m(i, j) = 1.0;
    return m;
}

Matrix projector(Eigen::Index d, Eigen::Index i) { return basis_op(d, i, i); }

Matrix kron(const Matrix& a, const Matrix& b) {
    return Eigen::kroneckerProduct(a, b).eval();
}

}  // namespace qsysid
