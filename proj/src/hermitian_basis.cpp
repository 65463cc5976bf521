// hermitian_basis.cpp

#include "qsysid/hermitian_basis.hpp"

#include <cmath>

namespace qsysid {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Index layout: [0] identity; [1 .. d(d-1)] off-diagonal pairs, two slots per
// (j,k) with j<k in lexicographic order (symmetric then antisymmetric);
// [d(d-1)+1 .. d^2-1] diagonal Gell-Mann matrices l = 1..d-1.
Eigen::Index pair_base(Eigen::Index d, Eigen::Index j, Eigen::Index k) {
    return 1 + 2 * (j * d - j * (j + 1) / 2 + (k - j - 1));
}

}  // namespace

HermitianBasisIndex::HermitianBasisIndex(Eigen::Index d) : d_(d) {
    if (d < 1) throw std::invalid_argument("HermitianBasisIndex: dimension must be positive");
}

Matrix HermitianBasisIndex::element(Eigen::Index a) const {
    if (a < 0 || a >= size()) throw std::out_of_range("HermitianBasisIndex::element");
    Matrix m = Matrix::Zero(d_, d_);
    if (a == 0) {
        m = Matrix::Identity(d_, d_) / std::sqrt(double(d_));
        return m;
    }
    const Eigen::Index off_count = d_ * (d_ - 1);
    if (a <= off_count) {
        Eigen::Index slot = a - 1;
        Eigen::Index pair = slot / 2;
        // invert the lexicographic pair index
        Eigen::Index j = 0, remaining = pair;
        while (remaining >= d_ - 1 - j) {
            remaining -= d_ - 1 - j;
            ++j;
        }
        Eigen::Index k = j + 1 + remaining;
        if (slot % 2 == 0) {
            m(j, k) = kInvSqrt2;
            m(k, j) = kInvSqrt2;
        } else {
            m(j, k) = Complex(0.0, -kInvSqrt2);
            m(k, j) = Complex(0.0, kInvSqrt2);
        }
        return m;
    }
    const Eigen::Index l = a - off_count;  // 1 .. d-1
    const double norm = 1.0 / std::sqrt(double(l) * double(l + 1));
    for (Eigen::Index j = 0; j < l; ++j) m(j, j) = norm;
    m(l, l) = -double(l) * norm;
    return m;
}

RealVector HermitianBasisIndex::coords(const Matrix& x) const {
    if (x.rows() != d_ || x.cols() != d_) {
        throw std::invalid_argument("HermitianBasisIndex::coords: dimension mismatch");
    }
    RealVector c(size());
    c(0) = x.trace().real() / std::sqrt(double(d_));
    for (Eigen::Index j = 0; j < d_; ++j) {
        for (Eigen::Index k = j + 1; k < d_; ++k) {
            const Eigen::Index base = pair_base(d_, j, k);
            c(base) = std::sqrt(2.0) * x(j, k).real();
            c(base + 1) = -std::sqrt(2.0) * x(j, k).imag();
        }
    }
    double prefix = 0.0;  // sum of leading diagonal entries
    for (Eigen::Index l = 1; l < d_; ++l) {
        prefix += x(l - 1, l - 1).real();
        const double norm = 1.0 / std::sqrt(double(l) * double(l + 1));
        c(d_ * (d_ - 1) + l) = norm * (prefix - double(l) * x(l, l).real());
    }
    return c;
}

Matrix HermitianBasisIndex::from_coords(const RealVector& c) const {
    if (c.size() != size()) {
        throw std::invalid_argument("HermitianBasisIndex::from_coords: size mismatch");
    }
    Matrix x = Matrix::Zero(d_, d_);
    const double id_coeff = c(0) / std::sqrt(double(d_));
    for (Eigen::Index j = 0; j < d_; ++j) x(j, j) = id_coeff;
    for (Eigen::Index j = 0; j < d_; ++j) {
        for (Eigen::Index k = j + 1; k < d_; ++k) {
            const Eigen::Index base = pair_base(d_, j, k);
            const Complex v(kInvSqrt2 * c(base), -kInvSqrt2 * c(base + 1));
            x(j, k) += v;
            x(k, j) += std::conj(v);
        }
    }
    for (Eigen::Index l = 1; l < d_; ++l) {
        const double coeff = c(d_ * (d_ - 1) + l);
        const double norm = 1.0 / std::sqrt(double(l) * double(l + 1));
        for (Eigen::Index j = 0; j < l; ++j) x(j, j) += coeff * norm;
        x(l, l) -= coeff * double(l) * norm;
    }
    return x;
}

RealMatrix real_rep(const HermitianBasisIndex& basis,
                    const std::function<Matrix(const Matrix&)>& map) {
    const Eigen::Index n = basis.size();
    RealMatrix rep(n, n);
    for (Eigen::Index a = 0; a < n; ++a) {
        rep.col(a) = basis.coords(map(basis.element(a)));
    }
    return rep;
}

}  // namespace qsysid
