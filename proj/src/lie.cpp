// lie.cpp — Lie closure via modified Gram-Schmidt over basis coordinates.

#include "qsysid/lie.hpp"

#include "qsysid/hermitian_basis.hpp"

namespace qsysid {

namespace {

// Incremental orthonormal span of skew-hermitian matrices, tracked both as
// real coordinate columns and as reconstructed matrices. One
// reorthogonalization pass keeps the basis orthonormal to roundoff without
// SVDs in the loop.
class SkewSpan {
public:
    SkewSpan(Eigen::Index d, double tau_rank)
        : basis_(d), tau_rank_(tau_rank), q_(d * d, 0) {}

    // Tries to add x; returns true if a new direction was accepted.
    bool insert(const Matrix& x) {
        RealVector v = basis_.skew_coords(x);
        const double nv = v.norm();
        if (nv == 0.0) return false;
        if (q_.cols() > 0) {
            v -= q_ * (q_.transpose() * v).eval();
            v -= q_ * (q_.transpose() * v).eval();
        }
        const double residual = v.norm();
        if (residual <= tau_rank_ * nv) return false;
        q_.conservativeResize(Eigen::NoChange, q_.cols() + 1);
        q_.col(q_.cols() - 1) = v / residual;
        matrices_.push_back(basis_.skew_from_coords(q_.col(q_.cols() - 1)));
        return true;
    }

    Eigen::Index size() const { return q_.cols(); }
    const std::vector<Matrix>& matrices() const { return matrices_; }

private:
    HermitianBasisIndex basis_;
    double tau_rank_;
    RealMatrix q_;
    std::vector<Matrix> matrices_;
};

}  // namespace

double LieBasis::projection_residual(const Matrix& x) const {
    HermitianBasisIndex basis(dim_hilbert);
    RealVector v = basis.skew_coords(x);
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    for (int pass = 0; pass < 2; ++pass) {
        for (const auto& e : elements) {
            const RealVector q = basis.skew_coords(e.mat);
            v -= q.dot(v) * q;
        }
    }
    return v.norm() / nv;
}

LieBasis lie_closure(const std::vector<Matrix>& generators, double tau_rank) {
    if (generators.empty()) throw std::invalid_argument("lie_closure: empty generator list");
    const Eigen::Index d = generators.front().rows();
    const Complex i_unit(0.0, 1.0);

    SkewSpan span(d, tau_rank);
    for (const auto& g : generators) {
        if (g.rows() != d || g.cols() != d) {
            throw std::invalid_argument("lie_closure: generator dimension mismatch");
        }
        Matrix x;
        if (is_hermitian(g)) x = i_unit * g;
        else if (is_skew_hermitian(g)) x = g;
        else throw std::invalid_argument("lie_closure: generator neither hermitian nor skew-hermitian");
        x -= (x.trace() / double(d)) * Matrix::Identity(d, d);
        span.insert(x);
    }

    const Eigen::Index full_dim = d * d - 1;
    int depth = 0;
    Eigen::Index new_lo = 0;
    while (span.size() < full_dim) {
        const Eigen::Index new_hi = span.size();
        if (new_lo == new_hi) break;  // previous round added nothing
        if (depth >= kMaxClosureRounds) {
            throw std::runtime_error("lie_closure: depth cap exceeded without saturation");
        }
        bool grew = false;
        // new x all pairs; old x old pairs are redundant by the Jacobi identity
        for (Eigen::Index i = new_lo; i < new_hi && span.size() < full_dim; ++i) {
            for (Eigen::Index j = 0; j < i && span.size() < full_dim; ++j) {
                grew |= span.insert(commutator(span.matrices()[i], span.matrices()[j]));
            }
        }
        if (grew) ++depth;
        new_lo = new_hi;
    }

    LieBasis out;
    out.dim_hilbert = d;
    out.generator_count = int(generators.size());
    out.closure_depth = depth;
    for (const auto& m : span.matrices()) {
        out.elements.push_back(Operator{m, OpFlag::skew_hermitian | OpFlag::traceless});
    }
    return out;
}

LieBasis lie_closure(const std::vector<Operator>& generators, double tau_rank) {
    std::vector<Matrix> mats;
    mats.reserve(generators.size());
    for (const auto& g : generators) mats.push_back(g.mat);
    return lie_closure(mats, tau_rank);
}

ControllabilityReport is_controllable(const QuantumSystem& sys, double tau_rank) {
    std::vector<Matrix> generators{sys.drift.mat};
    for (const auto& c : sys.controls) generators.push_back(c.mat);
    LieBasis basis = lie_closure(generators, tau_rank);

    ControllabilityReport report;
    report.closure_dimension = basis.dimension();
    report.full_dimension = sys.dim * sys.dim - 1;
    report.controllable = report.closure_dimension == report.full_dimension;
    report.closure_depth = basis.closure_depth;
    return report;
}

}  // namespace qsysid
