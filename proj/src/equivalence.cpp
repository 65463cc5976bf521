// equivalence.cpp

#include "qsysid/equivalence.hpp"

#include "qsysid/hermitian_basis.hpp"
#include "qsysid/lie.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>
#include <utility>

namespace qsysid {

namespace {

// Back-substitution for the upper-triangular Gram-Schmidt coefficient matrix
// stored column-wise in `pairing` (column j holds j leading coefficients and
// the residual norm on the diagonal).
RealVector solve_pairing(const std::vector<PairingEntry>& pairing, const RealVector& rhs) {
    Eigen::Index r = static_cast<Eigen::Index>(pairing.size());
    RealVector x = RealVector::Zero(r);
    for (Eigen::Index j = r - 1; j >= 0; --j) {
        double acc = rhs(j);
        for (Eigen::Index i = j + 1; i < r; ++i) {
            acc -= pairing[static_cast<std::size_t>(i)].coeffs(j) * x(i);
        }
        x(j) = acc / pairing[static_cast<std::size_t>(j)].coeffs(j);
    }
    return x;
}

struct Node {
    MultiIndex alpha;
    Matrix hat;
    Matrix unhat;
};

EquivalenceOutcome relation_refusal(std::string description, double residual) {
    EquivalenceOutcome outcome;
    InequivalenceWitness w;
    w.description = std::move(description);
    w.unhatted_residual = residual;
    outcome.equivalent = false;
    outcome.witness = std::move(w);
    return outcome;
}

}  // namespace

EquivalenceOutcome equivalence_certificate(const QuantumSystem& sys,
                                           const QuantumSystem& candidate,
                                           double tau, double tau_span) {
    if (sys.input_count() != candidate.input_count() ||
        sys.output_count() != candidate.output_count()) {
        throw std::invalid_argument(
            "equivalence_certificate: systems must have matching input and output counts");
    }
    if (sys.dim != candidate.dim) {
        throw std::invalid_argument(
            "equivalence_certificate: systems must act on the same Hilbert dimension");
    }
    if (tau <= 0.0 || tau_span <= 0.0) {
        throw std::invalid_argument("equivalence_certificate: tolerances must be positive");
    }
    if (!is_controllable(candidate, tau_span).controllable) {
        throw std::invalid_argument(
            "equivalence_certificate: candidate system is not controllable");
    }

    const Eigen::Index d = sys.dim;
    const Eigen::Index m = d * d;
    HermitianBasisIndex basis(d);

    RealMatrix qhat(m, m);  // orthonormal hatted coordinates, first `rank` columns live
    RealMatrix p(m, m);     // paired unhatted images under the same combinations
    Eigen::Index rank = 0;
    std::vector<PairingEntry> pairing;
    double scale = 1.0;  // largest hatted vector norm seen

    std::vector<Node> frontier;
    frontier.push_back({{}, candidate.initial_state.mat, sys.initial_state.mat});

    const int max_depth = static_cast<int>(2 * m) + 2;
    for (int depth = 0; rank < m; ++depth) {
        if (depth > max_depth || frontier.empty()) {
            throw std::runtime_error(
                "equivalence_certificate: saturation not reached within depth cap");
        }
        std::vector<Node> accepted;
        for (Node& node : frontier) {
            RealVector vhat = basis.coords(node.hat);
            RealVector v = basis.coords(node.unhat);
            double nvhat = vhat.norm();
            scale = std::max(scale, nvhat);

            RealVector h = RealVector::Zero(rank);
            RealVector rhat = vhat;
            if (rank > 0) {
                auto q = qhat.leftCols(rank);
                RealVector h1 = q.transpose() * rhat;
                rhat -= q * h1;
                RealVector h2 = q.transpose() * rhat;
                rhat -= q * h2;
                h = h1 + h2;
            }
            double rhat_norm = rhat.norm();
            RealVector image_residual = v - p.leftCols(rank) * h;

            bool negligible = nvhat <= 1e-14 * scale;
            if (!negligible && rhat_norm > tau_span * nvhat) {
                // New direction: extend both bases with the same combination.
                qhat.col(rank) = rhat / rhat_norm;
                p.col(rank) = image_residual / rhat_norm;
                RealVector coeffs(rank + 1);
                coeffs.head(rank) = h;
                coeffs(rank) = rhat_norm;
                pairing.push_back({node.alpha, std::move(coeffs)});
                ++rank;
                accepted.push_back(std::move(node));
                if (rank == m) break;
                continue;
            }

            // Hatted side is dependent; the unhatted side must agree.
            double denom = std::max({1.0, v.norm(), nvhat});
            if (image_residual.norm() > tau * denom) {
                EquivalenceOutcome outcome;
                InequivalenceWitness w;
                RealVector c =
                    negligible ? RealVector::Zero(rank) : solve_pairing(pairing, h);
                w.support.reserve(pairing.size() + 1);
                w.coefficients.resize(static_cast<Eigen::Index>(pairing.size()) + 1);
                for (std::size_t i = 0; i < pairing.size(); ++i) {
                    w.support.push_back(pairing[i].alpha);
                    w.coefficients(static_cast<Eigen::Index>(i)) =
                        -c(static_cast<Eigen::Index>(i));
                }
                w.support.push_back(node.alpha);
                w.coefficients(static_cast<Eigen::Index>(pairing.size())) = 1.0;
                w.hatted_residual = rhat_norm;
                w.unhatted_residual = image_residual.norm();
                w.description =
                    "linear dependency among hatted trajectories fails on the "
                    "unhatted side at " +
                    format_multi_index(node.alpha);
                outcome.equivalent = false;
                outcome.witness = std::move(w);
                return outcome;
            }
            // Consistent dependency: nothing new, drop the node.
        }
        if (rank == m) break;
        std::vector<Node> next;
        next.reserve(accepted.size() * static_cast<std::size_t>(sys.input_count() + 1));
        for (const Node& node : accepted) {
            for (int k = 0; k <= sys.input_count(); ++k) {
                MultiIndex child = node.alpha;
                child.push_back(k);
                next.push_back({std::move(child),
                                apply_liouvillian(candidate.hamiltonian(k), node.hat),
                                apply_liouvillian(sys.hamiltonian(k), node.unhat)});
            }
        }
        frontier = std::move(next);
    }

    // Saturated: assemble the real representation of T and verify the
    // similarity relations.
    RealMatrix t_real = p.leftCols(rank) * qhat.leftCols(rank).transpose();

    double worst = 0.0;
    for (int k = 0; k <= sys.input_count(); ++k) {
        Matrix h_sys = sys.hamiltonian(k);
        Matrix h_cand = candidate.hamiltonian(k);
        RealMatrix a = real_rep(basis, [&](const Matrix& x) {
            return apply_liouvillian(h_sys, x);
        });
        RealMatrix ahat = real_rep(basis, [&](const Matrix& x) {
            return apply_liouvillian(h_cand, x);
        });
        RealMatrix lhs = t_real * ahat;
        RealMatrix rhs = a * t_real;
        double denom = std::max({lhs.norm(), rhs.norm(), 1e-300});
        double rel = (lhs - rhs).norm() / denom;
        worst = std::max(worst, rel);
        if (rel > tau) {
            return relation_refusal(
                "similarity relation violated for hamiltonian index " + std::to_string(k),
                rel);
        }
    }
    {
        RealVector c = basis.coords(sys.initial_state.mat);
        RealVector chat = basis.coords(candidate.initial_state.mat);
        double rel = (t_real * chat - c).norm() / std::max(1.0, c.norm());
        worst = std::max(worst, rel);
        if (rel > tau) {
            return relation_refusal("similarity map does not carry the initial state", rel);
        }
    }
    for (int l = 0; l < sys.output_count(); ++l) {
        RealVector c = basis.coords(sys.observables[static_cast<std::size_t>(l)].mat);
        RealVector chat =
            basis.coords(candidate.observables[static_cast<std::size_t>(l)].mat);
        double rel = (t_real.transpose() * c - chat).norm() /
                     std::max({1.0, c.norm(), chat.norm()});
        worst = std::max(worst, rel);
        if (rel > tau) {
            return relation_refusal(
                "similarity map does not carry observable " + std::to_string(l), rel);
        }
    }

    Eigen::JacobiSVD<RealMatrix> svd(t_real);
    double smin = svd.singularValues()(svd.singularValues().size() - 1);
    double smax = svd.singularValues()(0);
    if (smin <= 1e-10 * smax) {
        return relation_refusal("similarity map is numerically singular", smin);
    }

    // Complexify: S = B T_real B^H with B the hermitian-basis vectorization.
    Matrix b(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
        b.col(a) = vectorize(basis.element(a));
    }
    SimilarityCertificate cert;
    cert.T.dim = d;
    cert.T.mat = b * t_real.cast<Complex>() * b.adjoint();
    cert.pairing = std::move(pairing);
    cert.residual = worst;
    cert.smallest_singular_value = smin;
    try {
        cert.unitary = extract_unitary(cert.T, 1e-4);
    } catch (const std::exception&) {
        // Relations hold, so equivalence stands even if the conjugation
        // structure is numerically too degraded to factor.
        cert.unitary.reset();
    }

    EquivalenceOutcome outcome;
    outcome.equivalent = true;
    outcome.certificate = std::move(cert);
    return outcome;
}

Operator extract_unitary(const Superoperator& T, double tau) {
    if (tau <= 0.0) {
        throw std::invalid_argument("extract_unitary: tolerance must be positive");
    }
    const Eigen::Index d = T.dim;
    const Eigen::Index m = d * d;
    if (T.mat.rows() != m || T.mat.cols() != m) {
        throw std::invalid_argument("extract_unitary: superoperator shape mismatch");
    }

    {
        Eigen::JacobiSVD<Matrix> svd(T.mat);
        const auto& s = svd.singularValues();
        if (s(s.size() - 1) <= 1e-12 * s(0)) {
            throw std::runtime_error("extract_unitary: superoperator is singular");
        }
    }

    // Reshuffle: a conjugation X -> U X U^dagger has matrix U(i,k) conj(U(j,l))
    // at row i*d+j, column k*d+l, so regrouping rows by (i,k) and columns by
    // (j,l) exposes the rank-one factor vec(U) vec(U)^H.
    Matrix reshuffled(m, m);
    for (Eigen::Index i = 0; i < d; ++i) {
        for (Eigen::Index j = 0; j < d; ++j) {
            for (Eigen::Index k = 0; k < d; ++k) {
                for (Eigen::Index l = 0; l < d; ++l) {
                    reshuffled(i * d + k, j * d + l) = T.mat(i * d + j, k * d + l);
                }
            }
        }
    }

    Eigen::JacobiSVD<Matrix> svd(reshuffled, Eigen::ComputeThinU);
    const auto& s = svd.singularValues();
    if (s.size() > 1 && s(1) > tau * s(0)) {
        throw std::runtime_error(
            "extract_unitary: map is not a conjugation (second singular value " +
            std::to_string(s(1)) + " vs " + std::to_string(s(0)) + ")");
    }

    Matrix u0 =
        unvectorize(Vector(svd.matrixU().col(0) * std::sqrt(static_cast<double>(d))), d);

    // Nearest unitary via polar factor.
    Eigen::JacobiSVD<Matrix> polar(u0, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix u = polar.matrixU() * polar.matrixV().adjoint();

    // Fix the free global phase: rotate the largest-magnitude entry onto the
    // positive real axis.
    Eigen::Index bi = 0, bj = 0;
    u.cwiseAbs().maxCoeff(&bi, &bj);
    Complex pivot = u(bi, bj);
    u *= std::conj(pivot) / std::abs(pivot);

    return make_operator(std::move(u), OpFlag::unitary);
}

}  // namespace qsysid
