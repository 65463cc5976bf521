// lie.hpp — dynamical Lie algebra closure and the controllability rank test.

#pragma once

#include "qsysid/operator.hpp"
#include "qsysid/system.hpp"

#include <vector>

namespace qsysid {

// Relative residual threshold for rank decisions in the closure loop.
inline constexpr double kRankTol = 1e-9;
// Commutator rounds before giving up; saturation at desk scale takes far
// fewer, so hitting the cap is a loud logic-bug signal, not a tuning knob.
inline constexpr int kMaxClosureRounds = 64;

// Orthonormal basis (Hilbert-Schmidt) of the real Lie algebra generated by a
// set of skew-hermitian matrices. Elements are skew-hermitian and traceless.
struct LieBasis {
    Eigen::Index dim_hilbert = 0;
    std::vector<Operator> elements;
    int generator_count = 0;
    int closure_depth = 0;  // commutator rounds that produced new directions

    Eigen::Index dimension() const { return Eigen::Index(elements.size()); }

    // Relative norm of x minus its projection onto span(elements); x must be
    // skew-hermitian. Zero input returns zero.
    double projection_residual(const Matrix& x) const;
};

// Closure of the real Lie algebra containing i*generators. Hermitian inputs
// are multiplied by i internally; skew-hermitian inputs are taken as-is, and
// only traceless parts are kept. Seeds with the orthonormalized generators,
// then repeatedly commutes (new x all) pairs, accepting residuals whose
// relative norm exceeds tau_rank, until a full round adds nothing. Terminates
// since the dimension is bounded by d^2 - 1.
LieBasis lie_closure(const std::vector<Matrix>& generators, double tau_rank = kRankTol);
LieBasis lie_closure(const std::vector<Operator>& generators, double tau_rank = kRankTol);

struct ControllabilityReport {
    bool controllable = false;
    Eigen::Index closure_dimension = 0;
    Eigen::Index full_dimension = 0;  // d^2 - 1
    int closure_depth = 0;
};

// Controllable iff the algebra generated by {i H0, i Hk} is all of su(d).
ControllabilityReport is_controllable(const QuantumSystem& sys, double tau_rank = kRankTol);

}  // namespace qsysid
