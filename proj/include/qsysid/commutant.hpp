// commutant.hpp — residual unitary gauge freedom of partially known systems.
//
// Operators known a priori pin down the similarity transformation only up to
// unitaries commuting with all of them. The hermitian matrices X with
// [X, A_i] = 0 for every known A_i form the commutant; its dimension minus
// one (the global phase always survives) measures the residual gauge.

#pragma once

#include "qsysid/lie.hpp"
#include "qsysid/operator.hpp"
#include "qsysid/system.hpp"

#include <vector>

namespace qsysid {

struct CommutantBasis {
    Eigen::Index dim_hilbert = 0;
    std::vector<Operator> elements;  // orthonormal hermitian basis of the commutant
    int dimension() const { return static_cast<int>(elements.size()); }
    int residual_gauge_dim() const { return dimension() - 1; }
};

// Hermitian solutions of [X, A_i] = 0 for all i via the null space of the
// stacked real representations of X -> -i[X, A_i]. With no constraints the
// commutant is the full hermitian space. Matrices must be square and share
// one dimension.
CommutantBasis commutant(const std::vector<Matrix>& known_ops, double rank_tol = kRankTol);

// Which parts of a system are known a priori.
struct KnownMask {
    bool drift = false;
    std::vector<bool> controls;      // size = input count (all false allowed)
    std::vector<bool> observables;   // size = output count
    bool initial_state = false;
};

KnownMask empty_mask(const QuantumSystem& sys);

struct IdentifiabilityReport {
    CommutantBasis commutant;
    int residual_gauge_dim = 0;
    bool fully_identifiable = false;  // gauge reduced to the global phase
};

// Residual gauge of a controllable system given the known parts. Throws when
// the system is not controllable or the mask shape disagrees with the system.
IdentifiabilityReport identifiability_report(const QuantumSystem& sys, const KnownMask& mask,
                                             double rank_tol = kRankTol);

}  // namespace qsysid
