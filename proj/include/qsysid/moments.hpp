// moments.hpp — algebraic input-output moments tr{M_l L_alpha rho0} and the
// truncated moment-matching equivalence test.
//
// A multi-index alpha = (a_1, ..., a_L) selects the Hamiltonian sequence
// applied to the initial state, a_1 first: L_alpha = L_{a_L} ... L_{a_1}.
// Index 0 is the drift, k >= 1 the k-th control. The empty index is the
// identity superoperator.

#pragma once

#include "qsysid/system.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace qsysid {

using MultiIndex = std::vector<int>;

// tr{M_l L_alpha rho0}. Real by construction; throws if the imaginary
// residue exceeds 1e-12 relative to the operator scales.
double moment(const QuantumSystem& sys, int observable_index, const MultiIndex& alpha);

// All moments with |alpha| <= max_length, enumerated breadth-first by length
// and lexicographically within a length.
struct MomentTable {
    int max_length = 0;
    std::map<std::pair<int, MultiIndex>, double> values;
};

MomentTable compute_moments(const QuantumSystem& sys, int max_length,
                            std::uint64_t term_budget = 2'000'000);

struct MomentComparison {
    bool equal = true;
    std::uint64_t terms_compared = 0;
    // First violating pair in enumeration order, when equal is false.
    int observable = -1;
    MultiIndex alpha;
    double lhs = 0.0;
    double rhs = 0.0;
};

// Exhaustive comparison of all moments with |alpha| <= max_length, absolute
// tolerance tau scaled by the operator norms entering each moment. Both
// systems must expose the same number of inputs and outputs (their Hilbert
// dimensions may differ). Throws when the term count would exceed the budget.
MomentComparison moments_equal(const QuantumSystem& sys, const QuantumSystem& other,
                               int max_length, double tau,
                               std::uint64_t term_budget = 2'000'000);

std::string format_multi_index(const MultiIndex& alpha);

}  // namespace qsysid
