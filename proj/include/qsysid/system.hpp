// system.hpp — the controlled-system tuple: drift, controls, observables,
// initial state.

#pragma once

#include "qsysid/operator.hpp"

#include <vector>

namespace qsysid {

// sigma = {H0, [Hk], [Ml], rho0}. Drift and controls are traceless hermitian;
// observables are hermitian and not proportional to the identity; the initial
// state is a density matrix, also not proportional to the identity (an
// identity-like observable or state produces no signal at all).
struct QuantumSystem {
    Eigen::Index dim = 0;
    Operator drift;
    std::vector<Operator> controls;
    std::vector<Operator> observables;
    Operator initial_state;

    int input_count() const { return int(controls.size()); }
    int output_count() const { return int(observables.size()); }

    // Hamiltonian by moment index: 0 is the drift, k >= 1 is controls[k-1].
    const Matrix& hamiltonian(int index) const;
};

// Validates all structural invariants; throws std::invalid_argument with the
// offending field on failure.
QuantumSystem make_system(Matrix drift, std::vector<Matrix> controls,
                          std::vector<Matrix> observables, Matrix initial_state,
                          double tol = kStructTol);

// Conjugate every component by a unitary: H -> U H U^dag etc. Produces an
// input-output indistinguishable system.
QuantumSystem conjugate_system(const QuantumSystem& sys, const Operator& u);
QuantumSystem conjugate_system(const QuantumSystem& sys, const Matrix& u);

}  // namespace qsysid
