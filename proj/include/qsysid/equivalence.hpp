// equivalence.hpp — constructive input-output equivalence between two systems.
//
// Two systems with matching input/output counts are equivalent when a single
// invertible linear map T on vectorized operators satisfies
//     L_k = T Lhat_k T^{-1}   (all k, including the drift),
//     rho0 = T(rhohat0),
//     tr{Mhat_l X} = tr{M_l T(X)}  for all X.
// The routine builds T from paired Krylov vectors L_alpha applied on both
// sides of the initial states; when the second system is controllable the
// hatted vectors saturate the full operator space, making the test finite.
// A controllable second system forces T to be conjugation by a unitary,
// which extract_unitary recovers.

#pragma once

#include "qsysid/moments.hpp"
#include "qsysid/superop.hpp"
#include "qsysid/system.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qsysid {

struct PairingEntry {
    MultiIndex alpha;    // accepted multi-index, hatted side
    RealVector coeffs;   // Gram-Schmidt coefficients over the earlier entries,
                         // last component the residual norm
};

struct SimilarityCertificate {
    Superoperator T;                    // hatted operator space -> unhatted
    std::vector<PairingEntry> pairing;  // spanning multi-indices, BFS order
    double residual = 0.0;              // largest relative violation of the
                                        // similarity relations
    double smallest_singular_value = 0.0;  // of T, invertibility evidence
    std::optional<Operator> unitary;    // recovered U with T = U (.) U^dagger
};

struct InequivalenceWitness {
    // A linear dependency sum_i coefficients[i] * v_{support[i]} that holds on
    // the hatted side but fails on the unhatted side (or a violated
    // similarity relation described textually when support is empty).
    std::vector<MultiIndex> support;
    RealVector coefficients;
    double hatted_residual = 0.0;
    double unhatted_residual = 0.0;
    std::string description;
};

struct EquivalenceOutcome {
    bool equivalent = false;
    std::optional<SimilarityCertificate> certificate;
    std::optional<InequivalenceWitness> witness;
};

// Decides equivalence of sys against the candidate. Preconditions: matching
// input/output counts, equal Hilbert dimensions, controllable candidate
// (checked; violations throw std::invalid_argument). tau bounds the accepted
// relative residuals; tau_span is the Krylov rank threshold.
EquivalenceOutcome equivalence_certificate(const QuantumSystem& sys,
                                           const QuantumSystem& candidate,
                                           double tau = 1e-8,
                                           double tau_span = 1e-9);

// Recovers U from a superoperator acting as X -> U X U^dagger. The
// reshuffled matrix of such a map has rank one; throws when the second
// singular value exceeds tau times the first, or when T is singular.
// The returned unitary has its largest-magnitude entry rotated to the
// positive real axis.
Operator extract_unitary(const Superoperator& T, double tau = 1e-6);

}  // namespace qsysid
