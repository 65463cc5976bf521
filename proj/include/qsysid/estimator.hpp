// estimator.hpp — indirect coupling-constant estimation on a known topology.
//
// The edge set, control set, and measured node are known; the complex
// couplings are not. Candidates are scored by least squares against recorded
// expectation data and refined by multi-start Levenberg-Marquardt in a
// magnitude-phase parameterization (log-magnitudes keep every edge nonzero).
// Estimates are compared to truth only modulo the local-phase gauge: node
// phases are removable, so canonical representatives make a breadth-first
// spanning tree from the measured node real positive.

#pragma once

#include "qsysid/dynamics.hpp"
#include "qsysid/topology.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qsysid {

struct Experiment {
    ControlSchedule schedule;
    std::vector<double> sample_times;
};

struct EstimationProblem {
    Topology topology;  // edge set, control set, measured node; stored
                        // coupling values are never consulted
    std::vector<Experiment> experiments;
    std::vector<ExpectationRecord> records;  // observed data, one per experiment
    std::optional<CouplingMap> truth;        // harness only; estimate() never reads it
};

// Validates that the control set is infecting and that records align with
// experiments.
EstimationProblem make_estimation_problem(Topology topology,
                                          std::vector<Experiment> experiments,
                                          std::vector<ExpectationRecord> records);

// The same topology with replaced coupling values (keys must match).
Topology with_couplings(const Topology& topo, const CouplingMap& couplings);

// Runs every experiment against the topology's system.
std::vector<ExpectationRecord> simulate_experiments(const Topology& topo,
                                                    const std::vector<Experiment>& experiments,
                                                    const RecordOptions& options = {});

// Sum of squared differences between recorded data and the candidate's
// simulated expectations. Empty experiment sets score 0 (degenerate).
double objective(const CouplingMap& candidate, const EstimationProblem& problem);

struct EstimateOptions {
    int starts = 8;
    int max_evals_per_start = 2000;  // objective-evaluation budget per start
    double tau_fit = 1e-10;          // success threshold on the objective
    std::uint64_t seed = 0;
};

struct EstimationResult {
    CouplingMap couplings;
    double objective_value = 0.0;
    int iterations = 0;   // optimizer iterations summed over starts
    int starts_used = 0;
    bool converged = false;  // objective_value <= tau_fit
    std::string method;
    std::string warning;  // set for degenerate inputs
    std::optional<double> gauge_error;  // gauge_distance to truth when provided
};

EstimationResult estimate(const EstimationProblem& problem, const EstimateOptions& options = {});

// Canonical gauge representative: conjugate by node phases so the couplings
// on the breadth-first spanning tree rooted at the measured node (ascending
// neighbors) become real positive. Non-tree phases transform accordingly;
// cycle phase sums are invariant. Throws on disconnected topologies.
CouplingMap gauge_fix(const CouplingMap& couplings, const Topology& topo);

// l2 distance between canonical representatives, over edges.
double gauge_distance(const CouplingMap& a, const CouplingMap& b, const Topology& topo);

// Randomized piecewise-constant experiments: `segments` equal-length segments
// totalling ~n_nodes time units, amplitudes uniform in [-2, 2], `samples`
// uniformly spaced sample times.
std::vector<Experiment> default_experiments(const Topology& topo, std::uint64_t seed,
                                            int count = 6, int segments = 8,
                                            int samples = 20);

}  // namespace qsysid
