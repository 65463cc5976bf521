// topology.hpp — coupling graphs, the infection criterion, and the control
// systems they induce.
//
// A graph with nonzero couplings c_nm on its edges carries the drift
// H0 = sum_{n<m} (c_nm |n><m| + conj(c_nm) |m><n|). Controlling the node
// occupations on a set C that "infects" the whole graph — an infected node
// with exactly one healthy neighbor infects it, repeatedly — guarantees full
// controllability, constructively via nested commutators that isolate one
// frontier coupling at a time.

#pragma once

#include "qsysid/lie.hpp"
#include "qsysid/system.hpp"

#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace qsysid {

using NodePair = std::pair<int, int>;            // (n, m) with n < m
using CouplingMap = std::map<NodePair, Complex>;

struct Topology {
    int n_nodes = 0;
    CouplingMap couplings;          // nonzero c_nm per edge, keyed n < m
    std::vector<int> control_set;   // ascending, distinct
    int measured_node = 0;          // member of control_set

    std::vector<int> neighbors(int node) const;  // ascending
    bool has_edge(int n, int m) const;
    // c_{from,to}: stored value when from < to, its conjugate when reversed.
    Complex coupling(int from, int to) const;
    bool is_control(int node) const;
};

Topology make_topology(int n_nodes, CouplingMap couplings,
                       std::vector<int> control_set, int measured_node);

struct InfectionStep {
    int node;    // newly infected
    int source;  // the infecting neighbor
};

struct InfectionTrace {
    std::vector<InfectionStep> steps;
    std::vector<bool> infected;  // final state, indexed by node
    bool all_infected() const;
};

// Deterministic propagation from a seed: repeatedly the lowest-index infected
// node with exactly one healthy neighbor infects that neighbor. The final
// infected set is order-independent; only `steps` depends on the rule.
InfectionTrace infect_from(const Topology& topo, const std::vector<int>& seed);

// Propagation from the control set.
InfectionTrace infect(const Topology& topo);
bool is_infecting(const Topology& topo);

// Smallest seed infecting the whole graph, smallest cardinality first and
// lexicographic within it (control/measurement fields are ignored).
// Exhaustive; throws above max_nodes.
std::vector<int> minimal_infecting_set(const Topology& topo, int max_nodes = 16);

// Realizes the graph as a control system: the coupling drift, one traceless
// occupation control |k><k| - 1/d per control node, the occupation observable
// of the measured node, and (by default) the measured-node projector as the
// initial state.
QuantumSystem build_system(const Topology& topo,
                           std::optional<Matrix> initial_state = std::nullopt);

struct InfectionControllabilityReport {
    bool controllable = false;
    Eigen::Index closure_dimension = 0;
    Eigen::Index full_dimension = 0;
    int closure_depth = 0;
    // Largest absolute deviation across the nested-commutator ladder
    // identities that isolate a frontier coupling (exact algebra, so this
    // sits at machine-precision scale).
    double ladder_identity_residual = 0.0;
    // Relative projection residual of the isolated occupation direction
    // i(|l><l| - 1/d) against the computed closure.
    double ladder_membership_residual = 0.0;
};

// Confirms that an infecting control set yields a full su(d) closure and
// exercises the constructive ladder on the lowest-index frontier edge.
// Throws when the control set is not infecting.
InfectionControllabilityReport verify_infection_controllability(const Topology& topo,
                                                                double rank_tol = kRankTol);

}  // namespace qsysid
