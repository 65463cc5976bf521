// topology.cpp

#include "qsysid/topology.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsysid {

std::vector<int> Topology::neighbors(int node) const {
    std::vector<int> out;
    for (const auto& [edge, c] : couplings) {
        if (edge.first == node) out.push_back(edge.second);
        if (edge.second == node) out.push_back(edge.first);
    }
    std::sort(out.begin(), out.end());
    return out;
}

bool Topology::has_edge(int n, int m) const {
    if (n > m) std::swap(n, m);
    return couplings.count({n, m}) > 0;
}

Complex Topology::coupling(int from, int to) const {
    bool flipped = from > to;
    if (flipped) std::swap(from, to);
    auto it = couplings.find({from, to});
    if (it == couplings.end()) {
        throw std::out_of_range("Topology::coupling: no such edge");
    }
    return flipped ? std::conj(it->second) : it->second;
}

bool Topology::is_control(int node) const {
    return std::binary_search(control_set.begin(), control_set.end(), node);
}

Topology make_topology(int n_nodes, CouplingMap couplings,
                       std::vector<int> control_set, int measured_node) {
    if (n_nodes < 2) {
        throw std::invalid_argument("make_topology: need at least two nodes");
    }
    for (const auto& [edge, c] : couplings) {
        if (edge.first < 0 || edge.second >= n_nodes || edge.first >= edge.second) {
            throw std::invalid_argument("make_topology: edge endpoints must satisfy 0 <= n < m < n_nodes");
        }
        if (c == Complex(0.0, 0.0)) {
            throw std::invalid_argument("make_topology: zero coupling on a declared edge");
        }
    }
    std::sort(control_set.begin(), control_set.end());
    control_set.erase(std::unique(control_set.begin(), control_set.end()), control_set.end());
    if (control_set.empty()) {
        throw std::invalid_argument("make_topology: control set must be nonempty");
    }
    for (int k : control_set) {
        if (k < 0 || k >= n_nodes) {
            throw std::invalid_argument("make_topology: control node out of range");
        }
    }
    if (!std::binary_search(control_set.begin(), control_set.end(), measured_node)) {
        throw std::invalid_argument("make_topology: measured node must belong to the control set");
    }

    Topology topo;
    topo.n_nodes = n_nodes;
    topo.couplings = std::move(couplings);
    topo.control_set = std::move(control_set);
    topo.measured_node = measured_node;
    return topo;
}

bool InfectionTrace::all_infected() const {
    return std::all_of(infected.begin(), infected.end(), [](bool b) { return b; });
}

InfectionTrace infect_from(const Topology& topo, const std::vector<int>& seed) {
    InfectionTrace trace;
    trace.infected.assign(static_cast<std::size_t>(topo.n_nodes), false);
    for (int s : seed) {
        if (s < 0 || s >= topo.n_nodes) {
            throw std::invalid_argument("infect_from: seed node out of range");
        }
        trace.infected[static_cast<std::size_t>(s)] = true;
    }

    bool progressed = true;
    while (progressed) {
        progressed = false;
        for (int k = 0; k < topo.n_nodes && !progressed; ++k) {
            if (!trace.infected[static_cast<std::size_t>(k)]) continue;
            int healthy = -1;
            int healthy_count = 0;
            for (int m : topo.neighbors(k)) {
                if (!trace.infected[static_cast<std::size_t>(m)]) {
                    healthy = m;
                    ++healthy_count;
                }
            }
            if (healthy_count == 1) {
                trace.infected[static_cast<std::size_t>(healthy)] = true;
                trace.steps.push_back({healthy, k});
                progressed = true;
            }
        }
    }
    return trace;
}

InfectionTrace infect(const Topology& topo) { return infect_from(topo, topo.control_set); }

bool is_infecting(const Topology& topo) { return infect(topo).all_infected(); }

std::vector<int> minimal_infecting_set(const Topology& topo, int max_nodes) {
    const int n = topo.n_nodes;
    if (n > max_nodes) {
        throw std::invalid_argument("minimal_infecting_set: exhaustive search capped at " +
                                    std::to_string(max_nodes) + " nodes");
    }
    for (int size = 1; size <= n; ++size) {
        // Lexicographically ordered combinations of the given size.
        std::vector<int> pick(static_cast<std::size_t>(size));
        for (int i = 0; i < size; ++i) pick[static_cast<std::size_t>(i)] = i;
        while (true) {
            if (infect_from(topo, pick).all_infected()) return pick;
            int i = size - 1;
            while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - size + i) --i;
            if (i < 0) break;
            ++pick[static_cast<std::size_t>(i)];
            for (int j = i + 1; j < size; ++j) {
                pick[static_cast<std::size_t>(j)] = pick[static_cast<std::size_t>(j - 1)] + 1;
            }
        }
    }
    throw std::logic_error("minimal_infecting_set: the full node set must infect itself");
}

QuantumSystem build_system(const Topology& topo, std::optional<Matrix> initial_state) {
    const Eigen::Index d = topo.n_nodes;
    Matrix drift = Matrix::Zero(d, d);
    for (const auto& [edge, c] : topo.couplings) {
        drift(edge.first, edge.second) += c;
        drift(edge.second, edge.first) += std::conj(c);
    }

    std::vector<Matrix> controls;
    controls.reserve(topo.control_set.size());
    for (int k : topo.control_set) {
        controls.push_back(projector(d, k) - Matrix::Identity(d, d) / static_cast<double>(d));
    }

    Matrix rho0 = initial_state ? std::move(*initial_state) : projector(d, topo.measured_node);
    return make_system(std::move(drift), std::move(controls),
                       {projector(d, topo.measured_node)}, std::move(rho0));
}

InfectionControllabilityReport verify_infection_controllability(const Topology& topo,
                                                                double rank_tol) {
    if (!is_infecting(topo)) {
        throw std::invalid_argument(
            "verify_infection_controllability: control set is not infecting");
    }

    QuantumSystem sys = build_system(topo);
    std::vector<Matrix> generators;
    generators.reserve(sys.controls.size() + 1);
    generators.push_back(sys.drift.mat);
    for (const Operator& h : sys.controls) generators.push_back(h.mat);
    LieBasis closure = lie_closure(generators, rank_tol);

    InfectionControllabilityReport report;
    report.closure_dimension = closure.dimension();
    report.full_dimension = static_cast<Eigen::Index>(topo.n_nodes) * topo.n_nodes - 1;
    report.closure_depth = closure.closure_depth;
    report.controllable = report.closure_dimension == report.full_dimension;

    // Frontier edge: lowest control node with exactly one non-control
    // neighbor. None exists when every node is controlled.
    int k = -1, l = -1;
    for (int node : topo.control_set) {
        int healthy = -1, healthy_count = 0;
        for (int m : topo.neighbors(node)) {
            if (!topo.is_control(m)) {
                healthy = m;
                ++healthy_count;
            }
        }
        if (healthy_count == 1) {
            k = node;
            l = healthy;
            break;
        }
    }
    if (k < 0) return report;

    const Eigen::Index d = topo.n_nodes;
    const Complex i1(0.0, 1.0);
    Matrix ihk = i1 * projector(d, k);
    Matrix ih0 = i1 * sys.drift.mat;

    // Double commutator with the occupation reproduces the couplings of k:
    // [[iHk, iH0], iHk] = i sum_{m ~ k} (c_km |k><m| + c_mk |m><k|).
    Matrix lhs = commutator(commutator(ihk, ih0), ihk);
    Matrix expected = Matrix::Zero(d, d);
    for (int m : topo.neighbors(k)) {
        expected += i1 * (topo.coupling(k, m) * basis_op(d, k, m) +
                          topo.coupling(m, k) * basis_op(d, m, k));
    }
    double identity_residual = (lhs - expected).norm();

    // Isolating the frontier coupling and squaring it out leaves the
    // neighbour occupation: with A = i(c|k><l| + conj(c)|l><k|),
    // [A, [A, iHk]] + 2|c|^2 iHk = 2|c|^2 i|l><l|.
    Complex c = topo.coupling(k, l);
    Matrix a = i1 * (c * basis_op(d, k, l) + std::conj(c) * basis_op(d, l, k));
    Matrix ladder = commutator(a, commutator(a, ihk));
    double c2 = std::norm(c);
    Matrix iso = (ladder + 2.0 * c2 * ihk) / (2.0 * c2);
    double iso_residual = (iso - i1 * projector(d, l)).norm();
    report.ladder_identity_residual = std::max(identity_residual, iso_residual);

    Matrix direction =
        i1 * (projector(d, l) - Matrix::Identity(d, d) / static_cast<double>(d));
    report.ladder_membership_residual = closure.projection_residual(direction);
    return report;
}

}  // namespace qsysid
