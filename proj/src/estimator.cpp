// estimator.cpp

#include "qsysid/estimator.hpp"

#include <unsupported/Eigen/NonLinearOptimization>
#include <unsupported/Eigen/NumericalDiff>

#include <cmath>
#include <limits>
#include <numbers>
#include <queue>
#include <random>
#include <stdexcept>

namespace qsysid {

namespace {

std::vector<NodePair> edge_list(const Topology& topo) {
    std::vector<NodePair> edges;
    edges.reserve(topo.couplings.size());
    for (const auto& [edge, c] : topo.couplings) edges.push_back(edge);
    return edges;
}

void check_edge_sets(const CouplingMap& a, const Topology& topo, const char* who) {
    if (a.size() != topo.couplings.size()) {
        throw std::invalid_argument(std::string(who) + ": edge set mismatch");
    }
    for (const auto& [edge, c] : topo.couplings) {
        if (a.find(edge) == a.end()) {
            throw std::invalid_argument(std::string(who) + ": edge set mismatch");
        }
    }
}

CouplingMap couplings_from_params(const std::vector<NodePair>& edges, const RealVector& x) {
    CouplingMap c;
    for (std::size_t e = 0; e < edges.size(); ++e) {
        double mag = std::exp(x(static_cast<Eigen::Index>(2 * e)));
        double phase = x(static_cast<Eigen::Index>(2 * e + 1));
        c[edges[e]] = std::polar(mag, phase);
    }
    return c;
}

// Least-squares residual functor in the shape Eigen's Levenberg-Marquardt
// driver expects; padded with zero residuals when the data give fewer values
// than parameters.
struct CouplingResiduals {
    using Scalar = double;
    enum { InputsAtCompileTime = Eigen::Dynamic, ValuesAtCompileTime = Eigen::Dynamic };
    using InputType = RealVector;
    using ValueType = RealVector;
    using JacobianType = RealMatrix;

    const EstimationProblem& problem;
    const std::vector<NodePair>& edges;
    Eigen::Index n_inputs;
    Eigen::Index n_values;

    CouplingResiduals(const EstimationProblem& p, const std::vector<NodePair>& e,
                      Eigen::Index data_count)
        : problem(p),
          edges(e),
          n_inputs(static_cast<Eigen::Index>(2 * e.size())),
          n_values(std::max(data_count, static_cast<Eigen::Index>(2 * e.size()))) {}

    int inputs() const { return static_cast<int>(n_inputs); }
    int values() const { return static_cast<int>(n_values); }

    int operator()(const RealVector& x, RealVector& fvec) const {
        fvec.setZero(n_values);
        CouplingMap candidate = couplings_from_params(edges, x);
        Topology topo = with_couplings(problem.topology, candidate);
        Eigen::Index at = 0;
        for (std::size_t i = 0; i < problem.experiments.size(); ++i) {
            const Experiment& exp = problem.experiments[i];
            ExpectationRecord sim = record(build_system(topo), exp.schedule, exp.sample_times);
            const ExpectationRecord& data = problem.records[i];
            for (std::size_t l = 0; l < sim.values.size(); ++l) {
                for (std::size_t t = 0; t < sim.values[l].size(); ++t) {
                    fvec(at++) = sim.values[l][t] - data.values[l][t];
                }
            }
        }
        return 0;
    }
};

}  // namespace

EstimationProblem make_estimation_problem(Topology topology,
                                          std::vector<Experiment> experiments,
                                          std::vector<ExpectationRecord> records) {
    if (!is_infecting(topology)) {
        throw std::invalid_argument("make_estimation_problem: control set is not infecting");
    }
    if (experiments.size() != records.size()) {
        throw std::invalid_argument(
            "make_estimation_problem: one record per experiment required");
    }
    for (std::size_t i = 0; i < experiments.size(); ++i) {
        if (records[i].times.size() != experiments[i].sample_times.size()) {
            throw std::invalid_argument(
                "make_estimation_problem: record sample count disagrees with experiment");
        }
    }
    EstimationProblem problem;
    problem.topology = std::move(topology);
    problem.experiments = std::move(experiments);
    problem.records = std::move(records);
    return problem;
}

Topology with_couplings(const Topology& topo, const CouplingMap& couplings) {
    check_edge_sets(couplings, topo, "with_couplings");
    return make_topology(topo.n_nodes, couplings, topo.control_set, topo.measured_node);
}

std::vector<ExpectationRecord> simulate_experiments(const Topology& topo,
                                                    const std::vector<Experiment>& experiments,
                                                    const RecordOptions& options) {
    QuantumSystem sys = build_system(topo);
    std::vector<ExpectationRecord> out;
    out.reserve(experiments.size());
    RecordOptions opts = options;
    for (const Experiment& exp : experiments) {
        out.push_back(record(sys, exp.schedule, exp.sample_times, opts));
        ++opts.noise_seed;  // independent draws per experiment
    }
    return out;
}

double objective(const CouplingMap& candidate, const EstimationProblem& problem) {
    check_edge_sets(candidate, problem.topology, "objective");
    Topology topo = with_couplings(problem.topology, candidate);
    QuantumSystem sys = build_system(topo);
    double total = 0.0;
    for (std::size_t i = 0; i < problem.experiments.size(); ++i) {
        const Experiment& exp = problem.experiments[i];
        ExpectationRecord sim = record(sys, exp.schedule, exp.sample_times);
        for (std::size_t l = 0; l < sim.values.size(); ++l) {
            for (std::size_t t = 0; t < sim.values[l].size(); ++t) {
                double diff = sim.values[l][t] - problem.records[i].values[l][t];
                total += diff * diff;
            }
        }
    }
    return total;
}

EstimationResult estimate(const EstimationProblem& problem, const EstimateOptions& options) {
    if (options.starts < 1 || options.max_evals_per_start < 1 || options.tau_fit <= 0.0) {
        throw std::invalid_argument("estimate: options out of range");
    }
    std::vector<NodePair> edges = edge_list(problem.topology);

    EstimationResult result;
    result.method = "multi-start levenberg-marquardt, forward-difference jacobian, "
                    "log-magnitude/phase parameters";

    Eigen::Index data_count = 0;
    for (const ExpectationRecord& rec : problem.records) {
        for (const auto& row : rec.values) {
            data_count += static_cast<Eigen::Index>(row.size());
        }
    }
    if (problem.experiments.empty() || data_count == 0) {
        result.warning = "degenerate problem: no recorded data, nothing to fit";
        for (const NodePair& e : edges) result.couplings[e] = Complex(1.0, 0.0);
        result.objective_value = objective(result.couplings, problem);
        return result;
    }

    CouplingResiduals functor(problem, edges, data_count);
    Eigen::NumericalDiff<CouplingResiduals> numdiff(functor);

    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    std::uniform_real_distribution<double> phase(-std::numbers::pi, std::numbers::pi);

    double best_obj = std::numeric_limits<double>::infinity();
    RealVector best_x = RealVector::Zero(functor.inputs());
    for (int start = 0; start < options.starts; ++start) {
        RealVector x(functor.inputs());
        if (start == 0) {
            x.setZero();  // all couplings 1
        } else {
            for (std::size_t e = 0; e < edges.size(); ++e) {
                x(static_cast<Eigen::Index>(2 * e)) = std::log(mag(rng));
                x(static_cast<Eigen::Index>(2 * e + 1)) = phase(rng);
            }
        }

        Eigen::LevenbergMarquardt<Eigen::NumericalDiff<CouplingResiduals>> lm(numdiff);
        lm.parameters.maxfev = options.max_evals_per_start;
        lm.parameters.ftol = 1e-15;
        lm.parameters.xtol = 1e-15;
        lm.minimize(x);
        result.iterations += static_cast<int>(lm.iter);
        ++result.starts_used;

        RealVector fvec(functor.values());
        functor(x, fvec);
        double obj = fvec.squaredNorm();
        if (std::isfinite(obj) && obj < best_obj) {
            best_obj = obj;
            best_x = x;
        }
        if (best_obj <= options.tau_fit) break;
    }

    result.couplings = couplings_from_params(edges, best_x);
    result.objective_value = best_obj;
    result.converged = best_obj <= options.tau_fit;
    if (!result.converged) {
        result.warning = "no start reached the fit tolerance; returning best effort";
    }
    if (problem.truth) {
        result.gauge_error = gauge_distance(result.couplings, *problem.truth, problem.topology);
    }
    return result;
}

CouplingMap gauge_fix(const CouplingMap& couplings, const Topology& topo) {
    check_edge_sets(couplings, topo, "gauge_fix");

    // Node phases from a breadth-first tree rooted at the measured node.
    std::vector<double> node_phase(static_cast<std::size_t>(topo.n_nodes), 0.0);
    std::vector<bool> seen(static_cast<std::size_t>(topo.n_nodes), false);
    std::queue<int> queue;
    seen[static_cast<std::size_t>(topo.measured_node)] = true;
    queue.push(topo.measured_node);
    int reached = 1;
    auto oriented = [&](int from, int to) {
        return from < to ? couplings.at({from, to}) : std::conj(couplings.at({to, from}));
    };
    while (!queue.empty()) {
        int p = queue.front();
        queue.pop();
        for (int child : topo.neighbors(p)) {
            if (seen[static_cast<std::size_t>(child)]) continue;
            seen[static_cast<std::size_t>(child)] = true;
            // e^{i phi_p} c_{p,child} e^{-i phi_child} real positive:
            node_phase[static_cast<std::size_t>(child)] =
                node_phase[static_cast<std::size_t>(p)] + std::arg(oriented(p, child));
            queue.push(child);
            ++reached;
        }
    }
    if (reached != topo.n_nodes) {
        throw std::invalid_argument("gauge_fix: topology is disconnected");
    }

    CouplingMap fixed;
    for (const auto& [edge, c] : couplings) {
        double delta = node_phase[static_cast<std::size_t>(edge.first)] -
                       node_phase[static_cast<std::size_t>(edge.second)];
        fixed[edge] = c * std::polar(1.0, delta);
    }
    return fixed;
}

double gauge_distance(const CouplingMap& a, const CouplingMap& b, const Topology& topo) {
    CouplingMap fa = gauge_fix(a, topo);
    CouplingMap fb = gauge_fix(b, topo);
    double sum = 0.0;
    for (const auto& [edge, ca] : fa) {
        sum += std::norm(ca - fb.at(edge));
    }
    return std::sqrt(sum);
}

std::vector<Experiment> default_experiments(const Topology& topo, std::uint64_t seed,
                                            int count, int segments, int samples) {
    if (count < 1 || segments < 1 || samples < 1) {
        throw std::invalid_argument("default_experiments: counts must be positive");
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    const double total = static_cast<double>(topo.n_nodes);
    const auto n_controls = static_cast<Eigen::Index>(topo.control_set.size());

    std::vector<Experiment> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        std::vector<ControlSchedule::Segment> segs(static_cast<std::size_t>(segments));
        for (auto& seg : segs) {
            seg.duration = total / segments;
            seg.amplitudes.resize(n_controls);
            for (Eigen::Index k = 0; k < n_controls; ++k) seg.amplitudes(k) = amp(rng);
        }
        Experiment exp;
        exp.schedule = make_schedule(std::move(segs));
        exp.sample_times.reserve(static_cast<std::size_t>(samples));
        for (int s = 1; s <= samples; ++s) {
            exp.sample_times.push_back(total * s / samples);
        }
        out.push_back(std::move(exp));
    }
    return out;
}

}  // namespace qsysid
