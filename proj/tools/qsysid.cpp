// qsysid.cpp — batch front end: parse JSON descriptions, dispatch analyses,
// emit machine-readable (and human-readable) reports.
//
// Exit codes: 0 analysis succeeded with a positive verdict, 2 analysis
// succeeded with a negative verdict (not controllable, inequivalent, not
// infecting, residual gauge remaining, fit not converged), 1 any error.

#include "qsysid/commutant.hpp"
#include "qsysid/dynamics.hpp"
#include "qsysid/equivalence.hpp"
#include "qsysid/estimator.hpp"
#include "qsysid/io.hpp"
#include "qsysid/lie.hpp"
#include "qsysid/moments.hpp"
#include "qsysid/topology.hpp"

#include "CLI11.hpp"

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

namespace {

using qsysid::Json;

struct Request {
    std::string input;
    std::optional<double> tol;
    int lmax = 0;
    std::uint64_t seed = 0;
    std::string output;
    std::string format = "json";
};

void add_common_options(CLI::App* cmd, Request& req) {
    cmd->add_option("--input", req.input, "input JSON document")->required();
    cmd->add_option("--tol", req.tol, "tolerance override");
    cmd->add_option("--lmax", req.lmax, "moment comparison depth (equivalence)");
    cmd->add_option("--seed", req.seed, "random seed");
    cmd->add_option("--output", req.output, "write the report here instead of stdout");
    cmd->add_option("--format", req.format, "report format")
        ->check(CLI::IsMember({"json", "text"}));
}

// Documents may wrap the payload under a named key or be the payload itself.
const Json& unwrap(const Json& doc, const char* key) {
    if (doc.is_object() && doc.contains(key)) return doc.at(key);
    return doc;
}

Json base_report(const std::string& command, const Request& req) {
    Json j;
    j["schema_version"] = qsysid::kSchemaVersion;
    j["command"] = command;
    j["seed"] = req.seed;
    return j;
}

void emit(const Json& report, const Request& req) {
    std::string text =
        req.format == "text" ? qsysid::render_text(report) : report.dump(2) + "\n";
    if (req.output.empty()) {
        std::cout << text;
    } else {
        qsysid::save_text(req.output, text);
    }
}

int run_controllability(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::QuantumSystem sys = qsysid::system_from_json(unwrap(doc, "system"));
    double tol = req.tol.value_or(qsysid::kRankTol);
    qsysid::ControllabilityReport rep = qsysid::is_controllable(sys, tol);

    Json report = base_report("controllability", req);
    report["rank_tolerance"] = tol;
    report["controllable"] = rep.controllable;
    report["closure_dimension"] = rep.closure_dimension;
    report["full_dimension"] = rep.full_dimension;
    report["closure_depth"] = rep.closure_depth;
    emit(report, req);
    return rep.controllable ? 0 : 2;
}

int run_equivalence(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::QuantumSystem sys = qsysid::system_from_json(unwrap(doc, "system"));
    if (!doc.is_object() || !doc.contains("candidate")) {
        throw std::invalid_argument("equivalence: input needs a \"candidate\" system");
    }
    qsysid::QuantumSystem candidate = qsysid::system_from_json(doc.at("candidate"));
    double tol = req.tol.value_or(1e-8);
    qsysid::EquivalenceOutcome outcome =
        qsysid::equivalence_certificate(sys, candidate, tol);

    Json report = base_report("equivalence", req);
    report["tolerance"] = tol;
    report["equivalent"] = outcome.equivalent;
    if (outcome.certificate) {
        const auto& cert = *outcome.certificate;
        report["residual"] = cert.residual;
        report["smallest_singular_value"] = cert.smallest_singular_value;
        report["spanning_indices"] = cert.pairing.size();
        if (cert.unitary) {
            report["unitary"] = qsysid::matrix_to_json(cert.unitary->mat);
        }
    }
    if (outcome.witness) {
        const auto& w = *outcome.witness;
        Json jw;
        jw["description"] = w.description;
        jw["hatted_residual"] = w.hatted_residual;
        jw["unhatted_residual"] = w.unhatted_residual;
        Json support = Json::array();
        for (const auto& alpha : w.support) support.push_back(alpha);
        jw["support"] = std::move(support);
        std::vector<double> coeffs(w.coefficients.data(),
                                   w.coefficients.data() + w.coefficients.size());
        jw["coefficients"] = coeffs;
        report["witness"] = std::move(jw);
    }
    if (req.lmax > 0) {
        qsysid::MomentComparison cmp =
            qsysid::moments_equal(sys, candidate, req.lmax, tol);
        Json jm;
        jm["max_length"] = req.lmax;
        jm["equal"] = cmp.equal;
        jm["terms_compared"] = cmp.terms_compared;
        if (!cmp.equal) {
            jm["observable"] = cmp.observable;
            jm["alpha"] = cmp.alpha;
            jm["lhs"] = cmp.lhs;
            jm["rhs"] = cmp.rhs;
        }
        report["moments"] = std::move(jm);
    }
    emit(report, req);
    return outcome.equivalent ? 0 : 2;
}

int run_commutant(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    const Json& jops = unwrap(doc, "operators");
    if (!jops.is_array() || jops.empty()) {
        throw std::invalid_argument("commutant: input needs a non-empty \"operators\" array");
    }
    std::vector<qsysid::Matrix> ops;
    ops.reserve(jops.size());
    for (std::size_t i = 0; i < jops.size(); ++i) {
        ops.push_back(
            qsysid::matrix_from_json(jops[i], "operators[" + std::to_string(i) + "]"));
    }
    double tol = req.tol.value_or(qsysid::kRankTol);
    qsysid::CommutantBasis basis = qsysid::commutant(ops, tol);

    Json report = base_report("commutant", req);
    report["rank_tolerance"] = tol;
    report["dimension"] = basis.dimension();
    report["residual_gauge_dim"] = basis.residual_gauge_dim();
    Json elements = Json::array();
    for (const auto& op : basis.elements) elements.push_back(qsysid::matrix_to_json(op.mat));
    report["basis"] = std::move(elements);
    emit(report, req);
    return 0;
}

int run_identifiability(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::QuantumSystem sys = qsysid::system_from_json(unwrap(doc, "system"));
    qsysid::KnownMask mask = qsysid::empty_mask(sys);
    if (doc.is_object() && doc.contains("known")) {
        const Json& jk = doc.at("known");
        if (jk.contains("drift")) mask.drift = jk.at("drift").get<bool>();
        if (jk.contains("controls")) mask.controls = jk.at("controls").get<std::vector<bool>>();
        if (jk.contains("observables")) {
            mask.observables = jk.at("observables").get<std::vector<bool>>();
        }
        if (jk.contains("initial_state")) {
            mask.initial_state = jk.at("initial_state").get<bool>();
        }
    }
    double tol = req.tol.value_or(qsysid::kRankTol);
    qsysid::IdentifiabilityReport rep = qsysid::identifiability_report(sys, mask, tol);

    Json report = base_report("identifiability", req);
    report["rank_tolerance"] = tol;
    report["commutant_dimension"] = rep.commutant.dimension();
    report["residual_gauge_dim"] = rep.residual_gauge_dim;
    report["fully_identifiable"] = rep.fully_identifiable;
    emit(report, req);
    return rep.fully_identifiable ? 0 : 2;
}

int run_infect(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::Topology topo = qsysid::topology_from_json(unwrap(doc, "topology"));
    qsysid::InfectionTrace trace = qsysid::infect(topo);

    Json report = base_report("infect", req);
    report["control_set"] = topo.control_set;
    Json steps = Json::array();
    for (const auto& step : trace.steps) {
        steps.push_back(Json::array({step.node, step.source}));
    }
    report["steps"] = std::move(steps);
    report["infected"] = trace.infected;
    report["all_infected"] = trace.all_infected();
    emit(report, req);
    return trace.all_infected() ? 0 : 2;
}

int run_minimal_set(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::Topology topo = qsysid::topology_from_json(unwrap(doc, "topology"));
    std::vector<int> set = qsysid::minimal_infecting_set(topo);

    Json report = base_report("minimal-set", req);
    report["minimal_infecting_set"] = set;
    report["size"] = set.size();
    emit(report, req);
    return 0;
}

int run_simulate(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    std::optional<qsysid::QuantumSystem> sys;
    if (doc.is_object() && doc.contains("system")) {
        sys = qsysid::system_from_json(doc.at("system"));
    } else if (doc.is_object() && doc.contains("topology")) {
        sys = qsysid::build_system(qsysid::topology_from_json(doc.at("topology")));
    } else {
        throw std::invalid_argument("simulate: input needs a \"system\" or a \"topology\"");
    }
    qsysid::ControlSchedule schedule =
        qsysid::schedule_from_json(unwrap(doc, "schedule"), "schedule");
    if (!doc.is_object() || !doc.contains("sample_times")) {
        throw std::invalid_argument("simulate: input needs \"sample_times\"");
    }
    std::vector<double> times = doc.at("sample_times").get<std::vector<double>>();
    qsysid::RecordOptions options;
    options.noise_seed = req.seed;
    if (doc.contains("noise_std")) options.noise_std = doc.at("noise_std").get<double>();
    qsysid::ExpectationRecord rec = qsysid::record(*sys, schedule, times, options);

    Json report = base_report("simulate", req);
    report["noise_std"] = options.noise_std;
    report["record"] = qsysid::record_to_json(rec);
    emit(report, req);
    return 0;
}

int run_estimate(const Request& req) {
    Json doc = qsysid::load_json(req.input);
    qsysid::Topology topo = qsysid::topology_from_json(unwrap(doc, "topology"));
    if (!doc.is_object() || !doc.contains("experiments") || !doc.at("experiments").is_array()) {
        throw std::invalid_argument("estimate: input needs an \"experiments\" array");
    }
    std::vector<qsysid::Experiment> experiments;
    const Json& je = doc.at("experiments");
    experiments.reserve(je.size());
    for (std::size_t i = 0; i < je.size(); ++i) {
        experiments.push_back(qsysid::experiment_from_json(
            je[i], "experiments[" + std::to_string(i) + "]"));
    }

    std::optional<qsysid::CouplingMap> truth;
    if (doc.contains("truth")) {
        truth = qsysid::couplings_from_json(doc.at("truth"), "truth");
    }

    std::vector<qsysid::ExpectationRecord> records;
    if (doc.contains("records")) {
        const Json& jr = doc.at("records");
        if (!jr.is_array()) throw std::invalid_argument("estimate: \"records\" must be an array");
        for (std::size_t i = 0; i < jr.size(); ++i) {
            records.push_back(
                qsysid::record_from_json(jr[i], "records[" + std::to_string(i) + "]"));
        }
    } else if (truth) {
        // Harness-style input: synthesize the data from the hidden truth.
        records = qsysid::simulate_experiments(qsysid::with_couplings(topo, *truth),
                                               experiments);
    } else {
        throw std::invalid_argument("estimate: input needs \"records\" or \"truth\"");
    }

    qsysid::EstimationProblem problem = qsysid::make_estimation_problem(
        std::move(topo), std::move(experiments), std::move(records));
    problem.truth = std::move(truth);

    qsysid::EstimateOptions options;
    options.seed = req.seed;
    if (req.tol) options.tau_fit = *req.tol;
    qsysid::EstimationResult result = qsysid::estimate(problem, options);

    Json report = base_report("estimate", req);
    report["tau_fit"] = options.tau_fit;
    report["method"] = result.method;
    report["couplings"] = qsysid::couplings_to_json(result.couplings);
    report["objective"] = result.objective_value;
    report["iterations"] = result.iterations;
    report["starts_used"] = result.starts_used;
    report["converged"] = result.converged;
    if (!result.warning.empty()) report["warning"] = result.warning;
    if (result.gauge_error) report["gauge_error"] = *result.gauge_error;
    emit(report, req);
    return result.converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"controllability, equivalence, identifiability, and coupling "
                 "estimation for finite-dimensional controlled quantum systems"};
    app.require_subcommand(1);

    struct Command {
        const char* name;
        const char* help;
        int (*run)(const Request&);
        Request req;
    };
    Command commands[] = {
        {"controllability", "Lie-closure rank test", run_controllability, {}},
        {"equivalence", "similarity certificate between two systems", run_equivalence, {}},
        {"commutant", "commutant basis of known operators", run_commutant, {}},
        {"identifiability", "residual gauge given known parts", run_identifiability, {}},
        {"infect", "propagate infection from the control set", run_infect, {}},
        {"minimal-set", "smallest infecting seed set", run_minimal_set, {}},
        {"simulate", "record expectations along a schedule", run_simulate, {}},
        {"estimate", "fit couplings to recorded data", run_estimate, {}},
    };
    for (auto& cmd : commands) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
        add_common_options(sub, cmd.req);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        for (auto& cmd : commands) {
            if (app.get_subcommand(cmd.name)->parsed()) {
                return cmd.run(cmd.req);
            }
        }
        std::cerr << "error: no command selected\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
