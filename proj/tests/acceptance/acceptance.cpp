// acceptance.cpp — release gate. Runs the eight acceptance checks end to end
// and prints exactly one PASS/FAIL line per criterion; exits nonzero when any
// criterion fails.

#include "qsysid/commutant.hpp"
#include "qsysid/dynamics.hpp"
#include "qsysid/equivalence.hpp"
#include "qsysid/estimator.hpp"
#include "qsysid/lie.hpp"
#include "qsysid/moments.hpp"
#include "qsysid/operator.hpp"
#include "qsysid/superop.hpp"
#include "qsysid/system.hpp"
#include "qsysid/topology.hpp"

#include "test_support.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace qsysid;

namespace {

using Clock = std::chrono::steady_clock;

int failures = 0;

void report(int number, const std::string& label, bool pass, const std::string& detail,
            double seconds) {
    if (!pass) ++failures;
    std::printf("%s  %d  %-52s  %s  [%.2fs]\n", pass ? "PASS" : "FAIL", number,
                label.c_str(), detail.c_str(), seconds);
    std::fflush(stdout);
}

void run(int number, const std::string& label,
         const std::function<std::pair<bool, std::string>()>& body) {
    auto t0 = Clock::now();
    bool pass = false;
    std::string detail;
    try {
        std::tie(pass, detail) = body();
    } catch (const std::exception& e) {
        pass = false;
        detail = std::string("exception: ") + e.what();
    }
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    report(number, label, pass, detail, seconds);
}

Matrix singlet_projector() {
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

QuantumSystem random_controllable(std::mt19937_64& rng, Eigen::Index d) {
    for (int attempt = 0; attempt < 16; ++attempt) {
        QuantumSystem sys = testsup::random_system(rng, d, 2, 1);
        if (is_controllable(sys).controllable) return sys;
    }
    throw std::runtime_error("no controllable instance found");
}

// ---- criterion 1: residual gauge of the two-qubit observables ----------

std::pair<bool, std::string> criterion_gauge_cases() {
    auto t0 = Clock::now();
    std::vector<Matrix> controls{testsup::pauli_on(0, pauli_x()),
                                 testsup::pauli_on(0, pauli_y())};

    auto residual = [&](const Matrix& observable) {
        std::vector<Matrix> known = controls;
        known.push_back(observable);
        return commutant(known).residual_gauge_dim();
    };

    int local = residual(testsup::pauli_on(0, pauli_z()));
    int correlated = residual(kron(pauli_z(), pauli_z()));
    int entangled = residual(singlet_projector());
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();

    bool pass = local == 3 && correlated == 1 && entangled == 0 && seconds < 1.0;
    std::ostringstream detail;
    detail << "gauge dims " << local << "/" << correlated << "/" << entangled
           << " (want 3/1/0), " << seconds << "s (budget 1s)";
    return {pass, detail.str()};
}

// ---- criterion 2: closure dimension vs independent rank oracle ---------

std::pair<bool, std::string> criterion_closure_oracle() {
    auto t0 = Clock::now();
    QuantumSystem pair = testsup::two_qubit_example();
    Eigen::Index pinned_dim =
        lie_closure(std::vector<Matrix>{pair.drift.mat, pair.controls[0].mat,
                                        pair.controls[1].mat})
            .dimension();
    if (pinned_dim != 15) {
        return {false, "two-qubit closure dimension " + std::to_string(pinned_dim) +
                           " (want 15)"};
    }

    auto rng = testsup::make_rng(1002);
    const Eigen::Index dims[] = {2, 3, 4, 8};
    int matched = 0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Index d = dims[trial % 4];
        int n_gen = 1 + static_cast<int>(rng() % 3);
        std::vector<Matrix> gens;
        for (int g = 0; g < n_gen; ++g)
            gens.push_back(testsup::random_traceless_hermitian(rng, d));
        Eigen::Index lhs = lie_closure(gens).dimension();
        Eigen::Index rhs = testsup::closure_rank_oracle(gens);
        if (lhs == rhs) ++matched;
    }
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = matched == 50 && seconds < 30.0;
    std::ostringstream detail;
    detail << matched << "/50 oracle matches, two-qubit dim 15, " << seconds
           << "s (budget 30s)";
    return {pass, detail.str()};
}

// ---- criterion 3: moments and certificates of conjugated systems -------

std::pair<bool, std::string> criterion_equivalence() {
    auto rng = testsup::make_rng(1003);
    const Eigen::Index dims[] = {2, 3, 4, 8};
    int moment_ok = 0, certificate_ok = 0;
    double worst_residual = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::Index d = dims[trial % 4];
        QuantumSystem sys = random_controllable(rng, d);
        Matrix u = testsup::random_unitary(rng, d);
        QuantumSystem hatted = conjugate_system(sys, u);

        if (moments_equal(sys, hatted, 6, 1e-8).equal) ++moment_ok;
        EquivalenceOutcome out = equivalence_certificate(sys, hatted);
        if (out.equivalent && out.certificate && out.certificate->residual <= 1e-8) {
            ++certificate_ok;
            worst_residual = std::max(worst_residual, out.certificate->residual);
        }
    }
    bool pass = moment_ok == 50 && certificate_ok == 50;
    std::ostringstream detail;
    detail << moment_ok << "/50 moment matches (L=6, tol 1e-8), " << certificate_ok
           << "/50 certificates, worst residual " << worst_residual;
    return {pass, detail.str()};
}

// ---- criterion 4: unitary recovery and perturbation sensitivity --------

std::pair<bool, std::string> criterion_unitary_recovery() {
    auto rng = testsup::make_rng(1004);
    int recovered = 0;
    double worst = 0.0;
    const int n_rec = 12;
    for (int trial = 0; trial < n_rec; ++trial) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(trial % 3);
        QuantumSystem sys = random_controllable(rng, d);
        Matrix u = testsup::random_unitary(rng, d);
        QuantumSystem hatted = conjugate_system(sys, u);
        EquivalenceOutcome out = equivalence_certificate(sys, hatted);
        if (!out.equivalent || !out.certificate || !out.certificate->unitary) continue;
        // T maps hatted onto sys, so the recovered unitary is u^dagger.
        double err = testsup::phase_aligned_distance(out.certificate->unitary->mat,
                                                     Matrix(u.adjoint()));
        worst = std::max(worst, err);
        if (err <= 1e-6) ++recovered;
    }

    int flipped = 0;
    const int n_flip = 5;
    for (int trial = 0; trial < n_flip; ++trial) {
        Eigen::Index d = 2 + static_cast<Eigen::Index>(trial % 3);
        QuantumSystem sys = random_controllable(rng, d);
        Matrix u = testsup::random_unitary(rng, d);
        QuantumSystem hatted = conjugate_system(sys, u);
        Matrix bumped = hatted.drift.mat;
        bumped(0, 1) += Complex(1e-2, 0.0);
        bumped(1, 0) += Complex(1e-2, 0.0);
        std::vector<Matrix> controls;
        for (const auto& c : hatted.controls) controls.push_back(c.mat);
        QuantumSystem perturbed = make_system(bumped, controls,
                                              {hatted.observables[0].mat},
                                              hatted.initial_state.mat);
        EquivalenceOutcome out = equivalence_certificate(sys, perturbed);
        if (!out.equivalent && out.witness) ++flipped;
    }

    bool pass = recovered == n_rec && flipped == n_flip;
    std::ostringstream detail;
    detail << recovered << "/" << n_rec << " unitaries within 1e-6 (worst " << worst
           << "), " << flipped << "/" << n_flip << " perturbation flips with witness";
    return {pass, detail.str()};
}

// ---- criterion 5: infection implies a full closure ---------------------

std::pair<bool, std::string> criterion_infection_controllability() {
    auto rng = testsup::make_rng(1005);
    int full = 0, ladder_ok = 0;
    double worst_ladder = 0.0;
    const int n_graphs = 200;
    for (int trial = 0; trial < n_graphs; ++trial) {
        int n = 2 + static_cast<int>(rng() % 5);  // up to 6 nodes
        CouplingMap couplings =
            testsup::random_connected_couplings(rng, n, static_cast<int>(rng() % 3));

        // Grow a random seed until it infects; the full set always does.
        std::vector<int> seed{static_cast<int>(rng() % n)};
        Topology probe = make_topology(n, couplings, seed, seed.front());
        while (!is_infecting(probe)) {
            int next = static_cast<int>(rng() % n);
            if (probe.is_control(next)) continue;
            seed.push_back(next);
            std::sort(seed.begin(), seed.end());
            probe = make_topology(n, couplings, seed, seed.front());
        }

        InfectionControllabilityReport rep = verify_infection_controllability(probe);
        if (rep.controllable &&
            rep.closure_dimension == Eigen::Index(n) * n - 1) ++full;
        worst_ladder = std::max(worst_ladder, rep.ladder_identity_residual);
        if (rep.ladder_identity_residual <= 1e-12) ++ladder_ok;
    }
    bool pass = full == n_graphs && ladder_ok == n_graphs;
    std::ostringstream detail;
    detail << full << "/" << n_graphs << " full closures, " << ladder_ok << "/"
           << n_graphs << " ladder identities within 1e-12 (worst " << worst_ladder
           << ")";
    return {pass, detail.str()};
}

// ---- criterion 6: minimal infecting sets of the graph families ---------

std::pair<bool, std::string> criterion_minimal_sets() {
    int checked = 0, correct = 0;
    for (int n = 2; n <= 8; ++n) {
        CouplingMap path;
        for (int i = 0; i + 1 < n; ++i) path[{i, i + 1}] = Complex(1.0, 0.0);
        ++checked;
        if (minimal_infecting_set(make_topology(n, path, {0}, 0)).size() == 1) ++correct;

        if (n >= 3) {
            CouplingMap cycle = path;
            cycle[{0, n - 1}] = Complex(1.0, 0.0);
            ++checked;
            if (minimal_infecting_set(make_topology(n, cycle, {0}, 0)).size() == 2)
                ++correct;
        }

        CouplingMap complete;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) complete[{i, j}] = Complex(1.0, 0.0);
        ++checked;
        if (static_cast<int>(
                minimal_infecting_set(make_topology(n, complete, {0}, 0)).size()) ==
            n - 1)
            ++correct;
    }
    bool pass = checked == correct;
    std::ostringstream detail;
    detail << correct << "/" << checked
           << " families (paths 1, cycles 2, complete n-1; n <= 8)";
    return {pass, detail.str()};
}

// ---- criterion 7: coupling estimation on paths and trees ---------------

std::pair<bool, std::string> criterion_estimation() {
    auto t0 = Clock::now();
    auto rng = testsup::make_rng(1007);
    const int n_instances = 20;
    int recovered = 0, invariant = 0;
    double worst_gauge = 0.0;
    for (int trial = 0; trial < n_instances; ++trial) {
        int n = 3 + trial % 3;  // 3, 4, 5 nodes
        CouplingMap truth_couplings = testsup::random_connected_couplings(rng, n, 0);
        Topology probe = make_topology(n, truth_couplings, {0}, 0);
        std::vector<int> controls = minimal_infecting_set(probe);
        Topology topo = make_topology(n, truth_couplings, controls, controls.front());

        std::vector<Experiment> experiments =
            default_experiments(topo, 7000 + static_cast<std::uint64_t>(trial));
        std::vector<ExpectationRecord> records = simulate_experiments(topo, experiments);

        // Data must be exactly gauge invariant.
        std::vector<double> phi;
        std::uniform_real_distribution<double> ang(-std::numbers::pi, std::numbers::pi);
        for (int v = 0; v < n; ++v) phi.push_back(ang(rng));
        CouplingMap rotated;
        for (const auto& [edge, c] : truth_couplings) {
            rotated[edge] = c * std::polar(1.0, phi[static_cast<size_t>(edge.first)] -
                                                    phi[static_cast<size_t>(edge.second)]);
        }
        std::vector<ExpectationRecord> moved =
            simulate_experiments(with_couplings(topo, rotated), experiments);
        double drift = 0.0;
        for (size_t e = 0; e < records.size(); ++e)
            for (size_t l = 0; l < records[e].values.size(); ++l)
                for (size_t i = 0; i < records[e].values[l].size(); ++i)
                    drift = std::max(drift, std::abs(records[e].values[l][i] -
                                                     moved[e].values[l][i]));
        if (drift <= 1e-10) ++invariant;

        EstimationProblem problem =
            make_estimation_problem(topo, experiments, std::move(records));
        problem.truth = truth_couplings;
        EstimateOptions options;
        options.seed = 9000 + static_cast<std::uint64_t>(trial);
        EstimationResult result = estimate(problem, options);
        double gauge_err = result.gauge_error.value_or(1e9);
        worst_gauge = std::max(worst_gauge, gauge_err);
        if (gauge_err <= 1e-3) ++recovered;
    }
    double seconds = std::chrono::duration<double>(Clock::now() - t0).count();
    bool pass = recovered == n_instances && invariant == n_instances && seconds < 300.0;
    std::ostringstream detail;
    detail << recovered << "/" << n_instances << " within gauge distance 1e-3 (worst "
           << worst_gauge << "), " << invariant << "/" << n_instances
           << " gauge-invariant data sets, " << seconds << "s (budget 300s)";
    return {pass, detail.str()};
}

// ---- criterion 8: conservation laws and derivative consistency ---------

std::pair<bool, std::string> criterion_dynamics() {
    auto rng = testsup::make_rng(1008);
    QuantumSystem sys = make_system(
        testsup::random_traceless_hermitian(rng, 4),
        {testsup::random_traceless_hermitian(rng, 4),
         testsup::random_traceless_hermitian(rng, 4)},
        {testsup::random_hermitian(rng, 4)}, testsup::random_pure_density(rng, 4));

    std::uniform_real_distribution<double> amp(-2.0, 2.0);
    std::vector<ControlSchedule::Segment> segs;
    for (int s = 0; s < 1000; ++s) {
        RealVector f(2);
        f << amp(rng), amp(rng);
        segs.push_back({0.01 + 0.02 * (static_cast<double>(rng() % 100) / 100.0), f});
    }
    ControlSchedule sched = make_schedule(segs);
    Matrix rho = propagate(sys, sched).mat;
    double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
    double herm_err = (rho - rho.adjoint()).norm();
    double purity_err = std::abs((rho * rho).trace().real() - 1.0);

    // Central-difference derivative of <M> against tr{M L rho} at O(dt^2).
    RealVector hold = RealVector::Constant(2, 0.7);
    ControlSchedule window = make_schedule({{2.0, hold}});
    Matrix h = sys.drift.mat + 0.7 * sys.controls[0].mat + 0.7 * sys.controls[1].mat;
    Matrix rho_mid = propagate(sys, make_schedule({{1.0, hold}})).mat;
    double exact = (sys.observables[0].mat * apply_liouvillian(h, rho_mid)).trace().real();
    auto central = [&](double step) {
        ExpectationRecord rec = record(sys, window, {1.0 - step, 1.0 + step});
        return (rec.values[0][1] - rec.values[0][0]) / (2.0 * step);
    };
    double e1 = std::abs(central(0.08) - exact);
    double e2 = std::abs(central(0.04) - exact);
    double e3 = std::abs(central(0.02) - exact);
    bool order_two = e2 < e1 / 3.0 && e3 < e2 / 3.0;

    bool pass = trace_err <= 1e-10 && herm_err <= 1e-10 && purity_err <= 1e-10 &&
                order_two;
    std::ostringstream detail;
    detail << "trace " << trace_err << ", hermiticity " << herm_err << ", purity "
           << purity_err << " over 1000 segments; derivative ratios " << e1 / e2
           << ", " << e2 / e3 << " (want ~4)";
    return {pass, detail.str()};
}

}  // namespace

int main() {
    run(1, "two-qubit residual gauge dimensions", criterion_gauge_cases);
    run(2, "Lie closure vs independent rank oracle", criterion_closure_oracle);
    run(3, "moment match and certificates under conjugation", criterion_equivalence);
    run(4, "unitary recovery and perturbation sensitivity", criterion_unitary_recovery);
    run(5, "infection implies full controllability", criterion_infection_controllability);
    run(6, "minimal infecting sets of graph families", criterion_minimal_sets);
    run(7, "coupling estimation on paths and trees", criterion_estimation);
    run(8, "conservation laws and derivative consistency", criterion_dynamics);

    if (failures == 0) {
        std::printf("all acceptance criteria passed\n");
    } else {
        std::printf("%d acceptance criteria failed\n", failures);
    }
    return failures == 0 ? 0 : 1;
}
