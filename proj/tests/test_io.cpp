// test_io.cpp — JSON round trips, field-path diagnostics, and text rendering.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsysid/io.hpp"
#include "qsysid/operator.hpp"

#include "test_support.hpp"

#include <string>

using namespace qsysid;
using testsup::make_rng;

TEST_CASE("complex and matrix round trips are exact") {
    Complex z(0.1 + 0.2, -1.0 / 3.0);  // values without short decimal forms
    CHECK(complex_from_json(complex_to_json(z), "z") == z);

    auto rng = make_rng(3);
    Matrix m = testsup::random_matrix(rng, 4);
    Matrix back = matrix_from_json(matrix_to_json(m), "m");
    CHECK(back.rows() == 4);
    CHECK((back - m).norm() == 0.0);  // bitwise, not approximate
}

TEST_CASE("system documents round trip bitwise") {
    QuantumSystem sys = testsup::two_qubit_example();
    Json doc = system_to_json(sys);
    CHECK(doc.at("schema_version") == 1);
    QuantumSystem back = system_from_json(doc);
    CHECK((back.drift.mat - sys.drift.mat).norm() == 0.0);
    CHECK(back.input_count() == 2);
    CHECK(back.output_count() == 1);
    CHECK((back.initial_state.mat - sys.initial_state.mat).norm() == 0.0);
    // Serializing the parse gives identical bytes.
    CHECK(system_to_json(back).dump() == doc.dump());
}

TEST_CASE("topology documents round trip bitwise") {
    Topology topo = make_topology(
        4,
        {{{0, 1}, Complex(0.25, -0.125)}, {{1, 2}, Complex(0.3, 0.0)},
         {{2, 3}, Complex(0.0, 1.0 / 3.0)}},
        {0, 2}, 2);
    Json doc = topology_to_json(topo);
    Topology back = topology_from_json(doc);
    CHECK(back.n_nodes == 4);
    CHECK(back.control_set == topo.control_set);
    CHECK(back.measured_node == 2);
    CHECK(back.couplings == topo.couplings);
    CHECK(topology_to_json(back).dump() == doc.dump());
}

TEST_CASE("schedule, couplings, experiment, and record round trips") {
    RealVector f(2);
    f << 0.5, -1.25;
    RealVector g(2);
    g << 1.0 / 7.0, 0.0;
    ControlSchedule sched = make_schedule({{0.125, f}, {2.0 / 3.0, g}});
    ControlSchedule sched_back = schedule_from_json(schedule_to_json(sched), "s");
    REQUIRE(sched_back.segments.size() == 2);
    CHECK(sched_back.segments[0].duration == 0.125);
    CHECK(sched_back.segments[1].duration == 2.0 / 3.0);
    CHECK(sched_back.segments[1].amplitudes(0) == 1.0 / 7.0);

    CouplingMap couplings{{{0, 1}, Complex(0.7, 0.1)}};
    CHECK(couplings_from_json(couplings_to_json(couplings), "c") == couplings);

    Experiment exp{sched, {0.0, 0.25, 0.5}};
    Experiment exp_back = experiment_from_json(experiment_to_json(exp), "e");
    CHECK(exp_back.sample_times == exp.sample_times);
    CHECK(exp_back.schedule.segments.size() == 2);

    ExpectationRecord rec;
    rec.times = {0.0, 0.1};
    rec.values = {{1.0, 0.99}, {0.0, -0.01}};
    ExpectationRecord rec_back = record_from_json(record_to_json(rec), "r");
    CHECK(rec_back.times == rec.times);
    CHECK(rec_back.values == rec.values);
}

TEST_CASE("parse errors name the offending field") {
    Json doc = system_to_json(testsup::two_qubit_example());
    doc.erase("drift");
    CHECK_THROWS_WITH_AS(system_from_json(doc), doctest::Contains("system.drift"),
                         std::invalid_argument);

    Json bad_entry = system_to_json(testsup::two_qubit_example());
    bad_entry["controls"][1][0][0] = "oops";
    try {
        system_from_json(bad_entry);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("controls[1]") != std::string::npos);
    }

    Json topo_doc = topology_to_json(make_topology(2, {{{0, 1}, Complex(1, 0)}}, {0}, 0));
    topo_doc["edges"][0][2] = Json::array({1.0});
    try {
        topology_from_json(topo_doc);
        FAIL("expected a parse error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("edges[0]") != std::string::npos);
    }
}

TEST_CASE("schema version gates every document") {
    Json doc = system_to_json(testsup::two_qubit_example());
    doc["schema_version"] = 2;
    CHECK_THROWS_WITH_AS(system_from_json(doc), doctest::Contains("schema_version"),
                         std::invalid_argument);
}

TEST_CASE("structural validation fires on parse") {
    QuantumSystem sys = testsup::two_qubit_example();
    Json doc = system_to_json(sys);
    doc["observables"][0] = matrix_to_json(Matrix::Identity(4, 4));
    CHECK_THROWS_AS(system_from_json(doc), std::invalid_argument);

    Json skewed = system_to_json(sys);
    skewed["drift"][0][1] = Json::array({5.0, 0.0});  // breaks hermiticity
    CHECK_THROWS_AS(system_from_json(skewed), std::invalid_argument);
}

TEST_CASE("file loading reports missing paths and parse failures") {
    CHECK_THROWS_AS(load_json("/nonexistent/file.json"), std::invalid_argument);
    std::string path = "io_test_scratch.json";
    save_text(path, "{ not json");
    CHECK_THROWS_AS(load_json(path), std::invalid_argument);
    save_text(path, "{\"a\": 1}");
    CHECK(load_json(path).at("a") == 1);
}

TEST_CASE("text rendering flattens nested documents") {
    Json j;
    j["verdict"] = "controllable";
    j["report"]["dimension"] = 15;
    j["report"]["values"] = Json::array({1.0, 2.0});
    std::string text = render_text(j);
    CHECK(text.find("verdict: controllable") != std::string::npos);
    CHECK(text.find("dimension: 15") != std::string::npos);
    CHECK(text.find("values:") != std::string::npos);
}
