// io.cpp

#include "qsysid/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace qsysid {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
    throw std::invalid_argument(where + ": " + what);
}

const Json& field(const Json& j, const char* name, const std::string& where) {
    if (!j.is_object()) fail(where, "expected an object");
    auto it = j.find(name);
    if (it == j.end()) fail(where + "." + name, "missing field");
    return *it;
}

double number_from_json(const Json& j, const std::string& where) {
    if (!j.is_number()) fail(where, "expected a number");
    return j.get<double>();
}

int int_from_json(const Json& j, const std::string& where) {
    if (!j.is_number_integer()) fail(where, "expected an integer");
    return j.get<int>();
}

void check_schema_version(const Json& j, const std::string& where) {
    if (j.is_object() && j.contains("schema_version")) {
        int v = int_from_json(j.at("schema_version"), where + ".schema_version");
        if (v != kSchemaVersion) {
            fail(where + ".schema_version",
                 "unsupported version " + std::to_string(v));
        }
    }
}

std::vector<double> times_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of times");
    std::vector<double> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        out.push_back(number_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    }
    return out;
}

}  // namespace

Json complex_to_json(const Complex& z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) fail(where, "expected [re, im]");
    return {number_from_json(j[0], where + "[0]"), number_from_json(j[1], where + "[1]")};
}

Json matrix_to_json(const Matrix& m) {
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            row.push_back(complex_to_json(m(i, j)));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

Matrix matrix_from_json(const Json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) fail(where, "expected a non-empty nested array");
    const auto rows = static_cast<Eigen::Index>(j.size());
    if (!j[0].is_array()) fail(where + "[0]", "expected a row array");
    const auto cols = static_cast<Eigen::Index>(j[0].size());
    Matrix m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
        const Json& row = j[static_cast<std::size_t>(r)];
        std::string row_where = where + "[" + std::to_string(r) + "]";
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            fail(row_where, "ragged matrix row");
        }
        for (Eigen::Index c = 0; c < cols; ++c) {
            m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)],
                                        row_where + "[" + std::to_string(c) + "]");
        }
    }
    return m;
}

Json system_to_json(const QuantumSystem& sys) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["dim"] = sys.dim;
    j["drift"] = matrix_to_json(sys.drift.mat);
    Json controls = Json::array();
    for (const Operator& h : sys.controls) controls.push_back(matrix_to_json(h.mat));
    j["controls"] = std::move(controls);
    Json observables = Json::array();
    for (const Operator& m : sys.observables) observables.push_back(matrix_to_json(m.mat));
    j["observables"] = std::move(observables);
    j["initial_state"] = matrix_to_json(sys.initial_state.mat);
    return j;
}

QuantumSystem system_from_json(const Json& j) {
    const std::string where = "system";
    check_schema_version(j, where);
    Matrix drift = matrix_from_json(field(j, "drift", where), where + ".drift");

    const Json& jc = field(j, "controls", where);
    if (!jc.is_array()) fail(where + ".controls", "expected an array of matrices");
    std::vector<Matrix> controls;
    controls.reserve(jc.size());
    for (std::size_t k = 0; k < jc.size(); ++k) {
        controls.push_back(
            matrix_from_json(jc[k], where + ".controls[" + std::to_string(k) + "]"));
    }

    const Json& jo = field(j, "observables", where);
    if (!jo.is_array()) fail(where + ".observables", "expected an array of matrices");
    std::vector<Matrix> observables;
    observables.reserve(jo.size());
    for (std::size_t l = 0; l < jo.size(); ++l) {
        observables.push_back(
            matrix_from_json(jo[l], where + ".observables[" + std::to_string(l) + "]"));
    }

    Matrix rho0 = matrix_from_json(field(j, "initial_state", where), where + ".initial_state");

    if (j.contains("dim")) {
        int d = int_from_json(j.at("dim"), where + ".dim");
        if (d != drift.rows()) fail(where + ".dim", "disagrees with drift shape");
    }
    try {
        return make_system(std::move(drift), std::move(controls), std::move(observables),
                           std::move(rho0));
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

Json topology_to_json(const Topology& topo) {
    Json j;
    j["schema_version"] = kSchemaVersion;
    j["n"] = topo.n_nodes;
    Json edges = Json::array();
    for (const auto& [edge, c] : topo.couplings) {
        edges.push_back(Json::array({edge.first, edge.second, complex_to_json(c)}));
    }
    j["edges"] = std::move(edges);
    j["control_set"] = topo.control_set;
    j["measured_node"] = topo.measured_node;
    return j;
}

Topology topology_from_json(const Json& j) {
    const std::string where = "topology";
    check_schema_version(j, where);
    int n = int_from_json(field(j, "n", where), where + ".n");

    const Json& je = field(j, "edges", where);
    if (!je.is_array()) fail(where + ".edges", "expected an array of [n, m, [re, im]]");
    CouplingMap couplings;
    for (std::size_t i = 0; i < je.size(); ++i) {
        std::string edge_where = where + ".edges[" + std::to_string(i) + "]";
        const Json& e = je[i];
        if (!e.is_array() || e.size() != 3) fail(edge_where, "expected [n, m, [re, im]]");
        int a = int_from_json(e[0], edge_where + "[0]");
        int b = int_from_json(e[1], edge_where + "[1]");
        Complex c = complex_from_json(e[2], edge_where + "[2]");
        if (couplings.count({a, b})) fail(edge_where, "duplicate edge");
        couplings[{a, b}] = c;
    }

    const Json& jcs = field(j, "control_set", where);
    if (!jcs.is_array()) fail(where + ".control_set", "expected an array of nodes");
    std::vector<int> control_set;
    control_set.reserve(jcs.size());
    for (std::size_t i = 0; i < jcs.size(); ++i) {
        control_set.push_back(
            int_from_json(jcs[i], where + ".control_set[" + std::to_string(i) + "]"));
    }
    int measured = int_from_json(field(j, "measured_node", where), where + ".measured_node");

    try {
        return make_topology(n, std::move(couplings), std::move(control_set), measured);
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

Json schedule_to_json(const ControlSchedule& schedule) {
    Json segments = Json::array();
    for (const auto& seg : schedule.segments) {
        Json amps = Json::array();
        for (Eigen::Index k = 0; k < seg.amplitudes.size(); ++k) {
            amps.push_back(seg.amplitudes(k));
        }
        segments.push_back(Json::array({seg.duration, std::move(amps)}));
    }
    Json j;
    j["segments"] = std::move(segments);
    return j;
}

ControlSchedule schedule_from_json(const Json& j, const std::string& where) {
    const Json& js = field(j, "segments", where);
    if (!js.is_array()) fail(where + ".segments", "expected an array of [dt, [f...]]");
    std::vector<ControlSchedule::Segment> segments;
    segments.reserve(js.size());
    for (std::size_t i = 0; i < js.size(); ++i) {
        std::string seg_where = where + ".segments[" + std::to_string(i) + "]";
        const Json& s = js[i];
        if (!s.is_array() || s.size() != 2) fail(seg_where, "expected [dt, [f...]]");
        ControlSchedule::Segment seg;
        seg.duration = number_from_json(s[0], seg_where + "[0]");
        if (!s[1].is_array()) fail(seg_where + "[1]", "expected an amplitude array");
        seg.amplitudes.resize(static_cast<Eigen::Index>(s[1].size()));
        for (std::size_t k = 0; k < s[1].size(); ++k) {
            seg.amplitudes(static_cast<Eigen::Index>(k)) =
                number_from_json(s[1][k], seg_where + "[1][" + std::to_string(k) + "]");
        }
        segments.push_back(std::move(seg));
    }
    try {
        return make_schedule(std::move(segments));
    } catch (const std::exception& e) {
        fail(where, e.what());
    }
}

Json couplings_to_json(const CouplingMap& couplings) {
    Json edges = Json::array();
    for (const auto& [edge, c] : couplings) {
        edges.push_back(Json::array({edge.first, edge.second, complex_to_json(c)}));
    }
    return edges;
}

CouplingMap couplings_from_json(const Json& j, const std::string& where) {
    if (!j.is_array()) fail(where, "expected an array of [n, m, [re, im]]");
    CouplingMap out;
    for (std::size_t i = 0; i < j.size(); ++i) {
        std::string edge_where = where + "[" + std::to_string(i) + "]";
        const Json& e = j[i];
        if (!e.is_array() || e.size() != 3) fail(edge_where, "expected [n, m, [re, im]]");
        int a = int_from_json(e[0], edge_where + "[0]");
        int b = int_from_json(e[1], edge_where + "[1]");
        if (a >= b) fail(edge_where, "edges must be keyed n < m");
        out[{a, b}] = complex_from_json(e[2], edge_where + "[2]");
    }
    return out;
}

Json experiment_to_json(const Experiment& exp) {
    Json j;
    j["schedule"] = schedule_to_json(exp.schedule);
    j["sample_times"] = exp.sample_times;
    return j;
}

Experiment experiment_from_json(const Json& j, const std::string& where) {
    Experiment exp;
    exp.schedule = schedule_from_json(field(j, "schedule", where), where + ".schedule");
    exp.sample_times = times_from_json(field(j, "sample_times", where), where + ".sample_times");
    return exp;
}

Json record_to_json(const ExpectationRecord& rec) {
    Json j;
    j["times"] = rec.times;
    j["values"] = rec.values;
    return j;
}

ExpectationRecord record_from_json(const Json& j, const std::string& where) {
    ExpectationRecord rec;
    rec.times = times_from_json(field(j, "times", where), where + ".times");
    const Json& jv = field(j, "values", where);
    if (!jv.is_array()) fail(where + ".values", "expected an array of rows");
    for (std::size_t l = 0; l < jv.size(); ++l) {
        rec.values.push_back(
            times_from_json(jv[l], where + ".values[" + std::to_string(l) + "]"));
    }
    return rec;
}

Json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::invalid_argument("cannot open input file: " + path);
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) {
        throw std::invalid_argument("cannot open output file: " + path);
    }
    out << text;
}

namespace {

void render_lines(const Json& j, const std::string& key, int indent, std::ostringstream& out) {
    std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    auto is_scalar_array = [](const Json& a) {
        for (const auto& v : a) {
            if (v.is_object() || v.is_array()) return false;
        }
        return true;
    };
    if (j.is_object()) {
        if (!key.empty()) out << pad << key << ":\n";
        for (const auto& [k, v] : j.items()) {
            render_lines(v, k, key.empty() ? indent : indent + 1, out);
        }
    } else if (j.is_array() && !is_scalar_array(j)) {
        if (!key.empty()) out << pad << key << ":\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            render_lines(j[i], "[" + std::to_string(i) + "]",
                         key.empty() ? indent : indent + 1, out);
        }
    } else if (j.is_string()) {
        out << pad << key << ": " << j.get<std::string>() << "\n";
    } else {
        out << pad << key << ": " << j.dump() << "\n";
    }
}

}  // namespace

std::string render_text(const Json& j) {
    std::ostringstream out;
    render_lines(j, "", 0, out);
    return out.str();
}

}  // namespace qsysid
