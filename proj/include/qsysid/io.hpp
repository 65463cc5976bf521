// io.hpp — JSON encoding of systems, topologies, schedules, and records.
//
// Conventions: complex numbers as [re, im]; matrices as row-major nested
// arrays of complex; topologies as {n, edges: [[n, m, [re, im]], ...],
// control_set, measured_node}; schedules as {segments: [[dt, [f...]], ...]}.
// Documents carry "schema_version": 1. Parsing reports the offending field;
// serialization round-trips doubles exactly.

#pragma once

#include "qsysid/dynamics.hpp"
#include "qsysid/estimator.hpp"
#include "qsysid/system.hpp"
#include "qsysid/topology.hpp"

#include "json.hpp"

#include <string>

namespace qsysid {

inline constexpr int kSchemaVersion = 1;

using Json = nlohmann::json;

Json complex_to_json(const Complex& z);
Complex complex_from_json(const Json& j, const std::string& where);

Json matrix_to_json(const Matrix& m);
Matrix matrix_from_json(const Json& j, const std::string& where);

Json system_to_json(const QuantumSystem& sys);
QuantumSystem system_from_json(const Json& j);

Json topology_to_json(const Topology& topo);
Topology topology_from_json(const Json& j);

Json schedule_to_json(const ControlSchedule& schedule);
ControlSchedule schedule_from_json(const Json& j, const std::string& where);

Json couplings_to_json(const CouplingMap& couplings);
CouplingMap couplings_from_json(const Json& j, const std::string& where);

Json experiment_to_json(const Experiment& exp);
Experiment experiment_from_json(const Json& j, const std::string& where);

Json record_to_json(const ExpectationRecord& rec);
ExpectationRecord record_from_json(const Json& j, const std::string& where);

Json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& text);

// Plain-text rendering of a report document: nested "key: value" lines.
std::string render_text(const Json& j);

}  // namespace qsysid
