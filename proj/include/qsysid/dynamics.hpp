// dynamics.hpp — piecewise-constant control schedules and exact propagation.
//
// Each segment holds the control amplitudes fixed, so the evolution is the
// unitary exp(-i (H0 + sum_k f_k Hk) dt) applied by conjugation. Segments are
// diagonalized once and reused for every sample time they contain; no
// interpolation is ever performed.

#pragma once

#include "qsysid/system.hpp"

#include <cstdint>
#include <vector>

namespace qsysid {

struct ControlSchedule {
    struct Segment {
        double duration = 0.0;
        RealVector amplitudes;  // one per control
    };
    std::vector<Segment> segments;
    double total_duration() const;
};

ControlSchedule make_schedule(std::vector<ControlSchedule::Segment> segments);

// State after the full schedule. Amplitude counts must match the system.
Operator propagate(const QuantumSystem& sys, const ControlSchedule& schedule);

struct ExpectationRecord {
    std::vector<double> times;
    // values[l][i] = tr{M_l rho(times[i])}, observable-major.
    std::vector<std::vector<double>> values;
};

struct RecordOptions {
    double noise_std = 0.0;     // additive gaussian noise per sample (0 = exact)
    std::uint64_t noise_seed = 0;
};

// Expectations of every observable at the given times (non-decreasing, within
// [0, total duration]).
ExpectationRecord record(const QuantumSystem& sys, const ControlSchedule& schedule,
                         const std::vector<double>& sample_times,
                         const RecordOptions& options = {});

}  // namespace qsysid
