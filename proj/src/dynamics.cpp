// dynamics.cpp

#include "qsysid/dynamics.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <random>
#include <stdexcept>

namespace qsysid {

namespace {

Matrix segment_hamiltonian(const QuantumSystem& sys, const ControlSchedule::Segment& seg) {
    if (seg.amplitudes.size() != sys.input_count()) {
        throw std::invalid_argument("dynamics: segment amplitude count disagrees with system");
    }
    Matrix h = sys.drift.mat;
    for (Eigen::Index k = 0; k < seg.amplitudes.size(); ++k) {
        h += seg.amplitudes(k) * sys.controls[static_cast<std::size_t>(k)].mat;
    }
    return h;
}

// Eigendecomposition of one segment Hamiltonian, reusable across partial
// durations within the segment.
struct SegmentPropagator {
    Matrix vectors;
    RealVector eigenvalues;

    explicit SegmentPropagator(const Matrix& h) {
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        if (es.info() != Eigen::Success) {
            throw std::runtime_error("dynamics: eigendecomposition failed");
        }
        vectors = es.eigenvectors();
        eigenvalues = es.eigenvalues();
    }

    Matrix evolve(const Matrix& rho, double dt) const {
        Vector phases =
            (Complex(0.0, -dt) * eigenvalues.cast<Complex>().array()).exp().matrix();
        Matrix u = vectors * phases.asDiagonal() * vectors.adjoint();
        return u * rho * u.adjoint();
    }
};

}  // namespace

double ControlSchedule::total_duration() const {
    double total = 0.0;
    for (const Segment& seg : segments) total += seg.duration;
    return total;
}

ControlSchedule make_schedule(std::vector<ControlSchedule::Segment> segments) {
    if (segments.empty()) {
        throw std::invalid_argument("make_schedule: need at least one segment");
    }
    for (const auto& seg : segments) {
        if (!(seg.duration > 0.0) || !std::isfinite(seg.duration)) {
            throw std::invalid_argument("make_schedule: segment durations must be positive and finite");
        }
        for (Eigen::Index k = 0; k < seg.amplitudes.size(); ++k) {
            if (!std::isfinite(seg.amplitudes(k))) {
                throw std::invalid_argument("make_schedule: amplitudes must be finite");
            }
        }
    }
    ControlSchedule schedule;
    schedule.segments = std::move(segments);
    return schedule;
}

Operator propagate(const QuantumSystem& sys, const ControlSchedule& schedule) {
    Matrix rho = sys.initial_state.mat;
    for (const auto& seg : schedule.segments) {
        SegmentPropagator prop(segment_hamiltonian(sys, seg));
        rho = prop.evolve(rho, seg.duration);
    }
    return density_operator(std::move(rho));
}

ExpectationRecord record(const QuantumSystem& sys, const ControlSchedule& schedule,
                         const std::vector<double>& sample_times,
                         const RecordOptions& options) {
    const double total = schedule.total_duration();
    const double eps = 1e-9 * std::max(1.0, total);
    for (std::size_t i = 0; i < sample_times.size(); ++i) {
        if (!std::isfinite(sample_times[i]) || sample_times[i] < -eps ||
            sample_times[i] > total + eps) {
            throw std::invalid_argument("record: sample time out of schedule range");
        }
        if (i > 0 && sample_times[i] < sample_times[i - 1]) {
            throw std::invalid_argument("record: sample times must be non-decreasing");
        }
    }
    if (options.noise_std < 0.0) {
        throw std::invalid_argument("record: noise level must be non-negative");
    }

    ExpectationRecord rec;
    rec.times = sample_times;
    rec.values.assign(static_cast<std::size_t>(sys.output_count()), {});
    for (auto& row : rec.values) row.reserve(sample_times.size());

    auto emit = [&](const Matrix& rho) {
        for (int l = 0; l < sys.output_count(); ++l) {
            const Matrix& obs = sys.observables[static_cast<std::size_t>(l)].mat;
            Complex value = (obs * rho).trace();
            double scale = std::max(1.0, obs.norm() * rho.norm());
            if (std::abs(value.imag()) > 1e-12 * scale) {
                throw std::runtime_error("record: expectation has an imaginary residue");
            }
            rec.values[static_cast<std::size_t>(l)].push_back(value.real());
        }
    };

    Matrix rho = sys.initial_state.mat;
    std::size_t next = 0;
    // Samples at (or before) t = 0 read the initial state.
    while (next < sample_times.size() && sample_times[next] <= eps) {
        emit(rho);
        ++next;
    }

    double t_start = 0.0;
    for (std::size_t s = 0; s < schedule.segments.size() && next < sample_times.size(); ++s) {
        const auto& seg = schedule.segments[s];
        const double t_end = t_start + seg.duration;
        const bool last = s + 1 == schedule.segments.size();
        SegmentPropagator prop(segment_hamiltonian(sys, seg));
        double t_local = t_start;  // time rho currently corresponds to
        while (next < sample_times.size()) {
            double t = sample_times[next];
            if (t > t_end + (last ? eps : 0.0)) break;  // belongs to a later segment
            double target = std::min(t, t_end);
            if (target > t_local) {  // zero-length steps must not perturb rho
                rho = prop.evolve(rho, target - t_local);
                t_local = target;
            }
            emit(rho);
            ++next;
        }
        if (t_local < t_end) {
            rho = prop.evolve(rho, t_end - t_local);
        }
        t_start = t_end;
    }

    if (options.noise_std > 0.0) {
        std::mt19937_64 rng(options.noise_seed);
        std::normal_distribution<double> noise(0.0, options.noise_std);
        for (auto& row : rec.values) {
            for (double& v : row) v += noise(rng);
        }
    }
    return rec;
}

}  // namespace qsysid
