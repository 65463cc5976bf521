// moments.cpp

#include "qsysid/moments.hpp"

#include "qsysid/superop.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace qsysid {

namespace {

// Walks rho0 through the sequence, first entry applied first.
Matrix apply_sequence(const QuantumSystem& sys, const MultiIndex& alpha) {
    Matrix x = sys.initial_state.mat;
    for (int a : alpha) {
        x = apply_liouvillian(sys.hamiltonian(a), x);
    }
    return x;
}

double real_trace_product(const Matrix& observable, const Matrix& state) {
    Complex value = (observable * state).trace();
    double scale = std::max(1.0, observable.norm() * state.norm());
    if (std::abs(value.imag()) > 1e-12 * scale) {
        throw std::runtime_error("moment: imaginary residue " +
                                 std::to_string(value.imag()) + " exceeds tolerance");
    }
    return value.real();
}

double projected_term_count(int inputs, int max_length, int outputs) {
    double total = 0.0;
    double level = 1.0;
    for (int len = 0; len <= max_length; ++len) {
        total += level;
        level *= static_cast<double>(inputs + 1);
    }
    return total * static_cast<double>(outputs);
}

}  // namespace

double moment(const QuantumSystem& sys, int observable_index, const MultiIndex& alpha) {
    if (observable_index < 0 || observable_index >= sys.output_count()) {
        throw std::out_of_range("moment: observable index out of range");
    }
    for (int a : alpha) {
        if (a < 0 || a > sys.input_count()) {
            throw std::out_of_range("moment: hamiltonian index out of range");
        }
    }
    Matrix x = apply_sequence(sys, alpha);
    return real_trace_product(sys.observables[observable_index].mat, x);
}

MomentTable compute_moments(const QuantumSystem& sys, int max_length,
                            std::uint64_t term_budget) {
    if (max_length < 0) {
        throw std::invalid_argument("compute_moments: max_length must be non-negative");
    }
    double projected =
        projected_term_count(sys.input_count(), max_length, sys.output_count());
    if (projected > static_cast<double>(term_budget)) {
        throw std::invalid_argument("compute_moments: term budget exceeded (projected " +
                                    std::to_string(projected) + " terms)");
    }

    MomentTable table;
    table.max_length = max_length;

    struct Node {
        MultiIndex alpha;
        Matrix state;
    };
    std::vector<Node> level;
    level.push_back({{}, sys.initial_state.mat});

    for (int len = 0;; ++len) {
        for (const Node& node : level) {
            for (int l = 0; l < sys.output_count(); ++l) {
                table.values[{l, node.alpha}] =
                    real_trace_product(sys.observables[l].mat, node.state);
            }
        }
        if (len == max_length) break;
        std::vector<Node> next;
        next.reserve(level.size() * (sys.input_count() + 1));
        for (const Node& node : level) {
            for (int k = 0; k <= sys.input_count(); ++k) {
                MultiIndex child = node.alpha;
                child.push_back(k);
                next.push_back({std::move(child),
                                apply_liouvillian(sys.hamiltonian(k), node.state)});
            }
        }
        level = std::move(next);
    }
    return table;
}

MomentComparison moments_equal(const QuantumSystem& sys, const QuantumSystem& other,
                               int max_length, double tau, std::uint64_t term_budget) {
    if (sys.input_count() != other.input_count() ||
        sys.output_count() != other.output_count()) {
        throw std::invalid_argument(
            "moments_equal: systems must have matching input and output counts");
    }
    if (max_length < 0) {
        throw std::invalid_argument("moments_equal: max_length must be non-negative");
    }
    if (tau <= 0.0) {
        throw std::invalid_argument("moments_equal: tolerance must be positive");
    }
    double projected =
        projected_term_count(sys.input_count(), max_length, sys.output_count());
    if (projected > static_cast<double>(term_budget)) {
        throw std::invalid_argument("moments_equal: term budget exceeded (projected " +
                                    std::to_string(projected) + " terms)");
    }

    MomentComparison cmp;

    struct Node {
        MultiIndex alpha;
        Matrix lhs;
        Matrix rhs;
    };
    std::vector<Node> level;
    level.push_back({{}, sys.initial_state.mat, other.initial_state.mat});

    for (int len = 0;; ++len) {
        for (const Node& node : level) {
            for (int l = 0; l < sys.output_count(); ++l) {
                double a = real_trace_product(sys.observables[l].mat, node.lhs);
                double b = real_trace_product(other.observables[l].mat, node.rhs);
                ++cmp.terms_compared;
                double scale = std::max({1.0,
                                         sys.observables[l].mat.norm() * node.lhs.norm(),
                                         other.observables[l].mat.norm() * node.rhs.norm()});
                if (std::abs(a - b) > tau * scale) {
                    cmp.equal = false;
                    cmp.observable = l;
                    cmp.alpha = node.alpha;
                    cmp.lhs = a;
                    cmp.rhs = b;
                    return cmp;
                }
            }
        }
        if (len == max_length) break;
        std::vector<Node> next;
        next.reserve(level.size() * (sys.input_count() + 1));
        for (const Node& node : level) {
            for (int k = 0; k <= sys.input_count(); ++k) {
                MultiIndex child = node.alpha;
                child.push_back(k);
                next.push_back({std::move(child),
                                apply_liouvillian(sys.hamiltonian(k), node.lhs),
                                apply_liouvillian(other.hamiltonian(k), node.rhs)});
            }
        }
        level = std::move(next);
    }
    return cmp;
}

std::string format_multi_index(const MultiIndex& alpha) {
    std::ostringstream out;
    out << "(";
    for (std::size_t i = 0; i < alpha.size(); ++i) {
        if (i > 0) out << ",";
        out << alpha[i];
    }
    out << ")";
    return out.str();
}

}  // namespace qsysid
