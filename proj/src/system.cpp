// system.cpp

#include "qsysid/system.hpp"

namespace qsysid {

const Matrix& QuantumSystem::hamiltonian(int index) const {
    if (index == 0) return drift.mat;
    if (index < 0 || index > input_count()) {
        throw std::out_of_range("QuantumSystem::hamiltonian: index out of range");
    }
    return controls[size_t(index - 1)].mat;
}

QuantumSystem make_system(Matrix drift, std::vector<Matrix> controls,
                          std::vector<Matrix> observables, Matrix initial_state,
                          double tol) {
    const Eigen::Index d = drift.rows();
    if (observables.empty()) throw std::invalid_argument("make_system: no observables");

    QuantumSystem sys;
    sys.dim = d;
    sys.drift = make_operator(std::move(drift), OpFlag::hermitian | OpFlag::traceless, tol);

    for (size_t k = 0; k < controls.size(); ++k) {
        if (controls[k].rows() != d) {
            throw std::invalid_argument("make_system: control " + std::to_string(k) +
                                        " dimension mismatch");
        }
        sys.controls.push_back(
            make_operator(std::move(controls[k]), OpFlag::hermitian | OpFlag::traceless, tol));
    }
    for (size_t l = 0; l < observables.size(); ++l) {
        if (observables[l].rows() != d) {
            throw std::invalid_argument("make_system: observable " + std::to_string(l) +
                                        " dimension mismatch");
        }
        if (identity_component_residual(observables[l]) <= tol) {
            throw std::invalid_argument("make_system: observable " + std::to_string(l) +
                                        " proportional to identity");
        }
        sys.observables.push_back(make_operator(std::move(observables[l]), OpFlag::hermitian, tol));
    }
    if (initial_state.rows() != d) {
        throw std::invalid_argument("make_system: initial state dimension mismatch");
    }
    if (identity_component_residual(initial_state) <= tol) {
        throw std::invalid_argument("make_system: initial state proportional to identity");
    }
    sys.initial_state = density_operator(std::move(initial_state), tol);
    return sys;
}

QuantumSystem conjugate_system(const QuantumSystem& sys, const Matrix& u) {
    if (!is_unitary(u)) throw std::invalid_argument("conjugate_system: non-unitary input");
    if (u.rows() != sys.dim) throw std::invalid_argument("conjugate_system: dimension mismatch");
    auto conj = [&](const Matrix& m) { return Matrix(u * m * u.adjoint()); };

    std::vector<Matrix> controls, observables;
    for (const auto& c : sys.controls) controls.push_back(conj(c.mat));
    for (const auto& m : sys.observables) observables.push_back(conj(m.mat));
    return make_system(conj(sys.drift.mat), std::move(controls), std::move(observables),
                       conj(sys.initial_state.mat));
}

QuantumSystem conjugate_system(const QuantumSystem& sys, const Operator& u) {
    if (!u.has(OpFlag::unitary)) throw std::invalid_argument("conjugate_system: non-unitary input");
    return conjugate_system(sys, u.mat);
}

}  // namespace qsysid
