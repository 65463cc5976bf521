// test_commutant.cpp — commutant computation and residual gauge dimension
// for partially known two-qubit setups.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "qsysid/commutant.hpp"
#include "qsysid/operator.hpp"

#include "test_support.hpp"

using namespace qsysid;
using testsup::make_rng;
using testsup::pauli_on;

namespace {

Matrix singlet_projector() {
    // (|01> - |10>)(<01| - <10|) / 2 in the ordered product basis.
    Vector psi = Vector::Zero(4);
    psi(1) = 1.0 / std::sqrt(2.0);
    psi(2) = -1.0 / std::sqrt(2.0);
    return psi * psi.adjoint();
}

void check_commutant_invariants(const CommutantBasis& basis,
                                const std::vector<Matrix>& known) {
    for (int i = 0; i < basis.dimension(); ++i) {
        const Matrix& e = basis.elements[size_t(i)].mat;
        CHECK(is_hermitian(e, 1e-12));
        for (const Matrix& a : known) {
            CHECK(commutator(e, a).norm() <= 1e-10 * std::max(1.0, a.norm()));
        }
        for (int j = i; j < basis.dimension(); ++j) {
            Complex ip = hs_inner(e, basis.elements[size_t(j)].mat);
            double expected = i == j ? 1.0 : 0.0;
            CHECK(std::abs(ip - Complex(expected, 0.0)) < 1e-12);
        }
    }
}

}  // namespace

TEST_CASE("known one-qubit controls leave a three-parameter gauge") {
    std::vector<Matrix> known{pauli_on(0, pauli_x()), pauli_on(0, pauli_y()),
                              pauli_on(0, pauli_z())};
    CommutantBasis basis = commutant(known);
    CHECK(basis.dimension() == 4);  // 1 (x) u(2) on the second qubit
    CHECK(basis.residual_gauge_dim() == 3);
    check_commutant_invariants(basis, known);
}

TEST_CASE("a correlated observable cuts the gauge to one parameter") {
    Matrix zz = kron(pauli_z(), pauli_z());
    std::vector<Matrix> known{pauli_on(0, pauli_x()), pauli_on(0, pauli_y()), zz};
    CommutantBasis basis = commutant(known);
    CHECK(basis.residual_gauge_dim() == 1);
    check_commutant_invariants(basis, known);
}

TEST_CASE("an entangled observable removes the gauge entirely") {
    std::vector<Matrix> known{pauli_on(0, pauli_x()), pauli_on(0, pauli_y()),
                              singlet_projector()};
    CommutantBasis basis = commutant(known);
    CHECK(basis.residual_gauge_dim() == 0);
    CHECK(basis.dimension() == 1);
    // Only multiples of the identity survive.
    CHECK(identity_component_residual(basis.elements[0].mat) < 1e-10);
    check_commutant_invariants(basis, known);
}

TEST_CASE("commutant of a nondegenerate hermitian is its eigenbasis diagonal") {
    auto rng = make_rng(41);
    Matrix h = testsup::random_hermitian(rng, 4);
    CommutantBasis basis = commutant({h});
    CHECK(basis.dimension() == 4);
    check_commutant_invariants(basis, {h});

    CommutantBasis qubit = commutant({pauli_x()});
    CHECK(qubit.dimension() == 2);  // span{1, X}
}

TEST_CASE("commutant input validation") {
    CHECK_THROWS_AS(commutant({}), std::invalid_argument);
    CHECK_THROWS_AS(commutant({pauli_x(), Matrix::Identity(3, 3)}),
                    std::invalid_argument);
    CHECK_THROWS_AS(commutant({pauli_x()}, 0.0), std::invalid_argument);
}

TEST_CASE("identifiability of the heisenberg pair under partial knowledge") {
    QuantumSystem sys = testsup::two_qubit_example();

    KnownMask mask = empty_mask(sys);
    mask.controls[0] = true;
    mask.controls[1] = true;
    mask.observables[0] = true;  // observable is Z on the controlled qubit

    IdentifiabilityReport local = identifiability_report(sys, mask);
    CHECK(local.residual_gauge_dim == 3);
    CHECK_FALSE(local.fully_identifiable);

    // Swap in the correlated observable.
    QuantumSystem zz_sys =
        make_system(sys.drift.mat, {sys.controls[0].mat, sys.controls[1].mat},
                    {kron(pauli_z(), pauli_z())}, sys.initial_state.mat);
    IdentifiabilityReport corr = identifiability_report(zz_sys, mask);
    CHECK(corr.residual_gauge_dim == 1);
    CHECK_FALSE(corr.fully_identifiable);

    // And the entangled one.
    QuantumSystem singlet_sys =
        make_system(sys.drift.mat, {sys.controls[0].mat, sys.controls[1].mat},
                    {singlet_projector()}, sys.initial_state.mat);
    IdentifiabilityReport ent = identifiability_report(singlet_sys, mask);
    CHECK(ent.residual_gauge_dim == 0);
    CHECK(ent.fully_identifiable);
}

TEST_CASE("knowing nothing leaves the full hermitian space") {
    QuantumSystem sys = testsup::two_qubit_example();
    IdentifiabilityReport report = identifiability_report(sys, empty_mask(sys));
    CHECK(report.commutant.dimension() == 16);
    CHECK(report.residual_gauge_dim == 15);
    CHECK_FALSE(report.fully_identifiable);
}

TEST_CASE("knowing everything pins the gauge to the global phase") {
    QuantumSystem sys = testsup::two_qubit_example();
    KnownMask mask = empty_mask(sys);
    mask.drift = true;
    mask.controls.assign(mask.controls.size(), true);
    mask.observables.assign(mask.observables.size(), true);
    mask.initial_state = true;
    IdentifiabilityReport report = identifiability_report(sys, mask);
    CHECK(report.residual_gauge_dim == 0);
    CHECK(report.fully_identifiable);
}

TEST_CASE("identifiability preconditions") {
    QuantumSystem sys = testsup::two_qubit_example();
    KnownMask bad = empty_mask(sys);
    bad.controls.pop_back();
    CHECK_THROWS_AS(identifiability_report(sys, bad), std::invalid_argument);

    Matrix rho0 = Matrix::Zero(2, 2);
    rho0(0, 0) = 1.0;
    QuantumSystem abelian = make_system(pauli_z(), {pauli_z()}, {pauli_z()}, rho0);
    CHECK_THROWS_AS(identifiability_report(abelian, empty_mask(abelian)),
                    std::invalid_argument);
}
