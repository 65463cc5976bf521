// operator.hpp — Dense complex operators with structural flags, commutators,
// Hilbert-Schmidt inner product, hermitian matrix exponentials.

#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace qsysid {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

// Relative tolerance for structural flag checks (hermitian, traceless, ...).
inline constexpr double kStructTol = 1e-10;

// --------------------------- structural flags --------------------------------

enum class OpFlag : unsigned {
    none = 0,
    hermitian = 1u << 0,
    skew_hermitian = 1u << 1,
    traceless = 1u << 2,
    unitary = 1u << 3,
    density = 1u << 4,
};

constexpr OpFlag operator|(OpFlag a, OpFlag b) {
    return OpFlag(unsigned(a) | unsigned(b));
}
constexpr OpFlag operator&(OpFlag a, OpFlag b) {
    return OpFlag(unsigned(a) & unsigned(b));
}
constexpr bool any(OpFlag f) { return unsigned(f) != 0; }

// An operator is a dense d x d complex matrix tagged with the structural
// properties it is supposed to satisfy. Construction through make_operator
// verifies every claimed flag numerically, so a tagged Operator can be
// trusted downstream. Values are immutable by convention: operations return
// fresh operators instead of mutating.
struct Operator {
    Matrix mat;
    OpFlag flags = OpFlag::none;

    Eigen::Index dim() const { return mat.rows(); }
    bool has(OpFlag f) const { return any(flags & f); }
};

// True within tolerance checks, each relative to the operator scale.
bool is_hermitian(const Matrix& m, double tol = kStructTol);
bool is_skew_hermitian(const Matrix& m, double tol = kStructTol);
bool is_traceless(const Matrix& m, double tol = kStructTol);
bool is_unitary(const Matrix& m, double tol = kStructTol);
bool is_density(const Matrix& m, double tol = kStructTol);
// Distance from the multiples of the identity, relative to ||m||.
double identity_component_residual(const Matrix& m);

OpFlag detect_flags(const Matrix& m, double tol = kStructTol);

// Validates every claimed flag; throws std::invalid_argument naming the
// first violated one.
Operator make_operator(Matrix m, OpFlag flags, double tol = kStructTol);

// Shorthand factories for the common cases.
Operator hermitian_operator(Matrix m, double tol = kStructTol);
Operator density_operator(Matrix m, double tol = kStructTol);

// --------------------------- core operations ---------------------------------

// AB - BA. Traceless always; skew-hermitian when both inputs are hermitian
// (or both skew-hermitian), hermitian for a mixed pair.
Operator commutator(const Operator& a, const Operator& b);
Matrix commutator(const Matrix& a, const Matrix& b);

// tr(A^dag B).
Complex hs_inner(const Operator& a, const Operator& b);
Complex hs_inner(const Matrix& a, const Matrix& b);

// exp(-i H t) for hermitian H, via eigendecomposition. Result is flagged
// unitary. The decomposition is exact to roundoff for any t, which keeps
// integrator tolerances out of the picture entirely.
Operator expm_hermitian_prop(const Operator& h, double t);
Matrix expm_hermitian_prop(const Matrix& h, double t);

// --------------------------- small constructors ------------------------------

Matrix identity(Eigen::Index d);
Matrix pauli_x();
Matrix pauli_y();
Matrix pauli_z();
// |i><j| in d dimensions.
Matrix basis_op(Eigen::Index d, Eigen::Index i, Eigen::Index j);
// |i><i|.
Matrix projector(Eigen::Index d, Eigen::Index i);
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace qsysid
