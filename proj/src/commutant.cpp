// commutant.cpp

#include "qsysid/commutant.hpp"

#include "qsysid/hermitian_basis.hpp"
#include "qsysid/superop.hpp"

#include <Eigen/SVD>

#include <limits>
#include <stdexcept>

namespace qsysid {

CommutantBasis commutant(const std::vector<Matrix>& known_ops, double rank_tol) {
    if (known_ops.empty()) {
        throw std::invalid_argument("commutant: dimension unknown without constraints; "
                                    "pass at least one matrix");
    }
    const Eigen::Index d = known_ops.front().rows();
    for (const Matrix& a : known_ops) {
        if (a.rows() != d || a.cols() != d) {
            throw std::invalid_argument("commutant: matrices must be square and share one dimension");
        }
    }
    if (rank_tol <= 0.0) {
        throw std::invalid_argument("commutant: rank tolerance must be positive");
    }

    HermitianBasisIndex basis(d);
    const Eigen::Index m = d * d;
    RealMatrix stacked(static_cast<Eigen::Index>(known_ops.size()) * m, m);
    for (std::size_t i = 0; i < known_ops.size(); ++i) {
        const Matrix& a = known_ops[i];
        stacked.middleRows(static_cast<Eigen::Index>(i) * m, m) =
            real_rep(basis, [&](const Matrix& x) { return apply_liouvillian(a, x); });
    }

    Eigen::JacobiSVD<RealMatrix> svd(stacked, Eigen::ComputeThinV);
    const auto& s = svd.singularValues();
    double smax = s.size() > 0 ? s(0) : 0.0;
    double eps = std::numeric_limits<double>::epsilon();
    double cutoff = std::max(rank_tol, static_cast<double>(std::max(stacked.rows(),
                                                                    stacked.cols())) * eps) *
                    std::max(smax, 1.0);
    Eigen::Index numeric_rank = 0;
    for (Eigen::Index i = 0; i < s.size(); ++i) {
        if (s(i) > cutoff) ++numeric_rank;
    }

    CommutantBasis out;
    out.dim_hilbert = d;
    for (Eigen::Index j = numeric_rank; j < m; ++j) {
        Matrix x = basis.from_coords(svd.matrixV().col(j));
        out.elements.push_back(make_operator(std::move(x), OpFlag::hermitian));
    }
    return out;
}

KnownMask empty_mask(const QuantumSystem& sys) {
    KnownMask mask;
    mask.controls.assign(static_cast<std::size_t>(sys.input_count()), false);
    mask.observables.assign(static_cast<std::size_t>(sys.output_count()), false);
    return mask;
}

IdentifiabilityReport identifiability_report(const QuantumSystem& sys, const KnownMask& mask,
                                             double rank_tol) {
    if (mask.controls.size() != static_cast<std::size_t>(sys.input_count()) ||
        mask.observables.size() != static_cast<std::size_t>(sys.output_count())) {
        throw std::invalid_argument("identifiability_report: mask shape disagrees with system");
    }
    if (!is_controllable(sys, rank_tol).controllable) {
        throw std::invalid_argument("identifiability_report: system is not controllable");
    }

    std::vector<Matrix> known;
    if (mask.drift) known.push_back(sys.drift.mat);
    for (std::size_t k = 0; k < mask.controls.size(); ++k) {
        if (mask.controls[k]) known.push_back(sys.controls[k].mat);
    }
    for (std::size_t l = 0; l < mask.observables.size(); ++l) {
        if (mask.observables[l]) known.push_back(sys.observables[l].mat);
    }
    if (mask.initial_state) known.push_back(sys.initial_state.mat);

    IdentifiabilityReport report;
    if (known.empty()) {
        // Nothing pins the gauge: the commutant of the empty set is the full
        // hermitian space.
        HermitianBasisIndex basis(sys.dim);
        report.commutant.dim_hilbert = sys.dim;
        for (Eigen::Index a = 0; a < sys.dim * sys.dim; ++a) {
            report.commutant.elements.push_back(
                make_operator(basis.element(a), OpFlag::hermitian));
        }
    } else {
        report.commutant = commutant(known, rank_tol);
    }
    report.residual_gauge_dim = report.commutant.residual_gauge_dim();
    report.fully_identifiable = report.residual_gauge_dim == 0;
    return report;
}

}  // namespace qsysid
