#ifndef ITLAB_CORE_PROJECTORS_HPP
#define ITLAB_CORE_PROJECTORS_HPP
//
// Module      : core/projectors
// Description : spectral projectors with an explicit zero-mode
//               convention, and gap-checked rank thresholds
//

#include <algorithm>
#include <cmath>
#include <limits>

#include "itlab/core/hermitian.hpp"

namespace itlab {

// ------------------------------------------------------------------
// RankThreshold
//
// Every rank/integer decision is made by singular-value thresholding
// with a mandatory relative-gap check: the cutoff must sit in a gap
// of factor >= gap_factor of the singular-value list, otherwise the
// computation is flagged unstable (loudly, with the list attached).
// ------------------------------------------------------------------
struct RankThreshold {
    double cutoff = tol::rank_cutoff;
    double gap_factor = tol::rank_gap_factor;

    // number of singular values above the cutoff, with gap certificate
    int certified_rank(const std::vector<double>& singulars) const {
        double below = 0.0;                                   // largest value <= cutoff
        double above = std::numeric_limits<double>::infinity();  // smallest value > cutoff
        int rank = 0;
        for (double s : singulars) {
            if (s > cutoff) {
                ++rank;
                above = std::min(above, s);
            } else {
                below = std::max(below, s);
            }
        }
        // exact (or numerically negligible) kernel needs no gap evidence
        const double floor_scale = cutoff / gap_factor;
        if (below > floor_scale && std::isfinite(above) && above / below < gap_factor)
            throw unstable_rank_error(
                "singular values cluster at the rank cutoff " + std::to_string(cutoff) +
                ": " + format_list(singulars));
        return rank;
    }

    int certified_rank(const VecR& singulars) const {
        return certified_rank(std::vector<double>(singulars.data(),
                                                  singulars.data() + singulars.size()));
    }
};

// ------------------------------------------------------------------
// SpectralProjector
//
// Orthogonal projector onto a union of eigenspaces of a Hermitian
// operator. Carries its cut rule and validates idempotency and
// self-adjointness on construction.
// ------------------------------------------------------------------
enum class SpectralCut { nonneg, pos, custom };

class SpectralProjector {
public:
    SpectralProjector(MatC P, SpectralCut cut)
        : matrix_(std::move(P)), cut_(cut) {
        const double idem = (matrix_ * matrix_ - matrix_).norm();
        const double sa   = (matrix_ - matrix_.adjoint()).norm();
        if (idem > tol::projector_idem * std::max<double>(1.0, matrix_.rows()))
            throw itlab_error("projector idempotency defect " + std::to_string(idem));
        if (sa > tol::projector_sa * std::max<double>(1.0, matrix_.rows()))
            throw itlab_error("projector self-adjointness defect " + std::to_string(sa));
    }

    const MatC& matrix() const { return matrix_; }
    SpectralCut cut() const { return cut_; }
    Eigen::Index dim() const { return matrix_.rows(); }

    // rank read off from the (0/1) spectrum; exact for true projectors
    int rank() const { return int(std::lround(matrix_.trace().real())); }

    // orthonormal basis of the range (columns)
    MatC range_basis() const {
        Eigen::SelfAdjointEigenSolver<MatC> es(matrix_);
        const VecR& w = es.eigenvalues();
        int r = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (w[i] > 0.5) ++r;
        MatC B(matrix_.rows(), r);
        int c = 0;
        for (Eigen::Index i = 0; i < w.size(); ++i)
            if (w[i] > 0.5) B.col(c++) = es.eigenvectors().col(i);
        return B;
    }

private:
    MatC matrix_;
    SpectralCut cut_;
};

// ------------------------------------------------------------------
// spectral_projector
//
// Projector onto the span of eigenvectors with lambda >= 0 (nonneg
// cut: zero modes included by definition) or lambda > 0 (pos cut:
// any eigenvalue within the zero-detection band is an ambiguity).
// ------------------------------------------------------------------
inline SpectralProjector spectral_projector(const HermitianOperatorModel& H,
                                            SpectralCut cut) {
    if (cut == SpectralCut::custom)
        throw config_error("custom cuts are built by the caller, not this routine");
    EigenSystem es = eigendecompose(H);
    const double scale = std::max(1.0, H.matrix().norm());
    const double ztol = tol::zero_eigenvalue * scale;

    if (cut == SpectralCut::pos) {
        for (Eigen::Index i = 0; i < es.values.size(); ++i)
            if (std::abs(es.values[i]) < ztol)
                throw ambiguity_error(
                    "eigenvalue " + std::to_string(es.values[i]) +
                    " straddles the positive cut within noise band " + std::to_string(ztol));
    }

    const Eigen::Index n = es.values.size();
    MatC P = MatC::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double lam = es.values[i];
        const bool keep = (cut == SpectralCut::nonneg) ? (lam >= -ztol) : (lam > ztol);
        if (keep) P += es.vectors.col(i) * es.vectors.col(i).adjoint();
    }
    return SpectralProjector(P, cut);
}

inline SpectralProjector spectral_projector(const MatC& H, SpectralCut cut) {
    return spectral_projector(HermitianOperatorModel(H), cut);
}

// count of eigenvalues on the nonnegative side (zero band inclusive);
// shares the zero convention with the nonneg projector
inline int nonneg_count(const VecR& eigenvalues, double scale = 1.0) {
    const double ztol = tol::zero_eigenvalue * std::max(1.0, scale);
    int c = 0;
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i)
        if (eigenvalues[i] >= -ztol) ++c;
    return c;
}

}  // namespace itlab

#endif  // ITLAB_CORE_PROJECTORS_HPP
