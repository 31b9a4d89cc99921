#ifndef ITLAB_CORE_PAIR_INDEX_HPP
#define ITLAB_CORE_PAIR_INDEX_HPP
//
// Module      : core/pair_index
// Description : Fredholm-pair index and subspace arithmetic via
//               singular values of compressed maps
//

#include "itlab/core/projectors.hpp"

namespace itlab {

// singular values of the compression of Q's range into P's range,
// i.e. of the matrix Up^* Uq for orthonormal range bases Up, Uq.
inline VecR compressed_singulars(const MatC& Up, const MatC& Uq) {
    if (Up.cols() == 0 || Uq.cols() == 0) return VecR::Zero(0);
    Eigen::JacobiSVD<MatC> svd(Up.adjoint() * Uq);
    return svd.singularValues();
}

// ------------------------------------------------------------------
// pair_index
//
// Index of the compression P Q : Im Q -> Im P, returned as
// dim ker(PQ|_Im Q) - dim ker(QP|_Im P). Both kernel dimensions are
// q - r and p - r where r is the rank of the compressed map, read
// off its singular values through the gap-checked threshold.
// ------------------------------------------------------------------
inline int pair_index(const SpectralProjector& P, const SpectralProjector& Q,
                      const RankThreshold& thr = {}) {
    if (P.dim() != Q.dim())
        throw config_error("pair_index: rank-" + std::to_string(P.dim()) +
                           " and rank-" + std::to_string(Q.dim()) +
                           " projectors live in different ambient spaces");
    const MatC Up = P.range_basis();
    const MatC Uq = Q.range_basis();
    const VecR s = compressed_singulars(Up, Uq);
    const int r = thr.certified_rank(s);
    const int q = int(Uq.cols());
    const int p = int(Up.cols());
    return (q - r) - (p - r);
}

// ------------------------------------------------------------------
// subspace_intersection_dim
//
// dim(Im P  ∩  Im Q) as the multiplicity of singular value 1 of the
// compressed map, certified by a gap check mirrored at the 1-end.
// ------------------------------------------------------------------
inline int intersection_dim_from_singulars(const VecR& s, const RankThreshold& thr) {
    // distance-to-1 plays the role the singular value plays at the 0-end
    std::vector<double> dist;
    dist.reserve(std::size_t(s.size()));
    for (Eigen::Index i = 0; i < s.size(); ++i) dist.push_back(1.0 - s[i]);
    double inside = 0.0;   // largest distance accepted as "equal to 1"
    double outside = std::numeric_limits<double>::infinity();
    int mult = 0;
    for (double d : dist) {
        if (d <= thr.cutoff) {
            ++mult;
            inside = std::max(inside, d);
        } else {
            outside = std::min(outside, d);
        }
    }
    const double floor_scale = thr.cutoff / thr.gap_factor;
    if (inside > floor_scale && std::isfinite(outside) && outside / inside < thr.gap_factor)
        throw unstable_rank_error("singular values cluster at 1 in intersection count: " +
                                  format_list(dist));
    return mult;
}

inline int subspace_intersection_dim(const SpectralProjector& P,
                                     const SpectralProjector& Q,
                                     const RankThreshold& thr = {}) {
    if (P.dim() != Q.dim())
        throw config_error("subspace_intersection_dim: ambient dimension mismatch");
    const VecR s = compressed_singulars(P.range_basis(), Q.range_basis());
    return intersection_dim_from_singulars(s, thr);
}

// frame overload: intersection of column spans of (not necessarily
// square) orthonormal frames in a common ambient space
inline int subspace_intersection_dim(const MatC& Up, const MatC& Uq,
                                     const RankThreshold& thr = {}) {
    if (Up.rows() != Uq.rows())
        throw config_error("subspace_intersection_dim: frame ambient mismatch");
    const VecR s = compressed_singulars(Up, Uq);
    return intersection_dim_from_singulars(s, thr);
}

}  // namespace itlab

#endif  // ITLAB_CORE_PAIR_INDEX_HPP
