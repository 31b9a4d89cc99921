#ifndef ITLAB_INTERVAL_CYLINDER_HPP
#define ITLAB_INTERVAL_CYLINDER_HPP
//
// Module      : interval/cylinder
// Description : index of the half-infinite-cylinder boundary problem
//               attached to a circle symbol: global spectral boundary
//               conditions at both ends, kernel and cokernel counted
//               as mode-exact subspace intersections
//

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "itlab/circle/symbol.hpp"
#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"

namespace itlab {

// ------------------------------------------------------------------
// model and options
// ------------------------------------------------------------------

/**
 * Cross-section operator of a product cylinder: first-order circle
 * operator with a constant Hermitian potential,
 *
 *   B = -i d/dtheta (x) I_N + potential .
 *
 * In the Fourier basis, mode k carries the N x N block k I + potential,
 * so the full eigensystem is { lambda = k + mu_j, vector e_k (x) v_j }
 * with (mu_j, v_j) the eigensystem of the potential. Everything the
 * index computation needs is exact in this basis.
 */
class CylinderCrossSection {
  public:
    CylinderCrossSection(int block_size, const MatC& potential,
                         std::string label = "cross-section")
        : n_(block_size), label_(std::move(label)) {
        if (n_ <= 0) throw config_error("CylinderCrossSection: block size must be positive");
        if (potential.rows() != n_ || potential.cols() != n_)
            throw config_error("CylinderCrossSection: potential shape mismatch");
        const double herm = (potential - potential.adjoint()).norm();
        if (herm > tol::hermiticity * std::max(1.0, potential.norm()))
            throw config_error("CylinderCrossSection: potential must be Hermitian");
        const EigenSystem es = eigendecompose(MatC(0.5 * (potential + potential.adjoint())));
        mu_ = es.values;
        v_ = es.vectors;
        spread_ = 0.0;
        for (Eigen::Index j = 0; j < mu_.size(); ++j)
            spread_ = std::max(spread_, std::abs(mu_(j)));
    }

    /** Fiber dimension N of the circle bundle. */
    int block_size() const { return n_; }

    /** Eigenvalue of mode (k, j): k + mu_j. */
    double eigenvalue(int k, int j) const { return k + mu_(j); }

    /** Potential eigenvalues mu_j (ascending). */
    const VecR& potential_values() const { return mu_; }

    /** Orthonormal potential eigenvectors, column j paired with mu_j. */
    const MatC& potential_vectors() const { return v_; }

    /** Largest |mu_j|: how far mode eigenvalues stray from the integers. */
    double potential_spread() const { return spread_; }

    const std::string& label() const { return label_; }

  private:
    int n_;
    VecR mu_;
    MatC v_;
    double spread_ = 0.0;
    std::string label_;
};

struct CylinderIndexOptions {
    int k_window = 28;      // half-width of the mode window the counts are read from
    int stability_step = 5; // the count is recomputed at k_window + stability_step
    double accept = 1e-8;   // principal cosine >= 1 - accept counts as intersection
    double reject = 1e-4;   // principal cosine <= 1 - reject must separate the rest
};

struct CylinderIndexResult {
    int index = 0;          // kernel_dim - cokernel_dim
    int kernel_dim = 0;
    int cokernel_dim = 0;
    int k_window = 0;       // window the reported counts used
    bool stable = false;    // counts unchanged at the enlarged window
    double certificate_gap = 0.0;  // worst principal-cosine separation seen
    std::string label;
};

// ------------------------------------------------------------------
// mode-exact subspace intersections
// ------------------------------------------------------------------

namespace detail {

/** Ambient coordinate of Fourier mode k, fiber component c, half-width ka. */
inline int cyl_coord(int k, int c, int ka, int n) { return (k + ka) * n + c; }

struct IntersectionCount {
    int dim = 0;
    double gap = 1.0;  // separation between accepted and rejected cosines
};

/**
 * Dimension of the intersection of two subspaces given by frames with
 * orthonormal columns (qa) and general full-rank columns (b). Two
 * independent routes must agree: principal cosines of the orthonormal
 * overlap, and the rank deficiency of the stacked frame; disagreement
 * raises ambiguity_error instead of guessing.
 */
inline IntersectionCount subspace_intersection_dim(const MatC& qa, const MatC& b,
                                                   double accept, double reject) {
    if (qa.cols() == 0 || b.cols() == 0) return {0, 1.0};
    // orthonormalize b with a conditioning guard: the columns come from
    // applying an invertible symbol, so rank deficiency means trouble
    Eigen::ColPivHouseholderQR<MatC> qr(b);
    qr.setThreshold(1e-10);
    if (qr.rank() != b.cols())
        throw config_error("subspace_intersection_dim: symbol image frame lost rank");
    const MatC qb = MatC(qr.householderQ()).leftCols(b.cols());

    // route 1: principal cosines
    Eigen::JacobiSVD<MatC> svd(MatC(qa.adjoint() * qb));
    const VecR cos = svd.singularValues();
    int dim = 0;
    double smallest_accepted = 1.0, largest_rejected = 0.0;
    for (Eigen::Index i = 0; i < cos.size(); ++i) {
        if (cos(i) >= 1.0 - accept) {
            ++dim;
            smallest_accepted = std::min(smallest_accepted, cos(i));
        } else {
            largest_rejected = std::max(largest_rejected, cos(i));
        }
    }
    if (largest_rejected > 1.0 - reject)
        throw ambiguity_error("subspace_intersection_dim: principal cosine " +
                              std::to_string(largest_rejected) +
                              " sits between the accept and reject bands");

    // route 2: rank deficiency of the stacked frame
    MatC stacked(qa.rows(), qa.cols() + qb.cols());
    stacked << qa, -qb;
    Eigen::ColPivHouseholderQR<MatC> qr2(stacked);
    qr2.setThreshold(1e-7);
    const int dim2 = static_cast<int>(qa.cols() + qb.cols() - qr2.rank());
    if (dim2 != dim)
        throw ambiguity_error("subspace_intersection_dim: cosine route counts " +
                              std::to_string(dim) + " but rank route counts " +
                              std::to_string(dim2));

    return {dim, (dim > 0 ? smallest_accepted : 1.0) - largest_rejected};
}

/**
 * Kernel / cokernel counts of the cylinder problem in one mode window.
 *
 * Solutions decaying along the cylinder are spanned by spectral modes
 * of the cross-section, so the kernel is the intersection of the
 * negative spectral subspace with the symbol image of the nonnegative
 * one, and the cokernel the mirror intersection. The decay weights
 * exp(+-lambda) preserve each spectral subspace and are invertible on
 * the window, so they cancel out of the dimension counts and are not
 * applied numerically.
 *
 * Exactness: a symbol of band b moves mode k at most to k +- b.
 * Columns are drawn from |k| <= k_win and intersected against spectral
 * frames on the ambient window |k| <= k_win + b, so no image leaves
 * the ambient window, and candidates from beyond the core window
 * cannot reach across the spectral cut once
 * k_win > b + potential_spread — enforced below.
 */
inline std::pair<IntersectionCount, IntersectionCount> cylinder_counts(
    const CylinderCrossSection& cs, const UnitarySymbol& g, int k_win,
    const CylinderIndexOptions& opt) {
    const int n = cs.block_size();
    const int band = g.band();
    if (g.block_size() != n)
        throw config_error("cylinder_counts: symbol block size mismatch");
    if (k_win <= band + static_cast<int>(std::ceil(cs.potential_spread())) + 2)
        throw config_error("cylinder_counts: mode window too small for the symbol band "
                           "and potential spread; crossings could leak past the cut");
    const int ka = k_win + band;
    const int dim_amb = (2 * ka + 1) * n;

    // spectral-cut guard: an exact zero mode is assigned to the
    // nonnegative side by convention (matching the circle compression);
    // a near-zero mode would make that assignment float-dependent
    for (int k = -ka; k <= ka; ++k)
        for (int j = 0; j < n; ++j) {
            const double lam = cs.eigenvalue(k, j);
            if (lam != 0.0 && std::abs(lam) < 1e-9)
                throw config_error("cylinder_counts: cross-section eigenvalue sits at the "
                                   "spectral cut; perturb the potential");
        }

    const MatC& v = cs.potential_vectors();

    // orthonormal spectral frames over the ambient window
    std::vector<std::pair<int, int>> neg_modes, pos_modes;
    for (int k = -ka; k <= ka; ++k)
        for (int j = 0; j < n; ++j)
            (cs.eigenvalue(k, j) < 0.0 ? neg_modes : pos_modes).emplace_back(k, j);
    auto spectral_frame = [&](const std::vector<std::pair<int, int>>& modes) {
        MatC q = MatC::Zero(dim_amb, static_cast<Eigen::Index>(modes.size()));
        for (std::size_t c = 0; c < modes.size(); ++c) {
            const auto [k, j] = modes[c];
            q.block(cyl_coord(k, 0, ka, n), static_cast<Eigen::Index>(c), n, 1) = v.col(j);
        }
        return q;
    };
    const MatC q_neg = spectral_frame(neg_modes);
    const MatC q_pos = spectral_frame(pos_modes);

    // symbol images of the core-window halves of each spectral subspace
    auto symbol_image = [&](bool nonneg_half) {
        std::vector<std::pair<int, int>> core;
        for (int k = -k_win; k <= k_win; ++k)
            for (int j = 0; j < n; ++j)
                if ((cs.eigenvalue(k, j) >= 0.0) == nonneg_half) core.emplace_back(k, j);
        MatC img = MatC::Zero(dim_amb, static_cast<Eigen::Index>(core.size()));
        for (std::size_t c = 0; c < core.size(); ++c) {
            const auto [k, j] = core[c];
            for (int m = -band; m <= band; ++m)
                img.block(cyl_coord(k + m, 0, ka, n), static_cast<Eigen::Index>(c), n, 1) +=
                    g.coefficient(m) * v.col(j);
        }
        return img;
    };

    const IntersectionCount ker =
        subspace_intersection_dim(q_neg, symbol_image(true), opt.accept, opt.reject);
    const IntersectionCount coker =
        subspace_intersection_dim(q_pos, symbol_image(false), opt.accept, opt.reject);
    return {ker, coker};
}

}  // namespace detail

// ------------------------------------------------------------------
// cylinder index
// ------------------------------------------------------------------

/**
 * Index of the cylinder boundary problem: spectral conditions at both
 * ends, the far end twisted by the circle symbol. Counts are taken in
 * a finite mode window and re-taken in an enlarged window; the result
 * records whether they agreed. This value is computed by bookkeeping
 * entirely different from the compression index on the circle, so the
 * equality of the two is a genuine cross-check of sign conventions.
 */
inline CylinderIndexResult cylinder_aps_index(const CylinderCrossSection& cs,
                                              const UnitarySymbol& g,
                                              const CylinderIndexOptions& opt = {}) {
    CylinderIndexResult out;
    out.k_window = opt.k_window;
    out.label = cs.label() + " / " + g.label();

    const auto [ker, coker] = detail::cylinder_counts(cs, g, opt.k_window, opt);
    out.kernel_dim = ker.dim;
    out.cokernel_dim = coker.dim;
    out.index = ker.dim - coker.dim;
    out.certificate_gap = std::min(ker.gap, coker.gap);

    const auto [ker2, coker2] =
        detail::cylinder_counts(cs, g, opt.k_window + opt.stability_step, opt);
    out.stable = (ker2.dim == ker.dim) && (coker2.dim == coker.dim);
    out.certificate_gap = std::min({out.certificate_gap, ker2.gap, coker2.gap});
    return out;
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_CYLINDER_HPP
