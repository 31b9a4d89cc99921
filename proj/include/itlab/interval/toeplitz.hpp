#ifndef ITLAB_INTERVAL_TOEPLITZ_HPP
#define ITLAB_INTERVAL_TOEPLITZ_HPP
//
// Module      : interval/toeplitz
// Description : boundary Toeplitz indices of interval models through
//               windowed rank overlaps of nonnegative spectral subspaces,
//               and the operator deformation paths tied to them
//

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"
#include "itlab/flow/path.hpp"
#include "itlab/interval/assemble.hpp"
#include "itlab/interval/model.hpp"

namespace itlab {

// ------------------------------------------------------------------
// options and results
// ------------------------------------------------------------------

struct BoundaryIndexOptions {
    double window_target = 4.0;  // desired half-width of the comparison window
    int n_x = 120;               // base grid; the certificate recomputes at 2 n_x
    double rank_margin = 0.15;   // required distance of overlap spectra from 1/2
};

struct BoundaryIndexResult {
    int index = 0;           // value at the base grid
    int index_refined = 0;   // value at the halved step
    bool converged = false;  // integer agreement across the refinement
    double window = 0.0;     // snapped spectral window half-width
    double rank_margin = 1.0;  // worst observed overlap margin
};

namespace detail {

/** Columns of the midpoint-sample frame for eigenvalues satisfying pred. */
inline MatC select_columns(const AssembledProblem& prob, const EigenSystem& es,
                           const std::function<bool(double)>& pred) {
    int count = 0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        if (pred(es.values[i])) ++count;
    MatC frame(prob.r.rows(), count);
    int c = 0;
    for (Eigen::Index i = 0; i < es.values.size(); ++i)
        if (pred(es.values[i])) frame.col(c++) = prob.r * es.vectors.col(i);
    return frame;
}

/** Guard: no eigenvalue may sit just outside the zero-detection band. */
inline void guard_spectral_cut(const VecR& values, double ztol, const std::string& what) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double a = std::abs(values[i]);
        if (a > ztol && a < tol::rank_gap_factor * ztol)
            throw ambiguity_error(what + ": eigenvalue " + std::to_string(values[i]) +
                                  " sits at the spectral cut within discretization noise");
    }
}

/** Midpoint block action of a lifted tangential symbol. */
inline MatC apply_symbol_at_midpoints(const IntervalSymbol& g, const AssembledProblem& prob,
                                      const MatC& frame) {
    const int d = prob.fiber_dim;
    MatC out(frame.rows(), frame.cols());
    for (std::size_t j = 0; j < prob.midpoints.size(); ++j) {
        const MatC lift = g.lift(prob.midpoints[j]);
        out.middleRows(static_cast<Eigen::Index>(j) * d, d) =
            lift * frame.middleRows(static_cast<Eigen::Index>(j) * d, d);
    }
    return out;
}

/**
 * Snap a window half-width near the target into a spectral gap of the
 * given eigenvalue list: the returned width keeps every eigenvalue at
 * least min_gap away. Candidate gaps are searched outward from the
 * target; failure throws.
 */
inline double snap_window(const VecR& values, double target, double min_gap) {
    std::vector<double> a;
    a.reserve(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) a.push_back(std::abs(values[i]));
    std::sort(a.begin(), a.end());
    double best = -1.0, best_score = -1.0;
    for (std::size_t i = 0; i + 1 < a.size(); ++i) {
        const double lo = a[i], hi = a[i + 1];
        if (hi - lo < 2.0 * min_gap) continue;
        const double mid = 0.5 * (lo + hi);
        if (mid < 0.5 * target || mid > 3.0 * target) continue;
        const double score = 1.0 / (1.0 + std::abs(mid - target));
        if (score > best_score) { best_score = score; best = mid; }
    }
    if (best < 0.0)
        throw ambiguity_error("snap_window: no spectral gap of width " +
                              std::to_string(2.0 * min_gap) + " near target " +
                              std::to_string(target));
    return best;
}

struct WindowedRank {
    int index = 0;
    double window = 0.0;
    double margin = 1.0;
};

/**
 * Base-side data reused across every comparison problem on one grid:
 * the symbol image of the nonnegative midpoint frame of the base
 * problem.  Building it costs the single expensive base eigensolve.
 */
struct BaseFrameData {
    MatC gy0;  // symbol image of the base nonnegative subspace, midpoint samples
};

inline BaseFrameData build_base_frame(const AssembledProblem& base, const IntervalSymbol& g) {
    const EigenSystem es_base = base.eigensystem();
    const double ztol_b = tol::zero_eigenvalue * std::max(1.0, base.coefficient_scale);
    guard_spectral_cut(es_base.values, ztol_b, "windowed_rank_overlap(base)");
    const MatC y0 = select_columns(base, es_base,
                                   [ztol_b](double v) { return v >= -ztol_b; });
    return BaseFrameData{apply_symbol_at_midpoints(g, base, y0)};
}

/**
 * Windowed rank overlap of a comparison problem against a prepared
 * base frame:
 *
 *   rank_P  = number of conjugated-problem eigenvalues in [0, window]
 *   rank_Q  = rank, within the window span of the conjugated problem,
 *             of the symbol image of the base nonnegative subspace
 *   value   = rank_Q - rank_P
 *
 * The overlap rank is certified through the spectrum of C C* with
 * C the frame inner product: all eigenvalues must stay margin-far
 * from 1/2. A failing margin retries once with a widened window.
 */
inline WindowedRank windowed_rank_against(const BaseFrameData& bf,
                                          const AssembledProblem& conj,
                                          const BoundaryIndexOptions& opt) {
    const EigenSystem es_conj = conj.eigensystem();
    const double ztol_c = tol::zero_eigenvalue * std::max(1.0, conj.coefficient_scale);
    guard_spectral_cut(es_conj.values, ztol_c, "windowed_rank_overlap(conjugated)");

    double window = snap_window(es_conj.values, opt.window_target, 0.05);
    for (int attempt = 0; attempt < 2; ++attempt) {
        const double w = window;
        const MatC wf = select_columns(conj, es_conj,
                                       [w](double v) { return std::abs(v) <= w; });
        int rank_p = 0;
        for (Eigen::Index i = 0; i < es_conj.values.size(); ++i)
            if (es_conj.values[i] >= -ztol_c && es_conj.values[i] <= w) ++rank_p;

        const MatC c = wf.adjoint() * bf.gy0;
        const VecR overlap = hermitian_eigenvalues(MatC(c * c.adjoint()));
        int rank_q = 0;
        double margin = 1.0;
        for (Eigen::Index i = 0; i < overlap.size(); ++i) {
            const double v = overlap[i];
            if (v > 0.5) ++rank_q;
            margin = std::min(margin, std::abs(v - 0.5));
        }
        if (margin >= opt.rank_margin)
            return WindowedRank{rank_q - rank_p, w, margin};
        if (attempt == 0) {
            window = snap_window(es_conj.values, 1.6 * opt.window_target, 0.05);
            continue;
        }
        throw unstable_rank_error(
            "windowed_rank_overlap: overlap spectrum too close to 1/2 (margin " +
            std::to_string(margin) + ") even after widening the window");
    }
    throw itlab_error("windowed_rank_overlap: unreachable");
}

/** Single-comparison convenience wrapper. */
inline WindowedRank windowed_rank_overlap(const AssembledProblem& base,
                                          const AssembledProblem& conj,
                                          const IntervalSymbol& g,
                                          const BoundaryIndexOptions& opt) {
    return windowed_rank_against(build_base_frame(base, g), conj, opt);
}

}  // namespace detail

// ------------------------------------------------------------------
// boundary Toeplitz indices
// ------------------------------------------------------------------

namespace detail {

/**
 * Windowed ranks of several comparison profiles against one shared
 * base problem on one grid.  The base problem, its eigensolve, and
 * the conjugated-condition assembly context are built once.
 */
inline std::vector<WindowedRank> windowed_ranks_on_grid(
    const IntervalDiracModel& model, const BoundaryCondition& bc0,
    const BoundaryCondition& bc1, const IntervalSymbol& g,
    const std::vector<std::function<MatC(double)>>& conj_profiles, int n_x,
    const BoundaryIndexOptions& opt) {
    const auto geo = model.with_grid(n_x);
    AssemblyContext base_ctx(geo.block_size(), geo.n_x(), geo.length(), bc0, bc1);
    const BoundaryCondition cbc0 = bc0.conjugated(g.lift(0.0));
    const BoundaryCondition cbc1 = bc1.conjugated(g.lift(1.0));
    AssemblyContext conj_ctx(geo.block_size(), geo.n_x(), geo.length(), cbc0, cbc1);

    const AssembledProblem base =
        base_ctx.assemble([&geo](double x) { return geo.coefficient(x); });
    const BaseFrameData bf = build_base_frame(base, g);

    std::vector<WindowedRank> out;
    out.reserve(conj_profiles.size());
    for (const auto& profile : conj_profiles)
        out.push_back(windowed_rank_against(bf, conj_ctx.assemble(profile), opt));
    return out;
}

/** Refinement-certified indices for several comparison profiles at once. */
inline std::vector<BoundaryIndexResult> windowed_indices_with_refinement(
    const IntervalDiracModel& model, const BoundaryCondition& bc0,
    const BoundaryCondition& bc1, const IntervalSymbol& g,
    const std::vector<std::function<MatC(double)>>& conj_profiles,
    const BoundaryIndexOptions& opt) {
    const auto coarse = windowed_ranks_on_grid(model, bc0, bc1, g, conj_profiles,
                                               opt.n_x, opt);
    const auto fine = windowed_ranks_on_grid(model, bc0, bc1, g, conj_profiles,
                                             2 * opt.n_x, opt);
    std::vector<BoundaryIndexResult> out(conj_profiles.size());
    for (std::size_t i = 0; i < conj_profiles.size(); ++i) {
        out[i].index = coarse[i].index;
        out[i].index_refined = fine[i].index;
        out[i].converged = (coarse[i].index == fine[i].index);
        out[i].window = coarse[i].window;
        out[i].rank_margin = std::min(coarse[i].margin, fine[i].margin);
    }
    return out;
}

inline BoundaryIndexResult windowed_index_with_refinement(
    const IntervalDiracModel& model, const BoundaryCondition& bc0,
    const BoundaryCondition& bc1, const IntervalSymbol& g,
    const std::function<MatC(double)>& conj_profile, const BoundaryIndexOptions& opt) {
    return windowed_indices_with_refinement(model, bc0, bc1, g, {conj_profile}, opt)
        .front();
}

}  // namespace detail

/**
 * Index of the boundary Toeplitz operator of a tangential symbol g:
 * the base problem carries the given boundary conditions, the
 * comparison problem carries the g-conjugated conditions, and the
 * index is the windowed rank overlap of the nonnegative subspace
 * transported by g against the conjugated-problem window.
 *
 * Every reported integer is recomputed at half the grid step; the
 * converged flag records agreement.
 *
 * @throws ambiguity_error     eigenvalue at the spectral cut, or no
 *                             usable spectral window
 * @throws unstable_rank_error overlap rank not certifiable
 */
inline BoundaryIndexResult boundary_toeplitz_index(const IntervalDiracModel& model,
                                                   const BoundaryCondition& bc0,
                                                   const BoundaryCondition& bc1,
                                                   const IntervalSymbol& g,
                                                   const BoundaryIndexOptions& opt = {}) {
    auto profile = [&model](double x) { return model.coefficient(x); };
    return detail::windowed_index_with_refinement(model, bc0, bc1, g, profile, opt);
}

/**
 * Coefficient profile of the cutoff-interpolated operator
 *
 *   D^psi = (1 - Psi) D + Psi g D g^{-1}
 *         = gamma ( d/dx + A + Psi (g A g^{-1} - A - g' g^{-1}) ) ,
 *
 * with Psi the two-collar mirror of the cutoff (equal to 1 near both
 * ends). The lifted symbol commutes with gamma, so the profile stays
 * admissible.
 */
inline std::function<MatC(double)> cutoff_conjugated_profile(const IntervalDiracModel& model,
                                                             const IntervalSymbol& g,
                                                             const CutoffProfile& cutoff,
                                                             bool mirrored = true) {
    const IntervalDiracModel geo = model;
    const IntervalSymbol sym = g;
    const CutoffProfile cut = cutoff;
    return [geo, sym, cut, mirrored](double x) -> MatC {
        const double s = mirrored ? cut.mirrored(x) : cut.psi(x);
        const MatC a = geo.coefficient(x);
        const MatC u = sym.lift(x);
        const MatC du = sym.lift_derivative(x);
        const MatC correction = u * a * u.adjoint() - a - du * u.adjoint();
        return a + s * correction;
    };
}

/**
 * Index of the cutoff-perturbed boundary Toeplitz operator: the
 * comparison problem is the interpolated operator D^psi under the
 * g-conjugated boundary conditions. A cutoff profile that vanishes
 * identically reproduces boundary_toeplitz_index exactly (same code
 * path, identical profile).
 */
inline BoundaryIndexResult perturbed_boundary_toeplitz_index(const IntervalDiracModel& model,
                                                             const BoundaryCondition& bc0,
                                                             const BoundaryCondition& bc1,
                                                             const IntervalSymbol& g,
                                                             const CutoffProfile& cutoff,
                                                             const BoundaryIndexOptions& opt = {},
                                                             bool mirrored = true) {
    auto profile = cutoff_conjugated_profile(model, g, cutoff, mirrored);
    return detail::windowed_index_with_refinement(model, bc0, bc1, g, profile, opt);
}

/** Plain and cutoff-perturbed boundary Toeplitz indices of one symbol. */
struct BoundaryIndexPair {
    BoundaryIndexResult plain;      // comparison profile: the model coefficient
    BoundaryIndexResult perturbed;  // comparison profile: the cutoff-interpolated one
};

/**
 * Both indices of one symbol in a single pass: the base problem, its
 * eigensolve, and the conjugated-condition context are shared between
 * the two comparison profiles on each grid.  Results agree exactly
 * with the two single-index entry points.
 */
inline BoundaryIndexPair boundary_toeplitz_index_pair(const IntervalDiracModel& model,
                                                      const BoundaryCondition& bc0,
                                                      const BoundaryCondition& bc1,
                                                      const IntervalSymbol& g,
                                                      const CutoffProfile& cutoff,
                                                      const BoundaryIndexOptions& opt = {},
                                                      bool mirrored = true) {
    const IntervalDiracModel geo = model;
    std::vector<std::function<MatC(double)>> profiles{
        [geo](double x) -> MatC { return geo.coefficient(x); },
        cutoff_conjugated_profile(model, g, cutoff, mirrored)};
    auto res = detail::windowed_indices_with_refinement(model, bc0, bc1, g, profiles, opt);
    return BoundaryIndexPair{res[0], res[1]};
}

// ------------------------------------------------------------------
// deformation paths
//
// Two homotopies connect the operators above; their spectral flows
// are the other sides of the index identities.
// ------------------------------------------------------------------

/**
 * Straight-line deformation u in [0, 1] from the base operator D to
 * the interior-conjugated operator
 *
 *   F(u, x) = A + u (1 - Psi(x)) ( g^{-1} A g - A + g^{-1} g' ) ,
 *
 * assembled under the FIXED base boundary conditions. At u = 1 the
 * endpoint is unitarily equivalent to the cutoff-perturbed comparison
 * problem of perturbed_boundary_toeplitz_index.
 */
inline OperatorPath toeplitz_deformation_path(const IntervalDiracModel& model,
                                              const BoundaryCondition& bc0,
                                              const BoundaryCondition& bc1,
                                              const IntervalSymbol& g,
                                              const CutoffProfile& cutoff,
                                              int n_steps = 8,
                                              bool mirrored = true) {
    auto ctx = std::make_shared<AssemblyContext>(model.block_size(), model.n_x(),
                                                 model.length(), bc0, bc1);
    const IntervalDiracModel geo = model;
    const IntervalSymbol sym = g;
    const CutoffProfile cut = cutoff;
    auto gen = [ctx, geo, sym, cut, mirrored](double u) -> MatC {
        auto profile = [&](double x) -> MatC {
            const double s = mirrored ? cut.mirrored(x) : cut.psi(x);
            const MatC a = geo.coefficient(x);
            const MatC v = sym.lift(x);
            const MatC dv = sym.lift_derivative(x);
            const MatC correction = v.adjoint() * a * v - a + v.adjoint() * dv;
            return a + u * (1.0 - s) * correction;
        };
        return ctx->assemble(profile).t;
    };
    return OperatorPath::from_dense_generator(gen, n_steps,
                                              "interior-conjugation(" + g.label() + ")");
}

/**
 * Straight-line switch s in [0, 1] from D to D^psi, assembled under
 * the FIXED g-conjugated boundary conditions:
 *
 *   F(s, x) = A + s Psi(x) ( g A g^{-1} - A - g' g^{-1} ) .
 *
 * Its spectral flow measures the index change between the plain and
 * the cutoff-perturbed boundary Toeplitz operators.
 */
inline OperatorPath cutoff_switch_path(const IntervalDiracModel& model,
                                       const BoundaryCondition& bc0,
                                       const BoundaryCondition& bc1,
                                       const IntervalSymbol& g,
                                       const CutoffProfile& cutoff,
                                       int n_steps = 8,
                                       bool mirrored = true) {
    const BoundaryCondition cbc0 = bc0.conjugated(g.lift(0.0));
    const BoundaryCondition cbc1 = bc1.conjugated(g.lift(1.0));
    auto ctx = std::make_shared<AssemblyContext>(model.block_size(), model.n_x(),
                                                 model.length(), cbc0, cbc1);
    const IntervalDiracModel geo = model;
    const IntervalSymbol sym = g;
    const CutoffProfile cut = cutoff;
    auto gen = [ctx, geo, sym, cut, mirrored](double s) -> MatC {
        auto profile = [&](double x) -> MatC {
            const double p = mirrored ? cut.mirrored(x) : cut.psi(x);
            const MatC a = geo.coefficient(x);
            const MatC v = sym.lift(x);
            const MatC dv = sym.lift_derivative(x);
            const MatC correction = v * a * v.adjoint() - a - dv * v.adjoint();
            return a + s * p * correction;
        };
        return ctx->assemble(profile).t;
    };
    return OperatorPath::from_dense_generator(gen, n_steps,
                                              "cutoff-switch(" + g.label() + ")");
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_TOEPLITZ_HPP
