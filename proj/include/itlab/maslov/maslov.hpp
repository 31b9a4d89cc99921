#ifndef ITLAB_MASLOV_MASLOV_HPP
#define ITLAB_MASLOV_MASLOV_HPP
//
// Module      : maslov/maslov
// Description : Maslov index of Lagrangian path pairs by protected phase
//               counting, and the constructive triple index normalized by
//               vanishing on repeated slots
//

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "itlab/core/types.hpp"
#include "itlab/maslov/grassmann.hpp"

namespace itlab {

/** Tuning knobs for the Maslov analyses. */
struct MaslovOptions {
    double angle_collar = 1e-8;                  // marker collar in radians
    int max_depth = 48;                          // per-segment bisection floor
    std::uint64_t seed = 0x51c3a9b2d4e6f710ull;  // triple-index second-path seed
};

namespace detail {

inline double mod_two_pi(double x) {
    const double two_pi = 2.0 * std::numbers::pi;
    double y = std::fmod(x, two_pi);
    if (y < 0.0) y += two_pi;
    return y;
}

/** Circle distance between two phases. */
inline double circle_distance(double a, double b) {
    const double d = mod_two_pi(a - b);
    return std::min(d, 2.0 * std::numbers::pi - d);
}

/**
 * Pair unitary U = Phi_P Phi_Q^*; its eigenvalue phases, principal branch.
 * Subspace intersections of P and Q sit exactly at phase 0 (eigenvalue +1).
 */
inline std::vector<double> pair_phases(const MatC& u) {
    Eigen::ComplexEigenSolver<MatC> es(u, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) {
        throw itlab_error("pair_phases: eigensolver failed");
    }
    std::vector<double> phases;
    phases.reserve(static_cast<std::size_t>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
        phases.push_back(std::arg(es.eigenvalues()(i)));
    }
    return phases;
}

/** Upper bound on eigenphase movement between two unitaries. */
inline double phase_movement_bound(const MatC& u0, const MatC& u1) {
    const double d2 = (u1 - u0).cwiseAbs().rowwise().sum().maxCoeff();
    return 2.1 * std::asin(std::min(1.0, 0.5 * d2));
}

/** A cut position on the phase circle protected by a spectral gap. */
struct CutChoice {
    double cut = std::numbers::pi;
    double margin = 0.0;
};

inline CutChoice protected_cut(const std::vector<double>& ph0,
                               const std::vector<double>& ph1, double collar) {
    std::vector<double> pts;
    pts.reserve(ph0.size() + ph1.size());
    for (double x : ph0) pts.push_back(mod_two_pi(x));
    for (double x : ph1) pts.push_back(mod_two_pi(x));
    std::sort(pts.begin(), pts.end());
    const double two_pi = 2.0 * std::numbers::pi;
    CutChoice best;
    best.margin = -1.0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const double lo = pts[i];
        const double hi = (i + 1 < pts.size()) ? pts[i + 1] : (pts.front() + two_pi);
        const double gap = hi - lo;
        if (gap * 0.5 > best.margin) {
            best.margin = gap * 0.5;
            best.cut = mod_two_pi(lo + 0.5 * gap);
        }
    }
    if (pts.empty()) {  // cannot happen for nonempty spaces; keep the default
        best.margin = std::numbers::pi;
        best.cut = std::numbers::pi;
    }
    // keep the cut outside the marker collar so arc membership stays sharp
    if (circle_distance(best.cut, 0.0) < std::max(4.0 * collar, 1e-6)) {
        best.cut = mod_two_pi(best.cut + 0.5 * best.margin);
        best.margin *= 0.5;
    }
    return best;
}

/**
 * Number of phases inside the arc from the marker (phase 0, with collar on
 * its clockwise side) counterclockwise to the cut.
 */
inline int arc_count(const std::vector<double>& phases, double cut, double collar) {
    const double c = mod_two_pi(cut + collar);
    int n = 0;
    for (double x : phases) {
        if (mod_two_pi(x + collar) < c) ++n;
    }
    return n;
}

/** Count of phases sitting within the marker collar. */
inline int marker_count(const std::vector<double>& phases, double collar) {
    int n = 0;
    for (double x : phases) {
        if (circle_distance(x, 0.0) <= collar) ++n;
    }
    return n;
}

}  // namespace detail

/**
 * Maslov index of a pair of Lagrangian paths (P(t), Q(t)) on a shared grid.
 *
 * The pair unitary U(t) = Phi_P(t) Phi_Q(t)^* carries the intersection data:
 * Im P(t) meets Im Q(t) exactly where U(t) has eigenvalue +1. The index is
 * the net count of eigenphases crossing that marker counterclockwise, with
 * the same endpoint convention as spectral flow (a phase sitting on the
 * marker counts as having arrived on the counterclockwise side).
 *
 * Each segment is evaluated by counting phases in the arc from the marker to
 * a cut placed in a spectral gap of both endpoint phase sets; when no gap
 * dominates the phase movement bound, the segment is bisected through the
 * path generators.
 *
 * @throws config_error     when grids or spaces are incompatible
 * @throws ambiguity_error  when refinement is impossible or exhausted
 * @throws consistency_error("endpoint degeneracy ...") when an eigenphase
 *         rests on the marker at an endpoint without persisting as a
 *         constant intersection (the genuinely convention-dependent case)
 */
inline int maslov_index(const LagrangianPath& p, const LagrangianPath& q,
                        const MaslovOptions& opt = {}) {
    p.validate();
    q.validate();
    if (p.size() != q.size()) {
        throw config_error("maslov_index: path grids differ in size");
    }
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (std::abs(p.times[i] - q.times[i]) > 1e-12) {
            throw config_error("maslov_index: path grids differ");
        }
    }
    if (!p.projectors.front().space().compatible_with(q.projectors.front().space())) {
        throw config_error("maslov_index: paths live in different spaces");
    }
    const std::size_t n = p.size();
    std::vector<MatC> u(n);
    std::vector<std::vector<double>> ph(n);
    for (std::size_t i = 0; i < n; ++i) {
        u[i] = p.projectors[i].graph_unitary() * q.projectors[i].graph_unitary().adjoint();
        ph[i] = detail::pair_phases(u[i]);
    }
    const double collar = opt.angle_collar;

    // endpoint degeneracy policy: phases resting on the marker at an endpoint
    // are admitted only as constant intersections persisting over the whole
    // grid; a rest-then-move pattern has no convention-free integer
    const int rest_start = std::min(detail::marker_count(ph.front(), collar),
                                    detail::marker_count(ph[1], collar));
    const int rest_end = std::min(detail::marker_count(ph.back(), collar),
                                  detail::marker_count(ph[n - 2], collar));
    if (rest_start > 0 || rest_end > 0) {
        if (rest_start != rest_end) {
            throw consistency_error("endpoint degeneracy: marker-resting group changes size");
        }
        for (const auto& phases : ph) {
            if (detail::marker_count(phases, collar) < rest_start) {
                throw consistency_error(
                    "endpoint degeneracy: marker-resting eigenphase does not persist");
            }
        }
    }

    // recursive protected counting per segment
    const bool can_refine = static_cast<bool>(p.generator) && static_cast<bool>(q.generator);
    std::function<int(double, double, const MatC&, const MatC&,
                      const std::vector<double>&, const std::vector<double>&, int)>
        segment = [&](double t0, double t1, const MatC& u0, const MatC& u1,
                      const std::vector<double>& f0, const std::vector<double>& f1,
                      int depth) -> int {
        const auto cut = detail::protected_cut(f0, f1, collar);
        const double bound = detail::phase_movement_bound(u0, u1);
        if (cut.margin > std::max(bound, 8.0 * collar)) {
            return detail::arc_count(f1, cut.cut, collar) -
                   detail::arc_count(f0, cut.cut, collar);
        }
        if (!can_refine || depth >= opt.max_depth) {
            throw ambiguity_error("maslov_index: no protected cut between t=" +
                                  std::to_string(t0) + " and t=" + std::to_string(t1) +
                                  "; phases " + format_list(f0));
        }
        const double tm = 0.5 * (t0 + t1);
        const MatC um = p.generator(tm).graph_unitary() *
                        q.generator(tm).graph_unitary().adjoint();
        const auto fm = detail::pair_phases(um);
        return segment(t0, tm, u0, um, f0, fm, depth + 1) +
               segment(tm, t1, um, u1, fm, f1, depth + 1);
    };

    int total = 0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
        total += segment(p.times[i], p.times[i + 1], u[i], u[i + 1], ph[i], ph[i + 1], 0);
    }
    return total;
}

/** Eigenphase trajectories of the pair unitary along the grid (for CSV). */
struct MaslovPhaseTrajectories {
    std::vector<double> times;
    std::vector<std::vector<double>> phases;
};

inline MaslovPhaseTrajectories maslov_phase_trajectories(const LagrangianPath& p,
                                                         const LagrangianPath& q) {
    p.validate();
    q.validate();
    if (p.size() != q.size()) {
        throw config_error("maslov_phase_trajectories: path grids differ");
    }
    MaslovPhaseTrajectories out;
    out.times = p.times;
    for (std::size_t i = 0; i < p.size(); ++i) {
        MatC u = p.projectors[i].graph_unitary() *
                 q.projectors[i].graph_unitary().adjoint();
        auto phases = detail::pair_phases(u);
        std::sort(phases.begin(), phases.end());
        out.phases.push_back(std::move(phases));
    }
    return out;
}

/** Intersection dimension of two Lagrangian subspaces (diagnostic). */
inline int lagrangian_intersection_dim(const LagrangianProjector& a,
                                       const LagrangianProjector& b,
                                       double collar = 1e-8) {
    const MatC u = a.graph_unitary() * b.graph_unitary().adjoint();
    return detail::marker_count(detail::pair_phases(u), collar);
}

namespace detail {

/** Constant Lagrangian path sharing an existing grid. */
inline LagrangianPath constant_on_times(const std::vector<double>& times,
                                        const LagrangianProjector& proj,
                                        std::string label) {
    LagrangianPath path;
    path.label = std::move(label);
    path.times = times;
    path.projectors.assign(times.size(), proj);
    path.generator = [proj](double) { return proj; };
    path.validate();
    return path;
}

/** Concatenation of two Lagrangian paths (second grid shifted). */
inline LagrangianPath concatenate_paths(const LagrangianPath& a, const LagrangianPath& b) {
    a.validate();
    b.validate();
    LagrangianPath p;
    p.label = a.label + " * " + b.label;
    p.times = a.times;
    p.projectors = a.projectors;
    const double shift = a.times.back() - b.times.front();
    for (std::size_t i = 1; i < b.times.size(); ++i) {
        p.times.push_back(b.times[i] + shift);
        p.projectors.push_back(b.projectors[i]);
    }
    const double junction = a.times.back();
    if (a.generator && b.generator) {
        p.generator = [ga = a.generator, gb = b.generator, junction,
                       shift](double t) {
            return (t <= junction) ? ga(t) : gb(t - shift);
        };
    }
    p.validate();
    return p;
}

}  // namespace detail

/**
 * Triple index of three Lagrangians, defined constructively from the Maslov
 * additivity relation with the normalization tau(Q, Q, R) = 0:
 *
 *     tau(P, Q, R) = Mas(gamma, Q) - Mas(gamma, R)
 *
 * along any path gamma from Q to P. The value is path independent because a
 * closed loop contributes the same winding against any fixed second slot;
 * every call verifies this against a second, randomized connecting path and
 * refuses to return on mismatch.
 *
 * @throws consistency_error when the two connecting paths disagree
 */
inline int triple_index(const LagrangianProjector& p, const LagrangianProjector& q,
                        const LagrangianProjector& r, const MaslovOptions& opt = {}) {
    if (!p.space().compatible_with(q.space()) || !q.space().compatible_with(r.space())) {
        throw config_error("triple_index: incompatible spaces");
    }
    const auto evaluate = [&opt, &q, &r](const LagrangianPath& gamma) {
        const auto const_q = detail::constant_on_times(gamma.times, q, "slot-q");
        const auto const_r = detail::constant_on_times(gamma.times, r, "slot-r");
        return maslov_index(gamma, const_q, opt) - maslov_index(gamma, const_r, opt);
    };

    const auto primary = geodesic_lagrangian_path(q, p, 48, "tau-direct");
    const int tau_direct = evaluate(primary);

    std::mt19937_64 rng(opt.seed);
    const auto midpoint = random_lagrangian(q.space(), rng);
    const auto second = detail::concatenate_paths(
        geodesic_lagrangian_path(q, midpoint, 24, "tau-leg1"),
        geodesic_lagrangian_path(midpoint, p, 24, "tau-leg2"));
    const int tau_second = evaluate(second);

    if (tau_direct != tau_second) {
        throw consistency_error("triple_index: path dependence detected (" +
                                std::to_string(tau_direct) + " vs " +
                                std::to_string(tau_second) + ")");
    }
    return tau_direct;
}

}  // namespace itlab

#endif  // ITLAB_MASLOV_MASLOV_HPP
