#ifndef ITLAB_INTERVAL_SPLITTING_HPP
#define ITLAB_INTERVAL_SPLITTING_HPP
//
// Module      : interval/splitting
// Description : equality of the spectral flow of a boundary-condition
//               family with the Maslov index of its two Cauchy-data
//               paths at an interior cut of the interval
//

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"
#include "itlab/flow/path.hpp"
#include "itlab/flow/spectral_flow.hpp"
#include "itlab/interval/assemble.hpp"
#include "itlab/interval/model.hpp"
#include "itlab/maslov/grassmann.hpp"
#include "itlab/maslov/maslov.hpp"

namespace itlab {

// ------------------------------------------------------------------
// cut fiber
//
// Cutting the interval at an interior point x* turns the trace space
// C^{2N} at the cut into a Hermitian symplectic space. The structure
// is J_cut = -gamma.
// ------------------------------------------------------------------

/** The symplectic structure carried by the trace fiber at a cut. */
inline HermitianSymplecticSpace cut_symplectic_space(int block_size) {
    return HermitianSymplecticSpace(MatC(-interval_gamma(block_size)));
}

namespace detail {

/**
 * Transfer matrix of the zero-energy solution equation u' = -A(x) u
 * across [x_from, x_to], as an ordered midpoint product of cell
 * exponentials (second-order accurate). Each factor is exactly
 * symplectic because A anticommutes with gamma, so frames of
 * gamma-isotropic subspaces stay isotropic under the transfer.
 * x_to < x_from integrates backwards.
 */
inline MatC solution_transfer(const std::function<MatC(double)>& a_of_x, int fiber_dim,
                              double x_from, double x_to, int n_steps) {
    if (n_steps < 1) throw config_error("solution_transfer: need at least one step");
    const double h = (x_to - x_from) / n_steps;
    MatC transfer = MatC::Identity(fiber_dim, fiber_dim);
    for (int j = 0; j < n_steps; ++j) {
        const double m = x_from + (j + 0.5) * h;
        const MatC a = a_of_x(m);
        const EigenSystem es = eigendecompose(a);
        VecC d(es.values.size());
        for (Eigen::Index i = 0; i < es.values.size(); ++i)
            d(i) = std::exp(cxd(-h * es.values(i), 0.0));
        transfer = MatC(es.vectors * d.asDiagonal() * es.vectors.adjoint()) * transfer;
    }
    return transfer;
}

/** Quintic ramp 0 -> 1 over [0, 1] with a C^2 graph; returns {value, slope}. */
inline std::pair<double, double> quintic_ramp(double s) {
    if (s <= 0.0) return {0.0, 0.0};
    if (s >= 1.0) return {1.0, 0.0};
    const double s2 = s * s;
    return {s2 * s * (10.0 + s * (-15.0 + 6.0 * s)), 30.0 * s2 * (1.0 - s) * (1.0 - s)};
}

}  // namespace detail

// ------------------------------------------------------------------
// splitting scenarios
//
// The family rotates each end condition inside the gamma-commuting
// rotation group exp(theta gamma). The assembled operator family is
// realized with FIXED base boundary conditions through the interior
// gauge W(x; t) = exp(rho(x; t) gamma), rho interpolating the two end
// angles: (D, rotated conditions) and (W* D W, base conditions) have
// identical spectra, but the fixed-condition form keeps one mass
// reduction for the whole family, so every discrete branch moves
// continuously in t (re-assembling under moving conditions changes
// the reduced space discontinuously and corrupts endpoint counting).
// ------------------------------------------------------------------

/**
 * A one-parameter family of interval problems: one coefficient
 * profile, end conditions rotating by exp(theta_e(t) gamma) from the
 * base conditions; theta_e(0) = 0.
 */
struct SplittingScenario {
    IntervalDiracModel model;
    BoundaryCondition bc0;
    BoundaryCondition bc1;
    std::function<double(double)> theta0_at;  // end-0 rotation angle at parameter t
    std::function<double(double)> theta1_at;  // end-1 rotation angle at parameter t
    double x_cut = 0.5;        // interior cut location
    int n_steps = 16;          // parameter grid for both sides
    int transfer_steps = 256;  // midpoint-product resolution of the transfer
    std::string label = "splitting";

    /** Rotation exp(theta gamma) of the trace fiber. */
    MatC rotation(double theta) const {
        const int d = model.fiber_dim();
        return std::cos(theta) * MatC::Identity(d, d) +
               std::sin(theta) * model.gamma();
    }
    BoundaryCondition bc0_at(double t) const {
        const double th = theta0_at(t);
        return th == 0.0 ? bc0 : bc0.conjugated(rotation(th));
    }
    BoundaryCondition bc1_at(double t) const {
        const double th = theta1_at(t);
        return th == 0.0 ? bc1 : bc1.conjugated(rotation(th));
    }
};

struct SplittingFlowResult {
    int sf = 0;        // spectral flow of the assembled family
    int mas = 0;       // Maslov index of the Cauchy-data path pair at the cut
    bool match = false;
    double x_cut = 0.0;
};

/** Cauchy-data path of the end-0 conditions transported to the cut. */
inline LagrangianPath left_cauchy_path(const SplittingScenario& sc) {
    const HermitianSymplecticSpace space = cut_symplectic_space(sc.model.block_size());
    const IntervalDiracModel model = sc.model;
    const SplittingScenario scen = sc;
    const MatC transfer = detail::solution_transfer(
        [model](double x) { return model.coefficient(x); }, model.fiber_dim(), 0.0,
        sc.x_cut, sc.transfer_steps);
    auto gen = [space, scen, transfer](double t) {
        return lagrangian_from_frame(MatC(transfer * scen.bc0_at(t).frame()), space);
    };
    return LagrangianPath::from_generator(gen, sc.n_steps, sc.label + " (left)");
}

/** Cauchy-data path of the end-1 conditions transported back to the cut. */
inline LagrangianPath right_cauchy_path(const SplittingScenario& sc) {
    const HermitianSymplecticSpace space = cut_symplectic_space(sc.model.block_size());
    const IntervalDiracModel model = sc.model;
    const SplittingScenario scen = sc;
    const MatC transfer = detail::solution_transfer(
        [model](double x) { return model.coefficient(x); }, model.fiber_dim(),
        model.length(), sc.x_cut, sc.transfer_steps);
    auto gen = [space, scen, transfer](double t) {
        return lagrangian_from_frame(MatC(transfer * scen.bc1_at(t).frame()), space);
    };
    return LagrangianPath::from_generator(gen, sc.n_steps, sc.label + " (right)");
}

/**
 * Assembled operator family of the scenario over the parameter grid,
 * in the fixed-condition gauge: one assembly context, coefficient
 *
 *   F(t, x) = W* A W + phi'(x) (theta1(t) - theta0(t)) gamma ,
 *   W(x; t) = exp([theta0(t) + phi(x) (theta1(t) - theta0(t))] gamma) ,
 *
 * with phi a quintic 0 -> 1 ramp across the interval. gamma F stays
 * Hermitian because gamma commutes with W and gamma^2 = -I.
 */
inline OperatorPath splitting_operator_path(const SplittingScenario& sc) {
    auto ctx = std::make_shared<AssemblyContext>(sc.model.block_size(), sc.model.n_x(),
                                                 sc.model.length(), sc.bc0, sc.bc1);
    const IntervalDiracModel model = sc.model;
    const SplittingScenario scen = sc;
    auto gen = [ctx, model, scen](double t) -> MatC {
        const double th0 = scen.theta0_at(t);
        const double th1 = scen.theta1_at(t);
        auto profile = [&](double x) -> MatC {
            const auto [phi, dphi] = detail::quintic_ramp(x / model.length());
            const MatC w = scen.rotation(th0 + phi * (th1 - th0));
            return MatC(w.adjoint() * model.coefficient(x) * w +
                        (dphi / model.length()) * (th1 - th0) * model.gamma());
        };
        return ctx->assemble(profile).t;
    };
    return OperatorPath::from_dense_generator(gen, sc.n_steps, sc.label + " (operators)");
}

/**
 * The splitting equality: the spectral flow of the assembled family
 * equals the Maslov index of the pair (left Cauchy path, right Cauchy
 * path) in the cut fiber. Both sides are computed by entirely
 * different machinery (dense eigenvalue counting versus intersection
 * winding), so agreement is a genuine cross-check.
 */
inline SplittingFlowResult splitting_flow_check(const SplittingScenario& sc,
                                                const MaslovOptions& opt = {}) {
    if (sc.x_cut <= 0.0 || sc.x_cut >= sc.model.length())
        throw config_error("splitting_flow_check: cut must be interior");
    SplittingFlowResult out;
    out.x_cut = sc.x_cut;
    out.sf = spectral_flow(splitting_operator_path(sc));
    out.mas = maslov_index(left_cauchy_path(sc), right_cauchy_path(sc), opt);
    out.match = (out.sf == out.mas);
    return out;
}

// ------------------------------------------------------------------
// scenario presets
// ------------------------------------------------------------------

/**
 * Rotation-model scenario: constant diagonal coefficient, the end
 * lines rotating linearly from the given start angles by the given
 * increments. The exact spectrum (alpha1 - alpha0) + k pi makes the
 * expected flow readable off the angle sweep. Note exp(theta gamma)
 * turns the line angle by -theta, hence the sign below.
 */
inline SplittingScenario rotation_splitting_scenario(double a, double alpha0_start,
                                                     double alpha0_sweep,
                                                     double alpha1_start,
                                                     double alpha1_sweep,
                                                     double x_cut = 0.5, int n_x = 80,
                                                     std::string label = "rotation-splitting") {
    MatC coeff = MatC::Zero(2, 2);
    coeff(0, 0) = a;
    coeff(1, 1) = -a;
    SplittingScenario sc{
        IntervalDiracModel::constant(1, coeff, n_x, 1.0, label + " model"),
        rotation_boundary_condition(0, alpha0_start),
        rotation_boundary_condition(1, alpha1_start),
        [alpha0_sweep](double t) { return -t * alpha0_sweep; },
        [alpha1_sweep](double t) { return -t * alpha1_sweep; },
        x_cut,
        16,
        256,
        std::move(label)};
    return sc;
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_SPLITTING_HPP
