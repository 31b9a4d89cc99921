#ifndef ITLAB_INTERVAL_CALDERON_HPP
#define ITLAB_INTERVAL_CALDERON_HPP
//
// Module      : interval/calderon
// Description : Cauchy-data spaces of interval Dirac operators and the
//               paired boundary projectors on the doubled trace space
//

#include <cmath>
#include <string>
#include <utility>

#include "itlab/core/types.hpp"
#include "itlab/interval/model.hpp"
#include "itlab/maslov/grassmann.hpp"

namespace itlab {

// ------------------------------------------------------------------
// doubled trace space
//
// Boundary traces of sections live in V (+) V (values at x = 0 and
// x = length). The symplectic structure induced by integration by
// parts carries opposite signs at the two ends:
//
//     J = [ -gamma   0     ]
//         [  0       gamma ]
//
// Cauchy-data spaces of solutions and admissible boundary conditions
// are Lagrangian for this J.
// ------------------------------------------------------------------

/** The doubled boundary symplectic structure for auxiliary rank N. */
inline HermitianSymplecticSpace doubled_symplectic_space(int block_size) {
    const int d = 2 * block_size;
    const MatC gamma = interval_gamma(block_size);
    MatC j = MatC::Zero(2 * d, 2 * d);
    j.topLeftCorner(d, d) = -gamma;
    j.bottomRightCorner(d, d) = gamma;
    return HermitianSymplecticSpace(j);
}

/** Block-diagonal boundary action diag(u(0)-lift, u(1)-lift) of a symbol. */
inline MatC doubled_boundary_unitary(const IntervalSymbol& g) {
    const int d = 2 * g.block_size();
    MatC u = MatC::Zero(2 * d, 2 * d);
    u.topLeftCorner(d, d) = g.lift(0.0);
    u.bottomRightCorner(d, d) = g.lift(1.0);
    return u;
}

// ------------------------------------------------------------------
// solution flows
// ------------------------------------------------------------------

/** Exact flow exp(-a t) of u' = -a u for Hermitian a. */
inline MatC hermitian_flow(const MatC& a, double t) {
    const double sa = (a - a.adjoint()).norm();
    if (sa > tol::hermiticity * std::max(1.0, a.norm()))
        throw symmetry_error("hermitian_flow: coefficient not Hermitian, defect " +
                             std::to_string(sa));
    Eigen::SelfAdjointEigenSolver<MatC> es(a);
    if (es.info() != Eigen::Success) throw itlab_error("hermitian_flow: eigensolve failed");
    VecC d(a.rows());
    for (Eigen::Index i = 0; i < a.rows(); ++i) d(i) = std::exp(-es.eigenvalues()(i) * t);
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().adjoint();
}

/** Calderon data of a constant-coefficient model. */
struct CalderonProjection {
    LagrangianProjector projector;  // Cauchy-data space on the doubled trace space
    double flow_spread = 0.0;       // spectral spread |lambda_max - lambda_min| * length
    bool conditioning_warning = false;
};

/**
 * Cauchy-data space of gamma (d/dx + A) with constant coefficient A on
 * [0, length]: solutions of the first-order equation D u = 0 satisfy
 * u(length) = exp(-A length) u(0), so the space of boundary traces is
 * the graph { (v, exp(-A length) v) }, a Lagrangian subspace of the
 * doubled trace space (the flow satisfies S* gamma S = gamma exactly).
 *
 * For A = 0 the projector is one half of the checkerboard
 * [[I, I], [I, I]] pairing the two ends.
 *
 * A large spectral spread of A makes the graph frame numerically
 * one-sided; the result carries a conditioning warning beyond spread
 * 25 and construction is refused beyond 250.
 */
inline CalderonProjection calderon_projection(const MatC& a, double length = 1.0) {
    const int d = static_cast<int>(a.rows());
    if (d % 2 != 0) throw config_error("calderon_projection: even fiber dimension required");
    const int n = d / 2;
    const MatC gamma = interval_gamma(n);
    const double anti = (gamma * a + a * gamma).norm();
    if (anti > tol::hermiticity * std::max(1.0, a.norm()))
        throw symmetry_error("calderon_projection: coefficient must anticommute with gamma, "
                             "defect " + std::to_string(anti));

    const VecR flow_values = hermitian_eigenvalues(a);
    const double spread = (flow_values.maxCoeff() - flow_values.minCoeff()) * length;
    if (spread > 250.0)
        throw config_error("calderon_projection: flow too stiff to represent (spread " +
                           std::to_string(spread) + ")");

    const MatC flow = hermitian_flow(a, length);
    MatC frame(2 * d, d);
    frame.topRows(d) = MatC::Identity(d, d);
    frame.bottomRows(d) = flow;

    auto space = doubled_symplectic_space(n);
    CalderonProjection out{lagrangian_from_frame(frame, space), spread, spread > 25.0};
    return out;
}

// ------------------------------------------------------------------
// paired spectral boundary projector
// ------------------------------------------------------------------

/**
 * The image projector of the paired boundary condition on the doubled
 * trace space: spectral data of the constant coefficient A at the
 * x = 0 end and of the orientation-reversed coefficient at x = length,
 * each augmented by half of ker A:
 *
 *     P = [ P_{>0}(A) + P_{L0} ]  (+)  [ P_{<0}(A) + P_{gamma L1} ] .
 *
 * Its kernel restricted to the ends reproduces exactly the allowed
 * subspaces of aps_boundary_condition(0, A, L0) and
 * aps_boundary_condition(1, A, L1).
 */
inline LagrangianProjector boundary_pair_projector(const MatC& a, const MatC& l0,
                                                   const MatC& l1) {
    const int d = static_cast<int>(a.rows());
    if (d % 2 != 0) throw config_error("boundary_pair_projector: even dimension required");
    const int n = d / 2;
    const MatC gamma = interval_gamma(n);
    const auto split = detail::sign_split(a);
    if (2 * l0.cols() != split.kernel.cols() || 2 * l1.cols() != split.kernel.cols())
        throw config_error("boundary_pair_projector: kernel Lagrangians must span half of ker A");

    MatC p0 = split.positive * split.positive.adjoint();
    if (l0.cols() > 0) p0 += l0 * l0.adjoint();
    MatC p1 = split.negative * split.negative.adjoint();
    if (l1.cols() > 0) {
        const MatC gl1 = gamma * l1;
        p1 += gl1 * gl1.adjoint();
    }

    MatC p = MatC::Zero(2 * d, 2 * d);
    p.topLeftCorner(d, d) = p0;
    p.bottomRightCorner(d, d) = p1;
    return LagrangianProjector(p, doubled_symplectic_space(n));
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_CALDERON_HPP
