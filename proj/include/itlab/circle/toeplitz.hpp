#ifndef ITLAB_CIRCLE_TOEPLITZ_HPP
#define ITLAB_CIRCLE_TOEPLITZ_HPP
//
// Module      : circle/toeplitz
// Description : Hardy-space Toeplitz index on the truncated circle and the
//               operator family connecting the mode operator to its symbol
//               conjugate
//

#include <cmath>
#include <string>
#include <vector>

#include "itlab/circle/operators.hpp"
#include "itlab/circle/symbol.hpp"
#include "itlab/core/pair_index.hpp"
#include "itlab/core/projectors.hpp"
#include "itlab/flow/path.hpp"

namespace itlab {

/**
 * Diagonal projector onto the nonnegative part of the twisted mode operator:
 * modes with k + a >= 0 (within zero tolerance), each carrying an N-block.
 */
inline MatC hardy_mode_projector(int K, int N, double a) {
    const int dim = mode_count(K) * N;
    MatC p = MatC::Zero(dim, dim);
    for (int k = -K; k <= K; ++k) {
        if (k + a < -tol::zero_eigenvalue) continue;
        const int off = (k + K) * N;
        for (int i = 0; i < N; ++i) p(off + i, off + i) = cxd(1.0, 0.0);
    }
    return p;
}

/** Result of a truncated Toeplitz index computation. */
struct HardyIndexResult {
    int index = 0;          // value at the requested truncation
    int index_refined = 0;  // value recomputed at truncation K + 5
    bool converged = false; // the two integers agree
    int truncation = 0;     // requested truncation K
};

namespace detail {

/** Windowed Toeplitz index at one fixed truncation. */
inline int hardy_index_at(const UnitarySymbol& g, double a, int K,
                          const RankThreshold& thr) {
    const int band = g.band();
    const int n = g.block_size();
    const int k_win = K - band;  // window modes |k| <= k_win see no edge effects

    const MatC gm = symbol_operator(g, K);
    const MatC p = hardy_mode_projector(K, n, a);
    const MatC q = gm * p * gm.adjoint();

    // restrict both projectors to the interior mode window, where the symbol
    // action is exactly isometric and the compressions stay projectors
    const int off = (-k_win + K) * n;
    const int wdim = (2 * k_win + 1) * n;
    const MatC pw = p.block(off, off, wdim, wdim);
    const MatC qw = q.block(off, off, wdim, wdim);

    const SpectralProjector proj_p(pw, SpectralCut::custom);
    const SpectralProjector proj_q(qw, SpectralCut::custom);  // validation certifies the windowing
    return pair_index(proj_p, proj_q, thr);
}

}  // namespace detail

/**
 * Index of the truncated Toeplitz operator P M_g P on the nonnegative mode
 * space, computed as the index of the projector pair (P, g P g*) compressed
 * to the interior mode window. Convergence is certified by integer agreement
 * between truncations K and K + 5.
 *
 * For a symbol of total winding w the value is -w.
 *
 * The difference P - g P g* of the two projectors is supported on modes
 * |k| <= band, so the mode window K - band must contain that core with
 * margin: K must be at least 2 band + 5.
 *
 * @throws truncation_error if K < 2 band(g) + 5
 */
inline HardyIndexResult hardy_toeplitz_index(const UnitarySymbol& g, double a, int K,
                                             const RankThreshold& thr = RankThreshold{}) {
    if (K < 2 * g.band() + 5) {
        throw truncation_error("hardy_toeplitz_index: truncation " + std::to_string(K) +
                               " below twice the band " + std::to_string(g.band()) +
                               " plus margin 5");
    }
    HardyIndexResult r;
    r.truncation = K;
    r.index = detail::hardy_index_at(g, a, K, thr);
    r.index_refined = detail::hardy_index_at(g, a, K + 5, thr);
    r.converged = (r.index == r.index_refined);
    return r;
}

/**
 * The straight operator family connecting the twisted mode operator D to its
 * conjugation by the symbol: H(u) = D + u · M(-i g^{-1} g'), whose endpoint
 * u = 1 is the compression of g^{-1} D g. Each member is dense Hermitian.
 *
 * The step count is chosen so consecutive operators differ by at most ~0.4
 * in norm (finer grids may be requested); the generator is attached so flow
 * analyses can refine further.
 */
inline OperatorPath conjugated_family(const UnitarySymbol& g, int K, double a,
                                      int n_steps = 0) {
    const int n = g.block_size();
    const MatC d = truncated_mode_operator(K, n, a);
    const MatC m = log_derivative_operator(g, K);
    const double step_norm = m.norm();
    const int auto_steps = std::max(8, static_cast<int>(std::ceil(2.5 * step_norm)));
    if (n_steps <= 0) n_steps = auto_steps;
    if (n_steps < auto_steps) {
        throw config_error("conjugated_family: " + std::to_string(n_steps) +
                           " steps too coarse for multiplier norm " +
                           std::to_string(step_norm));
    }
    auto gen = [d, m](double u) { return MatC(d + u * m); };
    return OperatorPath::from_dense_generator(gen, n_steps,
                                              "conjugated-family(" + g.label() + ")");
}

}  // namespace itlab

#endif  // ITLAB_CIRCLE_TOEPLITZ_HPP
