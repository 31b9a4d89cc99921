#ifndef ITLAB_CIRCLE_OPERATORS_HPP
#define ITLAB_CIRCLE_OPERATORS_HPP
//
// Module      : circle/operators
// Description : Fourier-truncated operators on the circle: the twisted mode
//               operator, block-Laurent multiplication matrices, and the
//               Hermitian logarithmic-derivative multiplier
//

#include <functional>
#include <string>
#include <vector>

#include "itlab/circle/symbol.hpp"
#include "itlab/core/types.hpp"

namespace itlab {

/** Number of retained Fourier modes for truncation K (modes -K..K). */
inline int mode_count(int K) { return 2 * K + 1; }

/**
 * Truncated first-order mode operator with flat twist: the dense diagonal
 * matrix with block entries (k + a) I_N for k = -K..K, acting on the span of
 * the retained Fourier modes. Blocks are ordered by increasing k.
 */
inline MatC truncated_mode_operator(int K, int N, double a) {
    if (K < 0 || N <= 0) throw config_error("truncated_mode_operator: bad sizes");
    const int dim = mode_count(K) * N;
    MatC d = MatC::Zero(dim, dim);
    for (int k = -K; k <= K; ++k) {
        const int off = (k + K) * N;
        for (int i = 0; i < N; ++i) d(off + i, off + i) = cxd(k + a, 0.0);
    }
    return d;
}

namespace detail {

/**
 * Fourier block coefficients of a band-limited matrix function, computed by
 * the exact trapezoid DFT and certified by reconstruction at the samples.
 */
inline std::vector<MatC> band_limited_coefficients(
    const std::function<MatC(double)>& f, int n, int band, const std::string& what) {
    const int m = std::max(256, 8 * (band + 1));
    std::vector<MatC> samples;
    samples.reserve(static_cast<std::size_t>(m));
    double scale = 1.0;
    for (int j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / m;
        samples.push_back(f(theta));
        scale = std::max(scale, samples.back().cwiseAbs().maxCoeff());
    }
    std::vector<MatC> coeffs(static_cast<std::size_t>(2 * band + 1), MatC::Zero(n, n));
    for (int k = -band; k <= band; ++k) {
        MatC c = MatC::Zero(n, n);
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / m;
            c += samples[static_cast<std::size_t>(j)] * std::polar(1.0, -k * theta);
        }
        coeffs[static_cast<std::size_t>(k + band)] = c / static_cast<double>(m);
    }
    double defect = 0.0;
    for (int j = 0; j < m; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / m;
        MatC rec = MatC::Zero(n, n);
        for (int k = -band; k <= band; ++k) {
            rec += coeffs[static_cast<std::size_t>(k + band)] * std::polar(1.0, k * theta);
        }
        defect = std::max(defect,
                          (rec - samples[static_cast<std::size_t>(j)]).cwiseAbs().maxCoeff());
    }
    if (defect > tol::symbol_reconstruction * scale) {
        throw convergence_error(what + ": reconstruction defect " + std::to_string(defect) +
                                " exceeds certified bound at band " + std::to_string(band));
    }
    return coeffs;
}

/**
 * Dense block-Laurent matrix with (j,k) block equal to coefficient c_{j-k},
 * acting on modes -K..K; coefficients outside the band are zero.
 */
inline MatC laurent_matrix(const std::vector<MatC>& coeffs, int band, int n, int K) {
    const int dim = mode_count(K) * n;
    MatC m = MatC::Zero(dim, dim);
    for (int j = -K; j <= K; ++j) {
        for (int k = -K; k <= K; ++k) {
            const int d = j - k;
            if (d < -band || d > band) continue;
            m.block((j + K) * n, (k + K) * n, n, n) =
                coeffs[static_cast<std::size_t>(d + band)];
        }
    }
    return m;
}

}  // namespace detail

/**
 * Block-Laurent multiplication matrix of a unitary symbol on modes -K..K:
 * the (j,k) block is the Fourier coefficient g_hat_{j-k}.
 *
 * The matrix is unitary up to truncation boundary effects; the columns of
 * the interior modes |k| <= K - band(g) are certified orthonormal.
 *
 * @throws truncation_error if K is smaller than the symbol band
 * @throws symmetry_error   if interior columns fail orthonormality
 */
inline MatC symbol_operator(const UnitarySymbol& g, int K) {
    const int band = g.band();
    if (K < band) {
        throw truncation_error("symbol_operator: truncation " + std::to_string(K) +
                               " below symbol band " + std::to_string(band));
    }
    const int n = g.block_size();
    std::vector<MatC> coeffs;
    coeffs.reserve(static_cast<std::size_t>(2 * band + 1));
    for (int k = -band; k <= band; ++k) coeffs.push_back(g.coefficient(k));
    MatC m = detail::laurent_matrix(coeffs, band, n, K);

    // certify: columns belonging to interior modes map into the truncation
    // without loss, hence must be exactly orthonormal
    const int k_in = K - band;
    if (k_in >= -k_in) {
        const int off = (-k_in + K) * n;
        const int cols = (2 * k_in + 1) * n;
        const MatC block = m.middleCols(off, cols);
        const double defect =
            (block.adjoint() * block - MatC::Identity(cols, cols)).cwiseAbs().maxCoeff();
        if (defect > tol::unitarity) {
            throw symmetry_error("symbol_operator: interior columns defect " +
                                 std::to_string(defect));
        }
    }
    return m;
}

/**
 * Block-Laurent matrix of the Hermitian multiplier -i g^{-1} g' on modes
 * -K..K. For a unitary symbol this function is Hermitian pointwise and
 * band-limited with twice the symbol band, so the compression is the exact
 * matrix of a Hermitian multiplication operator.
 *
 * This is the first-order difference between the mode operator and its
 * conjugation by the symbol, which is what the conjugated family adds.
 */
inline MatC log_derivative_operator(const UnitarySymbol& g, int K) {
    const int band = 2 * g.band();
    if (K < band) {
        throw truncation_error("log_derivative_operator: truncation " + std::to_string(K) +
                               " below multiplier band " + std::to_string(band));
    }
    const int n = g.block_size();
    auto f = [&g](double theta) -> MatC {
        return cxd(0.0, -1.0) * (g.value(theta).adjoint() * g.derivative(theta));
    };
    const auto coeffs =
        detail::band_limited_coefficients(f, n, band, "log_derivative_operator");
    MatC m = detail::laurent_matrix(coeffs, band, n, K);
    const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
    if (herm > tol::hermiticity * std::max(1.0, m.cwiseAbs().maxCoeff())) {
        throw symmetry_error("log_derivative_operator: Hermiticity defect " +
                             std::to_string(herm));
    }
    return 0.5 * (m + m.adjoint());
}

}  // namespace itlab

#endif  // ITLAB_CIRCLE_OPERATORS_HPP
