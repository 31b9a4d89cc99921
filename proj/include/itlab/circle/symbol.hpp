#ifndef ITLAB_CIRCLE_SYMBOL_HPP
#define ITLAB_CIRCLE_SYMBOL_HPP
//
// Module      : circle/symbol
// Description : band-limited unitary-matrix symbols on the circle with
//               certified Fourier data and winding-preserving randomization
//

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/types.hpp"

namespace itlab {

/**
 * A smooth map g : S^1 -> U(N) stored through samples on a uniform grid
 * together with its Fourier block coefficients on a declared band.
 *
 * All symbols handled by the laboratory are band-limited (finite Fourier
 * support); smooth non-polynomial inputs are admitted only when their
 * band-limited projection is unitary and reconstructs the samples within
 * the certified tolerances, which the constructor enforces loudly.
 */
class UnitarySymbol {
public:
    /**
     * Build a symbol from an analytic sampler.
     *
     * @param block_size        matrix rank N of the symbol values
     * @param band              declared Fourier band limit K_sym (coefficients
     *                          outside |k| <= K_sym are certified negligible)
     * @param sampler           theta -> g(theta), evaluated on a uniform grid
     * @param label             human-readable tag used in reports
     * @param declared_winding  optional total winding number metadata
     *
     * @throws config_error     on non-positive sizes
     * @throws symmetry_error   if any sample fails unitarity
     * @throws convergence_error if the band-limited reconstruction misses
     *                          the samples by more than the certified bound
     */
    UnitarySymbol(int block_size,
                  int band,
                  std::function<MatC(double)> sampler,
                  std::string label = "symbol",
                  std::optional<int> declared_winding = std::nullopt)
        : n_(block_size), band_(band), label_(std::move(label)),
          declared_winding_(declared_winding) {
        if (n_ <= 0) throw config_error("UnitarySymbol: block size must be positive");
        if (band_ < 0) throw config_error("UnitarySymbol: band limit must be nonnegative");
        const int m = std::max(256, 8 * (band_ + 1));
        samples_.reserve(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / m;
            samples_.push_back(sampler(theta));
        }
        finish_construction();
    }

    /**
     * Build a symbol from tabulated samples on a uniform grid over [0, 2pi).
     * Used by the CSV ingestion path of the command-line harness.
     *
     * @throws config_error if the grid is too coarse for the declared band
     *                      (fewer than 2*band + 2 samples) or shapes mismatch
     */
    static UnitarySymbol from_samples(std::vector<MatC> samples,
                                      int band,
                                      std::string label = "tabulated",
                                      std::optional<int> declared_winding = std::nullopt) {
        if (samples.empty()) throw config_error("UnitarySymbol: no samples given");
        const int n = static_cast<int>(samples.front().rows());
        if (static_cast<int>(samples.size()) < 2 * band + 2) {
            throw config_error("UnitarySymbol: sample grid too coarse for band " +
                               std::to_string(band));
        }
        return UnitarySymbol(n, band, std::move(samples), std::move(label),
                             declared_winding);
    }

    /** Matrix rank N of the symbol. */
    int block_size() const { return n_; }

    /** Declared Fourier band limit. */
    int band() const { return band_; }

    /** Number of stored grid samples. */
    int sample_count() const { return static_cast<int>(samples_.size()); }

    /** Stored sample g(theta_j) at grid node j. */
    const MatC& sample(int j) const { return samples_.at(static_cast<std::size_t>(j)); }

    /** Report label. */
    const std::string& label() const { return label_; }

    /** Total winding number metadata when the construction declares one. */
    std::optional<int> declared_winding() const { return declared_winding_; }

    /** Fourier block coefficient g_hat_k; zero outside the band. */
    MatC coefficient(int k) const {
        if (k < -band_ || k > band_) return MatC::Zero(n_, n_);
        return coeffs_[static_cast<std::size_t>(k + band_)];
    }

    /** Evaluate g(theta) through the band-limited Fourier sum. */
    MatC value(double theta) const {
        MatC g = MatC::Zero(n_, n_);
        for (int k = -band_; k <= band_; ++k) {
            g += coeffs_[static_cast<std::size_t>(k + band_)] *
                 std::polar(1.0, k * theta);
        }
        return g;
    }

    /** Evaluate g'(theta) by spectral differentiation of the Fourier sum. */
    MatC derivative(double theta) const {
        MatC dg = MatC::Zero(n_, n_);
        for (int k = -band_; k <= band_; ++k) {
            dg += coeffs_[static_cast<std::size_t>(k + band_)] *
                  (cxd(0.0, static_cast<double>(k)) * std::polar(1.0, k * theta));
        }
        return dg;
    }

    /** Largest unitarity defect observed across the stored samples. */
    double unitarity_defect() const { return unitarity_defect_; }

    /** Largest reconstruction defect of the Fourier sum at the samples. */
    double reconstruction_defect() const { return reconstruction_defect_; }

    /**
     * Pointwise product symbol (this ∘ other)(theta) = this(theta)·other(theta).
     * The band adds; winding metadata adds when both factors declare it.
     */
    UnitarySymbol times(const UnitarySymbol& other, std::string label = "") const {
        if (other.block_size() != n_) {
            throw config_error("UnitarySymbol::times: block size mismatch");
        }
        std::optional<int> w;
        if (declared_winding_ && other.declared_winding_) {
            w = *declared_winding_ + *other.declared_winding_;
        }
        if (label.empty()) label = label_ + "*" + other.label_;
        auto self = *this;
        auto rhs  = other;
        return UnitarySymbol(
            n_, band_ + other.band_,
            [self, rhs](double theta) -> MatC { return self.value(theta) * rhs.value(theta); },
            std::move(label), w);
    }

private:
    UnitarySymbol(int block_size, int band, std::vector<MatC> samples,
                  std::string label, std::optional<int> declared_winding)
        : n_(block_size), band_(band), samples_(std::move(samples)),
          label_(std::move(label)), declared_winding_(declared_winding) {
        finish_construction();
    }

    // validate samples, compute the DFT coefficients, and certify that the
    // band-limited reconstruction reproduces the samples
    void finish_construction() {
        const int m = static_cast<int>(samples_.size());
        unitarity_defect_ = 0.0;
        for (const MatC& g : samples_) {
            if (g.rows() != n_ || g.cols() != n_) {
                throw config_error("UnitarySymbol: sample shape mismatch");
            }
            const double defect =
                (g.adjoint() * g - MatC::Identity(n_, n_)).cwiseAbs().maxCoeff();
            unitarity_defect_ = std::max(unitarity_defect_, defect);
        }
        if (unitarity_defect_ > tol::unitarity) {
            throw symmetry_error("UnitarySymbol '" + label_ +
                                 "': unitarity defect " +
                                 std::to_string(unitarity_defect_));
        }
        // trapezoid rule on the uniform grid is an exact DFT for trigonometric
        // polynomials resolved by the grid
        coeffs_.assign(static_cast<std::size_t>(2 * band_ + 1), MatC::Zero(n_, n_));
        for (int k = -band_; k <= band_; ++k) {
            MatC c = MatC::Zero(n_, n_);
            for (int j = 0; j < m; ++j) {
                const double theta = 2.0 * std::numbers::pi * j / m;
                c += samples_[static_cast<std::size_t>(j)] * std::polar(1.0, -k * theta);
            }
            coeffs_[static_cast<std::size_t>(k + band_)] = c / static_cast<double>(m);
        }
        reconstruction_defect_ = 0.0;
        for (int j = 0; j < m; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / m;
            const double defect =
                (value(theta) - samples_[static_cast<std::size_t>(j)]).cwiseAbs().maxCoeff();
            reconstruction_defect_ = std::max(reconstruction_defect_, defect);
        }
        if (reconstruction_defect_ > tol::symbol_reconstruction) {
            throw convergence_error("UnitarySymbol '" + label_ +
                                    "': band " + std::to_string(band_) +
                                    " reconstruction defect " +
                                    std::to_string(reconstruction_defect_));
        }
    }

    int n_ = 0;
    int band_ = 0;
    std::vector<MatC> samples_;
    std::vector<MatC> coeffs_;
    std::string label_;
    std::optional<int> declared_winding_;
    double unitarity_defect_ = 0.0;
    double reconstruction_defect_ = 0.0;
};

// ------------------------------------------------------------------
// symbol factories
// ------------------------------------------------------------------

/** Scalar winding symbol g(theta) = e^{i k theta}. */
inline UnitarySymbol phase_symbol(int k) {
    return UnitarySymbol(
        1, std::abs(k),
        [k](double theta) {
            MatC g(1, 1);
            g(0, 0) = std::polar(1.0, k * theta);
            return g;
        },
        "phase(" + std::to_string(k) + ")", k);
}

/** Block-diagonal symbol g(theta) = diag(e^{i k_1 theta}, ..., e^{i k_N theta}). */
inline UnitarySymbol block_phase_symbol(const std::vector<int>& windings) {
    if (windings.empty()) throw config_error("block_phase_symbol: empty winding list");
    int band = 0, total = 0;
    std::string label = "block-phases(";
    for (std::size_t i = 0; i < windings.size(); ++i) {
        band = std::max(band, std::abs(windings[i]));
        total += windings[i];
        if (i) label += ",";
        label += std::to_string(windings[i]);
    }
    label += ")";
    const int n = static_cast<int>(windings.size());
    return UnitarySymbol(
        n, band,
        [windings, n](double theta) {
            MatC g = MatC::Zero(n, n);
            for (int i = 0; i < n; ++i) {
                g(i, i) = std::polar(1.0, windings[static_cast<std::size_t>(i)] * theta);
            }
            return g;
        },
        label, total);
}

/** Constant symbol g(theta) = u for a fixed unitary u. */
inline UnitarySymbol constant_unitary_symbol(const MatC& u, std::string label = "constant") {
    const int n = static_cast<int>(u.rows());
    MatC copy = u;
    return UnitarySymbol(n, 0, [copy](double) { return copy; }, std::move(label), 0);
}

namespace detail {

/** Haar-like random unitary from QR of a complex Gaussian matrix. */
inline MatC random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatC z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = cxd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<MatC> qr(z);
    MatC q = qr.householderQ();
    MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        const cxd d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0.0) ? (d / a) : cxd(1.0, 0.0);
    }
    return q;
}

/** Random rank-one orthogonal projector. */
inline MatC random_rank_one_projector(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    VecC v(n);
    for (int i = 0; i < n; ++i) v(i) = cxd(gauss(rng), gauss(rng));
    v.normalize();
    return v * v.adjoint();
}

}  // namespace detail

/**
 * Winding-preserving randomization of a symbol, used for homotopy-invariance
 * property checks. The returned symbol stays exactly unitary and keeps the
 * total winding number of the input:
 *
 *  - constant unitary factors on both sides (any N);
 *  - a smooth zero-winding scalar phase e^{i phi(theta)} with small
 *    trigonometric-polynomial phi, admitted through its band-limited
 *    projection whose defects the constructor certifies;
 *  - for N >= 2, an opposing pair of rank-one "partial shift" factors
 *    ((I-P) + e^{i theta} P)((I-Q) + e^{-i theta} Q) whose determinant
 *    windings cancel exactly.
 */
inline UnitarySymbol perturb_same_winding(const UnitarySymbol& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> amp(-0.3, 0.3);
    std::uniform_real_distribution<double> ang(0.0, 2.0 * std::numbers::pi);
    const int n = g.block_size();

    const MatC w_left  = detail::random_unitary(n, rng);
    const MatC w_right = detail::random_unitary(n, rng);
    const double c1 = amp(rng), c2 = amp(rng), c3 = amp(rng);
    const double d1 = ang(rng), d2 = ang(rng), d3 = ang(rng);
    const bool use_pair = (n >= 2);
    const MatC p = use_pair ? detail::random_rank_one_projector(n, rng) : MatC();
    const MatC q = use_pair ? detail::random_rank_one_projector(n, rng) : MatC();
    const MatC eye = MatC::Identity(n, n);

    // the scalar phase factor is analytic, not polynomial; a band margin of 24
    // pushes its Fourier tail far below the certified reconstruction bound for
    // the amplitude range above (tails decay factorially in the band)
    const int band = g.band() + (use_pair ? 2 : 0) + 24;
    auto base = g;
    auto sampler = [base, w_left, w_right, c1, c2, c3, d1, d2, d3, use_pair, p, q,
                    eye](double theta) {
        const double phi = c1 * std::sin(theta + d1) + c2 * std::sin(2.0 * theta + d2) +
                           c3 * std::sin(3.0 * theta + d3);
        MatC out = base.value(theta) * std::polar(1.0, phi);
        if (use_pair) {
            const MatC up   = (eye - p) + std::polar(1.0, theta) * p;
            const MatC down = (eye - q) + std::polar(1.0, -theta) * q;
            out = w_left * up * out * down * w_right;
        } else {
            out = w_left * out * w_right;
        }
        return out;
    };
    return UnitarySymbol(n, band, sampler, g.label() + "+perturbed",
                         g.declared_winding());
}

}  // namespace itlab

#endif  // ITLAB_CIRCLE_SYMBOL_HPP
