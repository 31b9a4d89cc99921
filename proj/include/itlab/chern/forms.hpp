#ifndef ITLAB_CHERN_FORMS_HPP
#define ITLAB_CHERN_FORMS_HPP
//
// Module      : chern/forms
// Description : odd Chern character densities, winding integrals, and
//               transgression forms for one-parameter symbol families on a
//               1-dimensional base (circle or interval)
//

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "itlab/circle/symbol.hpp"
#include "itlab/core/types.hpp"

namespace itlab {

// ------------------------------------------------------------------
// discrete calculus helpers (shared by the form integrals below)
// ------------------------------------------------------------------
namespace detail {

/** Apply the 4th-order first-derivative stencil to samples on a uniform
 *  non-periodic grid (5-point interior, one-sided at the ends). */
template <typename T>
std::vector<T> stencil_derivative_4th(const std::vector<T>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 5) throw config_error("stencil_derivative_4th: need at least 5 nodes");
    std::vector<T> d(f.size(), f.front());
    const double s = 1.0 / (12.0 * h);
    d[0] = s * (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]);
    d[1] = s * (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + 1.0 * f[4]);
    for (int j = 2; j < n - 2; ++j) {
        d[static_cast<std::size_t>(j)] =
            s * (f[static_cast<std::size_t>(j - 2)] - 8.0 * f[static_cast<std::size_t>(j - 1)] +
                 8.0 * f[static_cast<std::size_t>(j + 1)] - f[static_cast<std::size_t>(j + 2)]);
    }
    d[static_cast<std::size_t>(n - 2)] =
        s * (3.0 * f[static_cast<std::size_t>(n - 1)] + 10.0 * f[static_cast<std::size_t>(n - 2)] -
             18.0 * f[static_cast<std::size_t>(n - 3)] + 6.0 * f[static_cast<std::size_t>(n - 4)] -
             1.0 * f[static_cast<std::size_t>(n - 5)]);
    d[static_cast<std::size_t>(n - 1)] =
        s * (25.0 * f[static_cast<std::size_t>(n - 1)] - 48.0 * f[static_cast<std::size_t>(n - 2)] +
             36.0 * f[static_cast<std::size_t>(n - 3)] - 16.0 * f[static_cast<std::size_t>(n - 4)] +
             3.0 * f[static_cast<std::size_t>(n - 5)]);
    return d;
}

/** Spectral first derivative of scalar samples on a uniform periodic grid
 *  covering one period (the Nyquist mode's derivative is dropped, as usual). */
inline std::vector<cxd> periodic_spectral_derivative(const std::vector<cxd>& f,
                                                     double period) {
    const int m = static_cast<int>(f.size());
    if (m < 4) throw config_error("periodic_spectral_derivative: grid too small");
    const int k_lo = -(m - 1) / 2;
    const int k_hi = m / 2;
    std::vector<cxd> coeffs(static_cast<std::size_t>(m));
    for (int k = k_lo; k <= k_hi; ++k) {
        cxd c(0.0, 0.0);
        for (int j = 0; j < m; ++j) {
            c += f[static_cast<std::size_t>(j)] *
                 std::polar(1.0, -2.0 * std::numbers::pi * k * j / m);
        }
        coeffs[static_cast<std::size_t>(k - k_lo)] = c / static_cast<double>(m);
    }
    std::vector<cxd> d(static_cast<std::size_t>(m), cxd(0.0, 0.0));
    const double scale = 2.0 * std::numbers::pi / period;
    for (int j = 0; j < m; ++j) {
        cxd acc(0.0, 0.0);
        for (int k = k_lo; k <= k_hi; ++k) {
            if (2 * std::abs(k) == m) continue;  // Nyquist derivative dropped
            acc += coeffs[static_cast<std::size_t>(k - k_lo)] *
                   cxd(0.0, k * scale) *
                   std::polar(1.0, 2.0 * std::numbers::pi * k * j / m);
        }
        d[static_cast<std::size_t>(j)] = acc;
    }
    return d;
}

/** Composite Simpson quadrature over an odd number of uniform nodes. */
inline double simpson(const std::vector<double>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 3 || n % 2 == 0) throw config_error("simpson: need an odd node count >= 3");
    double acc = f.front() + f.back();
    for (int j = 1; j < n - 1; ++j) {
        acc += f[static_cast<std::size_t>(j)] * ((j % 2 == 1) ? 4.0 : 2.0);
    }
    return acc * h / 3.0;
}

inline cxd simpson(const std::vector<cxd>& f, double h) {
    const int n = static_cast<int>(f.size());
    if (n < 3 || n % 2 == 0) throw config_error("simpson: need an odd node count >= 3");
    cxd acc = f.front() + f.back();
    for (int j = 1; j < n - 1; ++j) {
        acc += f[static_cast<std::size_t>(j)] * ((j % 2 == 1) ? 4.0 : 2.0);
    }
    return acc * (h / 3.0);
}

}  // namespace detail

// ------------------------------------------------------------------
// odd Chern character of a single loop
// ------------------------------------------------------------------

/**
 * The degree-1 odd Chern character density of a unitary loop, tabulated on a
 * uniform grid. Only the lowest term is nonzero on a 1-dimensional base; the
 * normalization layout carries the general-term slots so higher-dimensional
 * bases can reuse the schema.
 */
struct OddChernForm {
    int base_dimension = 1;
    std::vector<double> grid;           // theta nodes over [0, 2pi)
    std::vector<cxd> samples;           // Tr[g^{-1} g'] at the nodes
    std::vector<double> normalizations; // term n -> n!/(2n+1)!; only n = 0 used
};

/** Tabulate the odd Chern density of a symbol on n_points uniform nodes. */
inline OddChernForm make_odd_chern_form(const UnitarySymbol& g, int n_points = 64) {
    if (n_points < 64) throw config_error("make_odd_chern_form: need >= 64 points");
    OddChernForm form;
    form.base_dimension = 1;
    form.normalizations = {1.0};  // n = 0 term of the standard factorial ladder
    form.grid.reserve(static_cast<std::size_t>(n_points));
    form.samples.reserve(static_cast<std::size_t>(n_points));
    for (int j = 0; j < n_points; ++j) {
        const double theta = 2.0 * std::numbers::pi * j / n_points;
        form.grid.push_back(theta);
        form.samples.push_back((g.value(theta).inverse() * g.derivative(theta)).trace());
    }
    return form;
}

/** Winding integral result with its distance to the nearest integer. */
struct ChernIntegralResult {
    double value = 0.0;          // (1/2pi i) times the loop integral, real part
    int rounded = 0;             // nearest integer
    double integer_distance = 0; // |value - rounded|
};

/**
 * Total winding of a unitary loop: (1/2pi i) of the loop integral of
 * Tr[g^{-1} g'] by periodic trapezoid quadrature (spectrally exact for
 * band-limited symbols). Convergence is certified by grid doubling.
 *
 * @throws convergence_error when doubling the grid moves the value
 */
inline ChernIntegralResult odd_chern_integral(const UnitarySymbol& g,
                                              int min_points = 64) {
    const int m = std::max(min_points, 4 * g.band() + 8);
    auto quadrature = [&g](int points) {
        cxd acc(0.0, 0.0);
        for (int j = 0; j < points; ++j) {
            const double theta = 2.0 * std::numbers::pi * j / points;
            acc += (g.value(theta).inverse() * g.derivative(theta)).trace();
        }
        acc *= 2.0 * std::numbers::pi / points;          // periodic trapezoid
        return acc / cxd(0.0, 2.0 * std::numbers::pi);   // 1/(2 pi i) pairing
    };
    const cxd v1 = quadrature(m);
    const cxd v2 = quadrature(2 * m);
    if (std::abs(v1 - v2) > 1e-11 * std::max(1.0, std::abs(v1))) {
        throw convergence_error("odd_chern_integral: quadrature moved by " +
                                std::to_string(std::abs(v1 - v2)) +
                                " under grid doubling");
    }
    if (std::abs(v2.imag()) > 1e-9) {
        throw convergence_error("odd_chern_integral: non-real winding integral");
    }
    ChernIntegralResult r;
    r.value = v2.real();
    r.rounded = static_cast<int>(std::lround(r.value));
    r.integer_distance = std::abs(r.value - r.rounded);
    return r;
}

// ------------------------------------------------------------------
// transgression of a one-parameter family
// ------------------------------------------------------------------

/**
 * The transgression form of a family t -> g_t of unitary maps on a
 * 1-dimensional base. The lowest (and, here, only) term is the base function
 *
 *     x -> (1/2pi i) Int_0^1 Tr[g_t^{-1} dg_t/dt](x) dt,
 *
 * whose exterior derivative equals the difference of the endpoint Chern
 * densities. Time derivatives use 4th-order stencils, base derivatives are
 * spectral on a closed base and 4th-order stencils on an interval, so every
 * discrete identity below converges at order >= 2.
 */
class TransgressionForm {
public:
    /**
     * Sample a family. The sampler receives (t, x) with t in [0,1] and
     * x in [0, 2pi) (closed base) or [0,1] (interval base).
     *
     * @throws symmetry_error if any sample's unitarity defect exceeds 1e-8
     */
    TransgressionForm(const std::function<MatC(double, double)>& sampler,
                      int block_size, bool base_closed, int n_t = 65,
                      int n_base = 128, std::string label = "family")
        : base_closed_(base_closed), label_(std::move(label)) {
        if (block_size <= 0) throw config_error("TransgressionForm: bad block size");
        if (n_t < 33) n_t = 33;
        if (n_t % 2 == 0) ++n_t;  // Simpson wants an odd node count
        if (base_closed_) {
            if (n_base < 64) n_base = 64;
        } else {
            if (n_base < 65) n_base = 65;
            if (n_base % 2 == 0) ++n_base;
        }
        normalizations_ = {1.0};  // n = 0 term of the factorial ladder
        t_grid_.resize(static_cast<std::size_t>(n_t));
        for (int i = 0; i < n_t; ++i) {
            t_grid_[static_cast<std::size_t>(i)] = static_cast<double>(i) / (n_t - 1);
        }
        base_grid_.resize(static_cast<std::size_t>(n_base));
        for (int j = 0; j < n_base; ++j) {
            base_grid_[static_cast<std::size_t>(j)] =
                base_closed_ ? 2.0 * std::numbers::pi * j / n_base
                             : static_cast<double>(j) / (n_base - 1);
        }
        g_.assign(static_cast<std::size_t>(n_t),
                  std::vector<MatC>(static_cast<std::size_t>(n_base)));
        double defect = 0.0;
        for (int i = 0; i < n_t; ++i) {
            for (int j = 0; j < n_base; ++j) {
                MatC v = sampler(t_grid_[static_cast<std::size_t>(i)],
                                 base_grid_[static_cast<std::size_t>(j)]);
                if (v.rows() != block_size || v.cols() != block_size) {
                    throw config_error("TransgressionForm: sample shape mismatch");
                }
                defect = std::max(defect, (v.adjoint() * v -
                                           MatC::Identity(block_size, block_size))
                                              .cwiseAbs()
                                              .maxCoeff());
                g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    std::move(v);
            }
        }
        if (defect > 1e-8) {
            throw symmetry_error("TransgressionForm '" + label_ +
                                 "': unitarity defect " + std::to_string(defect));
        }
        // integrand Tr[g^{-1} dg/dt] on the (t, x) grid
        const double dt = t_grid_[1] - t_grid_[0];
        integrand_.assign(static_cast<std::size_t>(n_t),
                          std::vector<cxd>(static_cast<std::size_t>(n_base)));
        for (int j = 0; j < n_base; ++j) {
            std::vector<MatC> column;
            column.reserve(static_cast<std::size_t>(n_t));
            for (int i = 0; i < n_t; ++i) {
                column.push_back(g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
            }
            const auto dcol = detail::stencil_derivative_4th(column, dt);
            for (int i = 0; i < n_t; ++i) {
                integrand_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                    (g_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].inverse() *
                     dcol[static_cast<std::size_t>(i)])
                        .trace();
            }
        }
    }

    bool base_closed() const { return base_closed_; }
    const std::string& label() const { return label_; }
    const std::vector<double>& t_grid() const { return t_grid_; }
    const std::vector<double>& base_grid() const { return base_grid_; }
    const std::vector<double>& normalizations() const { return normalizations_; }

    /** Family sample at (t node i, base node j). */
    const MatC& sample(int i, int j) const {
        return g_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
    }

    /** Raw integrand sample Tr[g^{-1} dg/dt] at (t node i, base node j). */
    cxd integrand(int i, int j) const {
        return integrand_.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(j));
    }

    /** Transgression value at base node j: (1/2pi i) Simpson integral over t. */
    double value_at(int j) const {
        std::vector<cxd> column;
        column.reserve(t_grid_.size());
        for (std::size_t i = 0; i < t_grid_.size(); ++i) {
            column.push_back(integrand_[i][static_cast<std::size_t>(j)]);
        }
        const cxd total = detail::simpson(column, t_grid_[1] - t_grid_[0]);
        const cxd scaled = total / cxd(0.0, 2.0 * std::numbers::pi);
        if (std::abs(scaled.imag()) > 1e-7) {
            throw consistency_error("TransgressionForm: non-real value at base node " +
                                    std::to_string(j));
        }
        return scaled.real();
    }

    /** Integral of the transgression function over the base region. */
    double integral() const {
        std::vector<double> vals;
        vals.reserve(base_grid_.size());
        for (int j = 0; j < static_cast<int>(base_grid_.size()); ++j) {
            vals.push_back(value_at(j));
        }
        if (base_closed_) {
            double acc = 0.0;
            for (double v : vals) acc += v;
            return acc * 2.0 * std::numbers::pi / static_cast<double>(vals.size());
        }
        return detail::simpson(vals, base_grid_[1] - base_grid_[0]);
    }

    /** Boundary evaluation ch~(x=1) - ch~(x=0) on an interval base. */
    double boundary_difference() const {
        if (base_closed_) {
            throw config_error("TransgressionForm: boundary difference needs an interval base");
        }
        return value_at(static_cast<int>(base_grid_.size()) - 1) - value_at(0);
    }

    /**
     * Endpoint Chern density (1/2pi i) Tr[g^{-1} dg/dx] at t = 0 or t = 1,
     * tabulated over the base grid.
     */
    std::vector<double> endpoint_chern_density(bool top) const {
        const std::size_t i = top ? (t_grid_.size() - 1) : 0;
        const int n_base = static_cast<int>(base_grid_.size());
        std::vector<MatC> row(g_[i].begin(), g_[i].end());
        std::vector<MatC> drow;
        if (base_closed_) {
            // spectral derivative entrywise over the periodic base
            const int n = static_cast<int>(row.front().rows());
            drow.assign(row.size(), MatC::Zero(n, n));
            for (int a = 0; a < n; ++a) {
                for (int b = 0; b < n; ++b) {
                    std::vector<cxd> f;
                    f.reserve(row.size());
                    for (const MatC& v : row) f.push_back(v(a, b));
                    const auto df =
                        detail::periodic_spectral_derivative(f, 2.0 * std::numbers::pi);
                    for (int j = 0; j < n_base; ++j) {
                        drow[static_cast<std::size_t>(j)](a, b) =
                            df[static_cast<std::size_t>(j)];
                    }
                }
            }
        } else {
            drow = detail::stencil_derivative_4th(row, base_grid_[1] - base_grid_[0]);
        }
        std::vector<double> density(static_cast<std::size_t>(n_base));
        for (int j = 0; j < n_base; ++j) {
            const cxd tr = (row[static_cast<std::size_t>(j)].inverse() *
                            drow[static_cast<std::size_t>(j)])
                               .trace();
            density[static_cast<std::size_t>(j)] =
                (tr / cxd(0.0, 2.0 * std::numbers::pi)).real();
        }
        return density;
    }

    /** Integral of an endpoint Chern density over the base region. */
    double endpoint_chern_integral(bool top) const {
        const auto density = endpoint_chern_density(top);
        if (base_closed_) {
            double acc = 0.0;
            for (double v : density) acc += v;
            return acc * 2.0 * std::numbers::pi / static_cast<double>(density.size());
        }
        return detail::simpson(density, base_grid_[1] - base_grid_[0]);
    }

private:
    bool base_closed_ = true;
    std::string label_;
    std::vector<double> t_grid_;
    std::vector<double> base_grid_;
    std::vector<std::vector<MatC>> g_;
    std::vector<std::vector<cxd>> integrand_;
    std::vector<double> normalizations_;
};

/** Headline transgression operation: integral of ch~ over the base region. */
inline double transgression_integral(const TransgressionForm& family) {
    return family.integral();
}

/**
 * Closed-base Stokes residual: the windings of the two endpoint loops of a
 * homotopy must agree, so the loop integral of ch(g_1) - ch(g_0) vanishes.
 */
inline double stokes_closed_residual(const TransgressionForm& family) {
    if (!family.base_closed()) {
        throw config_error("stokes_closed_residual: needs a closed base");
    }
    return std::abs(family.endpoint_chern_integral(true) -
                    family.endpoint_chern_integral(false));
}

/**
 * Interval-base Stokes residual: the integral of ch(g_1) - ch(g_0) over the
 * interval must match the boundary difference of the transgression function.
 */
inline double stokes_interval_residual(const TransgressionForm& family) {
    if (family.base_closed()) {
        throw config_error("stokes_interval_residual: needs an interval base");
    }
    const double lhs =
        family.endpoint_chern_integral(true) - family.endpoint_chern_integral(false);
    return std::abs(lhs - family.boundary_difference());
}

/**
 * Pointwise residual of exchanging the t- and base-derivatives of the family:
 * d/dt Tr[g^{-1} dg/dx] minus d/dx Tr[g^{-1} dg/dt] over the whole (t, x)
 * grid of a closed-base family. Decays at the stencil order under refinement.
 */
inline double derivative_exchange_residual(const TransgressionForm& family) {
    if (!family.base_closed()) {
        throw config_error("derivative_exchange_residual: needs a closed base");
    }
    const auto& t_grid = family.t_grid();
    const auto& base_grid = family.base_grid();
    const int n_t = static_cast<int>(t_grid.size());
    const int n_base = static_cast<int>(base_grid.size());
    const double dt = t_grid[1] - t_grid[0];
    const int n = static_cast<int>(family.sample(0, 0).rows());

    // field u(t_i, x_j) = Tr[g^{-1} dg/dx] via spectral base derivatives
    std::vector<std::vector<cxd>> u(static_cast<std::size_t>(n_t),
                                    std::vector<cxd>(static_cast<std::size_t>(n_base)));
    for (int i = 0; i < n_t; ++i) {
        std::vector<MatC> row;
        row.reserve(static_cast<std::size_t>(n_base));
        for (int j = 0; j < n_base; ++j) row.push_back(family.sample(i, j));
        std::vector<MatC> drow(row.size(), MatC::Zero(n, n));
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                std::vector<cxd> f;
                f.reserve(row.size());
                for (const MatC& v : row) f.push_back(v(a, b));
                const auto df =
                    detail::periodic_spectral_derivative(f, 2.0 * std::numbers::pi);
                for (int j = 0; j < n_base; ++j) {
                    drow[static_cast<std::size_t>(j)](a, b) = df[static_cast<std::size_t>(j)];
                }
            }
        }
        for (int j = 0; j < n_base; ++j) {
            u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                (row[static_cast<std::size_t>(j)].inverse() *
                 drow[static_cast<std::size_t>(j)])
                    .trace();
        }
    }

    double residual = 0.0;
    // d/dt u by 4th-order stencil per base node
    std::vector<std::vector<cxd>> dudt(static_cast<std::size_t>(n_t),
                                       std::vector<cxd>(static_cast<std::size_t>(n_base)));
    for (int j = 0; j < n_base; ++j) {
        std::vector<cxd> column;
        column.reserve(static_cast<std::size_t>(n_t));
        for (int i = 0; i < n_t; ++i) {
            column.push_back(u[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
        }
        const auto d = detail::stencil_derivative_4th(column, dt);
        for (int i = 0; i < n_t; ++i) {
            dudt[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                d[static_cast<std::size_t>(i)];
        }
    }
    // d/dx of the stored integrand Tr[g^{-1} dg/dt], spectral per t node
    for (int i = 0; i < n_t; ++i) {
        std::vector<cxd> v;
        v.reserve(static_cast<std::size_t>(n_base));
        for (int j = 0; j < n_base; ++j) v.push_back(family.integrand(i, j));
        const auto dv = detail::periodic_spectral_derivative(v, 2.0 * std::numbers::pi);
        for (int j = 0; j < n_base; ++j) {
            residual = std::max(residual,
                                std::abs(dudt[static_cast<std::size_t>(i)]
                                             [static_cast<std::size_t>(j)] -
                                         dv[static_cast<std::size_t>(j)]));
        }
    }
    return residual;
}

}  // namespace itlab

#endif  // ITLAB_CHERN_FORMS_HPP
