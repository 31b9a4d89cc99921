#ifndef ITLAB_INTERVAL_MODEL_HPP
#define ITLAB_INTERVAL_MODEL_HPP
//
// Module      : interval/model
// Description : first-order interval Dirac models gamma (d/dx + A(x)) with
//               isotropic boundary data, cutoff profiles, and tangential
//               symbols acting on the auxiliary factor
//

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/types.hpp"

namespace itlab {

// ------------------------------------------------------------------
// gamma conventions
//
// V = C^2 (x) C^N with the block bundle map
//
//     gamma = [ 0   I_N ]
//             [ -I_N  0 ]
//
// which is unitary, skew-adjoint, and squares to -I. Coefficient
// matrices A anticommuting with gamma have the block form
//
//     A = [ a   b ]      a, b Hermitian N x N,
//         [ b  -a ]
//
// and gamma (d/dx + A) is then symmetric on isotropic boundary data.
// ------------------------------------------------------------------

/** The standard 2N x 2N bundle map gamma for auxiliary rank N. */
inline MatC interval_gamma(int block_size) {
    if (block_size <= 0) throw config_error("interval_gamma: block size must be positive");
    const int n = block_size;
    MatC g = MatC::Zero(2 * n, 2 * n);
    g.block(0, n, n, n) = MatC::Identity(n, n);
    g.block(n, 0, n, n) = -MatC::Identity(n, n);
    return g;
}

/** Diagonal-anticommuting coefficient diag(h, -h) for Hermitian h. */
inline MatC diagonal_tangential_block(const MatC& h) {
    if (h.rows() != h.cols()) throw config_error("diagonal_tangential_block: square matrix required");
    const double sa = (h - h.adjoint()).norm();
    if (sa > tol::hermiticity * std::max<double>(1.0, h.norm()))
        throw symmetry_error("diagonal_tangential_block: block is not Hermitian, defect " +
                             std::to_string(sa));
    const int n = static_cast<int>(h.rows());
    MatC a = MatC::Zero(2 * n, 2 * n);
    a.topLeftCorner(n, n) = h;
    a.bottomRightCorner(n, n) = -h;
    return a;
}

/**
 * First-order model operator gamma (d/dx + A(x)) on sections of
 * V = C^{2N} over [0, length], discretized on a uniform grid.
 *
 * The coefficient profile is validated on the grid midpoints:
 * each value must be Hermitian and anticommute with gamma.
 */
class IntervalDiracModel {
public:
    /** General profile model. */
    IntervalDiracModel(int block_size,
                       std::function<MatC(double)> profile,
                       int n_x = 400,
                       double length = 1.0,
                       std::string label = "interval-model")
        : n_(block_size), n_x_(n_x), length_(length),
          gamma_(interval_gamma(block_size)),
          profile_(std::move(profile)), label_(std::move(label)) {
        if (n_x_ < 8) throw config_error("IntervalDiracModel: grid too coarse");
        if (length_ <= 0.0) throw config_error("IntervalDiracModel: length must be positive");
        validate_profile();
    }

    /** Constant-coefficient model. */
    static IntervalDiracModel constant(int block_size,
                                       const MatC& a,
                                       int n_x = 400,
                                       double length = 1.0,
                                       std::string label = "interval-model") {
        MatC copy = a;
        return IntervalDiracModel(block_size, [copy](double) { return copy; }, n_x, length,
                                  std::move(label));
    }

    int block_size() const { return n_; }
    int fiber_dim() const { return 2 * n_; }
    int n_x() const { return n_x_; }
    double length() const { return length_; }
    double grid_h() const { return length_ / n_x_; }
    const MatC& gamma() const { return gamma_; }
    const std::string& label() const { return label_; }

    /** Coefficient value A(x). */
    MatC coefficient(double x) const { return profile_(x); }

    /** Model with the same geometry but a replaced coefficient profile. */
    IntervalDiracModel with_profile(std::function<MatC(double)> profile,
                                    std::string label) const {
        return IntervalDiracModel(n_, std::move(profile), n_x_, length_, std::move(label));
    }

    /** Model with the same coefficients on a refined (or coarsened) grid. */
    IntervalDiracModel with_grid(int n_x) const {
        return IntervalDiracModel(n_, profile_, n_x, length_, label_);
    }

    /** Cell midpoints of the discretization grid. */
    std::vector<double> midpoints() const {
        std::vector<double> m;
        m.reserve(static_cast<std::size_t>(n_x_));
        const double h = grid_h();
        for (int j = 0; j < n_x_; ++j) m.push_back((j + 0.5) * h);
        return m;
    }

private:
    void validate_profile() const {
        const double h = grid_h();
        for (int j = 0; j < n_x_; ++j) {
            const double x = (j + 0.5) * h;
            const MatC a = profile_(x);
            if (a.rows() != 2 * n_ || a.cols() != 2 * n_)
                throw config_error("IntervalDiracModel: profile dimension mismatch at x = " +
                                   std::to_string(x));
            const double scale = std::max(1.0, a.norm());
            const double sa = (a - a.adjoint()).norm();
            if (sa > tol::hermiticity * scale)
                throw symmetry_error("IntervalDiracModel: coefficient not Hermitian at x = " +
                                     std::to_string(x) + ", defect " + std::to_string(sa));
            const double anti = (gamma_ * a + a * gamma_).norm();
            if (anti > tol::hermiticity * scale)
                throw symmetry_error(
                    "IntervalDiracModel: coefficient does not anticommute with gamma at x = " +
                    std::to_string(x) + ", defect " + std::to_string(anti));
        }
    }

    int n_;
    int n_x_;
    double length_;
    MatC gamma_;
    std::function<MatC(double)> profile_;
    std::string label_;
};

// ------------------------------------------------------------------
// boundary conditions
//
// A boundary condition at an end fixes the half-dimensional subspace
// the trace u(end) must lie in. Admissible subspaces are isotropic
// for gamma (frame W with W* gamma W = 0), which is exactly the
// condition making the projected operator symmetric.
// ------------------------------------------------------------------

/** Boundary condition: the allowed trace subspace at one interval end. */
class BoundaryCondition {
public:
    /**
     * @param end    0 for x = 0, 1 for x = length
     * @param frame  orthonormal 2N x N frame of the allowed subspace
     *
     * @throws config_error   on shape or orthonormality failure
     * @throws symmetry_error if the subspace is not gamma-isotropic
     */
    BoundaryCondition(int end, MatC frame, std::string label = "boundary")
        : end_(end), frame_(std::move(frame)), label_(std::move(label)) {
        if (end_ != 0 && end_ != 1)
            throw config_error("BoundaryCondition: end must be 0 or 1");
        if (frame_.rows() != 2 * frame_.cols() || frame_.cols() < 1)
            throw config_error("BoundaryCondition: frame must be 2N x N");
        const MatC gram = frame_.adjoint() * frame_;
        const double ortho = (gram - MatC::Identity(gram.rows(), gram.cols())).norm();
        if (ortho > tol::unitarity * std::max<double>(1.0, frame_.rows()))
            throw config_error("BoundaryCondition: frame not orthonormal, defect " +
                               std::to_string(ortho));
        const MatC gamma = interval_gamma(static_cast<int>(frame_.cols()));
        const double iso = (frame_.adjoint() * gamma * frame_).norm();
        if (iso > tol::hermiticity * std::max<double>(1.0, frame_.rows()))
            throw symmetry_error("BoundaryCondition: subspace not gamma-isotropic, defect " +
                                 std::to_string(iso));
    }

    int end() const { return end_; }
    const MatC& frame() const { return frame_; }
    const std::string& label() const { return label_; }
    int fiber_dim() const { return static_cast<int>(frame_.rows()); }

    /** Condition transported by a unitary commuting with gamma. */
    BoundaryCondition conjugated(const MatC& u, std::string label = "") const {
        if (u.rows() != frame_.rows() || u.cols() != frame_.rows())
            throw config_error("BoundaryCondition::conjugated: unitary dimension mismatch");
        const double unit = (u * u.adjoint() - MatC::Identity(u.rows(), u.cols())).norm();
        if (unit > tol::unitarity * std::max<double>(1.0, u.rows()))
            throw config_error("BoundaryCondition::conjugated: map is not unitary, defect " +
                               std::to_string(unit));
        if (label.empty()) label = label_ + " (conjugated)";
        return BoundaryCondition(end_, MatC(u * frame_), std::move(label));
    }

private:
    int end_;
    MatC frame_;
    std::string label_;
};

/** Rotation-model condition: the real line at angle alpha inside C^2. */
inline BoundaryCondition rotation_boundary_condition(int end, double alpha) {
    MatC frame(2, 1);
    frame(0, 0) = std::cos(alpha);
    frame(1, 0) = std::sin(alpha);
    return BoundaryCondition(end, frame,
                             "line(alpha=" + std::to_string(alpha) + ")");
}

namespace detail {

/** Strict positive/negative/kernel splitting of a Hermitian matrix. */
struct SignSplit {
    MatC positive;  // frame of the lambda > 0 eigenspace
    MatC negative;  // frame of the lambda < 0 eigenspace
    MatC kernel;    // frame of the kernel
};

inline SignSplit sign_split(const MatC& a, double ztol_scale = tol::zero_eigenvalue) {
    Eigen::SelfAdjointEigenSolver<MatC> es(a);
    if (es.info() != Eigen::Success)
        throw itlab_error("sign_split: eigendecomposition failed");
    const VecR& w = es.eigenvalues();
    const double scale = std::max(1.0, std::max(std::abs(w.minCoeff()), std::abs(w.maxCoeff())));
    const double ztol = ztol_scale * scale;
    std::vector<int> pos, neg, ker;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
        if (w[i] > ztol) pos.push_back(static_cast<int>(i));
        else if (w[i] < -ztol) neg.push_back(static_cast<int>(i));
        else ker.push_back(static_cast<int>(i));
    }
    auto collect = [&](const std::vector<int>& idx) {
        MatC f(a.rows(), static_cast<Eigen::Index>(idx.size()));
        for (std::size_t c = 0; c < idx.size(); ++c) f.col(static_cast<Eigen::Index>(c)) =
            es.eigenvectors().col(idx[c]);
        return f;
    };
    return SignSplit{collect(pos), collect(neg), collect(ker)};
}

}  // namespace detail

/**
 * Spectral boundary condition of Atiyah-Patodi-Singer type, augmented on
 * the kernel of the boundary coefficient by a half-dimensional subspace L:
 *
 *   end 0 : allowed = E_{<0}(A) (+) gamma L
 *   end 1 : allowed = E_{>0}(A) (+) L
 *
 * L must lie inside ker A with gamma L orthogonal to L and
 * dim L = dim(ker A) / 2, so the allowed space is half-dimensional
 * and gamma-isotropic.
 *
 * @throws config_error if L fails the kernel-splitting requirements
 */
inline BoundaryCondition aps_boundary_condition(int end, const MatC& a, const MatC& l_frame,
                                                std::string label = "") {
    const int dim = static_cast<int>(a.rows());
    if (dim % 2 != 0) throw config_error("aps_boundary_condition: fiber dimension must be even");
    const MatC gamma = interval_gamma(dim / 2);
    const double anti = (gamma * a + a * gamma).norm();
    if (anti > tol::hermiticity * std::max(1.0, a.norm()))
        throw symmetry_error("aps_boundary_condition: coefficient does not anticommute "
                             "with gamma, defect " + std::to_string(anti));

    const auto split = detail::sign_split(a);
    const int ker_dim = static_cast<int>(split.kernel.cols());
    const int l_dim = static_cast<int>(l_frame.cols());
    if (2 * l_dim != ker_dim)
        throw config_error("aps_boundary_condition: L must span half the kernel (kernel dim " +
                           std::to_string(ker_dim) + ", L dim " + std::to_string(l_dim) + ")");

    // L inside ker A, orthonormal, with gamma L orthogonal to L
    const MatC ker_proj = split.kernel * split.kernel.adjoint();
    if (l_dim > 0) {
        const double inside = (ker_proj * l_frame - l_frame).norm();
        if (inside > tol::rank_cutoff)
            throw config_error("aps_boundary_condition: L does not lie in ker A, defect " +
                               std::to_string(inside));
        const MatC gram = l_frame.adjoint() * l_frame;
        if ((gram - MatC::Identity(l_dim, l_dim)).norm() > tol::unitarity * dim)
            throw config_error("aps_boundary_condition: L frame not orthonormal");
        const double cross = (l_frame.adjoint() * gamma * l_frame).norm();
        if (cross > tol::rank_cutoff)
            throw config_error("aps_boundary_condition: gamma L not orthogonal to L, defect " +
                               std::to_string(cross));
    }

    const MatC& half = (end == 0) ? split.negative : split.positive;
    MatC frame(dim, half.cols() + l_dim);
    frame.leftCols(half.cols()) = half;
    if (l_dim > 0)
        frame.rightCols(l_dim) = (end == 0) ? MatC(gamma * l_frame) : l_frame;
    if (frame.cols() * 2 != dim)
        throw config_error("aps_boundary_condition: allowed space is not half-dimensional "
                           "(the spectral splitting must be balanced)");
    if (label.empty())
        label = std::string("aps(end=") + std::to_string(end) + ")";
    return BoundaryCondition(end, std::move(frame), std::move(label));
}

// ------------------------------------------------------------------
// cutoff profiles
// ------------------------------------------------------------------

/**
 * Monotone cutoff profile psi on normalized coordinates: psi = 1 for
 * x <= a, psi = 0 for x >= b, quintic C^2 smoothstep in between.
 */
class CutoffProfile {
public:
    CutoffProfile(double a = 0.25, double b = 0.5) : a_(a), b_(b) {
        if (!(a_ <= b_)) throw config_error("CutoffProfile: need a <= b");
    }

    double lower() const { return a_; }
    double upper() const { return b_; }

    /** One-sided profile: 1 on [0, a], 0 on [b, 1], monotone between. */
    double psi(double x) const {
        if (x <= a_) return 1.0;
        if (x >= b_) return 0.0;
        const double s = (x - a_) / (b_ - a_);
        const double rho = s * s * s * (10.0 + s * (-15.0 + 6.0 * s));
        return 1.0 - rho;
    }

    /** Two-collar profile on [0,1]: psi applied to the distance to the ends. */
    double mirrored(double x) const { return psi(std::min(x, 1.0 - x)); }

    /** Identically-one profile (no interior deformation at all). */
    static CutoffProfile one() {
        CutoffProfile c;
        c.a_ = 2.0;  // psi(x) = 1 for every x in [0,1]
        c.b_ = 3.0;
        return c;
    }

    /** Identically-zero profile (deformation active on the whole interval). */
    static CutoffProfile zero() {
        CutoffProfile c;
        c.a_ = -2.0;  // psi(x) = 0 for every x in [0,1]
        c.b_ = -1.0;
        return c;
    }

private:
    double a_;
    double b_;
};

// ------------------------------------------------------------------
// tangential symbols
//
// Symbols act on the auxiliary C^N factor only and are lifted to
// V = C^2 (x) C^N as blockdiag(u, u); the lift then commutes with
// gamma, which is what every perturbed-operator formula requires.
// ------------------------------------------------------------------

/** Unitary map u : [0,1] -> U(N) with an explicit derivative. */
class IntervalSymbol {
public:
    IntervalSymbol(int block_size,
                   std::function<MatC(double)> value,
                   std::function<MatC(double)> derivative,
                   std::string label = "interval-symbol")
        : n_(block_size), value_(std::move(value)), derivative_(std::move(derivative)),
          label_(std::move(label)) {
        if (n_ <= 0) throw config_error("IntervalSymbol: block size must be positive");
        validate();
    }

    int block_size() const { return n_; }
    const std::string& label() const { return label_; }

    /** u(x) on the auxiliary factor. */
    MatC value(double x) const { return value_(x); }

    /** u'(x) on the auxiliary factor. */
    MatC derivative(double x) const { return derivative_(x); }

    /** Lift blockdiag(u, u)(x) acting on V = C^{2N}. */
    MatC lift(double x) const {
        const MatC u = value_(x);
        MatC g = MatC::Zero(2 * n_, 2 * n_);
        g.topLeftCorner(n_, n_) = u;
        g.bottomRightCorner(n_, n_) = u;
        return g;
    }

    /** Lift of the derivative. */
    MatC lift_derivative(double x) const {
        const MatC du = derivative_(x);
        MatC g = MatC::Zero(2 * n_, 2 * n_);
        g.topLeftCorner(n_, n_) = du;
        g.bottomRightCorner(n_, n_) = du;
        return g;
    }

private:
    void validate() const {
        // unitarity on a sample grid, and a finite-difference probe of the
        // declared derivative (loose bound: it guards signs and factors of
        // 2 pi, not discretization accuracy)
        const int m = 17;
        for (int j = 0; j <= m; ++j) {
            const double x = static_cast<double>(j) / m;
            const MatC u = value_(x);
            if (u.rows() != n_ || u.cols() != n_)
                throw config_error("IntervalSymbol: value dimension mismatch");
            const double unit = (u * u.adjoint() - MatC::Identity(n_, n_)).norm();
            if (unit > tol::unitarity * std::max(1.0, static_cast<double>(n_)))
                throw symmetry_error("IntervalSymbol '" + label_ + "': not unitary at x = " +
                                     std::to_string(x) + ", defect " + std::to_string(unit));
        }
        const double eps = 1e-6;
        for (double x : {0.3, 0.7}) {
            const MatC fd = (value_(x + eps) - value_(x - eps)) / (2.0 * eps);
            const MatC du = derivative_(x);
            const double dev = (fd - du).norm();
            if (dev > 1e-4 * std::max(1.0, du.norm()))
                throw consistency_error("IntervalSymbol '" + label_ +
                                        "': derivative disagrees with finite differences (" +
                                        std::to_string(dev) + ")");
        }
    }

    int n_;
    std::function<MatC(double)> value_;
    std::function<MatC(double)> derivative_;
    std::string label_;
};

/** Constant symbol u(x) = u0. */
inline IntervalSymbol constant_interval_symbol(const MatC& u0, std::string label = "constant") {
    const int n = static_cast<int>(u0.rows());
    return IntervalSymbol(
        n, [u0](double) { return u0; },
        [n](double) -> MatC { return MatC::Zero(n, n); }, std::move(label));
}

/** Scalar phase ramp u(x) = e^{2 pi i w x} I_N of winding w across the interval. */
inline IntervalSymbol phase_ramp(int block_size, int w) {
    const int n = block_size;
    const double omega = 2.0 * std::numbers::pi * w;
    return IntervalSymbol(
        n,
        [n, omega](double x) -> MatC {
            return std::polar(1.0, omega * x) * MatC::Identity(n, n);
        },
        [n, omega](double x) -> MatC {
            return cxd(0.0, omega) * std::polar(1.0, omega * x) * MatC::Identity(n, n);
        },
        "phase-ramp(w=" + std::to_string(w) + ")");
}

/**
 * Exponential ramp u(x) = exp(i theta(x) S) for a fixed Hermitian
 * generator S; theta(x) = 2 pi w x by default. Because the generator is
 * x-independent the derivative is exact.
 */
inline IntervalSymbol exp_ramp(const MatC& s, int w, std::string label = "") {
    const double sa = (s - s.adjoint()).norm();
    if (sa > tol::hermiticity * std::max(1.0, s.norm()))
        throw symmetry_error("exp_ramp: generator is not Hermitian, defect " + std::to_string(sa));
    const int n = static_cast<int>(s.rows());
    Eigen::SelfAdjointEigenSolver<MatC> es(s);
    const MatC v = es.eigenvectors();
    const VecR w_s = es.eigenvalues();
    const double omega = 2.0 * std::numbers::pi * w;
    auto value = [v, w_s, omega, n](double x) -> MatC {
        VecC d(n);
        for (int i = 0; i < n; ++i) d(i) = std::polar(1.0, omega * x * w_s(i));
        return v * d.asDiagonal() * v.adjoint();
    };
    auto deriv = [v, w_s, omega, n](double x) -> MatC {
        VecC d(n);
        for (int i = 0; i < n; ++i)
            d(i) = cxd(0.0, omega * w_s(i)) * std::polar(1.0, omega * x * w_s(i));
        return v * d.asDiagonal() * v.adjoint();
    };
    if (label.empty()) label = "exp-ramp(w=" + std::to_string(w) + ")";
    return IntervalSymbol(n, std::move(value), std::move(deriv), std::move(label));
}

// ------------------------------------------------------------------
// perturbed tangential profiles
// ------------------------------------------------------------------

/**
 * Interpolated coefficient profile
 *
 *     A_psi(x) = psi(x) A + (1 - psi(x)) g^{-1} A g
 *
 * for a constant unitary g commuting with gamma. The same profile is
 * recomputed through the commutator route A + (1-psi)(g^{-1} A g - A)
 * and both evaluations must agree to machine precision; this guards the
 * implementation of either route against sign slips.
 *
 * @throws config_error  if g does not commute with gamma
 */
inline std::function<MatC(double)> perturbed_tangential_profile(const MatC& a,
                                                                const MatC& g,
                                                                const CutoffProfile& cutoff) {
    const int dim = static_cast<int>(a.rows());
    if (dim % 2 != 0) throw config_error("perturbed_tangential_profile: even dimension required");
    const MatC gamma = interval_gamma(dim / 2);
    const double comm = (gamma * g - g * gamma).norm();
    if (comm > tol::hermiticity * std::max(1.0, g.norm()))
        throw config_error("perturbed_tangential_profile: conjugator must commute with gamma, "
                           "defect " + std::to_string(comm));
    const double unit = (g * g.adjoint() - MatC::Identity(dim, dim)).norm();
    if (unit > tol::unitarity * dim)
        throw config_error("perturbed_tangential_profile: conjugator is not unitary");

    const MatC conj = g.adjoint() * a * g;
    auto profile = [a, conj, cutoff](double x) -> MatC {
        const double p = cutoff.psi(x);
        return p * a + (1.0 - p) * conj;
    };
    // commutator-route cross-check on a sample grid
    for (int j = 0; j <= 16; ++j) {
        const double x = j / 16.0;
        const double p = cutoff.psi(x);
        const MatC direct = profile(x);
        const MatC commutator_route = a + (1.0 - p) * (conj - a);
        if ((direct - commutator_route).norm() > 1e-13 * std::max(1.0, direct.norm()))
            throw consistency_error(
                "perturbed_tangential_profile: interpolation and commutator routes disagree");
    }
    return profile;
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_MODEL_HPP
