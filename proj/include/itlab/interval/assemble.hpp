#ifndef ITLAB_INTERVAL_ASSEMBLE_HPP
#define ITLAB_INTERVAL_ASSEMBLE_HPP
//
// Module      : interval/assemble
// Description : box (cell-midpoint) discretization of interval Dirac
//               operators under isotropic boundary conditions, with an
//               isometry onto midpoint samples for trace extraction
//

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"
#include "itlab/interval/model.hpp"

namespace itlab {

// ------------------------------------------------------------------
// discretization
//
// Unknowns live on the n_x + 1 grid nodes; the equation
//
//   gamma [ (u_{j+1} - u_j)/h + F(m_j) (u_j + u_{j+1})/2 ] = lambda (u_j + u_{j+1})/2
//
// is imposed at every cell midpoint m_j. Boundary conditions enter by
// restricting the end nodes to their allowed frames, giving exactly as
// many constrained unknowns as midpoint equations. The generalized
// problem (K, G) is reduced by the (possibly singular) midpoint mass
// G to an ordinary Hermitian eigenproblem T, together with an isometry
// R mapping reduced coordinates to L^2-normalized midpoint samples.
//
// The scheme is second-order accurate and free of the spurious
// oscillating branch a naive nodal central difference produces.
// ------------------------------------------------------------------

/** Reduced Hermitian problem for one coefficient profile. */
struct AssembledProblem {
    MatC t;                        // reduced Hermitian operator
    MatC r;                        // reduced coords -> midpoint samples (isometry)
    std::vector<double> midpoints; // cell midpoints in [0, length]
    double h = 0.0;                // cell width
    int fiber_dim = 0;             // 2N
    double hermiticity_defect = 0.0;
    // low-frequency spectral scale (coefficient size plus mode spacing);
    // zero-detection collars must use this, not the spectral maximum: the
    // reduced problem carries stiff modes whose size grows under grid
    // refinement without touching the low-lying spectrum
    double coefficient_scale = 1.0;

    /** Eigen-decomposition of the reduced operator. */
    EigenSystem eigensystem() const { return eigendecompose(t); }

    /** Eigenvalues only (cheaper when vectors are not needed). */
    VecR eigenvalues() const {
        return hermitian_eigenvalues(t);
    }
};

/**
 * Grid-and-boundary data reused across every profile sharing the same
 * geometry: the mass reduction and the derivative part of the stiffness
 * form are profile-independent, so paths of operators assemble cheaply.
 */
class AssemblyContext {
public:
    /**
     * @throws config_error   on dimension mismatches
     * @throws symmetry_error when the reduced derivative part loses
     *                        Hermiticity (non-isotropic boundary data)
     */
    AssemblyContext(int block_size, int n_x, double length,
                    const BoundaryCondition& bc0, const BoundaryCondition& bc1)
        : n_(block_size), d_(2 * block_size), n_x_(n_x), length_(length) {
        if (bc0.end() != 0 || bc1.end() != 1)
            throw config_error("AssemblyContext: boundary conditions must be given as (end 0, end 1)");
        if (bc0.fiber_dim() != d_ || bc1.fiber_dim() != d_)
            throw config_error("AssemblyContext: boundary fiber dimension mismatch");
        if (n_x_ < 8) throw config_error("AssemblyContext: grid too coarse");
        build(bc0.frame(), bc1.frame());
    }

    int n_x() const { return n_x_; }
    int fiber_dim() const { return d_; }
    double grid_h() const { return length_ / n_x_; }
    int reduced_dim() const { return static_cast<int>(r_.cols()); }

    /** Midpoint isometry of the reduced coordinates. */
    const MatC& midpoint_isometry() const { return r_; }

    /**
     * Assemble the reduced operator for one coefficient profile.
     * The profile is evaluated at the cell midpoints.
     */
    AssembledProblem assemble(const std::function<MatC(double)>& profile) const {
        const double h = grid_h();
        const MatC gamma = interval_gamma(n_);

        // T = T_d + R^* blockdiag(gamma F(m_j)) R, computed cellwise
        MatC scaled = MatC::Zero(r_.rows(), r_.cols());
        double coeff_scale = 0.0;
        for (int j = 0; j < n_x_; ++j) {
            const double x = (j + 0.5) * h;
            MatC gf = gamma * profile(x);
            const double sa = (gf - gf.adjoint()).norm();
            if (sa > tol::hermiticity * std::max(1.0, gf.norm()) * 100.0)
                throw symmetry_error(
                    "AssemblyContext: gamma F not Hermitian at x = " + std::to_string(x) +
                    ", defect " + std::to_string(sa));
            gf = 0.5 * (gf + gf.adjoint());
            coeff_scale = std::max(coeff_scale, gf.norm());
            scaled.middleRows(j * d_, d_) = gf * r_.middleRows(j * d_, d_);
        }
        MatC t = t_derivative_ + r_.adjoint() * scaled;

        AssembledProblem out;
        out.hermiticity_defect = (t - t.adjoint()).norm();
        const double scale = std::max(1.0, t.norm());
        if (out.hermiticity_defect > tol::assembly_hermiticity * scale)
            throw symmetry_error("AssemblyContext: assembled operator lost Hermiticity, defect " +
                                 std::to_string(out.hermiticity_defect));
        out.t = 0.5 * (t + t.adjoint());
        out.r = r_;
        out.h = h;
        out.fiber_dim = d_;
        out.coefficient_scale = coeff_scale + std::numbers::pi / length_;
        out.midpoints.reserve(static_cast<std::size_t>(n_x_));
        for (int j = 0; j < n_x_; ++j) out.midpoints.push_back((j + 0.5) * h);
        return out;
    }

private:
    void build(const MatC& w0, const MatC& w1) {
        const double h = grid_h();
        const int cells = n_x_;
        const int nodes = n_x_ + 1;
        const int c_dim = n_ + d_ * (nodes - 2) + n_;  // = d_ * n_x_
        const int m_dim = d_ * cells;

        // (M B): cell-midpoint averaging of constrained node vectors
        MatC mb = MatC::Zero(m_dim, c_dim);
        // (K_d B): derivative part gamma (u_{j+1} - u_j)/h of the stiffness
        MatC kb = MatC::Zero(m_dim, c_dim);
        const MatC gamma = interval_gamma(n_);
        const MatC eye = MatC::Identity(d_, d_);

        // constrained coordinate layout: [c_0 (n_), u_1 ... u_{n_x - 1} (d_ each), c_1 (n_)]
        auto node_block = [&](MatC& m, int cell, int node, const MatC& value) {
            // scatter value * (node coordinates) into row block of the cell
            if (node == 0) {
                m.block(cell * d_, 0, d_, n_) += value * w0;
            } else if (node == nodes - 1) {
                m.block(cell * d_, c_dim - n_, d_, n_) += value * w1;
            } else {
                m.block(cell * d_, n_ + (node - 1) * d_, d_, d_) += value;
            }
        };
        for (int j = 0; j < cells; ++j) {
            node_block(mb, j, j, MatC(0.5 * eye));
            node_block(mb, j, j + 1, MatC(0.5 * eye));
            node_block(kb, j, j, MatC(-gamma / h));
            node_block(kb, j, j + 1, MatC(gamma / h));
        }

        // mass reduction: G = h (MB)*(MB) is nonnegative; deflate its kernel,
        // whiten the rest, and keep the midpoint isometry R = sqrt(h) (MB) W
        const MatC g_mass = h * (mb.adjoint() * mb);
        const EigenSystem es = detail::hermitian_eigen_kernel(g_mass, /*with_vectors=*/true);
        const VecR& ew = es.values;
        const double ew_max = std::max(1e-300, ew.maxCoeff());
        mass_tail_.clear();
        for (Eigen::Index i = 0; i < std::min<Eigen::Index>(8, ew.size()); ++i)
            mass_tail_.push_back(ew[i] / ew_max);
        int keep = 0;
        for (Eigen::Index i = 0; i < ew.size(); ++i)
            if (ew[i] > 1e-12 * ew_max) ++keep;
        MatC w = MatC(c_dim, keep);
        int c = 0;
        deflated_count_ = static_cast<int>(ew.size()) - keep;
        min_kept_ratio_ = 1.0;
        for (Eigen::Index i = 0; i < ew.size(); ++i) {
            if (ew[i] > 1e-12 * ew_max) {
                min_kept_ratio_ = std::min(min_kept_ratio_, ew[i] / ew_max);
                w.col(c++) = es.vectors.col(i) / std::sqrt(ew[i]);
            }
        }

        r_ = std::sqrt(h) * (mb * w);
        const MatC khat = h * (mb.adjoint() * kb);
        MatC td = w.adjoint() * (khat * w);
        const double sa = (td - td.adjoint()).norm();
        if (sa > tol::assembly_hermiticity * std::max(1.0, td.norm()))
            throw symmetry_error(
                "AssemblyContext: derivative part not Hermitian (boundary frames must be "
                "gamma-isotropic), defect " + std::to_string(sa));
        t_derivative_ = 0.5 * (td + td.adjoint());
    }

    int n_;
    int d_;
    int n_x_;
    double length_;
    MatC r_;
    MatC t_derivative_;
    int deflated_count_ = 0;
    double min_kept_ratio_ = 1.0;

public:
    /** Number of mass modes removed by the kernel deflation. */
    int deflated_count() const { return deflated_count_; }
    /** Smallest kept mass eigenvalue relative to the largest. */
    double min_kept_ratio() const { return min_kept_ratio_; }
    /** Smallest mass eigenvalues relative to the largest (diagnostic). */
    const std::vector<double>& mass_spectrum_tail() const { return mass_tail_; }

private:
    std::vector<double> mass_tail_;
};

/**
 * One-call assembly of the model operator under a boundary condition
 * pair. For repeated assemblies sharing geometry (operator paths,
 * perturbed profiles) construct an AssemblyContext once instead.
 */
inline AssembledProblem assemble_interval_operator(const IntervalDiracModel& model,
                                                   const BoundaryCondition& bc0,
                                                   const BoundaryCondition& bc1) {
    AssemblyContext ctx(model.block_size(), model.n_x(), model.length(), bc0, bc1);
    return ctx.assemble([&model](double x) { return model.coefficient(x); });
}

// ------------------------------------------------------------------
// rotation model: the one exactly solvable interval configuration
// ------------------------------------------------------------------

namespace detail {

/** Angle of a real line in C^2 given by a (phase-scaled) frame vector. */
inline double line_angle(const MatC& frame) {
    if (frame.rows() != 2 || frame.cols() != 1)
        throw config_error("line_angle: need a 2 x 1 frame");
    const cxd v0 = frame(0, 0), v1 = frame(1, 0);
    const double cross = std::abs(std::imag(std::conj(v0) * v1));
    if (cross > tol::rank_cutoff)
        throw config_error("line_angle: frame does not span a real line (defect " +
                           std::to_string(cross) + ")");
    if (std::abs(v0) < 1e-12) return 0.5 * std::numbers::pi;
    return std::atan(std::real(v1 / v0));
}

}  // namespace detail

/**
 * Exact spectrum of the zero-coefficient rotation model gamma d/dx on
 * [0, 1] between real boundary lines at angles alpha_0 and alpha_1:
 *
 *     spectrum = { (alpha_1 - alpha_0) + k pi : k integer },
 *
 * every eigenvalue simple. Returned as an exact-rule operator model
 * listing the eigenvalues with |k| <= k_range.
 */
inline HermitianOperatorModel rotation_spectrum(double alpha0, double alpha1,
                                                int k_range = 512) {
    const double offset = alpha1 - alpha0;
    return HermitianOperatorModel(
        [offset](int k) { return offset + k * std::numbers::pi; },
        -k_range, k_range, 1);
}

/** Rotation spectrum read off from boundary-line conditions. */
inline HermitianOperatorModel rotation_spectrum(const BoundaryCondition& bc0,
                                                const BoundaryCondition& bc1,
                                                int k_range = 512) {
    return rotation_spectrum(detail::line_angle(bc0.frame()),
                             detail::line_angle(bc1.frame()), k_range);
}

}  // namespace itlab

#endif  // ITLAB_INTERVAL_ASSEMBLE_HPP
