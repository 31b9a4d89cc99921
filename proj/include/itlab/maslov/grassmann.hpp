#ifndef ITLAB_MASLOV_GRASSMANN_HPP
#define ITLAB_MASLOV_GRASSMANN_HPP
//
// Module      : maslov/grassmann
// Description : finite-dimensional Hermitian symplectic spaces, Lagrangian
//               projectors, graph unitaries, and Lagrangian paths
//

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"

namespace itlab {

/**
 * A complex vector space with a unitary structure J satisfying J^2 = -I and
 * equal +i / -i eigenspace dimensions. The deterministic eigenbases U+ and
 * U- fixed here (phase-normalized so each column's largest entry is real
 * positive) anchor every graph-unitary parameterization downstream.
 */
class HermitianSymplecticSpace {
public:
    explicit HermitianSymplecticSpace(MatC j) : j_(std::move(j)) {
        const Eigen::Index d = j_.rows();
        if (d == 0 || j_.cols() != d || d % 2 != 0) {
            throw config_error("HermitianSymplecticSpace: J must be even-dimensional square");
        }
        const MatC eye = MatC::Identity(d, d);
        if ((j_.adjoint() * j_ - eye).cwiseAbs().maxCoeff() > 1e-12) {
            throw config_error("HermitianSymplecticSpace: J not unitary");
        }
        if ((j_ * j_ + eye).cwiseAbs().maxCoeff() > 1e-12) {
            throw config_error("HermitianSymplecticSpace: J^2 != -I");
        }
        // -iJ is Hermitian with eigenvalues +-1; ascending order puts the
        // -1 block (the -i eigenspace of J) first
        const EigenSystem es = eigendecompose(MatC(cxd(0.0, -1.0) * j_));
        const Eigen::Index m = d / 2;
        for (Eigen::Index i = 0; i < d; ++i) {
            const double expected = (i < m) ? -1.0 : 1.0;
            if (std::abs(es.values(i) - expected) > 1e-10) {
                throw config_error(
                    "HermitianSymplecticSpace: +-i eigenspaces of J are unbalanced");
            }
        }
        MatC vectors = es.vectors;
        for (Eigen::Index c = 0; c < d; ++c) {
            Eigen::Index imax = 0;
            vectors.col(c).cwiseAbs().maxCoeff(&imax);
            const cxd pivot = vectors(imax, c);
            const double a = std::abs(pivot);
            if (a > 0.0) vectors.col(c) *= std::conj(pivot) / a;
        }
        basis_minus_ = vectors.leftCols(m);
        basis_plus_ = vectors.rightCols(m);
    }

    Eigen::Index dim() const { return j_.rows(); }
    Eigen::Index half_dim() const { return j_.rows() / 2; }
    const MatC& j() const { return j_; }

    /** Orthonormal basis of the +i eigenspace of J (columns). */
    const MatC& basis_plus() const { return basis_plus_; }

    /** Orthonormal basis of the -i eigenspace of J (columns). */
    const MatC& basis_minus() const { return basis_minus_; }

    /** Two spaces interoperate only when their J matrices agree. */
    bool compatible_with(const HermitianSymplecticSpace& other) const {
        return j_.rows() == other.j_.rows() &&
               (j_ - other.j_).cwiseAbs().maxCoeff() <= 1e-12;
    }

private:
    MatC j_;
    MatC basis_plus_;
    MatC basis_minus_;
};

/** The canonical space with J = diag(i, -i, i, -i, ...) of dimension 2m. */
inline HermitianSymplecticSpace canonical_symplectic_space(int half_dim) {
    if (half_dim <= 0) throw config_error("canonical_symplectic_space: bad dimension");
    MatC j = MatC::Zero(2 * half_dim, 2 * half_dim);
    for (int i = 0; i < half_dim; ++i) {
        j(2 * i, 2 * i) = cxd(0.0, 1.0);
        j(2 * i + 1, 2 * i + 1) = cxd(0.0, -1.0);
    }
    return HermitianSymplecticSpace(std::move(j));
}

/**
 * An orthogonal projector P onto a Lagrangian subspace: P = P*, P^2 = P and
 * J P J* = I - P, all certified on construction.
 */
class LagrangianProjector {
public:
    LagrangianProjector(MatC p, HermitianSymplecticSpace space)
        : p_(std::move(p)), space_(std::move(space)) {
        const Eigen::Index d = space_.dim();
        if (p_.rows() != d || p_.cols() != d) {
            throw config_error("LagrangianProjector: shape mismatch with space");
        }
        const double sa = (p_ - p_.adjoint()).cwiseAbs().maxCoeff();
        const double idem = (p_ * p_ - p_).cwiseAbs().maxCoeff();
        if (sa > 1e-10 || idem > 1e-10) {
            throw config_error("LagrangianProjector: not an orthogonal projector (sa " +
                               std::to_string(sa) + ", idem " + std::to_string(idem) + ")");
        }
        const MatC lag =
            space_.j() * p_ * space_.j().adjoint() - (MatC::Identity(d, d) - p_);
        const double defect = lag.cwiseAbs().maxCoeff();
        if (defect > 1e-10) {
            throw config_error("LagrangianProjector: J P J* != I - P, defect " +
                               std::to_string(defect));
        }
        p_ = 0.5 * (p_ + p_.adjoint()).eval();
    }

    const MatC& matrix() const { return p_; }
    const HermitianSymplecticSpace& space() const { return space_; }
    Eigen::Index rank() const { return space_.half_dim(); }

    /** Orthonormal frame of the Lagrangian subspace (graph frame). */
    MatC frame() const {
        const MatC phi = graph_unitary();
        return (space_.basis_plus() + space_.basis_minus() * phi) / std::sqrt(2.0);
    }

    /**
     * The graph unitary Phi with Im P = { v + Phi v : v in H+ } in the
     * deterministic bases of the space; certified unitary.
     */
    MatC graph_unitary() const {
        const MatC phi =
            2.0 * (space_.basis_minus().adjoint() * p_ * space_.basis_plus());
        const Eigen::Index m = space_.half_dim();
        const double defect =
            (phi.adjoint() * phi - MatC::Identity(m, m)).cwiseAbs().maxCoeff();
        if (defect > 1e-9) {
            throw consistency_error("LagrangianProjector: graph unitary defect " +
                                    std::to_string(defect));
        }
        return phi;
    }

private:
    MatC p_;
    HermitianSymplecticSpace space_;
};

/**
 * Lagrangian projector from a graph unitary Phi : H+ -> H- in the space's
 * deterministic bases: the projector onto { v + Phi v : v in H+ }.
 *
 * @throws config_error when Phi is not unitary of the right size
 */
inline LagrangianProjector lagrangian_from_unitary(const MatC& phi,
                                                   const HermitianSymplecticSpace& space) {
    const Eigen::Index m = space.half_dim();
    if (phi.rows() != m || phi.cols() != m) {
        throw config_error("lagrangian_from_unitary: graph unitary has wrong size");
    }
    if ((phi.adjoint() * phi - MatC::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10) {
        throw config_error("lagrangian_from_unitary: input not unitary");
    }
    const MatC frame = (space.basis_plus() + space.basis_minus() * phi) / std::sqrt(2.0);
    return LagrangianProjector(frame * frame.adjoint(), space);
}

/**
 * Lagrangian projector whose subspace is the column span of a full-rank
 * frame (columns need not be orthonormal; they are orthonormalized here).
 */
inline LagrangianProjector lagrangian_from_frame(const MatC& frame,
                                                 const HermitianSymplecticSpace& space) {
    if (frame.rows() != space.dim() || frame.cols() != space.half_dim()) {
        throw config_error("lagrangian_from_frame: frame has wrong shape");
    }
    Eigen::HouseholderQR<MatC> qr(frame);
    MatC q = MatC(qr.householderQ()) .leftCols(space.half_dim());
    // rank certificate: diagonal of R bounded away from zero
    const MatC r = qr.matrixQR().topRows(space.half_dim()).triangularView<Eigen::Upper>();
    for (Eigen::Index i = 0; i < r.rows(); ++i) {
        if (std::abs(r(i, i)) < 1e-10 * std::max(1.0, frame.cwiseAbs().maxCoeff())) {
            throw config_error("lagrangian_from_frame: frame is rank deficient");
        }
    }
    return LagrangianProjector(q * q.adjoint(), space);
}

/** Haar-like random Lagrangian via a random graph unitary. */
inline LagrangianProjector random_lagrangian(const HermitianSymplecticSpace& space,
                                             std::mt19937_64& rng) {
    const int m = static_cast<int>(space.half_dim());
    std::normal_distribution<double> gauss(0.0, 1.0);
    MatC z(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) z(i, j) = cxd(gauss(rng), gauss(rng));
    Eigen::HouseholderQR<MatC> qr(z);
    MatC q = qr.householderQ();
    MatC r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < m; ++i) {
        const cxd d = r(i, i);
        const double a = std::abs(d);
        q.col(i) *= (a > 0.0) ? (d / a) : cxd(1.0, 0.0);
    }
    return lagrangian_from_unitary(q, space);
}

/**
 * A path of Lagrangian projectors on a shared t-grid. Analyses pair two
 * such paths (P(t), Q(t)); in finite dimension every pair is Fredholm.
 */
struct LagrangianPath {
    std::vector<double> times;
    std::vector<LagrangianProjector> projectors;
    std::function<LagrangianProjector(double)> generator;  // may be empty
    std::string label = "lagrangian-path";

    std::size_t size() const { return times.size(); }

    void validate() const {
        if (times.size() < 2) throw config_error("LagrangianPath: need at least 2 points");
        if (times.size() != projectors.size()) {
            throw config_error("LagrangianPath: grid/projector count mismatch");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw config_error("LagrangianPath: grid must be strictly increasing");
            }
            if (!projectors[i].space().compatible_with(projectors.front().space())) {
                throw config_error("LagrangianPath: space changes along path");
            }
        }
    }

    static LagrangianPath from_generator(std::function<LagrangianProjector(double)> gen,
                                         int n_steps, std::string label = "lagrangian-path") {
        if (n_steps < 1) throw config_error("LagrangianPath: need at least 1 step");
        LagrangianPath p;
        p.label = std::move(label);
        p.generator = std::move(gen);
        for (int i = 0; i <= n_steps; ++i) {
            const double t = static_cast<double>(i) / n_steps;
            p.times.push_back(t);
            p.projectors.push_back(p.generator(t));
        }
        p.validate();
        return p;
    }

    /** Constant path sitting at one projector over [0,1]. */
    static LagrangianPath constant(const LagrangianProjector& proj, int n_steps = 8,
                                   std::string label = "constant") {
        auto gen = [proj](double) { return proj; };
        return from_generator(gen, n_steps, std::move(label));
    }

    /** Orientation-reversed path. */
    LagrangianPath reversed() const {
        validate();
        LagrangianPath p;
        p.label = label + " (reversed)";
        const double t0 = times.front();
        const double t1 = times.back();
        for (std::size_t i = times.size(); i-- > 0;) {
            p.times.push_back(t0 + t1 - times[i]);
            p.projectors.push_back(projectors[i]);
        }
        if (generator) {
            p.generator = [g = generator, t0, t1](double t) { return g(t0 + t1 - t); };
        }
        p.validate();
        return p;
    }
};

/**
 * Geodesic path of Lagrangians from A to B: the graph unitary moves along
 * Phi_A exp(t Log(Phi_A* Phi_B)) with the principal logarithm.
 */
inline LagrangianPath geodesic_lagrangian_path(const LagrangianProjector& a,
                                               const LagrangianProjector& b,
                                               int n_steps = 32,
                                               std::string label = "geodesic") {
    if (!a.space().compatible_with(b.space())) {
        throw config_error("geodesic_lagrangian_path: incompatible spaces");
    }
    const HermitianSymplecticSpace space = a.space();
    const MatC phi_a = a.graph_unitary();
    const MatC phi_b = b.graph_unitary();
    const MatC rel = phi_a.adjoint() * phi_b;
    // principal logarithm of a unitary matrix through its spectral form
    Eigen::ComplexEigenSolver<MatC> es(rel);
    if (es.info() != Eigen::Success) {
        throw itlab_error("geodesic_lagrangian_path: eigensolver failed");
    }
    const MatC v = es.eigenvectors();
    VecC log_diag(rel.rows());
    for (Eigen::Index i = 0; i < rel.rows(); ++i) {
        const cxd w = es.eigenvalues()(i);
        log_diag(i) = cxd(0.0, std::arg(w));
    }
    const MatC vinv = v.inverse();
    auto gen = [space, phi_a, v, log_diag, vinv](double t) {
        VecC d(log_diag.size());
        for (Eigen::Index i = 0; i < log_diag.size(); ++i) {
            d(i) = std::exp(t * log_diag(i));
        }
        MatC phi_t = phi_a * (v * d.asDiagonal() * vinv);
        // re-unitarize against accumulation of the non-normal eigenbasis error
        Eigen::JacobiSVD<MatC> svd(phi_t, Eigen::ComputeThinU | Eigen::ComputeThinV);
        phi_t = svd.matrixU() * svd.matrixV().adjoint();
        return lagrangian_from_unitary(phi_t, space);
    };
    return LagrangianPath::from_generator(gen, n_steps, std::move(label));
}

}  // namespace itlab

#endif  // ITLAB_MASLOV_GRASSMANN_HPP
