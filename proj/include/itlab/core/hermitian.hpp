#ifndef ITLAB_CORE_HERMITIAN_HPP
#define ITLAB_CORE_HERMITIAN_HPP
//
// Module      : core/hermitian
// Description : Hermitian operator carrier (dense matrix or exactly
//               known spectrum family) and the eigendecomposition
//               contract used by every downstream invariant
//

#include <algorithm>
#include <functional>
#include <utility>

#include "itlab/core/types.hpp"

#ifdef ITLAB_USE_LAPACKE
#include <lapacke.h>
#endif

namespace itlab {

// ------------------------------------------------------------------
// HermitianOperatorModel
//
// A self-adjoint operator presented either as a dense Hermitian
// matrix or as an exactly known spectrum family (an indexed
// eigenvalue rule with a lattice range and a uniform multiplicity).
// ------------------------------------------------------------------
class HermitianOperatorModel {
public:
    enum class Kind { dense_matrix, exact_spectrum };

    // dense constructor: validates the Hermiticity invariant
    explicit HermitianOperatorModel(MatC m, double herm_tol = tol::hermiticity)
        : kind_(Kind::dense_matrix), matrix_(std::move(m)) {
        const double scale = std::max(1.0, matrix_.cwiseAbs().maxCoeff());
        const double defect = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
        if (defect > herm_tol * scale)
            throw symmetry_error("dense operator fails Hermiticity: defect " +
                                 std::to_string(defect) + " exceeds " +
                                 std::to_string(herm_tol * scale));
        // fold roundoff asymmetry so downstream solvers see an exact input
        matrix_ = 0.5 * (matrix_ + matrix_.adjoint()).eval();
    }

    // exact-spectrum constructor: eigenvalue rule on k in [k_min, k_max]
    HermitianOperatorModel(std::function<double(long)> rule, long k_min, long k_max,
                           int multiplicity = 1)
        : kind_(Kind::exact_spectrum), rule_(std::move(rule)),
          k_min_(k_min), k_max_(k_max), multiplicity_(multiplicity) {
        if (k_min_ > k_max_ || multiplicity_ < 1)
            throw config_error("exact-spectrum model: empty lattice range or bad multiplicity");
    }

    Kind kind() const { return kind_; }
    bool is_dense() const { return kind_ == Kind::dense_matrix; }

    const MatC& matrix() const {
        if (!is_dense()) throw config_error("matrix() called on exact-spectrum model");
        return matrix_;
    }
    Eigen::Index dim() const {
        return is_dense() ? matrix_.rows()
                          : Eigen::Index((k_max_ - k_min_ + 1) * multiplicity_);
    }

    long k_min() const { return k_min_; }
    long k_max() const { return k_max_; }
    int multiplicity() const { return multiplicity_; }

    // eigenvalue rule access (exact kind); values are real by contract
    double eigenvalue_at(long k) const {
        if (is_dense()) throw config_error("eigenvalue_at() called on dense model");
        return rule_(k);
    }

    // full sorted eigenvalue list of the exact family over its lattice range
    std::vector<double> exact_eigenvalues() const {
        if (is_dense()) throw config_error("exact_eigenvalues() called on dense model");
        std::vector<double> out;
        out.reserve(std::size_t(dim()));
        for (long k = k_min_; k <= k_max_; ++k)
            for (int m = 0; m < multiplicity_; ++m) out.push_back(rule_(k));
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    Kind kind_;
    MatC matrix_;
    std::function<double(long)> rule_;
    long k_min_ = 0, k_max_ = -1;
    int multiplicity_ = 1;
};

// ------------------------------------------------------------------
// eigendecomposition result: ascending eigenvalues, orthonormal columns
// ------------------------------------------------------------------
struct EigenSystem {
    VecR values;   // ascending
    MatC vectors;  // column i pairs with values[i]
};

namespace detail {

// Backend kernel: ascending eigenvalues, optionally with vectors.  When a
// LAPACKE build is enabled the divide-and-conquer driver is used (it is
// several times faster than the default QR iteration on the dense sizes the
// assembled boundary problems produce); any driver failure falls back to the
// reference solver so the numerical contract never depends on the backend.
inline EigenSystem hermitian_eigen_kernel(const MatC& a, bool with_vectors) {
#ifdef ITLAB_USE_LAPACKE
    const auto n = a.rows();
    if (n > 0) {
        MatC work = a;  // column-major; overwritten with vectors for job 'V'
        VecR w(n);
        const int info = LAPACKE_zheevd(
            LAPACK_COL_MAJOR, with_vectors ? 'V' : 'N', 'L', lapack_int(n),
            reinterpret_cast<lapack_complex_double*>(work.data()), lapack_int(n),
            w.data());
        if (info == 0) {
            if (with_vectors) return EigenSystem{std::move(w), std::move(work)};
            return EigenSystem{std::move(w), MatC()};
        }
    }
#endif
    Eigen::SelfAdjointEigenSolver<MatC> es(
        a, with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw itlab_error("eigendecomposition failed to converge");
    if (with_vectors) return EigenSystem{es.eigenvalues(), es.eigenvectors()};
    return EigenSystem{es.eigenvalues(), MatC()};
}

}  // namespace detail

// Ascending eigenvalues of a Hermitian matrix, no vectors (cheap path for
// counting and flow routines).  Input must already be Hermitian.
inline VecR hermitian_eigenvalues(const MatC& a) {
    return detail::hermitian_eigen_kernel(a, /*with_vectors=*/false).values;
}

// Dense Hermitian eigendecomposition with a reconstruction certificate.
// Rejects non-Hermitian input (the model constructor already guards this;
// the defect check here also covers hand-built matrices).
inline EigenSystem eigendecompose(const HermitianOperatorModel& H) {
    const MatC& A = H.matrix();
    EigenSystem out = detail::hermitian_eigen_kernel(A, /*with_vectors=*/true);
    const double scale = std::max(1.0, A.norm());
    const double recon = (A - out.vectors *
                                  out.values.asDiagonal() *
                                  out.vectors.adjoint()).norm();
    if (recon > tol::reconstruction * scale)
        throw itlab_error("eigendecomposition reconstruction defect " +
                          std::to_string(recon / scale) + " exceeds contract");
    return out;
}

// convenience overload for raw matrices (runs the Hermiticity guard)
inline EigenSystem eigendecompose(const MatC& A, double herm_tol = tol::hermiticity) {
    return eigendecompose(HermitianOperatorModel(A, herm_tol));
}

}  // namespace itlab

#endif  // ITLAB_CORE_HERMITIAN_HPP
