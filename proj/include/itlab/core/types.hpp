#ifndef ITLAB_CORE_TYPES_HPP
#define ITLAB_CORE_TYPES_HPP
//
// Module      : core/types
// Description : shared aliases, tolerances, and error taxonomy
//

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <sstream>
#include <vector>

#include <Eigen/Dense>

namespace itlab {

using cxd  = std::complex<double>;
using MatC = Eigen::MatrixXcd;
using MatR = Eigen::MatrixXd;
using VecC = Eigen::VectorXcd;
using VecR = Eigen::VectorXd;

// ------------------------------------------------------------------
// global tolerance policy. every integer decision in the library goes
// through one of these constants so the certified bounds are pinned
// in a single place.
// ------------------------------------------------------------------
namespace tol {
// relative Hermiticity defect accepted on input matrices
inline constexpr double hermiticity = 1e-12;
// relative defect accepted on assembled (discretized) operators
inline constexpr double assembly_hermiticity = 1e-9;
// eigendecomposition reconstruction bound, relative to the norm
inline constexpr double reconstruction = 1e-9;
// projector idempotency / self-adjointness defects
inline constexpr double projector_idem = 1e-10;
inline constexpr double projector_sa   = 1e-12;
// absolute zero-eigenvalue detection, scaled by the operator norm
inline constexpr double zero_eigenvalue = 1e-10;
// default singular-value cutoff for rank decisions
inline constexpr double rank_cutoff = 1e-8;
// required relative gap across the rank cutoff
inline constexpr double rank_gap_factor = 1e3;
// unitarity defect accepted on symbol samples
inline constexpr double unitarity = 1e-10;
// Fourier reconstruction defect accepted on band-limited symbols
inline constexpr double symbol_reconstruction = 1e-10;
}  // namespace tol

// ------------------------------------------------------------------
// error taxonomy: every contract violation is loud and typed.
// ------------------------------------------------------------------

// base class so callers can catch any laboratory error uniformly
struct itlab_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// input matrix not Hermitian within tolerance
struct symmetry_error : itlab_error {
    using itlab_error::itlab_error;
};

// eigenvalue straddling a spectral cut within numerical noise
struct ambiguity_error : itlab_error {
    using itlab_error::itlab_error;
};

// singular values clustered at the rank cutoff: integer not certified
struct unstable_rank_error : itlab_error {
    using itlab_error::itlab_error;
};

// iterative/extrapolated quantity failed its convergence certificate
struct convergence_error : itlab_error {
    using itlab_error::itlab_error;
};

// malformed scenario / preset / configuration input
struct config_error : itlab_error {
    using itlab_error::itlab_error;
};

// path-dependence or cross-route integer mismatch that must never be
// silently averaged away
struct consistency_error : itlab_error {
    using itlab_error::itlab_error;
};

// requested truncation / resolution too small to represent the input
struct truncation_error : itlab_error {
    using itlab_error::itlab_error;
};

// distance from x to the nearest integer (always in [0, 1/2])
inline double distance_to_integer(double x) {
    const double r = x - std::round(x);
    return std::abs(r);
}

// wrap an angle into the principal branch (-pi, pi]
inline double wrap_angle(double x) {
    const double pi     = std::numbers::pi;
    const double two_pi = 2.0 * pi;
    double y = std::fmod(x, two_pi);
    if (y <= -pi) y += two_pi;
    if (y > pi) y -= two_pi;
    return y;
}

// helper: render a list of reals into an error message
inline std::string format_list(const std::vector<double>& xs, std::size_t max_n = 12) {
    std::ostringstream os;
    os << "[";
    for (std::size_t i = 0; i < xs.size() && i < max_n; ++i) {
        if (i) os << ", ";
        os << xs[i];
    }
    if (xs.size() > max_n) os << ", ...";
    os << "]";
    return os.str();
}

}  // namespace itlab

#endif  // ITLAB_CORE_TYPES_HPP
