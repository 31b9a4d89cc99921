#ifndef ITLAB_FLOW_PATH_HPP
#define ITLAB_FLOW_PATH_HPP
//
// Module      : flow/path
// Description : one-parameter families of Hermitian operators sampled on a
//               t-grid, with an optional generator for adaptive refinement
//

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "itlab/core/hermitian.hpp"
#include "itlab/core/types.hpp"

namespace itlab {

/**
 * A path t -> H(t) of Hermitian operators over t in [0,1] (or any increasing
 * parameter grid). Operators may be dense matrices or exact-spectrum models;
 * a path must be homogeneous in kind and dimension.
 *
 * When a generator is present, analyses may evaluate the family between grid
 * points (bisection near crossings, matching-ambiguity refinement).
 */
struct OperatorPath {
    std::vector<double> times;
    std::vector<HermitianOperatorModel> operators;
    std::function<HermitianOperatorModel(double)> generator;  // may be empty
    std::string label = "path";

    /** Number of grid points. */
    std::size_t size() const { return times.size(); }

    /** Validate grid monotonicity and operator homogeneity. */
    void validate() const {
        if (times.size() < 2) throw config_error("OperatorPath: need at least 2 points");
        if (times.size() != operators.size()) {
            throw config_error("OperatorPath: grid/operator count mismatch");
        }
        for (std::size_t i = 1; i < times.size(); ++i) {
            if (!(times[i] > times[i - 1])) {
                throw config_error("OperatorPath: grid must be strictly increasing");
            }
        }
        for (std::size_t i = 1; i < operators.size(); ++i) {
            if (operators[i].kind() != operators.front().kind()) {
                throw config_error("OperatorPath: mixed operator kinds");
            }
            if (operators[i].is_dense() &&
                operators[i].dim() != operators.front().dim()) {
                throw config_error("OperatorPath: dimension changes along path");
            }
        }
    }

    /**
     * Build a path by sampling a generator on a uniform grid over [0,1].
     */
    static OperatorPath from_generator(std::function<HermitianOperatorModel(double)> gen,
                                       int n_steps, std::string label = "path") {
        if (n_steps < 1) throw config_error("OperatorPath: need at least 1 step");
        OperatorPath p;
        p.label = std::move(label);
        p.generator = std::move(gen);
        p.times.reserve(static_cast<std::size_t>(n_steps + 1));
        p.operators.reserve(static_cast<std::size_t>(n_steps + 1));
        for (int i = 0; i <= n_steps; ++i) {
            const double t = static_cast<double>(i) / n_steps;
            p.times.push_back(t);
            p.operators.push_back(p.generator(t));
        }
        p.validate();
        return p;
    }

    /** Convenience overload for dense-matrix generators. */
    static OperatorPath from_dense_generator(std::function<MatC(double)> gen,
                                             int n_steps, std::string label = "path") {
        auto wrapped = [g = std::move(gen)](double t) {
            return HermitianOperatorModel(g(t));
        };
        return from_generator(wrapped, n_steps, std::move(label));
    }

    /** Orientation-reversed path (t -> 1-t on a [0,1] grid). */
    OperatorPath reversed() const {
        OperatorPath p;
        p.label = label + " (reversed)";
        const double t0 = times.front();
        const double t1 = times.back();
        for (std::size_t i = times.size(); i-- > 0;) {
            p.times.push_back(t0 + t1 - times[i]);
            p.operators.push_back(operators[i]);
        }
        if (generator) {
            p.generator = [g = generator, t0, t1](double t) { return g(t0 + t1 - t); };
        }
        p.validate();
        return p;
    }
};

/**
 * Concatenate two paths end to end; the second grid is shifted to start at
 * the end of the first. The junction operators must agree in dimension; the
 * caller is responsible for junction invertibility where an analysis needs it.
 */
inline OperatorPath concatenate(const OperatorPath& a, const OperatorPath& b) {
    a.validate();
    b.validate();
    if (a.operators.back().is_dense() && b.operators.front().is_dense()) {
        const MatC& ja = a.operators.back().matrix();
        const MatC& jb = b.operators.front().matrix();
        const double scale = std::max(1.0, ja.cwiseAbs().maxCoeff());
        if (ja.rows() != jb.rows() ||
            (ja - jb).cwiseAbs().maxCoeff() > 1e-9 * scale) {
            throw config_error("concatenate: junction operators disagree");
        }
    }
    OperatorPath p;
    p.label = a.label + " * " + b.label;
    p.times = a.times;
    p.operators = a.operators;
    const double shift = a.times.back() - b.times.front();
    for (std::size_t i = 0; i < b.times.size(); ++i) {
        const double t = b.times[i] + shift;
        if (i == 0) continue;  // junction point kept once (from path a)
        p.times.push_back(t);
        p.operators.push_back(b.operators[i]);
    }
    p.validate();
    return p;
}

}  // namespace itlab

#endif  // ITLAB_FLOW_PATH_HPP
