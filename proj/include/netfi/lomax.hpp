#pragma once

#include <cmath>
#include <stdexcept>

#include "netfi/rng.hpp"

namespace netfi {

/// Pareto Type II (Lomax) distribution: heavy-tailed, supported on x > 0.
/// Models burst/sojourn lengths in packets. The mean is finite only for
/// shape > 1, where it equals scale / (shape - 1).
struct LomaxParams {
    double shape; // dimensionless
    double scale; // same unit as the samples (packets here)

    LomaxParams(double shape_, double scale_) : shape(shape_), scale(scale_) {
        if (!(shape > 0.0) || !std::isfinite(shape))
            throw std::invalid_argument("lomax shape must be a positive finite real");
        if (!(scale > 0.0) || !std::isfinite(scale))
            throw std::invalid_argument("lomax scale must be a positive finite real");
    }

    bool has_finite_mean() const { return shape > 1.0; }

    double mean() const {
        if (!has_finite_mean())
            throw std::domain_error("lomax mean is finite only for shape > 1");
        return scale / (shape - 1.0);
    }

    double pdf(double x) const {
        if (x <= 0.0) return 0.0;
        return shape * std::pow(scale, shape) / std::pow(x + scale, shape + 1.0);
    }

    double cdf(double x) const {
        if (x <= 0.0) return 0.0;
        return 1.0 - std::pow(scale / (x + scale), shape);
    }

    /// Inverse CDF; strictly increasing in u, quantile(0) == 0.
    double quantile(double u) const {
        if (!(u >= 0.0 && u < 1.0))
            throw std::domain_error("lomax quantile argument must be in [0, 1)");
        return scale * (std::pow(1.0 - u, -1.0 / shape) - 1.0);
    }

    double sample(RngStream& rng) const { return quantile(rng.uniform01()); }

    friend bool operator==(const LomaxParams& a, const LomaxParams& b) {
        return a.shape == b.shape && a.scale == b.scale;
    }
};

/// Inverse transform sampling from a provided uniform variate.
inline double lomax_sample(const LomaxParams& p, double u) { return p.quantile(u); }

} // namespace netfi
