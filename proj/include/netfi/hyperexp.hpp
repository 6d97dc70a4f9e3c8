#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "netfi/rng.hpp"

namespace netfi {

/// Total delay D = d_min + X where X is hyperexponential: a mixture of n
/// exponentials picked by weight. d_min is the fixed baseline (hardware and
/// transmission overhead); weights must sum to one.
struct HyperExpParams {
    double d_min_ms;
    std::vector<double> weights; // dimensionless, sum to 1 within 1e-9
    std::vector<double> rates;   // per ms

    HyperExpParams(double d_min, std::vector<double> w, std::vector<double> r)
        : d_min_ms(d_min), weights(std::move(w)), rates(std::move(r)) {
        if (!(d_min_ms >= 0.0) || !std::isfinite(d_min_ms))
            throw std::invalid_argument("hyperexp d_min must be a nonnegative finite real");
        if (weights.empty() || weights.size() != rates.size())
            throw std::invalid_argument("hyperexp needs matching, non-empty weight and rate lists");
        double sum = 0.0;
        for (double wi : weights) {
            if (!(wi > 0.0) || !std::isfinite(wi))
                throw std::invalid_argument("hyperexp weights must be positive finite reals");
            sum += wi;
        }
        if (std::abs(sum - 1.0) > 1e-9)
            throw std::invalid_argument("hyperexp weights must sum to 1");
        for (double li : rates)
            if (!(li > 0.0) || !std::isfinite(li))
                throw std::invalid_argument("hyperexp rates must be positive finite reals");
    }

    /// Same, but rescales the weights to sum to one first.
    static HyperExpParams normalized(double d_min, std::vector<double> w, std::vector<double> r) {
        double sum = 0.0;
        for (double wi : w) sum += wi;
        if (!(sum > 0.0) || !std::isfinite(sum))
            throw std::invalid_argument("hyperexp weights must have a positive finite sum");
        for (double& wi : w) wi /= sum;
        return HyperExpParams(d_min, std::move(w), std::move(r));
    }

    std::size_t branches() const { return weights.size(); }

    /// E[D] = d_min + sum w_i / rate_i.
    double mean_ms() const {
        double m = d_min_ms;
        for (std::size_t i = 0; i < weights.size(); ++i) m += weights[i] / rates[i];
        return m;
    }

    /// Density of the random part X at x >= 0.
    double pdf_excess(double x) const {
        if (x < 0.0) return 0.0;
        double f = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            f += weights[i] * rates[i] * std::exp(-rates[i] * x);
        return f;
    }

    /// CDF of the random part X.
    double cdf_excess(double x) const {
        if (x <= 0.0) return 0.0;
        double s = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i)
            s += weights[i] * std::exp(-rates[i] * x);
        return 1.0 - s;
    }

    /// Branch pick by weight, then exponential draw; result >= d_min.
    double sample(RngStream& rng) const {
        double u = rng.uniform01();
        std::size_t pick = weights.size() - 1;
        double acc = 0.0;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            acc += weights[i];
            if (u < acc) {
                pick = i;
                break;
            }
        }
        return d_min_ms + rng.exponential(rates[pick]);
    }

    friend bool operator==(const HyperExpParams& a, const HyperExpParams& b) {
        return a.d_min_ms == b.d_min_ms && a.weights == b.weights && a.rates == b.rates;
    }
};

inline double hyperexp_mean(const HyperExpParams& p) { return p.mean_ms(); }

inline double hyperexp_sample(const HyperExpParams& p, RngStream& rng) { return p.sample(rng); }

} // namespace netfi
