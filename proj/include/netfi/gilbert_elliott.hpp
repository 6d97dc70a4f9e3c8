#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include "netfi/lomax.hpp"
#include "netfi/rng.hpp"

namespace netfi {

/// Four-state Gilbert-Elliott chain, semi-Markov flavor: each state holds a
/// Lomax-distributed sojourn measured in packets (ceil, minimum 1); while in
/// a state every packet is dropped with that state's drop probability; on
/// sojourn expiry the row-stochastic transition matrix picks the next state.
///
/// State order: S0 Good, S1 Bad, S2/S3 intermediates. The default matrix and
/// intermediate parameters are placeholders (the literature values the source
/// models were tuned against are not public); every entry is configurable.
struct GilbertElliottParams {
    static constexpr std::size_t kStates = 4;

    using Matrix = std::array<std::array<double, kStates>, kStates>;

    Matrix transition;                          // applied on sojourn expiry
    std::array<LomaxParams, kStates> sojourn;   // sojourn lengths, packets
    std::array<double, kStates> drop_prob;      // per-packet drop probability

    GilbertElliottParams(const Matrix& transition_,
                         const std::array<LomaxParams, kStates>& sojourn_,
                         const std::array<double, kStates>& drop_prob_)
        : transition(transition_), sojourn(sojourn_), drop_prob(drop_prob_) {
        for (std::size_t i = 0; i < kStates; ++i) {
            double row_sum = 0.0;
            for (double pij : transition[i]) {
                if (!(pij >= 0.0 && pij <= 1.0))
                    throw std::invalid_argument("ge transition entries must be probabilities");
                row_sum += pij;
            }
            if (std::abs(row_sum - 1.0) > 1e-9)
                throw std::invalid_argument("ge transition rows must sum to 1");
            if (!(drop_prob[i] >= 0.0 && drop_prob[i] <= 1.0))
                throw std::invalid_argument("ge drop probabilities must be in [0, 1]");
        }
        // Good never drops more than an intermediate, Bad never less.
        for (std::size_t i = 2; i < kStates; ++i) {
            if (drop_prob[0] > drop_prob[i] || drop_prob[i] > drop_prob[1])
                throw std::invalid_argument(
                    "ge drop probabilities must satisfy good <= intermediates <= bad");
        }
    }

    static Matrix default_transition() {
        Matrix m{};
        const double off = 0.1 / 3.0;
        for (std::size_t i = 0; i < kStates; ++i)
            for (std::size_t j = 0; j < kStates; ++j) m[i][j] = (i == j) ? 0.9 : off;
        return m;
    }

    static LomaxParams default_intermediate_sojourn() { return LomaxParams(4.0, 1.0); }

    static std::array<double, kStates> default_drop_prob() { return {0.0, 1.0, 0.25, 0.75}; }

    /// Good/bad sojourns as given, everything else at the documented defaults.
    static GilbertElliottParams with_defaults(const LomaxParams& good, const LomaxParams& bad) {
        return GilbertElliottParams(
            default_transition(),
            {good, bad, default_intermediate_sojourn(), default_intermediate_sojourn()},
            default_drop_prob());
    }

    friend bool operator==(const GilbertElliottParams& a, const GilbertElliottParams& b) {
        return a.transition == b.transition && a.sojourn == b.sojourn &&
               a.drop_prob == b.drop_prob;
    }
};

/// Per-packet state machine. Single-owner; not safe for concurrent mutation.
class GilbertElliott {
public:
    GilbertElliott(GilbertElliottParams params, RngStream rng)
        : params_(std::move(params)), rng_(std::move(rng)) {
        enter_state(0); // start in Good with a drawn sojourn
    }

    /// Judge one packet; true means drop. Consumes one sojourn slot and, on
    /// expiry of the previous sojourn, first transitions and redraws.
    bool advance() {
        if (sojourn_left_ == 0) enter_state(next_state());
        --sojourn_left_;
        return rng_.uniform01() < params_.drop_prob[state_];
    }

    std::size_t state() const { return state_; }
    std::uint64_t sojourn_left() const { return sojourn_left_; }
    const GilbertElliottParams& params() const { return params_; }

private:
    void enter_state(std::size_t s) {
        state_ = s;
        double len = params_.sojourn[s].sample(rng_);
        double up = std::ceil(len);
        sojourn_left_ = up < 1.0 ? 1 : static_cast<std::uint64_t>(up);
    }

    std::size_t next_state() {
        double u = rng_.uniform01();
        double acc = 0.0;
        for (std::size_t j = 0; j < GilbertElliottParams::kStates; ++j) {
            acc += params_.transition[state_][j];
            if (u < acc) return j;
        }
        return GilbertElliottParams::kStates - 1; // row sums to 1 within 1e-9
    }

    GilbertElliottParams params_;
    RngStream rng_;
    std::size_t state_ = 0;
    std::uint64_t sojourn_left_ = 0;
};

} // namespace netfi
