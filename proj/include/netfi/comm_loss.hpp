#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "netfi/rng.hpp"

namespace netfi {

/// Extended-outage model: in the idle phase each packet may trigger a loss
/// window of uniform duration during which every packet is dropped; a
/// cooldown follows during which no new loss can start.
struct CommLossParams {
    double trigger_prob;    // per-packet while idle, in [0, 1]
    double duration_min_ms; // L lower bound
    double duration_max_ms; // L upper bound
    double cooldown_ms;     // C

    CommLossParams(double trigger, double dur_min, double dur_max, double cooldown)
        : trigger_prob(trigger),
          duration_min_ms(dur_min),
          duration_max_ms(dur_max),
          cooldown_ms(cooldown) {
        if (!(trigger_prob >= 0.0 && trigger_prob <= 1.0))
            throw std::invalid_argument("comm loss trigger probability must be in [0, 1]");
        if (!(duration_min_ms >= 0.0) || !(duration_max_ms >= duration_min_ms))
            throw std::invalid_argument("comm loss durations need 0 <= min <= max");
        if (!(cooldown_ms >= 0.0) || !std::isfinite(cooldown_ms))
            throw std::invalid_argument("comm loss cooldown must be a nonnegative finite real");
    }

    double expected_duration_ms() const { return 0.5 * (duration_min_ms + duration_max_ms); }

    friend bool operator==(const CommLossParams& a, const CommLossParams& b) {
        return a.trigger_prob == b.trigger_prob && a.duration_min_ms == b.duration_min_ms &&
               a.duration_max_ms == b.duration_max_ms && a.cooldown_ms == b.cooldown_ms;
    }
};

/// Long-run drop fraction of a stream with the given packet spacing. The
/// cycle is mean idle wait (interval / trigger_prob) + loss window + cooldown;
/// as the wait vanishes this is E[L] / (E[L] + C). Zero trigger probability
/// means no loss ever starts, so the rate is 0 by convention.
inline double commloss_expected_rate(const CommLossParams& p, double packet_interval_ms) {
    if (!(packet_interval_ms > 0.0))
        throw std::invalid_argument("packet interval must be > 0");
    if (p.trigger_prob == 0.0) return 0.0;
    double mean_loss = p.expected_duration_ms();
    return mean_loss / (mean_loss + p.cooldown_ms + packet_interval_ms / p.trigger_prob);
}

/// Packet-driven state machine; phases idle -> in_loss -> cooldown -> idle.
/// Judged by wall-clock window membership, not per-packet state.
class CommLoss {
public:
    enum class Phase { Idle, InLoss, Cooldown };

    struct Event {
        double start_ms;
        double duration_ms;
    };

    explicit CommLoss(CommLossParams params, RngStream rng, std::size_t event_capacity = 1 << 16)
        : params_(std::move(params)), rng_(std::move(rng)), event_capacity_(event_capacity) {}

    /// Judge one packet arriving at now_ms (monotone non-decreasing across
    /// calls); true means drop.
    bool advance(double now_ms) {
        if (phase_ == Phase::InLoss) {
            if (now_ms < window_end_ms_) return true;
            phase_ = Phase::Cooldown;
        }
        if (phase_ == Phase::Cooldown) {
            if (now_ms < cooldown_end_ms_) return false;
            phase_ = Phase::Idle;
        }
        if (rng_.uniform01() < params_.trigger_prob) {
            double duration = rng_.uniform(params_.duration_min_ms, params_.duration_max_ms);
            window_end_ms_ = now_ms + duration;
            cooldown_end_ms_ = window_end_ms_ + params_.cooldown_ms;
            phase_ = Phase::InLoss;
            record_event(now_ms, duration);
            // the trigger packet sits inside [now, now + L) unless L == 0
            return duration > 0.0;
        }
        return false;
    }

    Phase phase() const { return phase_; }
    const CommLossParams& params() const { return params_; }
    std::uint64_t total_events() const { return total_events_; }

    /// Most recent loss events, oldest first (ring of event_capacity).
    std::vector<Event> recent_events() const {
        std::vector<Event> out;
        out.reserve(events_.size());
        std::size_t start = events_.size() < event_capacity_ ? 0 : next_slot_;
        for (std::size_t i = 0; i < events_.size(); ++i)
            out.push_back(events_[(start + i) % events_.size()]);
        return out;
    }

private:
    void record_event(double start, double duration) {
        ++total_events_;
        if (events_.size() < event_capacity_) {
            events_.push_back({start, duration});
        } else {
            events_[next_slot_] = {start, duration};
            next_slot_ = (next_slot_ + 1) % event_capacity_;
        }
    }

    CommLossParams params_;
    RngStream rng_;
    Phase phase_ = Phase::Idle;
    double window_end_ms_ = 0.0;
    double cooldown_end_ms_ = 0.0;
    std::vector<Event> events_;
    std::size_t event_capacity_;
    std::size_t next_slot_ = 0;
    std::uint64_t total_events_ = 0;
};

} // namespace netfi
