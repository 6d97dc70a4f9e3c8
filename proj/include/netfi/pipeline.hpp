#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "netfi/comm_loss.hpp"
#include "netfi/gilbert_elliott.hpp"
#include "netfi/hyperexp.hpp"
#include "netfi/packet.hpp"
#include "netfi/rng.hpp"

namespace netfi {

enum class DegradationType { PacketLoss, Delay, CommLoss };

inline const char* to_string(DegradationType t) {
    switch (t) {
        case DegradationType::PacketLoss: return "packet_loss";
        case DegradationType::Delay: return "delay";
        case DegradationType::CommLoss: return "comm_loss";
    }
    return "unknown";
}

inline std::optional<DegradationType> degradation_type_from_string(const std::string& s) {
    if (s == "packet_loss") return DegradationType::PacketLoss;
    if (s == "delay") return DegradationType::Delay;
    if (s == "comm_loss") return DegradationType::CommLoss;
    return std::nullopt;
}

using ModelParams = std::variant<GilbertElliottParams, HyperExpParams, CommLossParams>;

inline DegradationType model_type(const ModelParams& p) {
    if (std::holds_alternative<GilbertElliottParams>(p)) return DegradationType::PacketLoss;
    if (std::holds_alternative<HyperExpParams>(p)) return DegradationType::Delay;
    return DegradationType::CommLoss;
}

/// One materialized stage: resolved model parameters plus the seed of the
/// stage-owned random stream.
struct StageConfig {
    ModelParams params;
    std::uint64_t seed = 0;

    DegradationType type() const { return model_type(params); }

    friend bool operator==(const StageConfig& a, const StageConfig& b) {
        return a.seed == b.seed && a.params == b.params;
    }
};

struct StageStats {
    DegradationType type = DegradationType::PacketLoss;
    std::uint64_t seen = 0;
    std::uint64_t dropped = 0;
    std::uint64_t delayed = 0;
    std::uint64_t loss_events = 0;          // comm-loss windows opened
    double injected_delay_ms_total = 0.0;
};

struct PipelineStats {
    std::uint64_t received = 0;
    std::uint64_t dropped = 0;
    std::uint64_t forwarded = 0;
    std::uint64_t in_flight = 0;
    std::uint64_t delayed = 0;
    double mean_injected_delay_ms = 0.0;
    std::map<std::uint64_t, std::uint64_t> burst_histogram; // completed drop runs
    std::vector<StageStats> stages;

    std::uint64_t accounted() const { return dropped + forwarded + in_flight; }
};

/// Ordered fault stages plus the time-ordered release buffer. One agent feeds
/// judge(), one drains the schedule; they share only the buffer. Stats reads
/// may be slightly stale but are never torn.
class InjectionPipeline {
public:
    InjectionPipeline() = default;

    explicit InjectionPipeline(std::vector<StageConfig> configs) {
        for (auto& c : configs) add_stage(std::move(c));
    }

    InjectionPipeline(InjectionPipeline&& other) noexcept
        : stages_(std::move(other.stages_)),
          buffer_(std::move(other.buffer_)),
          counters_(other.counters_),
          burst_histogram_(std::move(other.burst_histogram_)),
          current_run_(other.current_run_) {}

    void add_stage(StageConfig config) {
        if (config.type() == DegradationType::Delay) {
            for (const auto& s : stages_)
                if (s.config.type() == DegradationType::Delay)
                    throw std::logic_error("pipeline admits at most one delay stage");
        }
        stages_.push_back(Stage::make(std::move(config)));
    }

    bool empty() const { return stages_.empty(); }

    std::vector<StageConfig> stage_configs() const {
        std::vector<StageConfig> out;
        out.reserve(stages_.size());
        for (const auto& s : stages_) out.push_back(s.config);
        return out;
    }

    /// Assign a degradation status. Loss stages may short-circuit with a
    /// drop; the delay stage schedules release at
    /// max(arrival + sampled delay, previous release), so the forwarded
    /// sub-sequence keeps arrival order. Delayed packets are buffered here
    /// until drain_ready().
    Verdict judge(const PacketEnvelope& packet) {
        Verdict verdict = Verdict::normal();
        {
            std::lock_guard<std::mutex> lock(stats_mutex_);
            ++counters_.received;
            for (auto& stage : stages_) {
                ++stage.stats.seen;
                if (auto* ge = std::get_if<GilbertElliott>(&stage.machine)) {
                    if (ge->advance()) {
                        ++stage.stats.dropped;
                        verdict = Verdict::dropped();
                        break;
                    }
                } else if (auto* cl = std::get_if<CommLoss>(&stage.machine)) {
                    std::uint64_t before = cl->total_events();
                    bool drop = cl->advance(static_cast<double>(packet.arrival_us) / 1000.0);
                    stage.stats.loss_events += cl->total_events() - before;
                    if (drop) {
                        ++stage.stats.dropped;
                        verdict = Verdict::dropped();
                        break;
                    }
                } else {
                    auto& delay = std::get<DelayMachine>(stage.machine);
                    double delay_ms = delay.params.sample(delay.rng);
                    std::int64_t release =
                        packet.arrival_us + static_cast<std::int64_t>(std::llround(delay_ms * 1000.0));
                    if (release < delay.prev_release_us) release = delay.prev_release_us;
                    delay.prev_release_us = release;
                    ++stage.stats.delayed;
                    stage.stats.injected_delay_ms_total +=
                        static_cast<double>(release - packet.arrival_us) / 1000.0;
                    verdict = Verdict::delayed_until(release);
                }
            }
            switch (verdict.status) {
                case VerdictStatus::Normal:
                    ++counters_.forwarded;
                    close_run();
                    break;
                case VerdictStatus::Dropped:
                    ++counters_.dropped;
                    ++current_run_;
                    break;
                case VerdictStatus::Delayed:
                    ++counters_.in_flight;
                    ++counters_.delayed;
                    counters_.injected_delay_us_total += verdict.release_us - packet.arrival_us;
                    close_run();
                    break;
            }
        }
        if (verdict.status == VerdictStatus::Delayed) {
            std::lock_guard<std::mutex> lock(buffer_mutex_);
            buffer_.push_back({verdict.release_us, packet});
        }
        return verdict;
    }

    /// All buffered packets with release_time <= now, in sequence order.
    std::vector<PacketEnvelope> drain_ready(std::int64_t now_us) {
        std::vector<PacketEnvelope> out;
        {
            std::lock_guard<std::mutex> lock(buffer_mutex_);
            while (!buffer_.empty() && buffer_.front().release_us <= now_us) {
                out.push_back(std::move(buffer_.front().packet));
                buffer_.pop_front();
            }
        }
        settle_forwarded(out.size());
        return out;
    }

    /// Flush everything still scheduled, regardless of release time.
    std::vector<PacketEnvelope> drain_all() {
        std::vector<PacketEnvelope> out;
        {
            std::lock_guard<std::mutex> lock(buffer_mutex_);
            for (auto& e : buffer_) out.push_back(std::move(e.packet));
            buffer_.clear();
        }
        settle_forwarded(out.size());
        return out;
    }

    /// Discard everything still scheduled; the packets count as dropped.
    std::size_t discard_pending() {
        std::size_t n = 0;
        {
            std::lock_guard<std::mutex> lock(buffer_mutex_);
            n = buffer_.size();
            buffer_.clear();
        }
        std::lock_guard<std::mutex> lock(stats_mutex_);
        counters_.in_flight -= n;
        counters_.dropped += n;
        return n;
    }

    /// Release time of the earliest scheduled packet. Release times are
    /// monotone, so nothing can preempt the head.
    std::optional<std::int64_t> next_release_us() const {
        std::lock_guard<std::mutex> lock(buffer_mutex_);
        if (buffer_.empty()) return std::nullopt;
        return buffer_.front().release_us;
    }

    std::size_t in_flight() const {
        std::lock_guard<std::mutex> lock(buffer_mutex_);
        return buffer_.size();
    }

    PipelineStats stats() const {
        PipelineStats out;
        std::scoped_lock lock(stats_mutex_, buffer_mutex_);
        out.received = counters_.received;
        out.dropped = counters_.dropped;
        out.forwarded = counters_.forwarded;
        out.in_flight = counters_.in_flight;
        out.delayed = counters_.delayed;
        out.mean_injected_delay_ms =
            counters_.delayed == 0
                ? 0.0
                : static_cast<double>(counters_.injected_delay_us_total) /
                      (1000.0 * static_cast<double>(counters_.delayed));
        out.burst_histogram = burst_histogram_;
        out.stages.reserve(stages_.size());
        for (const auto& s : stages_) out.stages.push_back(s.stats);
        return out;
    }

private:
    struct DelayMachine {
        HyperExpParams params;
        RngStream rng;
        std::int64_t prev_release_us = 0;
    };

    using Machine = std::variant<GilbertElliott, DelayMachine, CommLoss>;

    struct Stage {
        StageConfig config;
        Machine machine;
        StageStats stats;

        static Stage make(StageConfig config) {
            RngStream rng(config.seed);
            Machine machine = std::visit(
                [&rng](const auto& params) -> Machine {
                    using P = std::decay_t<decltype(params)>;
                    if constexpr (std::is_same_v<P, GilbertElliottParams>)
                        return GilbertElliott(params, std::move(rng));
                    else if constexpr (std::is_same_v<P, HyperExpParams>)
                        return DelayMachine{params, std::move(rng), 0};
                    else
                        return CommLoss(params, std::move(rng));
                },
                config.params);
            StageStats stats;
            stats.type = config.type();
            return Stage{std::move(config), std::move(machine), stats};
        }
    };

    struct Scheduled {
        std::int64_t release_us;
        PacketEnvelope packet;
    };

    struct Counters {
        std::uint64_t received = 0;
        std::uint64_t dropped = 0;
        std::uint64_t forwarded = 0;
        std::uint64_t in_flight = 0;
        std::uint64_t delayed = 0;
        std::int64_t injected_delay_us_total = 0;
    };

    void close_run() {
        if (current_run_ > 0) {
            ++burst_histogram_[current_run_];
            current_run_ = 0;
        }
    }

    void settle_forwarded(std::size_t n) {
        if (n == 0) return;
        std::lock_guard<std::mutex> lock(stats_mutex_);
        counters_.in_flight -= n;
        counters_.forwarded += n;
    }

    std::vector<Stage> stages_;
    std::deque<Scheduled> buffer_;
    Counters counters_;
    std::map<std::uint64_t, std::uint64_t> burst_histogram_;
    std::uint64_t current_run_ = 0;
    mutable std::mutex stats_mutex_;
    mutable std::mutex buffer_mutex_;
};

} // namespace netfi
