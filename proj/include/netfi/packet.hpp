#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace netfi {

/// An intercepted datagram. The payload is opaque: the pipeline never
/// inspects or mutates it. Timestamps are microseconds on a monotonic
/// timeline; sequence numbers strictly increase in arrival order.
struct PacketEnvelope {
    std::vector<std::byte> payload;
    std::int64_t arrival_us = 0;
    std::uint64_t sequence = 0;
    std::uint32_t source_id = 0;
    std::uint32_t destination_id = 0;
};

enum class VerdictStatus { Normal, Dropped, Delayed };

/// Per-packet degradation status. release_us is meaningful only for Delayed
/// and is never earlier than the packet's arrival.
struct Verdict {
    VerdictStatus status = VerdictStatus::Normal;
    std::int64_t release_us = 0;

    static Verdict normal() { return {VerdictStatus::Normal, 0}; }
    static Verdict dropped() { return {VerdictStatus::Dropped, 0}; }
    static Verdict delayed_until(std::int64_t release_us) {
        return {VerdictStatus::Delayed, release_us};
    }

    friend bool operator==(const Verdict& a, const Verdict& b) {
        return a.status == b.status &&
               (a.status != VerdictStatus::Delayed || a.release_us == b.release_us);
    }
};

inline const char* to_string(VerdictStatus s) {
    switch (s) {
        case VerdictStatus::Normal: return "normal";
        case VerdictStatus::Dropped: return "dropped";
        case VerdictStatus::Delayed: return "delayed";
    }
    return "unknown";
}

} // namespace netfi
