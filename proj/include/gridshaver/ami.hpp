#pragma once

#include "gridshaver/han.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

namespace gridshaver {

struct MeterReport {
    MeterReading reading;
};

struct GenReport {
    std::string site_id;
    double kw = 0.0;
    double timestamp = 0.0;
};

struct ShedCommand {
    std::string load_id;
    double timestamp = 0.0;
};

struct RestoreCommand {
    std::string load_id;
    double timestamp = 0.0;
};

using Message = std::variant<MeterReport, GenReport, ShedCommand, RestoreCommand>;

struct ChannelConfig {
    int latency_steps = 0;
    double drop_probability = 0.0;
    std::uint64_t seed = 0;
};

struct ChannelStats {
    std::uint64_t published = 0;
    std::uint64_t delivered = 0;
    std::uint64_t dropped = 0;
    std::uint64_t queued = 0;
};

/// Abstract AMI pathway between meters, generation sites, the head end and
/// load relays. Time is counted in engine steps. Delivery order is
/// (due step, publish order).
class Channel {
public:
    explicit Channel(ChannelConfig cfg = {});

    void publish(Message msg, std::int64_t step_now);
    std::vector<Message> poll_due(std::int64_t step_now);
    const ChannelStats& stats() const { return stats_; }
    const ChannelConfig& config() const { return cfg_; }

private:
    struct Pending {
        std::int64_t due;
        std::uint64_t seq;
        Message msg;
    };

    bool draw_drop();

    ChannelConfig cfg_;
    std::mt19937_64 rng_;
    std::uint64_t next_seq_ = 0;
    std::vector<Pending> queue_;  // sorted by (due, seq)
    ChannelStats stats_;
};

}  // namespace gridshaver
