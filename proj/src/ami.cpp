#include "gridshaver/ami.hpp"

#include "gridshaver/errors.hpp"

#include <algorithm>

namespace gridshaver {

Channel::Channel(ChannelConfig cfg) : cfg_(cfg), rng_(cfg.seed) {
    if (!(cfg_.drop_probability >= 0.0 && cfg_.drop_probability <= 1.0)) {
        throw DomainError("drop probability must lie in [0, 1]");
    }
    if (cfg_.latency_steps < 0) throw DomainError("latency must be non-negative");
}

bool Channel::draw_drop() {
    if (cfg_.drop_probability <= 0.0) return false;
    // 53 random bits mapped to [0, 1); independent of the library's distributions.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return u < cfg_.drop_probability;
}

void Channel::publish(Message msg, std::int64_t step_now) {
    ++stats_.published;
    const std::uint64_t seq = next_seq_++;
    if (draw_drop()) {
        ++stats_.dropped;
        return;
    }
    Pending entry{step_now + cfg_.latency_steps, seq, std::move(msg)};
    const auto pos = std::upper_bound(queue_.begin(), queue_.end(), entry,
                                      [](const Pending& a, const Pending& b) {
                                          return a.due != b.due ? a.due < b.due : a.seq < b.seq;
                                      });
    queue_.insert(pos, std::move(entry));
    ++stats_.queued;
}

std::vector<Message> Channel::poll_due(std::int64_t step_now) {
    const auto end = std::find_if(queue_.begin(), queue_.end(),
                                  [&](const Pending& p) { return p.due > step_now; });
    std::vector<Message> out;
    out.reserve(static_cast<std::size_t>(end - queue_.begin()));
    for (auto it = queue_.begin(); it != end; ++it) out.push_back(std::move(it->msg));
    queue_.erase(queue_.begin(), end);
    stats_.delivered += out.size();
    stats_.queued -= out.size();
    return out;
}

}  // namespace gridshaver
