#include "spiderlab/spider.hpp"

#include <algorithm>
#include <stdexcept>

namespace spiderlab {

WalkAccumulator::WalkAccumulator(std::uint32_t leg_count) {
    if (leg_count < 1) {
        throw std::invalid_argument("WalkAccumulator: leg_count must be >= 1");
    }
    summary_.leg_maxima.assign(leg_count, 0);
}

void WalkAccumulator::visit(SpiderSite s) {
    ++summary_.local_times[site_key(s)];
    ++visits_;
    if (s.is_body()) {
        ++summary_.zero_count;
    } else {
        auto& m = summary_.leg_maxima.at(s.leg - 1);
        m = std::max<std::int64_t>(m, s.radius);
    }
}

WalkSummary WalkAccumulator::finish() {
    summary_.steps = visits_ - 1;
    summary_.overall_max = 0;
    for (auto m : summary_.leg_maxima) {
        summary_.overall_max = std::max(summary_.overall_max, m);
    }
    return std::move(summary_);
}

SpiderSite step_spider(SpiderSite state, std::uint32_t leg_count, Xoshiro256& rng) {
    if (leg_count < 1) {
        throw std::invalid_argument("step_spider: leg_count must be >= 1");
    }
    if (state.is_body()) {
        return {static_cast<std::uint32_t>(rng.next_below(leg_count)) + 1, 1};
    }
    if (rng.next_bit()) {
        return {state.leg, state.radius + 1};
    }
    SpiderSite next{state.leg, state.radius - 1};
    if (next.radius == 0) next.leg = 0;
    return next;
}

WalkSummary walk_spider(std::uint32_t leg_count, std::int64_t steps, Xoshiro256& rng) {
    if (steps < 0) {
        throw std::invalid_argument("walk_spider: steps must be >= 0");
    }
    WalkAccumulator acc(leg_count);
    SpiderSite site = SpiderSite::body();
    acc.visit(site);
    for (std::int64_t i = 0; i < steps; ++i) {
        site = step_spider(site, leg_count, rng);
        acc.visit(site);
    }
    return acc.finish();
}

bool event_m(const WalkSummary& summary, std::int64_t height) {
    if (height < 1) throw std::invalid_argument("event_m: height must be >= 1");
    return min_leg_max(summary) >= height;
}

bool event_a(const WalkSummary& summary, std::int64_t height, std::int64_t visits) {
    if (height < 1) throw std::invalid_argument("event_a: height must be >= 1");
    if (visits < 1) throw std::invalid_argument("event_a: visits must be >= 1");
    for (std::uint32_t j = 1; j <= summary.leg_maxima.size(); ++j) {
        const SpiderSite site{j, static_cast<std::uint32_t>(height)};
        if (summary.local_time(site) < visits) return false;
    }
    return true;
}

std::int64_t min_leg_max(const WalkSummary& summary) {
    std::int64_t m = summary.leg_maxima.empty() ? 0 : summary.leg_maxima[0];
    for (auto v : summary.leg_maxima) m = std::min(m, v);
    return m;
}

}  // namespace spiderlab
