// Independent reference computations the tests check the library
// against. Everything here is deliberately brute force.
#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <stdexcept>
#include <vector>

#include "spiderlab/excursion.hpp"
#include "spiderlab/spider.hpp"

namespace oracles {

// P(every one of `urns` urns gets >= `threshold` of `balls` uniform
// balls), by summing multinomial weights over all count compositions.
inline double brute_coverage(std::int64_t urns, std::int64_t balls,
                             std::int64_t threshold) {
    std::vector<double> fact(static_cast<std::size_t>(balls) + 1, 1.0);
    for (std::size_t i = 1; i < fact.size(); ++i) {
        fact[i] = fact[i - 1] * static_cast<double>(i);
    }
    double total = 0.0;
    std::vector<std::int64_t> counts(static_cast<std::size_t>(urns), 0);
    std::function<void(std::size_t, std::int64_t)> rec =
        [&](std::size_t urn, std::int64_t left) {
            if (urn + 1 == counts.size()) {
                counts[urn] = left;
                bool ok = true;
                double weight = fact[static_cast<std::size_t>(balls)];
                for (std::int64_t c : counts) {
                    if (c < threshold) ok = false;
                    weight /= fact[static_cast<std::size_t>(c)];
                }
                if (ok) total += weight;
                return;
            }
            for (std::int64_t c = 0; c <= left; ++c) {
                counts[urn] = c;
                rec(urn + 1, left - c);
            }
        };
    rec(0, balls);
    double scale = 1.0;
    for (std::int64_t i = 0; i < balls; ++i) scale /= static_cast<double>(urns);
    return total * scale;
}

// P(simple random walk started at `from` hits `top` before 0), by
// Gaussian elimination on the tridiagonal harmonic system. The answer
// is from/top, but the solve does not know that.
inline double ruin_probability(std::int64_t from, std::int64_t top) {
    if (from < 0 || from > top || top < 1) {
        throw std::invalid_argument("ruin_probability: bad interval");
    }
    if (from == 0) return 0.0;
    if (from == top) return 1.0;
    const std::size_t m = static_cast<std::size_t>(top) - 1;  // unknowns h(1..top-1)
    std::vector<double> diag(m, 1.0), upper(m, -0.5), lower(m, -0.5),
        rhs(m, 0.0);
    rhs[m - 1] = 0.5;  // h(top) = 1
    for (std::size_t i = 1; i < m; ++i) {
        const double w = lower[i] / diag[i - 1];
        diag[i] -= w * upper[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    std::vector<double> h(m);
    h[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t i = m - 1; i-- > 0;) {
        h[i] = (rhs[i] - upper[i] * h[i + 1]) / diag[i];
    }
    return h[static_cast<std::size_t>(from) - 1];
}

using LegMaximaLaw = std::map<std::vector<std::int64_t>, double>;

// Exact law of the per-leg maxima vector after `steps` spider steps,
// by enumerating every path with its probability.
inline LegMaximaLaw enumerate_spider_law(std::uint32_t legs,
                                         std::int64_t steps) {
    LegMaximaLaw law;
    std::vector<spiderlab::SpiderSite> path;
    path.push_back(spiderlab::SpiderSite::body());
    std::function<void(std::int64_t, double)> rec = [&](std::int64_t k,
                                                        double prob) {
        if (k == steps) {
            spiderlab::WalkAccumulator acc(legs);
            for (auto s : path) acc.visit(s);
            law[acc.finish().leg_maxima] += prob;
            return;
        }
        const auto cur = path.back();
        if (cur.is_body()) {
            for (std::uint32_t j = 1; j <= legs; ++j) {
                path.push_back({j, 1});
                rec(k + 1, prob / static_cast<double>(legs));
                path.pop_back();
            }
        } else {
            for (int d : {1, -1}) {
                const std::uint32_t r = cur.radius + static_cast<std::uint32_t>(d);
                path.push_back(r == 0 ? spiderlab::SpiderSite::body()
                                      : spiderlab::SpiderSite{cur.leg, r});
                rec(k + 1, prob * 0.5);
                path.pop_back();
            }
        }
    };
    rec(0, 1.0);
    return law;
}

// The same law derived through the excursion coupling: enumerate every
// reflected path, then every leg assignment of its excursions, and
// rebuild the summary with the library's shared assembler.
inline LegMaximaLaw enumerate_coupling_law(std::uint32_t legs,
                                           std::int64_t steps) {
    LegMaximaLaw law;
    std::vector<std::int32_t> path;
    path.push_back(0);
    std::function<void(std::int64_t, double)> rec = [&](std::int64_t k,
                                                        double prob) {
        if (k == steps) {
            auto records = spiderlab::decompose_excursions(path);
            const std::size_t m = records.size();
            const double leg_prob =
                1.0 / std::pow(static_cast<double>(legs),
                               static_cast<double>(m));
            std::vector<std::uint32_t> assign(m, 1);
            std::function<void(std::size_t)> assign_rec = [&](std::size_t i) {
                if (i == m) {
                    for (std::size_t e = 0; e < m; ++e) {
                        records[e].leg = assign[e];
                    }
                    const auto summary = spiderlab::summarize_assigned(
                        path, steps, records, legs);
                    law[summary.leg_maxima] += prob * leg_prob;
                    return;
                }
                for (std::uint32_t j = 1; j <= legs; ++j) {
                    assign[i] = j;
                    assign_rec(i + 1);
                }
            };
            assign_rec(0);
            return;
        }
        const std::int32_t v = path.back();
        if (v == 0) {
            path.push_back(1);  // sure move, no probability spent
            rec(k + 1, prob);
            path.pop_back();
        } else {
            for (int d : {1, -1}) {
                path.push_back(v + d);
                rec(k + 1, prob * 0.5);
                path.pop_back();
            }
        }
    };
    rec(0, 1.0);
    return law;
}

inline double total_variation(const LegMaximaLaw& a, const LegMaximaLaw& b) {
    double tv = 0.0;
    for (const auto& [key, p] : a) {
        const auto it = b.find(key);
        tv += std::abs(p - (it == b.end() ? 0.0 : it->second));
    }
    for (const auto& [key, p] : b) {
        if (!a.count(key)) tv += p;
    }
    return tv / 2.0;
}

}  // namespace oracles
