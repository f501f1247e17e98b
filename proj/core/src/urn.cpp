#include "spiderlab/urn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spiderlab {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lchoose(double n, double k) {
    return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

double logsumexp(const std::vector<double>& v) {
    double mx = kNegInf;
    for (double x : v) mx = std::max(mx, x);
    if (mx == kNegInf) return kNegInf;
    double s = 0.0;
    for (double x : v) s += std::exp(x - mx);
    return mx + std::log(s);
}

// log of P(Binomial(G, 1/N) >= k), used as a negative-association
// upper bound on coverage: P(all urns >= k) <= q^N.
double log_binom_tail_at_least(std::int64_t G, std::int64_t N, std::int64_t k) {
    if (k <= 0) return 0.0;
    if (G < k) return kNegInf;
    const double lnN = std::log(static_cast<double>(N));
    const double l1m = std::log1p(-1.0 / static_cast<double>(N));
    double below = 0.0;  // P(Binomial < k)
    for (std::int64_t i = 0; i < k; ++i) {
        below += std::exp(lchoose(static_cast<double>(G), static_cast<double>(i)) -
                          static_cast<double>(i) * lnN +
                          static_cast<double>(G - i) * l1m);
    }
    if (below >= 1.0) return kNegInf;
    return std::log1p(-below);
}

struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;
    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
};

// Inclusion-exclusion over deficient urns, valid for any threshold k:
//   P(all >= k) = sum_j (-1)^j C(N,j) T_j,
//   T_j = sum_s C(G,s) N^{-s} (1-j/N)^{G-s} * s! [x^s] e_{k-1}(x)^j,
// where e_{k-1} is the degree-(k-1) truncated exponential. Consecutive
// partial sums bracket the value (Bonferroni), so early termination is
// certified by the size of the last term.
double coverage_ie(std::int64_t N, std::int64_t G, std::int64_t k) {
    const double lnN = std::log(static_cast<double>(N));
    const double lnG = static_cast<double>(G);
    (void)lnG;

    // log-coefficients of e_{k-1}(x)^j, grown by convolution per j
    std::vector<double> lco{0.0};
    std::vector<double> lbase(static_cast<std::size_t>(k));
    for (std::int64_t i = 0; i < k; ++i) {
        lbase[static_cast<std::size_t>(i)] = -std::lgamma(static_cast<double>(i) + 1.0);
    }

    KahanSum total;
    std::vector<double> pieces;
    double prev_term = std::numeric_limits<double>::infinity();
    const std::size_t max_len = 20001;

    for (std::int64_t j = 0; j <= N; ++j) {
        pieces.clear();
        const double l1mj =
            j < N ? std::log1p(-static_cast<double>(j) / static_cast<double>(N)) : kNegInf;
        const std::int64_t smax =
            std::min<std::int64_t>(static_cast<std::int64_t>(lco.size()) - 1, G);
        for (std::int64_t s = 0; s <= smax; ++s) {
            const double lc = lco[static_cast<std::size_t>(s)];
            if (lc == kNegInf) continue;
            double tail;
            if (G - s > 0) {
                if (j == N) continue;  // all balls must land in the j urns
                tail = static_cast<double>(G - s) * l1mj;
            } else {
                tail = 0.0;
            }
            pieces.push_back(lchoose(static_cast<double>(G), static_cast<double>(s)) -
                             static_cast<double>(s) * lnN + tail + lc +
                             std::lgamma(static_cast<double>(s) + 1.0));
        }
        const double logTj = logsumexp(pieces);
        const double term =
            logTj == kNegInf
                ? 0.0
                : std::exp(lchoose(static_cast<double>(N), static_cast<double>(j)) + logTj);
        total.add(j % 2 == 0 ? term : -term);
        if (j >= 4 && term < 1e-17 && term <= prev_term) break;
        prev_term = term;

        if (j == N) break;
        // grow the polynomial for the next j
        std::size_t new_len =
            std::min<std::size_t>(lco.size() + static_cast<std::size_t>(k) - 1, max_len);
        if (lco.size() + static_cast<std::size_t>(k) - 1 > max_len && j > 400) {
            throw ResourceError("coverage_prob_at_least_k: series did not converge");
        }
        std::vector<double> next(new_len, kNegInf);
        std::vector<double> conv;
        for (std::size_t s = 0; s < new_len; ++s) {
            conv.clear();
            for (std::size_t i = 0; i < lbase.size() && i <= s; ++i) {
                if (s - i < lco.size() && lco[s - i] != kNegInf) {
                    conv.push_back(lco[s - i] + lbase[i]);
                }
            }
            next[s] = logsumexp(conv);
        }
        lco.swap(next);
    }
    return std::clamp(total.sum, 0.0, 1.0);
}

}  // namespace

double coverage_prob_exact(std::int64_t urns, std::int64_t balls) {
    if (urns < 1) throw std::invalid_argument("coverage_prob_exact: urns must be >= 1");
    if (balls < 0) throw std::invalid_argument("coverage_prob_exact: balls must be >= 0");
    if (balls < urns) return 0.0;  // pigeonhole
    if (urns == 1) return 1.0;
    const double ub = static_cast<double>(urns) * log_binom_tail_at_least(balls, urns, 1);
    if (ub < std::log(1e-15)) return 0.0;

    const double N = static_cast<double>(urns);
    const double G = static_cast<double>(balls);
    KahanSum total;
    double prev_term = std::numeric_limits<double>::infinity();
    for (std::int64_t j = 0; j < urns; ++j) {
        const double term = std::exp(lchoose(N, static_cast<double>(j)) +
                                     G * std::log1p(-static_cast<double>(j) / N));
        total.add(j % 2 == 0 ? term : -term);
        if (j >= 4 && term < 1e-17 && term <= prev_term) break;
        prev_term = term;
    }
    return std::clamp(total.sum, 0.0, 1.0);
}

double coverage_prob_at_least_k(std::int64_t urns, std::int64_t balls,
                                std::int64_t threshold) {
    if (urns < 1) throw std::invalid_argument("coverage_prob_at_least_k: urns must be >= 1");
    if (balls < 0) throw std::invalid_argument("coverage_prob_at_least_k: balls must be >= 0");
    if (threshold < 1) {
        throw std::invalid_argument("coverage_prob_at_least_k: threshold must be >= 1");
    }
    if (balls < threshold * urns) return 0.0;
    if (urns == 1) return 1.0;
    const double ub =
        static_cast<double>(urns) * log_binom_tail_at_least(balls, urns, threshold);
    if (ub < std::log(1e-15)) return 0.0;

    // small instances go through the generating-function DP; the
    // inclusion-exclusion series covers the rest
    const double dp_cost = static_cast<double>(urns) * static_cast<double>(balls) *
                           static_cast<double>(balls);
    if (threshold == 1 && dp_cost > 2e8) return coverage_prob_exact(urns, balls);
    if (dp_cost <= 2e8) {
        return coverage_prob_at_least_k_dp(urns, balls, threshold);
    }
    return coverage_ie(urns, balls, threshold);
}

double coverage_prob_at_least_k_ie(std::int64_t urns, std::int64_t balls,
                                   std::int64_t threshold) {
    if (urns < 1 || balls < 0 || threshold < 1) {
        throw std::invalid_argument("coverage_prob_at_least_k_ie: invalid query");
    }
    if (balls < threshold * urns) return 0.0;
    if (urns == 1) return 1.0;
    const double ub =
        static_cast<double>(urns) * log_binom_tail_at_least(balls, urns, threshold);
    if (ub < std::log(1e-15)) return 0.0;
    return coverage_ie(urns, balls, threshold);
}

double coverage_prob_at_least_k_dp(std::int64_t urns, std::int64_t balls,
                                   std::int64_t threshold, std::int64_t budget) {
    if (urns < 1 || balls < 0 || threshold < 1) {
        throw std::invalid_argument("coverage_prob_at_least_k_dp: invalid query");
    }
    if (balls < threshold * urns) return 0.0;
    const double cost = static_cast<double>(urns) * static_cast<double>(balls) *
                        static_cast<double>(balls);
    if (cost > static_cast<double>(budget)) {
        throw ResourceError("coverage_prob_at_least_k_dp: urns*balls^2 = " +
                            std::to_string(static_cast<long long>(cost)) +
                            " exceeds budget " + std::to_string(budget));
    }
    const std::size_t len = static_cast<std::size_t>(balls) + 1;
    // coefficients of (sum_{i>=k} (tx)^i/i!)^m with the exponential
    // tilt t = balls/urns, so each factor peaks at the mean load and
    // the array's dynamic range stays within double precision; per
    // round the max is rescaled out and its log carried separately
    const double tilt = std::max(
        1.0, static_cast<double>(balls) / static_cast<double>(urns));
    const double log_tilt = std::log(tilt);
    double base_peak = -std::numeric_limits<double>::infinity();
    for (std::int64_t i = threshold; i <= balls; ++i) {
        base_peak = std::max(base_peak,
                             static_cast<double>(i) * log_tilt -
                                 std::lgamma(static_cast<double>(i) + 1.0));
    }
    std::vector<double> base(len, 0.0);
    for (std::int64_t i = threshold; i <= balls; ++i) {
        base[static_cast<std::size_t>(i)] =
            std::exp(static_cast<double>(i) * log_tilt -
                     std::lgamma(static_cast<double>(i) + 1.0) - base_peak);
    }
    std::vector<double> acc(len, 0.0);
    acc[0] = 1.0;
    double log_scale = 0.0;
    std::vector<double> next(len);
    for (std::int64_t m = 0; m < urns; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::size_t a = 0; a < len; ++a) {
            if (acc[a] == 0.0) continue;
            const double va = acc[a];
            for (std::size_t b = static_cast<std::size_t>(threshold); a + b < len; ++b) {
                next[a + b] += va * base[b];
            }
        }
        double mx = 0.0;
        for (double v : next) mx = std::max(mx, v);
        if (mx == 0.0) return 0.0;
        for (double& v : next) v /= mx;
        log_scale += std::log(mx);
        acc.swap(next);
    }
    const double coeff = acc[static_cast<std::size_t>(balls)];
    if (coeff <= 0.0) return 0.0;
    const double lp = std::log(coeff) + log_scale +
                      static_cast<double>(urns) * base_peak -
                      static_cast<double>(balls) * log_tilt +
                      std::lgamma(static_cast<double>(balls) + 1.0) -
                      static_cast<double>(balls) * std::log(static_cast<double>(urns));
    return std::clamp(std::exp(lp), 0.0, 1.0);
}

double er_limit(double x, std::int64_t m) {
    if (m < 1) throw std::invalid_argument("er_limit: m must be >= 1");
    return std::exp(-std::exp(-x) / std::tgamma(static_cast<double>(m)));
}

std::vector<std::int64_t> throw_balls(std::int64_t urns, std::int64_t balls,
                                      Xoshiro256& rng) {
    if (urns < 1) throw std::invalid_argument("throw_balls: urns must be >= 1");
    if (balls < 0) throw std::invalid_argument("throw_balls: balls must be >= 0");
    std::vector<std::int64_t> occupancy(static_cast<std::size_t>(urns), 0);
    for (std::int64_t i = 0; i < balls; ++i) {
        ++occupancy[rng.next_below(static_cast<std::uint64_t>(urns))];
    }
    return occupancy;
}

}  // namespace spiderlab
