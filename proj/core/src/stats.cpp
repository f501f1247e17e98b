#include "spiderlab/stats.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

namespace spiderlab {

double normal_tail(double z) {
    if (z < 0.0) throw std::invalid_argument("normal_tail: z must be >= 0");
    // P(|Z| > z) = erfc(z / sqrt(2))
    return std::erfc(z / std::sqrt(2.0));
}

namespace {

double half_normal_cdf(double x) {
    return x <= 0.0 ? 0.0 : std::erf(x / std::sqrt(2.0));
}

double simpson(double (*f)(double), double a, double b) {
    const double m = 0.5 * (a + b);
    return (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
}

double gauss_density_raw(double u) { return std::exp(-0.5 * u * u); }

double adaptive_simpson(double (*f)(double), double a, double b, double whole,
                        double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double left = simpson(f, a, m);
    const double right = simpson(f, m, b);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return adaptive_simpson(f, a, m, left, tol * 0.5, depth - 1) +
           adaptive_simpson(f, m, b, right, tol * 0.5, depth - 1);
}

}  // namespace

double normal_tail_quadrature(double z) {
    if (z < 0.0) throw std::invalid_argument("normal_tail_quadrature: z must be >= 0");
    // integrate on [z, z+40]; beyond that the integrand is below 1e-300
    const double a = z;
    const double b = z + 40.0;
    const double whole = simpson(gauss_density_raw, a, b);
    const double integral =
        adaptive_simpson(gauss_density_raw, a, b, whole, 1e-15, 60);
    return std::sqrt(2.0 / M_PI) * integral;
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::invalid_argument("normal_quantile: p must be in (0,1)");
    }
    // Acklam's rational approximation, then one Halley refinement.
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    double x;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    } else if (p <= 1.0 - plow) {
        const double q = p - 0.5;
        const double r = q * q;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    } else {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
            ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    // Halley step against the exact CDF
    const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
    const double u = e * std::sqrt(2.0 * M_PI) * std::exp(0.5 * x * x);
    x = x - u / (1.0 + 0.5 * x * u);
    return x;
}

Interval wilson_ci(std::int64_t successes, std::int64_t trials, double level) {
    if (trials < 1 || successes < 0 || successes > trials) {
        throw std::invalid_argument("wilson_ci: need 0 <= successes <= trials, trials >= 1");
    }
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("wilson_ci: level must be in (0,1)");
    }
    const double z = normal_quantile(0.5 * (1.0 + level));
    const double n = static_cast<double>(trials);
    const double phat = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double center = (phat + z2 / (2.0 * n)) / denom;
    const double half =
        z * std::sqrt(phat * (1.0 - phat) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

double kolmogorov_sf(double t) {
    if (t <= 0.0) return 1.0;
    double s = 0.0;
    for (int k = 1; k <= 200; ++k) {
        const double term = std::exp(-2.0 * k * k * t * t);
        s += (k % 2 == 1) ? term : -term;
        if (term < 1e-18) break;
    }
    return std::clamp(2.0 * s, 0.0, 1.0);
}

double kolmogorov_critical(double level) {
    if (!(level > 0.0 && level < 1.0)) {
        throw std::invalid_argument("kolmogorov_critical: level must be in (0,1)");
    }
    const double alpha = 1.0 - level;
    double lo = 0.2, hi = 4.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_sf(mid) > alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

KsResult ks_against_half_normal(std::vector<double> sample, double level) {
    if (sample.size() < 50) {
        throw std::invalid_argument("ks_against_half_normal: need at least 50 points");
    }
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = half_normal_cdf(sample[i]);
        const double lo = static_cast<double>(i) / n;
        const double hi = static_cast<double>(i + 1) / n;
        d = std::max({d, std::abs(f - lo), std::abs(f - hi)});
    }
    KsResult r;
    r.statistic = d;
    r.scaled = std::sqrt(n) * d;
    r.critical = kolmogorov_critical(level);
    r.pass = r.scaled < r.critical;
    return r;
}

HoeffdingResult hoeffding_check(const BernoulliSumSpec& spec, double p,
                                std::int64_t replications, Xoshiro256& rng) {
    if (spec.bound_horizon < 1 || spec.summands < 1 ||
        spec.summands > spec.bound_horizon || spec.deviation <= 0.0) {
        throw std::invalid_argument("hoeffding_check: invalid spec");
    }
    if (!(p >= 0.0 && p <= 1.0)) {
        throw std::invalid_argument("hoeffding_check: p must be in [0,1]");
    }
    const double k = static_cast<double>(spec.bound_horizon);
    const double threshold = k * spec.deviation;
    const double mean = static_cast<double>(spec.summands) * p;
    std::int64_t exceeded = 0;
    const bool fair = (p == 0.5);
    for (std::int64_t r = 0; r < replications; ++r) {
        std::int64_t s = 0;
        if (fair) {
            std::int64_t left = spec.summands;
            while (left >= 64) {
                s += std::popcount(rng.next_u64());
                left -= 64;
            }
            if (left > 0) {
                const std::uint64_t w = rng.next_u64() & ((1ULL << left) - 1);
                s += std::popcount(w);
            }
        } else {
            for (std::int64_t i = 0; i < spec.summands; ++i) {
                s += (rng.next_double() < p) ? 1 : 0;
            }
        }
        if (std::abs(static_cast<double>(s) - mean) >= threshold) ++exceeded;
    }
    HoeffdingResult res;
    res.exceeded = exceeded;
    res.replications = replications;
    res.empirical = replications > 0
                        ? static_cast<double>(exceeded) / static_cast<double>(replications)
                        : 0.0;
    res.bound = 2.0 * std::exp(-2.0 * k * spec.deviation * spec.deviation);
    return res;
}

}  // namespace spiderlab
