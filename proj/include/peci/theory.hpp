#pragma once

// Closed-form accuracy theory for the ensemble: base error rate, ensemble
// error bound, the critical ensemble effort and its two sufficient
// conditions, a Hoeffding tail bound for bounded (possibly dependent)
// vote sums, and moment estimation of the data constant c.

#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "peci/core.hpp"
#include "peci/errors.hpp"

namespace peci {

namespace detail {

// erf power series without sign alternation:
//   erf(x) = (2x/sqrt(pi)) e^{-x^2} sum_n (2x^2)^n / (1*3*...*(2n+1))
// Accurate for |x| <= 2.5.
inline double erf_series(double x) {
    const double x2 = x * x;
    double term = 1.0, sum = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= 2.0 * x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < sum * 1e-17) break;
    }
    return 2.0 * x / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
}

// Continued fraction for erfc, x >= 2 (modified Lentz):
//   sqrt(pi) e^{x^2} erfc(x) = 1/(x+ (1/2)/(x+ (2/2)/(x+ (3/2)/(x+ ...))))
inline double erfc_continued_fraction(double x) {
    constexpr double tiny = 1e-300;
    double f = tiny, c = f, d = 0.0;
    for (int n = 1; n < 300; ++n) {
        const double a = (n == 1) ? 1.0 : (n - 1) * 0.5;
        d = x + a * d;
        if (d == 0.0) d = tiny;
        c = x + a / c;
        if (c == 0.0) c = tiny;
        d = 1.0 / d;
        const double delta = c * d;
        f *= delta;
        if (std::abs(delta - 1.0) < 1e-17) break;
    }
    return std::exp(-x * x) / std::sqrt(std::numbers::pi) * f;
}

}  // namespace detail

/// Gaussian error function; odd by construction, saturating to +-1 for
/// |x| > 6. Absolute error below 1e-10 on [-6, 6].
inline double erf_value(double x) {
    const double ax = std::abs(x);
    double v;
    if (ax > 6.0)
        v = 1.0;
    else if (ax <= 2.5)
        v = detail::erf_series(ax);
    else
        v = 1.0 - detail::erfc_continued_fraction(ax);
    return x < 0.0 ? -v : v;
}

/// Complement 1 - erf(x), kept accurate for large x (no saturation until
/// the exp(-x^2) prefactor underflows).
inline double erfc_value(double x) {
    if (x < 0.0) return 2.0 - erfc_value(-x);
    if (x < 2.5) return 1.0 - detail::erf_series(x);
    return detail::erfc_continued_fraction(x);
}

/// ln C(m, k) via log-gamma; exact binomials overflow long before the
/// parameter scales of interest (m = 2000, k = 1000).
inline double log_binomial(std::size_t m, std::size_t k) {
    if (k > m) throw std::invalid_argument("log_binomial: k > m");
    return std::lgamma(static_cast<double>(m) + 1.0) -
           std::lgamma(static_cast<double>(k) + 1.0) -
           std::lgamma(static_cast<double>(m - k) + 1.0);
}

/// Error rate of the base method on m points with data constant c:
/// (1/2)(1 - erf(c * sqrt(m-1))).
inline double base_error_rate(double c, std::size_t m) {
    if (m < 2) throw std::invalid_argument("base_error_rate: m must be >= 2");
    return 0.5 * (1.0 - erf_value(c * std::sqrt(static_cast<double>(m - 1))));
}

/// Upper bound on the ensemble error rate with T tasks of size k:
/// exp(-(T/2) erf^2(c * sqrt(k-1))).
inline double ensemble_error_bound(double c, std::size_t k, std::size_t T) {
    if (k < 2) throw std::invalid_argument("ensemble_error_bound: k must be >= 2");
    if (T < 1) throw std::invalid_argument("ensemble_error_bound: T must be >= 1");
    const double e = erf_value(c * std::sqrt(static_cast<double>(k - 1)));
    return std::exp(-0.5 * static_cast<double>(T) * e * e);
}

/// Critical ensemble effort E_c(m) = 2 ln(2 / (1 - erf(c sqrt(m-1)))).
/// Throws Saturated when the complement underflows to zero.
inline double critical_ensemble_size(double c, std::size_t m) {
    if (m < 2) throw std::invalid_argument("critical_ensemble_size: m must be >= 2");
    const double q = erfc_value(c * std::sqrt(static_cast<double>(m - 1)));
    if (!(q > 0.0)) throw Saturated("critical_ensemble_size: 1 - erf underflowed");
    return 2.0 * std::log(2.0 / q);
}

struct CorollaryCheck {
    bool k_ok = false;  // C(m,k) erf^2(c sqrt(k-1)) > E_c(m), in log domain
    bool T_ok = false;  // T > E_c(m) / erf^2(c sqrt(k-1))
};

/// The two sufficient conditions under which the ensemble beats its base
/// method. Evaluated in log domain so that C(m,k) never overflows.
inline CorollaryCheck corollary_conditions(double c, std::size_t m, std::size_t k,
                                           std::size_t T) {
    if (k < 2 || k >= m)
        throw std::invalid_argument("corollary_conditions: need 2 <= k < m");
    const double critical = critical_ensemble_size(c, m);  // may throw Saturated
    const double e = erf_value(c * std::sqrt(static_cast<double>(k - 1)));
    CorollaryCheck check;
    if (e == 0.0) return check;  // conditions unsatisfiable
    const double log_lhs = log_binomial(m, k) + 2.0 * std::log(std::abs(e));
    check.k_ok = log_lhs > std::log(critical);
    check.T_ok = static_cast<double>(T) > critical / (e * e);
    return check;
}

/// Hoeffding tail bound exp(-2 t^2 / sum_i range_i^2) for a sum of N
/// bounded variables; the variables need not be mutually independent.
inline double hoeffding_tail_bound(double t, std::span<const double> ranges) {
    if (!(t > 0.0)) throw std::invalid_argument("hoeffding_tail_bound: t must be > 0");
    if (ranges.empty()) throw std::invalid_argument("hoeffding_tail_bound: no ranges");
    double denom = 0.0;
    for (double r : ranges) {
        if (!(r > 0.0)) throw std::invalid_argument("hoeffding_tail_bound: range must be > 0");
        denom += r * r;
    }
    return std::exp(-2.0 * t * t / denom);
}

/// Parameters of the closed-form theory. mu and sigma2 are the moments of
/// the slope-sample difference; c = mu / sqrt(2 sigma2) drives every bound.
struct TheoryParams {
    double mu = 0.0;
    double sigma2 = 0.0;
    double c = 0.0;
    std::size_t m = 0;
    std::size_t k = 0;  // 0 until a subsample size is chosen
    std::size_t T = 0;  // 0 until a task count is chosen
    // per-direction moments behind mu and sigma2
    double mu_x = 0.0, mu_y = 0.0;
    double sigma2_x = 0.0, sigma2_y = 0.0;
};

namespace detail {

struct WeightedMoments {
    double mean = 0.0;
    double variance = 0.0;
};

inline WeightedMoments weighted_moments(const SlopeTerms& terms) {
    if (terms.log_slopes.empty() || terms.weight_sum <= 1.0)
        throw DegenerateData("estimate_c: too few slope samples");
    WeightedMoments mom;
    for (std::size_t i = 0; i < terms.log_slopes.size(); ++i)
        mom.mean += terms.weights[i] * terms.log_slopes[i];
    mom.mean /= terms.weight_sum;
    for (std::size_t i = 0; i < terms.log_slopes.size(); ++i) {
        const double d = terms.log_slopes[i] - mom.mean;
        mom.variance += terms.weights[i] * d * d;
    }
    mom.variance /= (terms.weight_sum - 1.0);
    return mom;
}

}  // namespace detail

/// Moment estimate of the theory parameters from one (normalized) data
/// set with known ground truth. mu is signed so that a correct decision
/// in the true direction corresponds to mu > 0.
inline TheoryParams estimate_c(const SamplePairs& pairs, Direction true_direction) {
    if (true_direction == Direction::Undecided)
        throw std::invalid_argument("estimate_c: true direction must be decided");
    validate_pairs(pairs);
    const auto mom_x = detail::weighted_moments(slope_terms(pairs.x, pairs.y));
    const auto mom_y = detail::weighted_moments(slope_terms(pairs.y, pairs.x));

    TheoryParams params;
    params.m = pairs.size();
    params.mu_x = mom_x.mean;
    params.mu_y = mom_y.mean;
    params.sigma2_x = mom_x.variance;
    params.sigma2_y = mom_y.variance;
    params.sigma2 = mom_x.variance + mom_y.variance;
    if (!(params.sigma2 > 0.0))
        throw DegenerateData("estimate_c: zero variance in slope samples");
    params.mu = (true_direction == Direction::XCausesY) ? mom_y.mean - mom_x.mean
                                                        : mom_x.mean - mom_y.mean;
    params.c = params.mu / std::sqrt(2.0 * params.sigma2);
    return params;
}

}  // namespace peci
