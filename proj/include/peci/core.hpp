#pragma once

// Slope-based causal direction scoring for a pair of scalar variables.
// The score in each direction is the weighted mean of logarithmic slopes
// of the data sorted by that variable; the smaller score marks the cause.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "peci/errors.hpp"

namespace peci {

enum class Direction { XCausesY, YCausesX, Undecided };

inline Direction mirrored(Direction d) {
    switch (d) {
        case Direction::XCausesY: return Direction::YCausesX;
        case Direction::YCausesX: return Direction::XCausesY;
        default: return Direction::Undecided;
    }
}

inline const char* to_string(Direction d) {
    switch (d) {
        case Direction::XCausesY: return "x->y";
        case Direction::YCausesX: return "y->x";
        default: return "undecided";
    }
}

/// Paired observations of the two variables. Kept as plain columns;
/// validity is checked by the operations that consume them.
struct SamplePairs {
    std::vector<double> x;
    std::vector<double> y;

    std::size_t size() const { return x.size(); }
};

inline SamplePairs swapped(SamplePairs p) {
    std::swap(p.x, p.y);
    return p;
}

/// Throws std::invalid_argument unless both columns have equal length
/// >= 3 and every value is finite.
inline void validate_pairs(const SamplePairs& pairs) {
    if (pairs.x.size() != pairs.y.size())
        throw std::invalid_argument("sample pairs: column lengths differ");
    if (pairs.x.size() < 3)
        throw std::invalid_argument("sample pairs: need at least 3 observations");
    for (double v : pairs.x)
        if (!std::isfinite(v)) throw std::invalid_argument("sample pairs: non-finite x value");
    for (double v : pairs.y)
        if (!std::isfinite(v)) throw std::invalid_argument("sample pairs: non-finite y value");
}

/// Affine map onto [0,1]: min -> 0, max -> 1, order preserved.
inline std::vector<double> normalize_unit_interval(std::span<const double> values) {
    if (values.size() < 2)
        throw std::invalid_argument("normalize_unit_interval: need at least 2 values");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw ConstantInput("normalize_unit_interval: constant input");
    const double scale = 1.0 / (hi - lo);
    std::vector<double> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = (values[i] - lo) * scale;
    return out;
}

/// Consecutive log-slope samples of `other` against sorted `sort_key`,
/// after merging duplicate keys.
struct SlopeTerms {
    std::vector<double> log_slopes;  // log(|dy| / |dx|) per retained difference
    std::vector<double> weights;     // duplicate count n_i of the left endpoint
    double weight_sum = 0.0;         // sum of retained weights
    std::size_t skipped = 0;         // differences dropped for a zero numerator
};

/// Sorts pairs by (sort_key, other), merges runs of equal sort_key keeping
/// the first occurrence's `other`, and emits one weighted log-slope per
/// retained consecutive difference. Differences with zero numerator are
/// skipped and their weight excluded.
inline SlopeTerms slope_terms(std::span<const double> sort_key, std::span<const double> other) {
    const std::size_t m = sort_key.size();
    if (other.size() != m) throw std::invalid_argument("slope_terms: length mismatch");
    if (m < 3) throw std::invalid_argument("slope_terms: need at least 3 pairs");

    std::vector<std::pair<double, double>> rows(m);
    for (std::size_t i = 0; i < m; ++i) rows[i] = {sort_key[i], other[i]};
    std::sort(rows.begin(), rows.end());

    // Merge duplicate keys. The secondary sort makes "first occurrence"
    // the smallest `other`, independent of input order.
    std::vector<double> key_u, other_u, count_u;
    key_u.reserve(m);
    other_u.reserve(m);
    count_u.reserve(m);
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i + 1;
        while (j < m && rows[j].first == rows[i].first) ++j;
        key_u.push_back(rows[i].first);
        other_u.push_back(rows[i].second);
        count_u.push_back(static_cast<double>(j - i));
        i = j;
    }

    SlopeTerms terms;
    if (key_u.size() < 2) throw DegenerateData("slope_terms: fewer than 2 distinct sort keys");
    for (std::size_t t = 0; t + 1 < key_u.size(); ++t) {
        const double num = std::abs(other_u[t + 1] - other_u[t]);
        const double den = key_u[t + 1] - key_u[t];  // > 0 after dedup
        if (num == 0.0) {
            ++terms.skipped;
            continue;
        }
        terms.log_slopes.push_back(std::log(num / den));
        terms.weights.push_back(count_u[t]);
        terms.weight_sum += count_u[t];
    }
    return terms;
}

/// Weighted mean logarithmic slope of `other` against sorted `sort_key`.
inline double slope_entropy(std::span<const double> sort_key, std::span<const double> other) {
    const SlopeTerms terms = slope_terms(sort_key, other);
    if (terms.log_slopes.empty())
        throw DegenerateData("slope_entropy: every slope term was skipped");
    double acc = 0.0;
    for (std::size_t i = 0; i < terms.log_slopes.size(); ++i)
        acc += terms.weights[i] * terms.log_slopes[i];
    return acc / terms.weight_sum;
}

/// Score in both directions. delta = e_y - e_x; positive supports x->y.
struct IgciScore {
    double e_x = 0.0;
    double e_y = 0.0;
    double delta = 0.0;
    Direction decision = Direction::Undecided;
};

/// Scores both directions of an already normalized pair. Ties (exact equal
/// scores) decide Undecided; comparisons are exact, with no epsilon band.
inline IgciScore igci_score(const SamplePairs& pairs) {
    validate_pairs(pairs);
    IgciScore score;
    score.e_x = slope_entropy(pairs.x, pairs.y);
    score.e_y = slope_entropy(pairs.y, pairs.x);
    score.delta = score.e_y - score.e_x;
    if (score.e_x < score.e_y)
        score.decision = Direction::XCausesY;
    else if (score.e_x > score.e_y)
        score.decision = Direction::YCausesX;
    else
        score.decision = Direction::Undecided;
    return score;
}

}  // namespace peci
