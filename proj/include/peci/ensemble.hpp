#pragma once

// Parallel-ensemble direction inference: T independent base-learner tasks
// on random k-subsamples, votes aggregated by majority or by a bounded
// weight of the score difference. Task t draws its randomness from a
// stream derived from (seed, t) and votes are summed in task-index order,
// so the result is bit-identical for any number of workers.

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <span>
#include <thread>
#include <vector>

#include "peci/core.hpp"
#include "peci/errors.hpp"
#include "peci/random.hpp"

namespace peci {

enum class WeightingScheme { Majority, SigmoidWeight, TanhWeight };

inline const char* to_string(WeightingScheme w) {
    switch (w) {
        case WeightingScheme::Majority: return "majority";
        case WeightingScheme::SigmoidWeight: return "sigmoid";
        case WeightingScheme::TanhWeight: return "tanh";
    }
    return "?";
}

struct EnsembleConfig {
    std::size_t subsample_size = 0;                          // k, 3 <= k < m
    std::size_t task_count = 1;                              // T
    WeightingScheme weighting = WeightingScheme::Majority;
    std::uint64_t seed = 0;
};

struct EnsembleDecision {
    std::vector<double> votes;        // one per task, in task order
    double vote_sum = 0.0;
    Direction direction = Direction::Undecided;
    std::size_t undecided_tasks = 0;  // exact ties plus degenerate tasks
    std::size_t degenerate_tasks = 0; // tasks that failed with degenerate data
    bool task_budget_warning = false; // task_count >= C(m, k): duplicate subsets certain
};

/// k pairs drawn uniformly without replacement; the input is unchanged.
inline SamplePairs subsample(const SamplePairs& pairs, std::size_t k, RandomEngine& eng) {
    const std::size_t m = pairs.size();
    if (k < 3 || k >= m)
        throw InvalidSubsampleSize("subsample: need 3 <= k < m");
    const auto idx = sample_indices_without_replacement(eng, m, k);
    SamplePairs out;
    out.x.resize(k);
    out.y.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        out.x[i] = pairs.x[idx[i]];
        out.y[i] = pairs.y[idx[i]];
    }
    return out;
}

/// Maps a base score to a vote. Majority gives the sign of delta; the
/// weighted schemes give a bounded odd transform of delta, so a task's
/// weighted vote always carries the sign of its majority vote.
inline double vote(const IgciScore& score, WeightingScheme weighting) {
    const double delta = score.delta;
    switch (weighting) {
        case WeightingScheme::Majority:
            return delta > 0.0 ? 1.0 : (delta < 0.0 ? -1.0 : 0.0);
        case WeightingScheme::SigmoidWeight: {
            // (1 - e^{-delta}) / (1 + e^{-delta}), evaluated on |delta|
            // to stay finite for large negative arguments.
            const double a = std::abs(delta);
            const double em = std::exp(-a);
            const double v = (1.0 - em) / (1.0 + em);
            return delta < 0.0 ? -v : v;
        }
        case WeightingScheme::TanhWeight:
            return std::tanh(delta);
    }
    return 0.0;
}

/// A base learner maps a subsample to a score. The default normalizes
/// both columns onto [0,1] and scores them; a constant column makes the
/// task degenerate.
using BaseLearner = std::function<IgciScore(const SamplePairs&)>;

inline IgciScore igci_base_learner(const SamplePairs& pairs) {
    SamplePairs normalized;
    normalized.x = normalize_unit_interval(pairs.x);
    normalized.y = normalize_unit_interval(pairs.y);
    return igci_score(normalized);
}

namespace detail {

struct TaskOutcome {
    double vote = 0.0;
    bool tie = false;
    bool degenerate = false;
};

inline TaskOutcome run_one_task(const SamplePairs& pairs, const EnsembleConfig& config,
                                std::size_t task_index, const BaseLearner& learner,
                                std::vector<std::size_t>& scratch,
                                std::vector<std::size_t>& indices, SamplePairs& sub) {
    RandomEngine eng = make_stream_engine(config.seed, task_index);
    const std::size_t m = pairs.size();
    const std::size_t k = config.subsample_size;
    sample_indices_without_replacement(eng, m, k, scratch, indices);
    sub.x.resize(k);
    sub.y.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        sub.x[i] = pairs.x[indices[i]];
        sub.y[i] = pairs.y[indices[i]];
    }
    TaskOutcome outcome;
    try {
        const IgciScore score = learner(sub);
        outcome.vote = vote(score, config.weighting);
        outcome.tie = (score.decision == Direction::Undecided);
    } catch (const ConstantInput&) {
        outcome.degenerate = true;
    } catch (const DegenerateData&) {
        outcome.degenerate = true;
    }
    return outcome;
}

}  // namespace detail

/// Runs the full ensemble. Tasks are pure and may execute on any worker
/// in any order; votes land in a per-task slot and are aggregated
/// serially, so (votes, vote_sum, direction) never depend on `workers`.
/// Degenerate tasks vote 0 and are counted; a run where every task is
/// degenerate throws AllTasksDegenerate.
inline EnsembleDecision run_ensemble(const SamplePairs& pairs, const EnsembleConfig& config,
                                     std::size_t workers = 1,
                                     const BaseLearner& learner = igci_base_learner) {
    validate_pairs(pairs);
    const std::size_t m = pairs.size();
    const std::size_t k = config.subsample_size;
    const std::size_t task_count = config.task_count;
    if (k < 3 || k >= m)
        throw InvalidSubsampleSize("run_ensemble: need 3 <= k < m");
    if (task_count < 1)
        throw std::invalid_argument("run_ensemble: task_count must be >= 1");

    EnsembleDecision decision;
    decision.votes.assign(task_count, 0.0);
    decision.task_budget_warning =
        std::log(static_cast<double>(task_count)) >=
        std::lgamma(static_cast<double>(m) + 1.0) -
            std::lgamma(static_cast<double>(k) + 1.0) -
            std::lgamma(static_cast<double>(m - k) + 1.0);

    std::atomic<std::size_t> next_task{0};
    std::atomic<std::size_t> ties{0}, degenerates{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker_loop = [&] {
        std::vector<std::size_t> scratch, indices;
        SamplePairs sub;
        try {
            for (;;) {
                const std::size_t t = next_task.fetch_add(1, std::memory_order_relaxed);
                if (t >= task_count) break;
                const auto outcome =
                    detail::run_one_task(pairs, config, t, learner, scratch, indices, sub);
                decision.votes[t] = outcome.vote;
                if (outcome.tie || outcome.degenerate)
                    ties.fetch_add(1, std::memory_order_relaxed);
                if (outcome.degenerate)
                    degenerates.fetch_add(1, std::memory_order_relaxed);
            }
        } catch (...) {
            const std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
        }
    };

    std::size_t pool = workers == 0 ? 1 : workers;
    if (pool > task_count) pool = task_count;
    if (pool <= 1) {
        worker_loop();
    } else {
        std::vector<std::thread> threads;
        threads.reserve(pool);
        for (std::size_t w = 0; w < pool; ++w) threads.emplace_back(worker_loop);
        for (auto& th : threads) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    decision.undecided_tasks = ties.load();
    decision.degenerate_tasks = degenerates.load();
    if (decision.degenerate_tasks == task_count)
        throw AllTasksDegenerate("run_ensemble: every task saw degenerate data");

    double sum = 0.0;
    for (double v : decision.votes) sum += v;  // fixed task-index order
    decision.vote_sum = sum;
    if (sum > 0.0)
        decision.direction = Direction::XCausesY;
    else if (sum < 0.0)
        decision.direction = Direction::YCausesX;
    else
        decision.direction = Direction::Undecided;
    return decision;
}

/// Subsample size used for benchmark data, stepping down as a fraction of
/// m so that larger data sets keep more diversity across tasks.
inline std::size_t default_k_schedule(std::size_t m) {
    if (m < 4) throw std::invalid_argument("default_k_schedule: m must be >= 4");
    if (m <= 500) return 3 * m / 4;
    if (m <= 1000) return m / 2;
    if (m <= 2000) return m / 4;
    if (m <= 10000) return m / 8;
    return m / 10;
}

/// Replays inference on growing prefixes of the data: one decision per
/// prefix length L = start..m. With a config, each prefix runs the
/// ensemble with k = min(config.subsample_size, L-1) and a seed derived
/// from (config.seed, L); without one, the plain base learner runs.
/// Degenerate prefixes yield Undecided.
inline std::vector<Direction> prefix_replay(const SamplePairs& pairs, std::size_t start,
                                            const std::optional<EnsembleConfig>& config,
                                            std::size_t workers = 1,
                                            const BaseLearner& learner = igci_base_learner) {
    validate_pairs(pairs);
    const std::size_t m = pairs.size();
    if (start < 3 || start > m)
        throw std::invalid_argument("prefix_replay: need 3 <= start <= m");

    std::vector<Direction> decisions;
    decisions.reserve(m - start + 1);
    SamplePairs prefix;
    for (std::size_t len = start; len <= m; ++len) {
        prefix.x.assign(pairs.x.begin(), pairs.x.begin() + static_cast<std::ptrdiff_t>(len));
        prefix.y.assign(pairs.y.begin(), pairs.y.begin() + static_cast<std::ptrdiff_t>(len));
        if (config) {
            EnsembleConfig prefix_config = *config;
            prefix_config.subsample_size = std::min(config->subsample_size, len - 1);
            prefix_config.seed = mix_seed(config->seed, len);
            try {
                decisions.push_back(run_ensemble(prefix, prefix_config, workers, learner).direction);
            } catch (const AllTasksDegenerate&) {
                decisions.push_back(Direction::Undecided);
            }
        } else {
            try {
                decisions.push_back(learner(prefix).decision);
            } catch (const ConstantInput&) {
                decisions.push_back(Direction::Undecided);
            } catch (const DegenerateData&) {
                decisions.push_back(Direction::Undecided);
            }
        }
    }
    return decisions;
}

/// Number of adjacent decision changes in a replay sequence.
inline std::size_t flip_count(std::span<const Direction> decisions) {
    std::size_t flips = 0;
    for (std::size_t i = 1; i < decisions.size(); ++i)
        if (decisions[i] != decisions[i - 1]) ++flips;
    return flips;
}

}  // namespace peci
