#pragma once

// Synthetic benchmark generators. Both produce pairs whose ground truth
// is x->y: an explicit exponential law with additive Gaussian noise, and
// nonparametric cause-effect pairs drawn from Gaussian-process priors
// with an additive-sum RBF kernel.

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <vector>

#include "peci/core.hpp"
#include "peci/errors.hpp"
#include "peci/random.hpp"

namespace peci {

struct ExpGenParams {
    std::size_t m = 2000;
    double noise_var = 40.0;  // variance of both observation noises
    std::uint64_t seed = 0;
};

struct GpGenParams {
    std::size_t m = 1000;
    bool confounded = false;  // adds a shared input e3 to both kernels
    double tau = 1e-4;        // observation jitter added as tau^2 I
    std::uint64_t seed = 0;
};

struct GeneratedPairs {
    SamplePairs pairs;        // both columns normalized onto [0,1]
    SamplePairs raw;          // columns before normalization
    Direction truth = Direction::XCausesY;
};

/// Cause ~ N(0,1), effect = exp(cause), both observed with additive
/// N(0, noise_var) noise, then each column normalized onto [0,1].
/// Draw order is fixed (cause, x-noise, y-noise) so a seed pins the data.
inline GeneratedPairs gen_exp_pairs(const ExpGenParams& params) {
    if (params.m < 3) throw std::invalid_argument("gen_exp_pairs: m must be >= 3");
    if (params.noise_var < 0.0)
        throw std::invalid_argument("gen_exp_pairs: noise_var must be >= 0");
    RandomEngine eng = make_stream_engine(params.seed, 0);

    GeneratedPairs out;
    const std::vector<double> cause = standard_normal_vector(eng, params.m);
    out.raw.x.resize(params.m);
    out.raw.y.resize(params.m);
    for (std::size_t i = 0; i < params.m; ++i) {
        out.raw.x[i] = cause[i];
        out.raw.y[i] = std::exp(cause[i]);
    }
    if (params.noise_var > 0.0) {
        const double sd = std::sqrt(params.noise_var);
        for (std::size_t i = 0; i < params.m; ++i) out.raw.x[i] += sd * standard_normal(eng);
        for (std::size_t i = 0; i < params.m; ++i) out.raw.y[i] += sd * standard_normal(eng);
    }
    out.pairs.x = normalize_unit_interval(out.raw.x);
    out.pairs.y = normalize_unit_interval(out.raw.y);
    return out;
}

/// Additive RBF Gram matrix: K(i,j) = sum_d exp(-(u_id - u_jd)^2 / theta_d^2).
/// Symmetric with diagonal equal to the number of summed dimensions.
inline Eigen::MatrixXd rbf_gram(const Eigen::MatrixXd& inputs,
                                std::span<const double> length_scales) {
    const Eigen::Index n = inputs.rows();
    const Eigen::Index dims = inputs.cols();
    if (static_cast<std::size_t>(dims) != length_scales.size())
        throw std::invalid_argument("rbf_gram: one length scale per input dimension");
    Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index d = 0; d < dims; ++d) {
        const double inv_theta2 = 1.0 / (length_scales[d] * length_scales[d]);
        for (Eigen::Index i = 0; i < n; ++i) {
            gram(i, i) += 1.0;
            for (Eigen::Index j = i + 1; j < n; ++j) {
                const double diff = inputs(i, d) - inputs(j, d);
                const double v = std::exp(-diff * diff * inv_theta2);
                gram(i, j) += v;
                gram(j, i) += v;
            }
        }
    }
    return gram;
}

namespace detail {

inline Eigen::MatrixXd cholesky_with_retry(Eigen::MatrixXd cov, double jitter) {
    cov.diagonal().array() += jitter;
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    cov.diagonal().array() += 9.0 * jitter;  // retry once with 10x jitter
    llt.compute(cov);
    if (llt.info() == Eigen::Success) return llt.matrixL();
    throw FactorizationFailure("gp sample: covariance not positive definite");
}

inline double column_stddev(const Eigen::VectorXd& v) {
    const double mean = v.mean();
    const double ss = (v.array() - mean).square().sum();
    return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

// One lognormal(0,1) length scale per column, scaled by that column's
// sample standard deviation to keep the kernel width matched to the data.
inline std::vector<double> draw_length_scales(const Eigen::MatrixXd& inputs,
                                              RandomEngine& eng) {
    std::vector<double> scales(static_cast<std::size_t>(inputs.cols()));
    for (Eigen::Index d = 0; d < inputs.cols(); ++d) {
        const double sd = column_stddev(inputs.col(d));
        scales[static_cast<std::size_t>(d)] = std::exp(standard_normal(eng)) * (sd > 0.0 ? sd : 1.0);
    }
    return scales;
}

}  // namespace detail

/// Zero-mean Gaussian-process draw over the given inputs: builds the
/// additive RBF Gram matrix, adds tau^2 I, factorizes (one jitter retry),
/// and returns L z for a standard-normal z.
inline Eigen::VectorXd sample_gp(const Eigen::MatrixXd& inputs,
                                 std::span<const double> length_scales, double tau,
                                 RandomEngine& eng) {
    const Eigen::MatrixXd lower =
        detail::cholesky_with_retry(rbf_gram(inputs, length_scales), tau * tau);
    Eigen::VectorXd z(inputs.rows());
    for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = standard_normal(eng);
    return lower * z;
}

/// Gaussian-process cause-effect pairs: the cause is a GP over a latent
/// input e1, the effect a GP over (cause, e2); with `confounded` a shared
/// latent e3 joins both input sets. Both columns are normalized onto [0,1].
inline GeneratedPairs gen_gp_pairs(const GpGenParams& params) {
    if (params.m < 3) throw std::invalid_argument("gen_gp_pairs: m must be >= 3");
    if (params.m > 5000)
        throw std::invalid_argument("gen_gp_pairs: m > 5000 needs more than a dense factorization");
    if (!(params.tau > 0.0)) throw std::invalid_argument("gen_gp_pairs: tau must be > 0");
    RandomEngine eng = make_stream_engine(params.seed, 0);
    const Eigen::Index n = static_cast<Eigen::Index>(params.m);

    auto draw_column = [&] {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = standard_normal(eng);
        return v;
    };
    const Eigen::VectorXd e1 = draw_column();
    const Eigen::VectorXd e2 = draw_column();
    Eigen::VectorXd e3;
    if (params.confounded) e3 = draw_column();

    Eigen::MatrixXd cause_inputs(n, params.confounded ? 2 : 1);
    cause_inputs.col(0) = e1;
    if (params.confounded) cause_inputs.col(1) = e3;
    const auto cause_scales = detail::draw_length_scales(cause_inputs, eng);
    const Eigen::VectorXd cause = sample_gp(cause_inputs, cause_scales, params.tau, eng);

    Eigen::MatrixXd effect_inputs(n, params.confounded ? 3 : 2);
    effect_inputs.col(0) = cause;
    effect_inputs.col(1) = e2;
    if (params.confounded) effect_inputs.col(2) = e3;
    const auto effect_scales = detail::draw_length_scales(effect_inputs, eng);
    const Eigen::VectorXd effect = sample_gp(effect_inputs, effect_scales, params.tau, eng);

    GeneratedPairs out;
    out.raw.x.assign(cause.data(), cause.data() + n);
    out.raw.y.assign(effect.data(), effect.data() + n);
    out.pairs.x = normalize_unit_interval(out.raw.x);
    out.pairs.y = normalize_unit_interval(out.raw.y);
    return out;
}

}  // namespace peci
