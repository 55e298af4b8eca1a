#include "hcsel/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "hcsel/errors.hpp"
#include "hcsel/rng.hpp"

namespace hcsel {

void BoundParams::validate() const {
    if (!(epsilon > 0.0) || !(epsilon < 1.0))
        throw InvalidBoundParams("epsilon must lie in (0,1)");
    if (!(delta > 0.0) || !(delta < 1.0))
        throw InvalidBoundParams("delta must lie in (0,1)");
    if (!(total_sensitivity > 1.0) || !std::isfinite(total_sensitivity))
        throw InvalidBoundParams("total sensitivity S must be > 1");
    if (!(constant_c > 0.0) || !std::isfinite(constant_c))
        throw InvalidBoundParams("constant C must be > 0");
}

double coreset_size_value(double epsilon, double total_sensitivity, double delta,
                          double constant_c) {
    return (2.0 * total_sensitivity / (epsilon * epsilon)) *
           (8.0 * constant_c * constant_c + total_sensitivity * std::log(2.0 / delta));
}

std::int64_t coreset_size_lower_bound(const BoundParams& params) {
    params.validate();
    const double g = coreset_size_value(params.epsilon, params.total_sensitivity, params.delta,
                                        params.constant_c);
    if (!(g < 9.0e18)) throw InvalidBoundParams("coreset size bound overflows");
    return static_cast<std::int64_t>(std::ceil(g));
}

SensitivityProfile SensitivityProfile::uniform(std::vector<double> importance) {
    const std::size_t n = importance.size();
    if (n == 0) throw InvalidArgument("sensitivity profile needs at least one unit");
    std::vector<double> p(n, 1.0 / static_cast<double>(n));
    return with_measure(std::move(importance), std::move(p));
}

SensitivityProfile SensitivityProfile::with_measure(std::vector<double> importance,
                                                    std::vector<double> measure) {
    SensitivityProfile profile;
    profile.importance = std::move(importance);
    profile.measure = std::move(measure);
    double total = 0.0;
    for (std::size_t i = 0; i < profile.importance.size(); ++i)
        total += profile.importance[i] * profile.measure[i];
    profile.total_sensitivity = total;
    profile.validate();
    return profile;
}

void SensitivityProfile::validate() const {
    if (importance.empty() || importance.size() != measure.size())
        throw InvalidArgument("sensitivity profile shape mismatch");
    double psum = 0.0, total = 0.0;
    for (std::size_t i = 0; i < importance.size(); ++i) {
        if (!(importance[i] > 1.0) || !std::isfinite(importance[i]))
            throw InvalidArgument("importance values must be > 1");
        if (!(measure[i] >= 0.0)) throw InvalidArgument("measure values must be >= 0");
        psum += measure[i];
        total += importance[i] * measure[i];
    }
    if (std::abs(psum - 1.0) > 1e-9)
        throw InvalidArgument("measure must sum to 1");
    if (std::abs(total - total_sensitivity) > 1e-9)
        throw InvalidArgument("stored total sensitivity inconsistent with the measure");
}

std::vector<double> sensitivity_weights(const SensitivityProfile& profile, std::int64_t m,
                                        const std::vector<std::size_t>& sampled_units) {
    if (m < 1) throw InvalidArgument("sample size m must be >= 1");
    profile.validate();
    std::vector<double> weights;
    weights.reserve(sampled_units.size());
    for (std::size_t unit : sampled_units) {
        if (unit >= profile.size()) throw UnknownUnit("sampled unit not present in the profile");
        weights.push_back(profile.total_sensitivity /
                          (static_cast<double>(m) * profile.importance[unit]));
    }
    return weights;
}

namespace {

double sorted_quantile(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return 0.0;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

} // namespace

VerifyResult monte_carlo_verify(const SensitivityProfile& profile,
                                const std::vector<double>& unit_losses, BoundParams params,
                                int trials, std::uint64_t seed, std::int64_t m_override) {
    profile.validate();
    if (unit_losses.size() != profile.size())
        throw DimensionMismatch("unit losses do not match the sensitivity profile");
    if (trials < 1) throw InvalidArgument("trials must be >= 1");

    params.total_sensitivity = profile.total_sensitivity;
    params.validate();

    const std::size_t n = profile.size();
    double full_loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) full_loss += unit_losses[i] * profile.measure[i];
    if (!(full_loss > 0.0))
        throw InvalidArgument("full loss must be > 0 for a relative-error check");

    // Sampling distribution Q(x) = s(x) P(x) / S.
    std::vector<double> cdf(n);
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        acc += profile.importance[i] * profile.measure[i] / profile.total_sensitivity;
        cdf[i] = acc;
    }
    cdf[n - 1] = 1.0;

    VerifyResult result;
    result.m = m_override > 0 ? m_override : coreset_size_lower_bound(params);
    result.trials = trials;
    result.full_loss = full_loss;
    result.params = params;

    int successes = 0;
    result.rel_errors.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        Rng rng(mix_seed(seed, 0x7BA1ULL, static_cast<std::uint64_t>(t)));
        double estimate = 0.0;
        for (std::int64_t k = 0; k < result.m; ++k) {
            const double u = rng.uniform();
            const std::size_t idx =
                std::lower_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
            estimate += profile.total_sensitivity * unit_losses[idx] /
                        (static_cast<double>(result.m) * profile.importance[idx]);
        }
        const double rel = std::abs(full_loss - estimate) / full_loss;
        result.rel_errors.push_back(rel);
        if (rel <= params.epsilon) ++successes;
    }
    result.success_rate = static_cast<double>(successes) / trials;

    std::vector<double> sorted = result.rel_errors;
    std::sort(sorted.begin(), sorted.end());
    result.error_q50 = sorted_quantile(sorted, 0.5);
    result.error_q90 = sorted_quantile(sorted, 0.9);
    result.error_max = sorted.back();
    return result;
}

VerifyResult monte_carlo_verify(const SensitivityProfile& profile, const Oracle& oracle,
                                BoundParams params, int trials, std::uint64_t seed,
                                std::int64_t m_override) {
    const auto losses = oracle.unit_losses();
    if (!losses)
        throw OracleNotDecomposable("oracle does not expose closed-form per-unit losses");
    return monte_carlo_verify(profile, *losses, params, trials, seed, m_override);
}

} // namespace hcsel
