#pragma once

#include <cstdint>
#include <vector>

#include "hcsel/oracle.hpp"

namespace hcsel {

struct BoundParams {
    double epsilon = 0.2;
    double delta = 0.1;
    double total_sensitivity = 2.0; // S, > 1
    double constant_c = 1.0;        // the theorem's unassigned universal constant

    void validate() const; // throws InvalidBoundParams
};

// Raw g(eps, S, delta) = (2S/eps^2) * (8C^2 + S ln(2/delta)), no range
// checks (unit tests exercise the algebraic boundaries directly).
double coreset_size_value(double epsilon, double total_sensitivity, double delta,
                          double constant_c);

// ceil(g) with validated parameters.
std::int64_t coreset_size_lower_bound(const BoundParams& params);

// Per-unit importance s(x) > 1 over the finest units, with a probability
// measure P (uniform by default) and the cached total S = sum s(x) P(x).
struct SensitivityProfile {
    std::vector<double> importance;  // s(x), each > 1
    std::vector<double> measure;     // P(x), sums to 1
    double total_sensitivity = 0.0;  // S

    static SensitivityProfile uniform(std::vector<double> importance);
    static SensitivityProfile with_measure(std::vector<double> importance,
                                           std::vector<double> measure);
    std::size_t size() const { return importance.size(); }
    void validate() const;
};

// nu(x) = S / (m * s(x)) for each sampled unit (indices into the profile).
std::vector<double> sensitivity_weights(const SensitivityProfile& profile, std::int64_t m,
                                        const std::vector<std::size_t>& sampled_units);

struct VerifyResult {
    BoundParams params;
    std::int64_t m = 0;
    int trials = 0;
    double success_rate = 0.0;
    double full_loss = 0.0;
    std::vector<double> rel_errors; // one per trial
    double error_q50 = 0.0, error_q90 = 0.0, error_max = 0.0;
};

// Runs `trials` independent experiments: draw m units i.i.d. proportional
// to s(x)P(x), form the weighted estimate sum nu(x) l(x), and record whether
// the relative error is <= params.epsilon. `m_override` replaces the
// g-derived size (used for the under-sampling demonstration).
VerifyResult monte_carlo_verify(const SensitivityProfile& profile,
                                const std::vector<double>& unit_losses, BoundParams params,
                                int trials, std::uint64_t seed,
                                std::int64_t m_override = 0);

// Same, taking the per-unit losses from a decomposable oracle; throws
// OracleNotDecomposable when the oracle has no closed-form unit losses.
VerifyResult monte_carlo_verify(const SensitivityProfile& profile, const Oracle& oracle,
                                BoundParams params, int trials, std::uint64_t seed,
                                std::int64_t m_override = 0);

} // namespace hcsel
