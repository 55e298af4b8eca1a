#pragma once

#include <optional>
#include <span>
#include <vector>

namespace hcsel {

// Gaussian-kernel density estimate over d-dimensional feature vectors.
// Bandwidth is per dimension; when omitted, Silverman's rule
// h_j = 1.06 * sigma_j * n^(-1/5), with h_j = 1e-3 on zero-variance
// dimensions.
struct DensityModel {
    std::vector<std::vector<double>> sample_points;
    std::vector<double> bandwidth;

    int dim() const { return sample_points.empty() ? 0 : static_cast<int>(sample_points[0].size()); }
    std::size_t size() const { return sample_points.size(); }

    double evaluate(std::span<const double> x) const;
};

DensityModel kde_fit(const std::vector<std::vector<double>>& points,
                     const std::optional<std::vector<double>>& bandwidth = std::nullopt);
DensityModel kde_fit(const std::vector<std::vector<double>>& points, double bandwidth);

// Discrete KL divergence sum_i q_s(i) * log(q_s(i) / q_f(i)) where q_s, q_f
// are the two models' densities at `eval_points`, floored at 1e-12 and
// re-normalized to sum 1 over the evaluation set. Clamped at 0 from below.
double kl_discrete(const DensityModel& p_core, const DensityModel& p_full,
                   const std::vector<std::vector<double>>& eval_points);

} // namespace hcsel
