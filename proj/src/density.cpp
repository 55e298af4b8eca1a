#include "hcsel/density.hpp"

#include <algorithm>
#include <cmath>

#include "hcsel/errors.hpp"

namespace hcsel {

namespace {

constexpr double kDensityFloor = 1e-12;
constexpr double kTwoPi = 6.283185307179586;

void check_points(const std::vector<std::vector<double>>& points) {
    if (points.size() < 2)
        throw InsufficientSamples("kernel density estimation needs at least 2 points");
    const std::size_t d = points[0].size();
    if (d == 0) throw InvalidArgument("kde points must have dimension >= 1");
    for (const auto& p : points) {
        if (p.size() != d) throw DimensionMismatch("kde points have mixed dimensions");
        for (double v : p)
            if (!std::isfinite(v)) throw InvalidArgument("kde points must be finite");
    }
}

} // namespace

double DensityModel::evaluate(std::span<const double> x) const {
    const int d = dim();
    if (static_cast<int>(x.size()) != d)
        throw DimensionMismatch("evaluation point dimension mismatch");
    double norm = 1.0;
    for (int j = 0; j < d; ++j) norm *= bandwidth[j];
    norm *= std::pow(kTwoPi, d / 2.0);

    double sum = 0.0;
    for (const auto& p : sample_points) {
        double expo = 0.0;
        for (int j = 0; j < d; ++j) {
            const double z = (x[j] - p[j]) / bandwidth[j];
            expo += z * z;
        }
        sum += std::exp(-0.5 * expo);
    }
    return sum / (static_cast<double>(sample_points.size()) * norm);
}

DensityModel kde_fit(const std::vector<std::vector<double>>& points,
                     const std::optional<std::vector<double>>& bandwidth) {
    check_points(points);
    const std::size_t n = points.size();
    const std::size_t d = points[0].size();

    DensityModel model;
    model.sample_points = points;
    if (bandwidth) {
        if (bandwidth->size() != d)
            throw DimensionMismatch("bandwidth dimension does not match points");
        for (double h : *bandwidth)
            if (!(h > 0.0)) throw InvalidArgument("bandwidth must be > 0");
        model.bandwidth = *bandwidth;
        return model;
    }

    model.bandwidth.resize(d);
    const double n_factor = std::pow(static_cast<double>(n), -0.2);
    for (std::size_t j = 0; j < d; ++j) {
        double mean = 0.0;
        for (const auto& p : points) mean += p[j];
        mean /= static_cast<double>(n);
        double ss = 0.0;
        for (const auto& p : points) ss += (p[j] - mean) * (p[j] - mean);
        const double sd = std::sqrt(ss / static_cast<double>(n - 1));
        const double h = 1.06 * sd * n_factor;
        model.bandwidth[j] = h > 0.0 ? h : 1e-3;
    }
    return model;
}

DensityModel kde_fit(const std::vector<std::vector<double>>& points, double bandwidth) {
    check_points(points);
    if (!(bandwidth > 0.0)) throw InvalidArgument("bandwidth must be > 0");
    return kde_fit(points, std::vector<double>(points[0].size(), bandwidth));
}

double kl_discrete(const DensityModel& p_core, const DensityModel& p_full,
                   const std::vector<std::vector<double>>& eval_points) {
    if (eval_points.empty()) throw InvalidArgument("kl_discrete needs evaluation points");
    if (p_core.dim() != p_full.dim())
        throw DimensionMismatch("density models have different dimensions");

    const std::size_t n = eval_points.size();
    std::vector<double> qs(n), qf(n);
    double sum_s = 0.0, sum_f = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        qs[i] = std::max(p_core.evaluate(eval_points[i]), kDensityFloor);
        qf[i] = std::max(p_full.evaluate(eval_points[i]), kDensityFloor);
        sum_s += qs[i];
        sum_f += qf[i];
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = qs[i] / sum_s;
        const double b = qf[i] / sum_f;
        kl += a * std::log(a / b);
    }
    return std::max(kl, 0.0);
}

} // namespace hcsel
