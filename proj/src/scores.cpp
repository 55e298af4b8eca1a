#include "hcsel/scores.hpp"

#include <algorithm>
#include <cmath>

#include "hcsel/errors.hpp"
#include "hcsel/rng.hpp"

namespace hcsel {

void ScoreWeights::validate() const {
    if (lambda_ut_area < 0.0 || lambda_re < 0.0 || lambda_ro < 0.0 || lambda_sy < 0.0)
        throw InvalidArgument("score weights must be >= 0");
}

void NormalizationConstants::validate() const {
    if (!(d_max > 0.0) || !std::isfinite(d_max) || !(delta_max > 0.0) ||
        !std::isfinite(delta_max))
        throw InvalidArgument("normalization constants must be finite and > 0");
}

UtilityResult utility_from_losses(double loss_full, double loss_core, double area_frac,
                                  double lambda_area,
                                  std::optional<double> empty_keep_loss) {
    UtilityResult res;
    res.loss_full = loss_full;
    res.loss_core = loss_core;
    res.area_frac = area_frac;
    if (loss_full == 0.0) {
        res.degenerate_loss = true;
        double factor = 1.0;
        if (loss_core > 0.0) {
            const double ref = empty_keep_loss.value_or(0.0);
            factor = ref > 0.0 ? std::exp(-loss_core / ref) : 1.0;
        }
        res.value = factor + lambda_area * (1.0 - area_frac);
        return res;
    }
    res.value = std::exp(-std::abs(loss_full - loss_core) / loss_full) +
                lambda_area * (1.0 - area_frac);
    return res;
}

double representativeness_from_kl(double kl, double d_max) {
    return std::exp(-std::max(kl, 0.0) / d_max);
}

double robustness_from_shift(double mean_shift, double delta_max) {
    return std::exp(-std::max(mean_shift, 0.0) / delta_max);
}

SynergyResult synergy_from_losses(double loss_full,
                                  const std::vector<std::pair<double, double>>& solo_joint) {
    SynergyResult res;
    double score_sum = 0.0, ratio_sum = 0.0;
    for (const auto& [solo, joint] : solo_joint) {
        const double denom = loss_full - solo;
        if (std::abs(denom) < 1e-9) {
            ++res.probes_skipped;
            continue;
        }
        const double ratio = (loss_full - joint) / denom;
        score_sum += std::exp(-std::abs(ratio));
        ratio_sum += ratio;
        ++res.probes_used;
    }
    if (res.probes_used == 0) {
        res.degenerate = true;
        res.value = 1.0;
        return res;
    }
    res.value = score_sum / res.probes_used;
    res.mean_ratio = ratio_sum / res.probes_used;
    return res;
}

ScoreBreakdown score_combined(double s_ut, double s_re, double s_ro, double s_sy,
                              const ScoreWeights& weights, const ComponentFlags& components) {
    if (!components.ut)
        throw InvalidAblation("the utility component cannot be disabled");
    weights.validate();
    ScoreBreakdown b;
    b.components = components;
    b.s_ut = s_ut;
    b.s_re = components.re ? s_re : 1.0;
    b.s_ro = components.ro ? s_ro : 1.0;
    b.s_sy = components.sy ? s_sy : 1.0;
    b.combined = s_ut;
    if (components.re) b.combined += weights.lambda_re * s_re;
    if (components.ro) b.combined += weights.lambda_ro * s_ro;
    if (components.sy) b.combined += weights.lambda_sy * s_sy;
    return b;
}

GlobalDensityRef build_global_density(const ImageTensor& image, const Oracle& oracle,
                                      const FeaturePlan& plan) {
    GlobalDensityRef ref;
    for (const Region& cell : partition(image, plan.base_factor)) {
        RegionSet single({{cell}});
        ref.sample.push_back(oracle.features(image, Selection::keep(single)));
    }
    ref.model = kde_fit(ref.sample);
    return ref;
}

std::vector<std::vector<double>> set_feature_sample(const ImageTensor& image,
                                                    const Oracle& oracle, const RegionSet& set,
                                                    const FeaturePlan& plan,
                                                    const GlobalDensityRef* global) {
    if (set.empty()) throw EmptySelection("feature sample of an empty region set");
    if (set.covers_whole_image(image)) {
        if (global) return global->sample;
        return build_global_density(image, oracle, plan).sample;
    }
    std::vector<std::vector<double>> sample;
    if (set.size() >= 2) {
        for (const Region& r : set.regions) {
            RegionSet single({{r}});
            sample.push_back(oracle.features(image, Selection::keep(single)));
        }
        return sample;
    }
    // Singleton: subdivide once so the set spans >= 2 feature cells.
    const Region& r = set.regions[0];
    if (r.rows() < plan.sub_factor || r.cols() < plan.sub_factor)
        throw InsufficientSamples("singleton region spans fewer than 2 feature cells");
    for (const Region& child : partition(image, plan.sub_factor, r)) {
        RegionSet single({{child}});
        sample.push_back(oracle.features(image, Selection::keep(single)));
    }
    return sample;
}

UtilityResult score_utility(const ImageTensor& image, const RegionSet& set,
                            const Oracle& oracle, const ScoreWeights& weights) {
    if (set.empty()) throw EmptySelection("utility score of an empty region set");
    weights.validate();
    const double loss_full = oracle.loss(image, Selection::whole());
    const double loss_core = oracle.loss(image, Selection::keep(set));
    std::optional<double> ref;
    if (loss_full == 0.0 && loss_core > 0.0)
        ref = oracle.loss(image, Selection::keep(RegionSet{}));
    return utility_from_losses(loss_full, loss_core, area_fraction(set, image),
                               weights.lambda_ut_area, ref);
}

double score_representativeness(const ImageTensor& image, const RegionSet& set,
                                const Oracle& oracle, const NormalizationConstants& consts,
                                const FeaturePlan& plan, const GlobalDensityRef* global) {
    if (set.empty()) throw EmptySelection("representativeness score of an empty region set");
    consts.validate();
    GlobalDensityRef local;
    if (!global) {
        local = build_global_density(image, oracle, plan);
        global = &local;
    }
    if (set.covers_whole_image(image)) return 1.0; // KL(p||p) = 0 exactly
    const auto sample = set_feature_sample(image, oracle, set, plan, global);
    const double kl = kl_discrete(kde_fit(sample), global->model, global->sample);
    return representativeness_from_kl(kl, consts.d_max);
}

double score_robustness(const ImageTensor& image, const RegionSet& set, const Oracle& oracle,
                        const PerturbationSpec& perturbation,
                        const NormalizationConstants& consts, std::uint64_t seed) {
    if (set.empty()) throw EmptySelection("robustness score of an empty region set");
    consts.validate();
    const Selection sel = Selection::keep(set);
    const std::vector<double> base = oracle.features(image, sel);
    if (perturbation.sigma == 0.0) return 1.0;
    const int draws = std::max(1, perturbation.n_draws);
    double mean_shift = 0.0;
    for (int i = 0; i < draws; ++i) {
        const std::vector<double> moved = oracle.perturbed_features(
            image, sel, perturbation, mix_seed(seed, 0x526F42ULL, static_cast<std::uint64_t>(i)));
        double ss = 0.0;
        for (std::size_t j = 0; j < base.size(); ++j)
            ss += (base[j] - moved[j]) * (base[j] - moved[j]);
        mean_shift += std::sqrt(ss);
    }
    mean_shift /= draws;
    return robustness_from_shift(mean_shift, consts.delta_max);
}

SynergyResult score_synergy(const ImageTensor& image, const RegionSet& set,
                            const Oracle& oracle, const std::vector<Region>& probe_regions) {
    if (set.empty()) throw EmptySelection("synergy score of an empty region set");
    if (probe_regions.empty()) throw InvalidArgument("synergy needs at least one probe region");
    for (const Region& probe : probe_regions)
        for (const Region& r : set.regions)
            if (probe.intersects(r))
                throw InvalidArgument("synergy probes must be disjoint from the set");

    const double loss_full = oracle.loss(image, Selection::whole());
    std::vector<std::pair<double, double>> solo_joint;
    solo_joint.reserve(probe_regions.size());
    for (const Region& probe : probe_regions) {
        RegionSet solo_set({{probe}});
        const double solo = oracle.loss(image, Selection::drop(solo_set));
        RegionSet joint_set = set;
        joint_set.regions.push_back(probe);
        const double joint = oracle.loss(image, Selection::drop(joint_set));
        solo_joint.emplace_back(solo, joint);
    }
    return synergy_from_losses(loss_full, solo_joint);
}

NormalizationConstants calibrate_normalization(const ImageTensor& image, const Oracle& oracle,
                                               const FeaturePlan& plan,
                                               const PerturbationSpec& perturbation,
                                               std::uint64_t seed,
                                               const GlobalDensityRef* global,
                                               bool want_d_max, bool want_delta_max) {
    NormalizationConstants consts;
    GlobalDensityRef local;
    if (want_d_max && !global) {
        local = build_global_density(image, oracle, plan);
        global = &local;
    }

    if (want_d_max) {
        double max_kl = 0.0;
        bool any = false;
        for (const Region& cell : partition(image, plan.base_factor)) {
            if (cell.rows() < plan.sub_factor || cell.cols() < plan.sub_factor) continue;
            RegionSet single({{cell}});
            const auto sample = set_feature_sample(image, oracle, single, plan, global);
            const double kl = kl_discrete(kde_fit(sample), global->model, global->sample);
            if (std::isfinite(kl)) {
                max_kl = std::max(max_kl, kl);
                any = true;
            }
        }
        consts.d_max = (any && max_kl > 0.0) ? max_kl : 10.0;
    }

    double delta = 0.0;
    if (want_delta_max && perturbation.sigma > 0.0) {
        const std::vector<double> base = oracle.features(image, Selection::whole());
        const int draws = std::max(1, perturbation.n_draws);
        for (int i = 0; i < draws; ++i) {
            const std::vector<double> moved = oracle.perturbed_features(
                image, Selection::whole(), perturbation,
                mix_seed(seed, 0xCA11BEULL, static_cast<std::uint64_t>(i)));
            double ss = 0.0;
            for (std::size_t j = 0; j < base.size(); ++j)
                ss += (base[j] - moved[j]) * (base[j] - moved[j]);
            delta += std::sqrt(ss);
        }
        delta /= draws;
    }
    consts.delta_max = delta > 0.0 ? delta : 1.0;
    return consts;
}

} // namespace hcsel
