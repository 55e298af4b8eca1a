#pragma once

#include <cstdint>
#include <vector>

#include "hcsel/density.hpp"
#include "hcsel/oracle.hpp"

namespace hcsel {

struct ScoreWeights {
    double lambda_ut_area = 0.7; // area-compactness weight inside the utility score
    double lambda_re = 0.7;
    double lambda_ro = 0.65;
    double lambda_sy = 0.8;

    static ScoreWeights defaults() { return {}; }
    static ScoreWeights all_ones() { return {1.0, 1.0, 1.0, 1.0}; }
    void validate() const;
};

struct NormalizationConstants {
    double d_max = 10.0;     // representativeness reference divergence
    double delta_max = 1.0;  // robustness reference feature change
    void validate() const;
};

// Which score components participate in the combined score. The utility
// term is always retained; disabling it is an invalid ablation.
struct ComponentFlags {
    bool ut = true;
    bool re = true;
    bool ro = true;
    bool sy = true;

    static ComponentFlags all() { return {}; }
    static ComponentFlags utility_only() { return {true, false, false, false}; }
};

struct ScoreBreakdown {
    double s_ut = 0.0;
    double s_re = 1.0;
    double s_ro = 1.0;
    double s_sy = 1.0;
    double combined = 0.0;
    bool epsilon_check = false;   // |L(X)-L(X_s)| <= eps*L(X) for this set
    ComponentFlags components;
    bool degenerate_loss = false;     // L(X) = 0 utility convention used
    bool synergy_degenerate = false;  // every probe had a degenerate denominator
    double synergy_mean_ratio = 0.0;  // mean signed ratio across usable probes
};

// --- Pure score arithmetic (no oracle calls) --------------------------------

struct UtilityResult {
    double value = 0.0;
    bool degenerate_loss = false;
    double loss_full = 0.0;
    double loss_core = 0.0;
    double area_frac = 0.0;
};

// exp(-|L(X)-L(X_s)|/L(X)) + lambda*(1 - area_frac). When L(X) = 0 the
// relative scale is gone; the loss-preservation factor then falls back to
// exp(-L(X_s)/L_ref) with L_ref the keep-nothing loss (1 when L(X_s)=0,
// matching the identity case exactly), and the result is flagged.
UtilityResult utility_from_losses(double loss_full, double loss_core, double area_frac,
                                  double lambda_area,
                                  std::optional<double> empty_keep_loss = std::nullopt);

double representativeness_from_kl(double kl, double d_max);
double robustness_from_shift(double mean_shift, double delta_max);

struct SynergyResult {
    double value = 1.0;
    double mean_ratio = 0.0;
    int probes_used = 0;
    int probes_skipped = 0;
    bool degenerate = false;
};

// Per probe: ratio = (L(X) - joint) / (L(X) - solo); probes whose
// denominator is within 1e-9 of zero are skipped. Score is the mean of
// exp(-|ratio|) over usable probes; if none are usable the result is the
// degenerate score 1.
SynergyResult synergy_from_losses(double loss_full,
                                  const std::vector<std::pair<double, double>>& solo_joint);

ScoreBreakdown score_combined(double s_ut, double s_re, double s_ro, double s_sy,
                              const ScoreWeights& weights, const ComponentFlags& components);

// --- Feature samples for the density scores ---------------------------------
// A set with >= 2 regions contributes one oracle feature vector per region;
// a singleton is subdivided once by `sub_factor`; a set covering the whole
// image reuses the global sample so its KL is exactly zero. The global
// reference is the level-0 base_factor x base_factor partition.

struct FeaturePlan {
    int base_factor = 4;
    int sub_factor = 2;
};

struct GlobalDensityRef {
    std::vector<std::vector<double>> sample;
    DensityModel model;
};

GlobalDensityRef build_global_density(const ImageTensor& image, const Oracle& oracle,
                                      const FeaturePlan& plan);

std::vector<std::vector<double>> set_feature_sample(const ImageTensor& image,
                                                    const Oracle& oracle, const RegionSet& set,
                                                    const FeaturePlan& plan,
                                                    const GlobalDensityRef* global = nullptr);

// --- Oracle-driven score operations ------------------------------------------

UtilityResult score_utility(const ImageTensor& image, const RegionSet& set,
                            const Oracle& oracle, const ScoreWeights& weights);

double score_representativeness(const ImageTensor& image, const RegionSet& set,
                                const Oracle& oracle, const NormalizationConstants& consts,
                                const FeaturePlan& plan = {},
                                const GlobalDensityRef* global = nullptr);

double score_robustness(const ImageTensor& image, const RegionSet& set, const Oracle& oracle,
                        const PerturbationSpec& perturbation,
                        const NormalizationConstants& consts, std::uint64_t seed);

SynergyResult score_synergy(const ImageTensor& image, const RegionSet& set,
                            const Oracle& oracle, const std::vector<Region>& probe_regions);

// Per-image calibration of the normalization constants: d_max is the
// maximum discrete KL over the level-0 singleton candidates (fallback 10),
// delta_max the mean whole-image feature-perturbation norm (fallback 1).
// `global` reuses an existing reference; the want_* switches skip the
// corresponding oracle work when a component is disabled.
NormalizationConstants calibrate_normalization(const ImageTensor& image, const Oracle& oracle,
                                               const FeaturePlan& plan,
                                               const PerturbationSpec& perturbation,
                                               std::uint64_t seed,
                                               const GlobalDensityRef* global = nullptr,
                                               bool want_d_max = true,
                                               bool want_delta_max = true);

} // namespace hcsel
