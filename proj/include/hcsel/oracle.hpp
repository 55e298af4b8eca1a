#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <vector>

#include "hcsel/grid.hpp"

namespace hcsel {

struct OracleResponse {
    double loss = 0.0;
    std::vector<double> features;
};

struct CallCounts {
    std::uint64_t loss_calls = 0;
    std::uint64_t feature_calls = 0;

    CallCounts operator-(const CallCounts& other) const {
        return {loss_calls - other.loss_calls, feature_calls - other.feature_calls};
    }
};

enum class PerturbationKind { gaussian, speckle };

struct PerturbationSpec {
    double sigma = 0.05;           // pixel units
    PerturbationKind kind = PerturbationKind::gaussian;
    int n_draws = 8;               // draws averaged by the robustness score
};

// Frozen model f_theta behind a loss-and-features interface. Parameters are
// fixed at construction; selection never updates them. Implementations must
// be deterministic for fixed (image, selection, seed).
class Oracle {
public:
    virtual ~Oracle() = default;

    virtual int feature_dim() const = 0;
    virtual bool concurrent_safe() const { return true; }

    // Closed-form per-unit losses l(x, theta), when the loss decomposes
    // exactly over units (sensitivity-sampling verification needs this).
    virtual std::optional<std::vector<double>> unit_losses() const { return std::nullopt; }

    OracleResponse evaluate(const ImageTensor& image, const Selection& sel) const;
    double loss(const ImageTensor& image, const Selection& sel) const;
    std::vector<double> features(const ImageTensor& image, const Selection& sel) const;

    // f(X_s + delta): additive (or speckle) noise on the kept pixels only,
    // clamped to [0,1]. sigma == 0 is the exact zero-perturbation case;
    // sigma < 0 throws InvalidPerturbation.
    std::vector<double> perturbed_features(const ImageTensor& image, const Selection& sel,
                                           const PerturbationSpec& spec,
                                           std::uint64_t seed) const;

    CallCounts counts() const {
        return {loss_calls_.load(std::memory_order_relaxed),
                feature_calls_.load(std::memory_order_relaxed)};
    }
    void reset_counts() const {
        loss_calls_.store(0, std::memory_order_relaxed);
        feature_calls_.store(0, std::memory_order_relaxed);
    }

protected:
    virtual OracleResponse eval_impl(const ImageTensor& image, const Selection& sel) const = 0;

    // Default: materialize the masked image, add noise inside the kept
    // pixels, re-extract features. Closed-form oracles may override.
    virtual std::vector<double> perturb_impl(const ImageTensor& image, const Selection& sel,
                                             const PerturbationSpec& spec,
                                             std::uint64_t seed) const;

private:
    void check_contract(const OracleResponse& resp) const;

    mutable std::atomic<std::uint64_t> loss_calls_{0};
    mutable std::atomic<std::uint64_t> feature_calls_{0};
};

} // namespace hcsel
