#pragma once

#include <memory>
#include <optional>

#include "hcsel/oracle.hpp"

namespace hcsel {

// --- Linear probe ----------------------------------------------------------
// Desk-scale stand-in for a frozen encoder plus classification head.
//
// Classification pipeline (kept deliberately simple so tests can re-derive
// it independently):
//   1. the evaluated image (masked upstream) is reduced to grayscale and
//      mean-pooled into cells of `cell_pixels`;
//   2. each class template is mean-pooled to 2x2 / 4x4 / 6x6 cells and slid
//      over the pooled grid with `window_stride`;
//   3. per window, normalized cross-correlation (NCC) against the pooled
//      template; windows with near-zero variance score 0;
//   4. logit_k = temperature * sum over windows/scales of
//      max(0, ncc - ncc_threshold);
//   5. loss = cross-entropy of softmax(logits) against `true_label`.
//
// A uniform image therefore yields exactly-uniform probabilities and loss
// ln(num_classes). The exported feature vector is the image mean-pooled to
// `feature_grid` x `feature_grid`.
struct LinearProbeOptions {
    int cell_pixels = 8;
    int feature_grid = 8;
    int window_stride = 2;
    double temperature = 6.0;
    double ncc_threshold = 0.35;
};

class LinearProbeOracle : public Oracle {
public:
    LinearProbeOracle(std::vector<ImageTensor> class_templates, int true_label,
                      LinearProbeOptions options = {});

    int feature_dim() const override { return options_.feature_grid * options_.feature_grid; }
    int num_classes() const { return static_cast<int>(templates_pooled_.size()); }
    int true_label() const { return true_label_; }
    const LinearProbeOptions& options() const { return options_; }

    // Raw class scores on the masked input (not call-counted; used by the
    // accuracy harnesses and the perturbation probe).
    std::vector<double> class_logits(const ImageTensor& image, const Selection& sel) const;
    std::vector<double> class_logits_raw(const ImageTensor& prepared) const;
    int predict(const ImageTensor& image, const Selection& sel) const;

protected:
    OracleResponse eval_impl(const ImageTensor& image, const Selection& sel) const override;

private:
    struct PooledTemplate {
        int cells = 0;                 // side length in pooled cells
        std::vector<double> values;    // cells*cells block means
    };

    std::vector<std::vector<PooledTemplate>> templates_pooled_; // [class][scale]
    int true_label_ = 0;
    LinearProbeOptions options_;
};

std::unique_ptr<LinearProbeOracle> make_linear_probe_oracle(
    std::vector<ImageTensor> class_templates, int true_label, LinearProbeOptions options = {});

// --- Quadratic synthetic oracle ---------------------------------------------
// Analytically tractable loss: loss(selection) = saliency mass outside the
// kept pixels. Exactly decomposable over pixels, which the Theorem-1 Monte
// Carlo verifier requires. Features are geometry/mass statistics of the kept
// area computed from the saliency raster; they ignore pixel values, so this
// oracle is perturbation-invariant by construction.
class QuadraticSyntheticOracle : public Oracle {
public:
    // `saliency` is row-major height*width, all values >= 0. The raster is
    // quantized to multiples of 2^-20 so that rectangle sums are exact in
    // double (order-independent), making loss == 0 exact when a selection
    // covers all mass.
    QuadraticSyntheticOracle(std::vector<double> saliency, int height, int width);

    int feature_dim() const override { return 6; }

    double total_mass() const { return total_mass_; }
    const std::vector<double>& saliency() const { return saliency_; }
    int height() const { return height_; }
    int width() const { return width_; }

    // Mass inside a rectangle (exact for the quantized raster).
    double region_mass(const Region& r) const;

    // Per-pixel unit losses for sensitivity sampling (Theorem-1 harness).
    std::optional<std::vector<double>> unit_losses() const override;

protected:
    OracleResponse eval_impl(const ImageTensor& image, const Selection& sel) const override;
    std::vector<double> perturb_impl(const ImageTensor& image, const Selection& sel,
                                     const PerturbationSpec& spec,
                                     std::uint64_t seed) const override;

private:
    double sat_sum(const std::vector<double>& sat, const Region& r) const;

    int height_ = 0;
    int width_ = 0;
    std::vector<double> saliency_;
    // Summed-area tables: mass, row-weighted and column-weighted mass.
    std::vector<double> sat_mass_, sat_row_, sat_col_, sat_row2_, sat_col2_;
    double total_mass_ = 0.0;
};

std::unique_ptr<QuadraticSyntheticOracle> make_quadratic_oracle(std::vector<double> saliency,
                                                                int height, int width);

} // namespace hcsel
