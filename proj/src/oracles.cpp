#include "hcsel/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "hcsel/errors.hpp"

namespace hcsel {

namespace {

// Mean-pools a grayscale view of `image` into an n_rows x n_cols grid; the
// last row/column of cells absorbs any remainder.
std::vector<double> pool_grid(const ImageTensor& image, int n_rows, int n_cols) {
    std::vector<double> out(static_cast<std::size_t>(n_rows) * n_cols, 0.0);
    const int cell_r = std::max(1, image.height / n_rows);
    const int cell_c = std::max(1, image.width / n_cols);
    for (int i = 0; i < n_rows; ++i) {
        const int r0 = std::min(i * cell_r, image.height - 1);
        const int r1 = (i == n_rows - 1) ? image.height : std::min((i + 1) * cell_r, image.height);
        for (int j = 0; j < n_cols; ++j) {
            const int c0 = std::min(j * cell_c, image.width - 1);
            const int c1 =
                (j == n_cols - 1) ? image.width : std::min((j + 1) * cell_c, image.width);
            double sum = 0.0;
            int count = 0;
            for (int r = r0; r < std::max(r1, r0 + 1); ++r)
                for (int c = c0; c < std::max(c1, c0 + 1); ++c, ++count)
                    sum += image.gray_at(r, c);
            out[static_cast<std::size_t>(i) * n_cols + j] = count ? sum / count : 0.0;
        }
    }
    return out;
}

// NCC between a window of the pooled grid and a pooled template; 0 when
// either side is (numerically) constant.
double window_ncc(const std::vector<double>& grid, int grid_cols, int top, int left,
                  const std::vector<double>& tmpl, int side) {
    const int n = side * side;
    double wmean = 0.0, tmean = 0.0;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            wmean += grid[static_cast<std::size_t>(top + i) * grid_cols + (left + j)];
            tmean += tmpl[static_cast<std::size_t>(i) * side + j];
        }
    wmean /= n;
    tmean /= n;
    double dot = 0.0, wn = 0.0, tn = 0.0;
    for (int i = 0; i < side; ++i)
        for (int j = 0; j < side; ++j) {
            const double w =
                grid[static_cast<std::size_t>(top + i) * grid_cols + (left + j)] - wmean;
            const double t = tmpl[static_cast<std::size_t>(i) * side + j] - tmean;
            dot += w * t;
            wn += w * w;
            tn += t * t;
        }
    if (wn < 1e-12 || tn < 1e-12) return 0.0;
    return dot / std::sqrt(wn * tn);
}

constexpr int kTemplateScales[] = {2, 4, 6};

} // namespace

LinearProbeOracle::LinearProbeOracle(std::vector<ImageTensor> class_templates, int true_label,
                                     LinearProbeOptions options)
    : true_label_(true_label), options_(options) {
    if (class_templates.size() < 2)
        throw InvalidArgument("linear probe needs at least two class templates");
    if (true_label < 0 || true_label >= static_cast<int>(class_templates.size()))
        throw InvalidArgument("true label out of range for the template matrix");
    if (options_.cell_pixels < 1 || options_.feature_grid < 1 || options_.window_stride < 1)
        throw InvalidArgument("invalid linear probe options");
    templates_pooled_.reserve(class_templates.size());
    for (const auto& tmpl : class_templates) {
        tmpl.validate();
        std::vector<PooledTemplate> scales;
        for (int side : kTemplateScales)
            scales.push_back({side, pool_grid(tmpl, side, side)});
        templates_pooled_.push_back(std::move(scales));
    }
}

std::vector<double> LinearProbeOracle::class_logits_raw(const ImageTensor& prepared) const {
    const int gh = std::max(1, prepared.height / options_.cell_pixels);
    const int gw = std::max(1, prepared.width / options_.cell_pixels);
    const std::vector<double> grid = pool_grid(prepared, gh, gw);

    std::vector<double> logits(templates_pooled_.size(), 0.0);
    for (std::size_t k = 0; k < templates_pooled_.size(); ++k) {
        double sum = 0.0;
        for (const auto& pt : templates_pooled_[k]) {
            if (pt.cells > gh || pt.cells > gw) continue;
            for (int top = 0; top + pt.cells <= gh; top += options_.window_stride)
                for (int left = 0; left + pt.cells <= gw; left += options_.window_stride) {
                    const double ncc = window_ncc(grid, gw, top, left, pt.values, pt.cells);
                    if (ncc > options_.ncc_threshold) sum += ncc - options_.ncc_threshold;
                }
        }
        logits[k] = options_.temperature * sum;
    }
    return logits;
}

std::vector<double> LinearProbeOracle::class_logits(const ImageTensor& image,
                                                    const Selection& sel) const {
    return class_logits_raw(mask_apply(image, sel));
}

int LinearProbeOracle::predict(const ImageTensor& image, const Selection& sel) const {
    const std::vector<double> logits = class_logits(image, sel);
    return static_cast<int>(std::max_element(logits.begin(), logits.end()) - logits.begin());
}

OracleResponse LinearProbeOracle::eval_impl(const ImageTensor& image,
                                            const Selection& sel) const {
    const ImageTensor prepared = mask_apply(image, sel);
    const std::vector<double> logits = class_logits_raw(prepared);

    // Numerically stable cross-entropy of softmax(logits) at true_label_.
    const double mx = *std::max_element(logits.begin(), logits.end());
    double lse = 0.0;
    for (double v : logits) lse += std::exp(v - mx);
    lse = std::log(lse) + mx;
    OracleResponse resp;
    resp.loss = lse - logits[true_label_];
    if (resp.loss < 0.0) resp.loss = 0.0;
    resp.features = pool_grid(prepared, options_.feature_grid, options_.feature_grid);
    return resp;
}

std::unique_ptr<LinearProbeOracle> make_linear_probe_oracle(
    std::vector<ImageTensor> class_templates, int true_label, LinearProbeOptions options) {
    return std::make_unique<LinearProbeOracle>(std::move(class_templates), true_label, options);
}

// --- QuadraticSyntheticOracle ------------------------------------------------

namespace {

// Quantization grid for exact rectangle sums (see header).
double quantize_dyadic(double v) { return std::round(v * 1048576.0) / 1048576.0; }

std::vector<double> build_sat(const std::vector<double>& values, int h, int w,
                              double (*weight)(int, int)) {
    // sat is (h+1) x (w+1), sat[r][c] = sum over rows < r, cols < c.
    std::vector<double> sat(static_cast<std::size_t>(h + 1) * (w + 1), 0.0);
    for (int r = 0; r < h; ++r) {
        double row_acc = 0.0;
        for (int c = 0; c < w; ++c) {
            row_acc += values[static_cast<std::size_t>(r) * w + c] * weight(r, c);
            sat[static_cast<std::size_t>(r + 1) * (w + 1) + (c + 1)] =
                sat[static_cast<std::size_t>(r) * (w + 1) + (c + 1)] + row_acc;
        }
    }
    return sat;
}

} // namespace

QuadraticSyntheticOracle::QuadraticSyntheticOracle(std::vector<double> saliency, int height,
                                                   int width)
    : height_(height), width_(width), saliency_(std::move(saliency)) {
    if (height_ < 1 || width_ < 1 ||
        saliency_.size() != static_cast<std::size_t>(height_) * width_)
        throw InvalidArgument("saliency raster size does not match dimensions");
    for (double& v : saliency_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw InvalidArgument("saliency values must be finite and >= 0");
        v = quantize_dyadic(v);
    }
    sat_mass_ = build_sat(saliency_, height_, width_, +[](int, int) { return 1.0; });
    sat_row_ = build_sat(saliency_, height_, width_, +[](int r, int) { return double(r); });
    sat_col_ = build_sat(saliency_, height_, width_, +[](int, int c) { return double(c); });
    sat_row2_ =
        build_sat(saliency_, height_, width_, +[](int r, int) { return double(r) * r; });
    sat_col2_ =
        build_sat(saliency_, height_, width_, +[](int, int c) { return double(c) * c; });
    total_mass_ = sat_mass_.back();
}

double QuadraticSyntheticOracle::sat_sum(const std::vector<double>& sat, const Region& r) const {
    const int w1 = width_ + 1;
    return sat[static_cast<std::size_t>(r.row_end) * w1 + r.col_end] -
           sat[static_cast<std::size_t>(r.row_start) * w1 + r.col_end] -
           sat[static_cast<std::size_t>(r.row_end) * w1 + r.col_start] +
           sat[static_cast<std::size_t>(r.row_start) * w1 + r.col_start];
}

double QuadraticSyntheticOracle::region_mass(const Region& r) const {
    return sat_sum(sat_mass_, r);
}

std::optional<std::vector<double>> QuadraticSyntheticOracle::unit_losses() const {
    return saliency_;
}

OracleResponse QuadraticSyntheticOracle::eval_impl(const ImageTensor& image,
                                                   const Selection& sel) const {
    if (image.height != height_ || image.width != width_)
        throw OracleContractViolation("image dimensions do not match the saliency raster");
    sel.regions.validate(height_, width_);

    double kept_mass = 0.0, kept_row = 0.0, kept_col = 0.0, kept_row2 = 0.0, kept_col2 = 0.0;
    std::int64_t kept_area = 0;
    const Region whole{0, height_, 0, width_, 0, 0, std::nullopt};
    auto accumulate = [&](const Region& r) {
        kept_mass += sat_sum(sat_mass_, r);
        kept_row += sat_sum(sat_row_, r);
        kept_col += sat_sum(sat_col_, r);
        kept_row2 += sat_sum(sat_row2_, r);
        kept_col2 += sat_sum(sat_col2_, r);
        kept_area += r.area();
    };

    if (sel.mode == Selection::Mode::whole) {
        accumulate(whole);
    } else if (sel.mode == Selection::Mode::keep) {
        for (const auto& r : sel.regions.regions) accumulate(r);
    } else {
        accumulate(whole);
        for (const auto& r : sel.regions.regions) {
            kept_mass -= sat_sum(sat_mass_, r);
            kept_row -= sat_sum(sat_row_, r);
            kept_col -= sat_sum(sat_col_, r);
            kept_row2 -= sat_sum(sat_row2_, r);
            kept_col2 -= sat_sum(sat_col2_, r);
            kept_area -= r.area();
        }
    }

    OracleResponse resp;
    resp.loss = total_mass_ - kept_mass;
    if (resp.loss < 0.0) resp.loss = 0.0; // exact arithmetic makes this a no-op

    const double area_frac =
        static_cast<double>(kept_area) / (static_cast<double>(height_) * width_);
    const double mass_frac = total_mass_ > 0.0 ? kept_mass / total_mass_ : 0.0;
    double cr = 0.5, cc = 0.5, sr = 0.0, sc = 0.0;
    if (kept_mass > 0.0) {
        const double mr = kept_row / kept_mass;
        const double mc = kept_col / kept_mass;
        cr = mr / height_;
        cc = mc / width_;
        sr = std::sqrt(std::max(0.0, kept_row2 / kept_mass - mr * mr)) / height_;
        sc = std::sqrt(std::max(0.0, kept_col2 / kept_mass - mc * mc)) / width_;
    }
    resp.features = {area_frac, mass_frac, cr, cc, sr, sc};
    return resp;
}

std::vector<double> QuadraticSyntheticOracle::perturb_impl(const ImageTensor& image,
                                                           const Selection& sel,
                                                           const PerturbationSpec&,
                                                           std::uint64_t) const {
    // Features depend on the saliency raster only, so perturbed features
    // equal the unperturbed ones; skip the noise work.
    return eval_impl(image, sel).features;
}

std::unique_ptr<QuadraticSyntheticOracle> make_quadratic_oracle(std::vector<double> saliency,
                                                                int height, int width) {
    return std::make_unique<QuadraticSyntheticOracle>(std::move(saliency), height, width);
}

} // namespace hcsel
