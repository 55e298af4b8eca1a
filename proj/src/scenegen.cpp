#include "hcsel/scenegen.hpp"

#include <algorithm>
#include <cmath>

#include "hcsel/errors.hpp"
#include "hcsel/grid.hpp"

namespace hcsel {

void SceneSpec::validate() const {
    if (height < 32 || width < 32) throw InvalidArgument("scene dimensions must be >= 32");
    if (num_classes < 2) throw InvalidArgument("scene needs at least 2 classes");
    if (!(object_density > 0.0)) throw InvalidArgument("object density must be > 0");
    if (!(tail_exponent > 0.0)) throw InvalidArgument("tail exponent must be > 0");
    if (noise_sigma < 0.0) throw InvalidArgument("noise sigma must be >= 0");
}

namespace {

// Template mass at normalized coordinates u, v in [0,1). Shapes are chosen
// to stay distinguishable after coarse mean-pooling.
double template_mass(int class_id, double u, double v) {
    const int shape = class_id % 8;
    const int variant = class_id / 8;
    const double du = u - 0.5, dv = v - 0.5;
    const double rad = std::sqrt(du * du + dv * dv);
    switch (shape) {
        case 0: // filled disk
            return rad <= 0.38 - 0.06 * variant ? 1.0 : 0.0;
        case 1: // two horizontal bars
            return ((u >= 0.10 && u < 0.34) || (u >= 0.62 && u < 0.86)) ? 1.0 : 0.0;
        case 2: // two vertical bars
            return ((v >= 0.10 && v < 0.34) || (v >= 0.62 && v < 0.86)) ? 1.0 : 0.0;
        case 3: { // quadrant checker
            const bool a = u < 0.5, b = v < 0.5;
            return a == b ? 1.0 : 0.0;
        }
        case 4: // ring
            return (rad <= 0.44 && rad >= 0.26) ? 1.0 : 0.0;
        case 5: // diagonal cross
            return (std::abs(du - dv) <= 0.12 || std::abs(du + dv) <= 0.12) ? 1.0 : 0.0;
        case 6: { // 2x2 dot grid
            const double lu = std::fmod(u * 2.0, 1.0) - 0.5;
            const double lv = std::fmod(v * 2.0, 1.0) - 0.5;
            return std::sqrt(lu * lu + lv * lv) <= 0.30 ? 1.0 : 0.0;
        }
        default: // hollow square frame
            return (std::max(std::abs(du), std::abs(dv)) <= 0.42 &&
                    std::max(std::abs(du), std::abs(dv)) >= 0.24)
                       ? 1.0
                       : 0.0;
    }
}

void box_blur_rows(std::vector<double>& img, int h, int w, int radius) {
    std::vector<double> row(w);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double sum = 0.0;
            for (int k = -radius; k <= radius; ++k)
                sum += img[static_cast<std::size_t>(r) * w + std::clamp(c + k, 0, w - 1)];
            row[c] = sum / (2 * radius + 1);
        }
        std::copy(row.begin(), row.end(), img.begin() + static_cast<std::size_t>(r) * w);
    }
}

void box_blur_cols(std::vector<double>& img, int h, int w, int radius) {
    std::vector<double> col(h);
    for (int c = 0; c < w; ++c) {
        for (int r = 0; r < h; ++r) {
            double sum = 0.0;
            for (int k = -radius; k <= radius; ++k)
                sum += img[static_cast<std::size_t>(std::clamp(r + k, 0, h - 1)) * w + c];
            col[r] = sum / (2 * radius + 1);
        }
        for (int r = 0; r < h; ++r) img[static_cast<std::size_t>(r) * w + c] = col[r];
    }
}

double quantize_dyadic(double v) { return std::round(v * 1048576.0) / 1048576.0; }

} // namespace

std::vector<double> zipf_masses(int num_classes, double exponent) {
    if (num_classes < 1) throw InvalidArgument("zipf needs at least one class");
    std::vector<double> masses(num_classes);
    double total = 0.0;
    for (int k = 0; k < num_classes; ++k) {
        masses[k] = std::pow(static_cast<double>(k + 1), -exponent);
        total += masses[k];
    }
    for (double& m : masses) m /= total;
    return masses;
}

int zipf_draw(Rng& rng, int num_classes, double exponent) {
    const std::vector<double> masses = zipf_masses(num_classes, exponent);
    const double u = rng.uniform();
    double acc = 0.0;
    for (int k = 0; k < num_classes; ++k) {
        acc += masses[k];
        if (u < acc) return k;
    }
    return num_classes - 1;
}

ImageTensor render_class_template(int class_id, int px) {
    if (px < 4) throw InvalidArgument("template raster must be >= 4 px");
    ImageTensor tmpl(px, px, 1);
    for (int r = 0; r < px; ++r)
        for (int c = 0; c < px; ++c)
            tmpl.at(0, r, c) = template_mass(class_id, (r + 0.5) / px, (c + 0.5) / px);
    return tmpl;
}

std::vector<ImageTensor> class_template_set(int num_classes, int px) {
    std::vector<ImageTensor> set;
    set.reserve(num_classes);
    for (int k = 0; k < num_classes; ++k) set.push_back(render_class_template(k, px));
    return set;
}

std::pair<ImageTensor, GroundTruth> generate(const SceneSpec& spec) {
    spec.validate();
    Rng rng(mix_seed(spec.seed, 0x5CE4EULL));
    const int h = spec.height, w = spec.width;

    // Smoothed-noise background remapped to a mid-gray band.
    std::vector<double> bg(static_cast<std::size_t>(h) * w);
    for (double& v : bg) v = rng.uniform();
    for (int pass = 0; pass < 3; ++pass) {
        box_blur_rows(bg, h, w, 4);
        box_blur_cols(bg, h, w, 4);
    }
    double mean = 0.0;
    for (double v : bg) mean += v;
    mean /= static_cast<double>(bg.size());
    double var = 0.0;
    for (double v : bg) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / static_cast<double>(bg.size()));
    for (double& v : bg)
        v = std::clamp(0.5 + (sd > 0.0 ? 0.08 * (v - mean) / sd : 0.0), 0.0, 1.0);

    const double megapixels = static_cast<double>(h) * w / 1e6;
    const int n_objects =
        std::max<int>(1, static_cast<int>(std::llround(spec.object_density * megapixels)));

    GroundTruth gt;
    gt.saliency.assign(static_cast<std::size_t>(h) * w, 0.0);
    std::vector<Region> placed;
    std::vector<int> class_counts(spec.num_classes, 0);

    for (int obj = 0; obj < n_objects; ++obj) {
        const int cls = zipf_draw(rng, spec.num_classes, spec.tail_exponent);
        const int max_size = std::min({48, h / 2, w / 2});
        const int min_size = std::min(16, max_size);
        const int size =
            min_size + static_cast<int>(rng.uniform_index(
                           static_cast<std::uint64_t>(max_size - min_size + 1)));

        bool ok = false;
        Region box;
        for (int attempt = 0; attempt < 200 && !ok; ++attempt) {
            const int r0 = static_cast<int>(rng.uniform_index(h - size + 1));
            const int c0 = static_cast<int>(rng.uniform_index(w - size + 1));
            box = Region{r0, r0 + size, c0, c0 + size, 0, 0, std::nullopt};
            // 2 px clearance keeps bounding rectangles disjoint.
            Region inflated{std::max(0, r0 - 2), std::min(h, r0 + size + 2),
                            std::max(0, c0 - 2), std::min(w, c0 + size + 2),
                            0, 0, std::nullopt};
            ok = std::none_of(placed.begin(), placed.end(),
                              [&](const Region& p) { return inflated.intersects(p); });
        }
        if (!ok)
            throw DensityTooHigh("cannot place objects without overlap at this density");
        box.id = stable_region_id(0, static_cast<std::uint64_t>(obj) + 1000, std::nullopt);
        placed.push_back(box);
        gt.object_classes.push_back(cls);
        ++class_counts[cls];
        for (int r = box.row_start; r < box.row_end; ++r)
            for (int c = box.col_start; c < box.col_end; ++c) {
                const double t = template_mass(cls, (r - box.row_start + 0.5) / size,
                                               (c - box.col_start + 0.5) / size);
                gt.saliency[static_cast<std::size_t>(r) * w + c] += t;
            }
    }

    gt.label = static_cast<int>(std::max_element(class_counts.begin(), class_counts.end()) -
                                class_counts.begin());
    gt.salient_regions = RegionSet(std::move(placed));

    // Quantized so rectangle sums over the raster are exact in double.
    for (double& v : gt.saliency) v = quantize_dyadic(v);

    ImageTensor image(h, w, 1);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const std::size_t i = static_cast<std::size_t>(r) * w + c;
            image.at(0, r, c) = std::clamp(bg[i] + 0.45 * gt.saliency[i], 0.0, 1.0);
        }
    if (spec.noise_sigma > 0.0)
        for (double& v : image.data)
            v = std::clamp(v + spec.noise_sigma * rng.normal(), 0.0, 1.0);

    return {std::move(image), std::move(gt)};
}

ImageTensor stitch(const std::vector<ImageTensor>& tiles, int rows, int cols) {
    if (rows < 1 || cols < 1 || tiles.size() != static_cast<std::size_t>(rows) * cols)
        throw TileMismatch("tile count does not match the grid");
    const int th = tiles[0].height, tw = tiles[0].width, tc = tiles[0].channels;
    for (const auto& t : tiles)
        if (t.height != th || t.width != tw || t.channels != tc)
            throw TileMismatch("tiles must share dimensions and channel count");

    ImageTensor out(rows * th, cols * tw, tc);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const ImageTensor& t = tiles[static_cast<std::size_t>(i) * cols + j];
            for (int c = 0; c < tc; ++c)
                for (int r = 0; r < th; ++r)
                    for (int col = 0; col < tw; ++col)
                        out.at(c, i * th + r, j * tw + col) = t.at(c, r, col);
        }
    return out;
}

} // namespace hcsel
