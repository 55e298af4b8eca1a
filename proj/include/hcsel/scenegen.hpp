#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "hcsel/image.hpp"
#include "hcsel/region.hpp"
#include "hcsel/rng.hpp"

namespace hcsel {

struct SceneSpec {
    int height = 256;
    int width = 256;
    int num_classes = 6;
    double object_density = 46.0; // objects per megapixel
    double tail_exponent = 1.2;   // Zipf class-frequency exponent
    double noise_sigma = 0.02;    // additive pixel noise
    std::uint64_t seed = 0;

    void validate() const; // dims >= 32, classes >= 2, density > 0
};

struct GroundTruth {
    int label = 0;                  // majority foreground class
    RegionSet salient_regions;      // object bounding rectangles (disjoint)
    std::vector<double> saliency;   // H*W foreground template mass, >= 0
    std::vector<int> object_classes;
};

// Background = Gaussian-smoothed uniform noise; foreground = class-templated
// geometric objects (16-48 px) placed without overlap, classes drawn from
// Zipf(tail_exponent). Deterministic per seed. Throws DensityTooHigh when
// non-overlapping placement fails.
std::pair<ImageTensor, GroundTruth> generate(const SceneSpec& spec);

// Row-major mosaic of same-shape tiles.
ImageTensor stitch(const std::vector<ImageTensor>& tiles, int rows, int cols);

// Per-class geometric templates (disk, bars, checker, ring, ...), rendered
// analytically at any raster size; values in {0,1}.
ImageTensor render_class_template(int class_id, int px);
std::vector<ImageTensor> class_template_set(int num_classes, int px);

// Zipf class-frequency model over ids 0..num_classes-1.
std::vector<double> zipf_masses(int num_classes, double exponent);
int zipf_draw(Rng& rng, int num_classes, double exponent);

} // namespace hcsel
