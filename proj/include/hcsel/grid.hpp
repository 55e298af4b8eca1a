#pragma once

#include <optional>

#include "hcsel/image.hpp"
#include "hcsel/region.hpp"

namespace hcsel {

enum class FillPolicy { mean, zero };

// How a region set designates the pixels an oracle sees.
//   whole: the unmodified image.
//   keep:  listed regions are copied, everything else is filled.
//   drop:  listed regions are filled, everything else is copied.
struct Selection {
    enum class Mode { whole, keep, drop };
    Mode mode = Mode::whole;
    RegionSet regions;

    static Selection whole() { return {}; }
    static Selection keep(RegionSet r) { return {Mode::keep, std::move(r)}; }
    static Selection drop(RegionSet r) { return {Mode::drop, std::move(r)}; }

    bool is_whole_image(const ImageTensor& image) const;
    bool pixel_kept(int r, int c) const;
};

// Tiles `within` (or the full image) with factor x factor cells. When the
// span is not divisible by `factor` the last row/column of cells absorbs
// the remainder. Children get level = parent.level + 1 (or 0) and stable
// row-major ids.
std::vector<Region> partition(const ImageTensor& image, int factor,
                              const std::optional<Region>& within = std::nullopt);

// A(X_s) / A(X). Throws EmptySelection on an empty set.
double area_fraction(const RegionSet& set, const ImageTensor& image);

// Copies pixels covered by `selection` and replaces the rest according to
// the fill policy (per-channel global mean by default).
ImageTensor mask_apply(const ImageTensor& image, const Selection& selection,
                       FillPolicy fill = FillPolicy::mean);

// Row-major H*W byte mask: 1 where the selection keeps the pixel.
std::vector<std::uint8_t> keep_mask(const ImageTensor& image, const Selection& selection);

} // namespace hcsel
