#include "hcsel/grid.hpp"

#include <algorithm>

#include "hcsel/errors.hpp"
#include "hcsel/rng.hpp"

namespace hcsel {

void Region::validate(int image_height, int image_width) const {
    if (row_start < 0 || col_start < 0 || row_start >= row_end || col_start >= col_end ||
        row_end > image_height || col_end > image_width)
        throw OutOfBounds("region outside image bounds or empty");
    if (level < 0) throw InvalidArgument("region level must be >= 0");
    if (level == 0 && parent_id.has_value())
        throw InvalidArgument("level-0 regions have no parent");
    if (level > 0 && !parent_id.has_value())
        throw InvalidArgument("level-k region missing parent id");
}

std::uint64_t stable_region_id(int level, std::uint64_t index_in_level,
                               std::optional<std::uint64_t> parent_id) {
    return mix_seed(0xC0FE5E1EC7ULL, static_cast<std::uint64_t>(level), index_in_level,
                    parent_id.value_or(0));
}

std::int64_t RegionSet::total_area() const {
    std::int64_t total = 0;
    for (const auto& r : regions) total += r.area();
    return total;
}

bool RegionSet::covers_whole_image(const ImageTensor& image) const {
    // Disjointness makes area equality equivalent to coverage.
    return total_area() == image.pixel_count();
}

bool RegionSet::contains_pixel(int r, int c) const {
    return std::any_of(regions.begin(), regions.end(),
                       [&](const Region& reg) { return reg.contains(r, c); });
}

void RegionSet::validate(int image_height, int image_width) const {
    for (const auto& r : regions) r.validate(image_height, image_width);
    for (std::size_t i = 0; i < regions.size(); ++i)
        for (std::size_t j = i + 1; j < regions.size(); ++j)
            if (regions[i].intersects(regions[j]))
                throw OverlappingRegions("regions overlap");
}

void Coreset::validate(int image_height, int image_width) const {
    set.validate(image_height, image_width);
    if (weights.size() != set.size())
        throw InvalidArgument("coreset needs exactly one weight per region");
    for (const auto& r : set.regions) {
        auto it = weights.find(r.id);
        if (it == weights.end()) throw InvalidArgument("missing weight for region");
        if (!(it->second >= 0.0)) throw InvalidArgument("coreset weights must be >= 0");
    }
}

bool Selection::is_whole_image(const ImageTensor& image) const {
    switch (mode) {
        case Mode::whole: return true;
        case Mode::keep: return regions.covers_whole_image(image);
        case Mode::drop: return regions.empty();
    }
    return false;
}

bool Selection::pixel_kept(int r, int c) const {
    switch (mode) {
        case Mode::whole: return true;
        case Mode::keep: return regions.contains_pixel(r, c);
        case Mode::drop: return !regions.contains_pixel(r, c);
    }
    return true;
}

std::vector<Region> partition(const ImageTensor& image, int factor,
                              const std::optional<Region>& within) {
    if (factor < 2) throw InvalidArgument("partition factor must be >= 2");
    Region parent;
    if (within) {
        parent = *within;
        parent.validate(image.height, image.width);
    } else {
        parent = Region{0, image.height, 0, image.width, -1, 0, std::nullopt};
    }
    const int span_r = parent.row_end - parent.row_start;
    const int span_c = parent.col_end - parent.col_start;
    if (span_r < factor || span_c < factor)
        throw IndivisibleRegion("region span smaller than partition factor");

    const int cell_r = span_r / factor;
    const int cell_c = span_c / factor;
    const int child_level = within ? parent.level + 1 : 0;
    const std::optional<std::uint64_t> pid =
        within ? std::optional<std::uint64_t>(parent.id) : std::nullopt;

    std::vector<Region> cells;
    cells.reserve(static_cast<std::size_t>(factor) * factor);
    for (int i = 0; i < factor; ++i) {
        const int r0 = parent.row_start + i * cell_r;
        const int r1 = (i == factor - 1) ? parent.row_end : r0 + cell_r;
        for (int j = 0; j < factor; ++j) {
            const int c0 = parent.col_start + j * cell_c;
            const int c1 = (j == factor - 1) ? parent.col_end : c0 + cell_c;
            Region cell{r0, r1, c0, c1, child_level, 0, pid};
            cell.id = stable_region_id(child_level,
                                       static_cast<std::uint64_t>(i) * factor + j, pid);
            cells.push_back(cell);
        }
    }
    return cells;
}

double area_fraction(const RegionSet& set, const ImageTensor& image) {
    if (set.empty()) throw EmptySelection("area_fraction of an empty region set");
    set.validate(image.height, image.width);
    return static_cast<double>(set.total_area()) /
           static_cast<double>(image.pixel_count());
}

ImageTensor mask_apply(const ImageTensor& image, const Selection& selection,
                       FillPolicy fill) {
    selection.regions.validate(image.height, image.width);
    if (selection.is_whole_image(image)) return image;

    std::vector<double> fill_values(image.channels, 0.0);
    if (fill == FillPolicy::mean) fill_values = image.channel_means();

    ImageTensor out = image;
    if (selection.mode == Selection::Mode::keep) {
        for (int c = 0; c < image.channels; ++c) {
            const std::size_t base = static_cast<std::size_t>(c) * image.height * image.width;
            std::fill_n(out.data.begin() + base,
                        static_cast<std::size_t>(image.height) * image.width, fill_values[c]);
        }
        for (const auto& reg : selection.regions.regions)
            for (int c = 0; c < image.channels; ++c)
                for (int r = reg.row_start; r < reg.row_end; ++r)
                    for (int col = reg.col_start; col < reg.col_end; ++col)
                        out.at(c, r, col) = image.at(c, r, col);
    } else { // drop: fill the listed regions
        for (const auto& reg : selection.regions.regions)
            for (int c = 0; c < image.channels; ++c)
                for (int r = reg.row_start; r < reg.row_end; ++r)
                    for (int col = reg.col_start; col < reg.col_end; ++col)
                        out.at(c, r, col) = fill_values[c];
    }
    return out;
}

std::vector<std::uint8_t> keep_mask(const ImageTensor& image, const Selection& selection) {
    const std::size_t n = static_cast<std::size_t>(image.height) * image.width;
    const bool keep_mode = selection.mode == Selection::Mode::keep;
    std::vector<std::uint8_t> mask(n, selection.mode == Selection::Mode::whole || !keep_mode
                                          ? std::uint8_t{1}
                                          : std::uint8_t{0});
    if (selection.mode == Selection::Mode::whole) return mask;
    for (const auto& reg : selection.regions.regions)
        for (int r = reg.row_start; r < reg.row_end; ++r)
            std::fill_n(mask.begin() + static_cast<std::size_t>(r) * image.width + reg.col_start,
                        reg.cols(), keep_mode ? std::uint8_t{1} : std::uint8_t{0});
    return mask;
}

} // namespace hcsel
