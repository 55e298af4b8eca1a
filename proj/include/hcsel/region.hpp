#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace hcsel {

struct ImageTensor;

// Pixel-aligned rectangle, half-open on both axes. Level 0 is the coarsest
// partition; level k>0 regions are spatially contained in their parent.
struct Region {
    int row_start = 0;
    int row_end = 0;
    int col_start = 0;
    int col_end = 0;
    int level = 0;
    std::uint64_t id = 0;
    std::optional<std::uint64_t> parent_id;

    int rows() const { return row_end - row_start; }
    int cols() const { return col_end - col_start; }
    std::int64_t area() const { return static_cast<std::int64_t>(rows()) * cols(); }

    bool contains(int r, int c) const {
        return r >= row_start && r < row_end && c >= col_start && c < col_end;
    }
    bool contains(const Region& other) const {
        return other.row_start >= row_start && other.row_end <= row_end &&
               other.col_start >= col_start && other.col_end <= col_end;
    }
    bool intersects(const Region& other) const {
        return row_start < other.row_end && other.row_start < row_end &&
               col_start < other.col_end && other.col_start < col_end;
    }
    // 8-neighborhood adjacency: rectangles touch (or overlap) when one is
    // dilated by a pixel.
    bool adjacent8(const Region& other) const {
        return row_start <= other.row_end && other.row_start <= row_end &&
               col_start <= other.col_end && other.col_start <= col_end &&
               !(*this == other);
    }

    bool operator==(const Region& other) const {
        return row_start == other.row_start && row_end == other.row_end &&
               col_start == other.col_start && col_end == other.col_end &&
               level == other.level;
    }

    void validate(int image_height, int image_width) const;
};

// Stable id from (level, row-major index within level, parent id).
std::uint64_t stable_region_id(int level, std::uint64_t index_in_level,
                               std::optional<std::uint64_t> parent_id);

struct RegionSet {
    std::vector<Region> regions;

    RegionSet() = default;
    explicit RegionSet(std::vector<Region> r) : regions(std::move(r)) {}

    bool empty() const { return regions.empty(); }
    std::size_t size() const { return regions.size(); }
    std::int64_t total_area() const;
    bool covers_whole_image(const ImageTensor& image) const;
    bool contains_pixel(int r, int c) const;

    // Checks bounds and pairwise disjointness; throws OutOfBounds /
    // OverlappingRegions.
    void validate(int image_height, int image_width) const;
};

// The artifact's output: disjoint regions plus nonnegative weights, one per
// region id.
struct Coreset {
    RegionSet set;
    std::map<std::uint64_t, double> weights;

    void validate(int image_height, int image_width) const;
};

} // namespace hcsel
