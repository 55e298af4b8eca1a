#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace hcsel {

// Planar image: `data[c*H*W + r*W + col]`, values in [0, 1].
struct ImageTensor {
    int height = 0;
    int width = 0;
    int channels = 0;
    std::vector<double> data;

    ImageTensor() = default;
    ImageTensor(int h, int w, int c, double fill = 0.0);
    ImageTensor(int h, int w, int c, std::vector<double> values);

    std::size_t index(int c, int r, int col) const {
        return (static_cast<std::size_t>(c) * height + r) * width + col;
    }
    double at(int c, int r, int col) const { return data[index(c, r, col)]; }
    double& at(int c, int r, int col) { return data[index(c, r, col)]; }

    std::span<const double> channel(int c) const {
        return {data.data() + static_cast<std::size_t>(c) * height * width,
                static_cast<std::size_t>(height) * width};
    }

    std::int64_t pixel_count() const {
        return static_cast<std::int64_t>(height) * width;
    }

    // Mean over channels at (r, col).
    double gray_at(int r, int col) const;

    // Per-channel mean over all pixels.
    std::vector<double> channel_means() const;

    // Throws InvalidArgument when dimensions/data violate the invariants
    // (H,W,C >= 1, data length H*W*C, all values finite).
    void validate() const;
};

// --- File I/O ------------------------------------------------------------
// 8-bit inputs are scaled to [0,1] by /255. PNG supports grayscale and RGB
// (palette and alpha are expanded/stripped); PNM supports binary P5/P6.

ImageTensor read_image(const std::string& path);
ImageTensor read_png(const std::string& path);
ImageTensor read_pnm(const std::string& path);

void write_png(const std::string& path, const ImageTensor& image);
void write_pnm(const std::string& path, const ImageTensor& image);

// Writes a single-channel raster (row-major, values clamped to [0,1]) as an
// 8-bit binary PGM.
void write_pgm_raster(const std::string& path, const std::vector<double>& raster,
                      int height, int width);

} // namespace hcsel
