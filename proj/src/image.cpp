#include "hcsel/image.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "hcsel/errors.hpp"

namespace hcsel {

ImageTensor::ImageTensor(int h, int w, int c, double fill)
    : height(h), width(w), channels(c),
      data(static_cast<std::size_t>(h) * w * c, fill) {
    validate();
}

ImageTensor::ImageTensor(int h, int w, int c, std::vector<double> values)
    : height(h), width(w), channels(c), data(std::move(values)) {
    validate();
}

double ImageTensor::gray_at(int r, int col) const {
    if (channels == 1) return data[index(0, r, col)];
    double sum = 0.0;
    for (int c = 0; c < channels; ++c) sum += data[index(c, r, col)];
    return sum / channels;
}

std::vector<double> ImageTensor::channel_means() const {
    std::vector<double> means(channels, 0.0);
    const std::size_t plane = static_cast<std::size_t>(height) * width;
    for (int c = 0; c < channels; ++c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < plane; ++i) sum += data[c * plane + i];
        means[c] = plane ? sum / static_cast<double>(plane) : 0.0;
    }
    return means;
}

void ImageTensor::validate() const {
    if (height < 1 || width < 1 || channels < 1)
        throw InvalidArgument("image dimensions must be >= 1");
    if (data.size() != static_cast<std::size_t>(height) * width * channels)
        throw InvalidArgument("image data length does not match H*W*C");
    for (double v : data)
        if (!std::isfinite(v)) throw InvalidArgument("image contains non-finite values");
}

namespace {

bool has_suffix(const std::string& s, const std::string& suffix) {
    if (s.size() < suffix.size()) return false;
    std::string tail = s.substr(s.size() - suffix.size());
    std::transform(tail.begin(), tail.end(), tail.begin(),
                   [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
    return tail == suffix;
}

int read_pnm_token(std::istream& in) {
    // Skips whitespace and '#' comments, then reads one decimal token.
    int ch = in.get();
    while (ch != EOF) {
        if (ch == '#') {
            while (ch != EOF && ch != '\n') ch = in.get();
        } else if (!std::isspace(ch)) {
            break;
        }
        ch = in.get();
    }
    if (ch == EOF) throw IoError("truncated PNM header");
    int value = 0;
    bool any = false;
    while (ch != EOF && std::isdigit(ch)) {
        value = value * 10 + (ch - '0');
        any = true;
        ch = in.get();
    }
    if (!any) throw IoError("malformed PNM header");
    return value;
}

} // namespace

ImageTensor read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open image file: " + path);
    char magic[2];
    in.read(magic, 2);
    if (!in || magic[0] != 'P' || (magic[1] != '5' && magic[1] != '6'))
        throw IoError("unsupported PNM magic (want binary P5/P6): " + path);
    const int channels = magic[1] == '5' ? 1 : 3;
    const int w = read_pnm_token(in);
    const int h = read_pnm_token(in);
    const int maxval = read_pnm_token(in);
    if (maxval <= 0 || maxval > 255) throw IoError("PNM maxval out of 8-bit range: " + path);
    std::vector<unsigned char> raw(static_cast<std::size_t>(w) * h * channels);
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
    if (!in) throw IoError("truncated PNM pixel data: " + path);
    ImageTensor img(h, w, channels);
    for (int r = 0; r < h; ++r)
        for (int col = 0; col < w; ++col)
            for (int c = 0; c < channels; ++c)
                img.at(c, r, col) =
                    raw[(static_cast<std::size_t>(r) * w + col) * channels + c] /
                    static_cast<double>(maxval);
    return img;
}

void write_pnm(const std::string& path, const ImageTensor& image) {
    if (image.channels != 1 && image.channels != 3)
        throw InvalidArgument("PNM output supports 1 or 3 channels");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open output file: " + path);
    out << (image.channels == 1 ? "P5" : "P6") << "\n"
        << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> raw;
    raw.reserve(static_cast<std::size_t>(image.height) * image.width * image.channels);
    for (int r = 0; r < image.height; ++r)
        for (int col = 0; col < image.width; ++col)
            for (int c = 0; c < image.channels; ++c) {
                double v = std::clamp(image.at(c, r, col), 0.0, 1.0);
                raw.push_back(static_cast<unsigned char>(std::lround(v * 255.0)));
            }
    out.write(reinterpret_cast<const char*>(raw.data()),
              static_cast<std::streamsize>(raw.size()));
    if (!out) throw IoError("failed writing PNM: " + path);
}

void write_pgm_raster(const std::string& path, const std::vector<double>& raster,
                      int height, int width) {
    if (raster.size() != static_cast<std::size_t>(height) * width)
        throw InvalidArgument("raster size does not match dimensions");
    ImageTensor img(height, width, 1);
    for (std::size_t i = 0; i < raster.size(); ++i)
        img.data[i] = std::clamp(raster[i], 0.0, 1.0);
    write_pnm(path, img);
}

ImageTensor read_image(const std::string& path) {
    std::ifstream probe(path, std::ios::binary);
    if (!probe) throw IoError("cannot open image file: " + path);
    unsigned char sig[2] = {0, 0};
    probe.read(reinterpret_cast<char*>(sig), 2);
    probe.close();
    if (sig[0] == 0x89 && sig[1] == 'P') return read_png(path);
    if (sig[0] == 'P' && (sig[1] == '5' || sig[1] == '6')) return read_pnm(path);
    if (has_suffix(path, ".png")) return read_png(path);
    if (has_suffix(path, ".pgm") || has_suffix(path, ".ppm")) return read_pnm(path);
    throw IoError("unrecognized image format: " + path);
}

} // namespace hcsel
