#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace evigrid {

// Row-major 8-bit grayscale image; row 0 is the top row of the file view.
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h) : width(w), height(h) {
    pixels.assign(static_cast<std::size_t>(w) * h, 0);
  }

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  void set(int x, int y, std::uint8_t v) {
    pixels[static_cast<std::size_t>(y) * width + x] = v;
  }
};

// Row-major binary image stored as 0/1 bytes.
struct BinaryImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  BinaryImage() = default;
  BinaryImage(int w, int h) : width(w), height(h) {
    pixels.assign(static_cast<std::size_t>(w) * h, 0);
  }

  bool at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x] != 0;
  }
  void set(int x, int y, bool v) {
    pixels[static_cast<std::size_t>(y) * width + x] = v ? 1 : 0;
  }
  std::size_t count() const;
};

// Histogram threshold maximizing between-class variance.  Returns the
// smallest maximizing threshold t (pixels > t form the highlighted class),
// or -1 when the image is constant and no split exists.
int otsu_threshold(const std::vector<std::uint8_t>& pixels);

// Thresholds a grayscale image with otsu_threshold; a constant image
// yields an all-false result.
BinaryImage binarize_otsu(const GrayImage& gray);

// 8-connected component labeling.  Returns per-pixel component ids
// (-1 for off pixels, ids dense from 0) and fills sizes[id].
std::vector<int> label_components(const BinaryImage& image,
                                  std::vector<int>& sizes);

// Binary PGM (P5) writers; `comment` is embedded as a '#' header line.
void write_pgm(const std::string& path, const GrayImage& image,
               const std::string& comment = "");
void write_pgm(const std::string& path, const BinaryImage& image,
               const std::string& comment = "");

}  // namespace evigrid
