#include "evigrid/image.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <stdexcept>

namespace evigrid {

std::size_t BinaryImage::count() const {
  return static_cast<std::size_t>(
      std::count_if(pixels.begin(), pixels.end(),
                    [](std::uint8_t p) { return p != 0; }));
}

int otsu_threshold(const std::vector<std::uint8_t>& pixels) {
  if (pixels.empty()) return -1;
  std::array<double, 256> hist{};
  for (std::uint8_t p : pixels) hist[p] += 1.0;

  const double total = static_cast<double>(pixels.size());
  double total_sum = 0.0;
  for (int g = 0; g < 256; ++g) total_sum += g * hist[g];

  int best_t = -1;
  double best_var = -1.0;
  double w0 = 0.0;
  double sum0 = 0.0;
  for (int t = 0; t < 256; ++t) {
    w0 += hist[t];
    sum0 += t * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (total_sum - sum0) / w1;
    const double var =
        (w0 / total) * (w1 / total) * (mu0 - mu1) * (mu0 - mu1);
    if (var > best_var) {
      best_var = var;
      best_t = t;
    }
  }
  return best_t;
}

BinaryImage binarize_otsu(const GrayImage& gray) {
  BinaryImage out(gray.width, gray.height);
  const int t = otsu_threshold(gray.pixels);
  if (t < 0) return out;
  for (std::size_t i = 0; i < gray.pixels.size(); ++i) {
    out.pixels[i] = gray.pixels[i] > t ? 1 : 0;
  }
  return out;
}

std::vector<int> label_components(const BinaryImage& image,
                                  std::vector<int>& sizes) {
  sizes.clear();
  const int w = image.width;
  const int h = image.height;
  std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::pair<int, int>> stack;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const std::size_t idx = static_cast<std::size_t>(y) * w + x;
      if (!image.pixels[idx] || labels[idx] >= 0) continue;
      const int id = static_cast<int>(sizes.size());
      sizes.push_back(0);
      labels[idx] = id;
      stack.push_back({x, y});
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        ++sizes[id];
        for (int dy = -1; dy <= 1; ++dy) {
          for (int dx = -1; dx <= 1; ++dx) {
            if (dx == 0 && dy == 0) continue;
            const int nx = cx + dx;
            const int ny = cy + dy;
            if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
            const std::size_t nidx = static_cast<std::size_t>(ny) * w + nx;
            if (image.pixels[nidx] && labels[nidx] < 0) {
              labels[nidx] = id;
              stack.push_back({nx, ny});
            }
          }
        }
      }
    }
  }
  return labels;
}

namespace {

void write_pgm_payload(const std::string& path, int width, int height,
                       const std::string& comment,
                       const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << "P5\n";
  if (!comment.empty()) out << "# " << comment << "\n";
  out << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write: " + path);
}

}  // namespace

void write_pgm(const std::string& path, const GrayImage& image,
               const std::string& comment) {
  write_pgm_payload(path, image.width, image.height, comment, image.pixels);
}

void write_pgm(const std::string& path, const BinaryImage& image,
               const std::string& comment) {
  std::vector<std::uint8_t> bytes(image.pixels.size());
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    bytes[i] = image.pixels[i] ? 255 : 0;
  }
  write_pgm_payload(path, image.width, image.height, comment, bytes);
}

}  // namespace evigrid
