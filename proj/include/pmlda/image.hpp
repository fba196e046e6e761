#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace pmlda {

struct GrayImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> pixels;  // row-major

  GrayImage() = default;
  GrayImage(int h, int w, std::uint8_t fill = 0);

  std::uint8_t at(int r, int c) const { return pixels[static_cast<std::size_t>(r) * width + c]; }
  std::uint8_t& at(int r, int c) { return pixels[static_cast<std::size_t>(r) * width + c]; }
};

struct RgbImage {
  int height = 0;
  int width = 0;
  std::vector<std::uint8_t> data;  // row-major, RGB interleaved

  RgbImage() = default;
  RgbImage(int h, int w);

  std::uint8_t at(int r, int c, int ch) const {
    return data[(static_cast<std::size_t>(r) * width + c) * 3 + ch];
  }
  std::uint8_t& at(int r, int c, int ch) { return data[(static_cast<std::size_t>(r) * width + c) * 3 + ch]; }
};

/// Real-valued single-channel image.
struct Plane {
  int height = 0;
  int width = 0;
  std::vector<double> v;

  Plane() = default;
  Plane(int h, int w, double fill = 0.0);

  double at(int r, int c) const { return v[static_cast<std::size_t>(r) * width + c]; }
  double& at(int r, int c) { return v[static_cast<std::size_t>(r) * width + c]; }
};

struct FeatureImage {
  int height = 0;
  int width = 0;
  int dim = 0;
  std::vector<double> values;  // row-major, channel-interleaved
  std::string provenance;

  FeatureImage() = default;
  FeatureImage(int h, int w, int d);

  std::span<const double> pixel(int r, int c) const {
    return {values.data() + (static_cast<std::size_t>(r) * width + c) * dim, static_cast<std::size_t>(dim)};
  }
  double& at(int r, int c, int ch) { return values[(static_cast<std::size_t>(r) * width + c) * dim + ch]; }
  double at(int r, int c, int ch) const { return values[(static_cast<std::size_t>(r) * width + c) * dim + ch]; }

  void set_channel(int ch, const Plane& plane);
  Plane channel(int ch) const;
  void validate() const;
};

struct LabelMap {
  int height = 0;
  int width = 0;
  std::vector<int> labels;

  int at(int r, int c) const { return labels[static_cast<std::size_t>(r) * width + c]; }
};

// Binary PNM (P5 / P6), 8-bit samples.
GrayImage read_pgm(const std::filesystem::path& path);
RgbImage read_ppm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
void write_ppm(const std::filesystem::path& path, const RgbImage& img);

/// Reads a label map from a PGM (pixel value is the label) or a CSV of integers.
LabelMap read_label_map(const std::filesystem::path& path);

GrayImage to_gray(const RgbImage& img);

}  // namespace pmlda
