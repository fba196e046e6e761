#pragma once

// Image-to-corpus pipelines: per-pixel feature extraction and the two ways of
// cutting a feature image into documents (sliding windows, label regions).
//
// All convolutions replicate the border and are evaluated as
//   out(p) = dc * v(p) + sum_q k(q) * (v(p - q) - v(p))
// where dc is the kernel's nominal DC gain (1 for smoothing kernels, 0 for
// Laplacian and derivative kernels). Constant regions therefore map exactly to
// dc * v. Pixel loops run in parallel with a fixed per-pixel summation order,
// so output is bit-identical for any thread count.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pmlda/image.hpp"
#include "pmlda/types.hpp"

namespace pmlda {

struct Kernel2D {
  int rows = 1;  // odd
  int cols = 1;  // odd
  std::vector<double> taps;  // row-major, centre at (rows/2, cols/2)
  double dc = 1.0;

  double at(int dr, int dc_) const {
    return taps[static_cast<std::size_t>(dr + rows / 2) * cols + (dc_ + cols / 2)];
  }
};

enum class Axis { x, y };

/// Normalized (sum 1) Gaussian on a rows x cols support.
Kernel2D gaussian_kernel(double sigma, int rows, int cols);
/// sigma^2-scaled Laplacian of Gaussian with its mean removed on the crop.
Kernel2D log_kernel(double sigma, int size);
/// First derivative of a Gaussian along one axis, scaled so a unit ramp gives response 1.
Kernel2D gaussian_derivative_kernel(double sigma, int rows, int cols, Axis axis);

/// Replicate-padded convolution, parallel over rows.
Plane convolve(const Plane& in, const Kernel2D& kernel);

double shannon_entropy_bits(std::span<const std::uint8_t> values);
double entropy_from_histogram(std::span<const int> counts, int total);

/// Channel 0: window mean / 255 * intensity_scale. Channel 1: window entropy (bits, 256 bins).
FeatureImage extract_intensity_entropy(const GrayImage& img, int window = 21, double intensity_scale = 10.0);

/// Luminance (R+G+B)/(3*255) per pixel.
Plane luminance(const RgbImage& img);

/// Channel 0: Gaussian gradient of luminance along y (rows), in normalized
/// intensity per pixel. Channels 1-2: R and B scaled to [0,1].
FeatureImage extract_gradient_color(const RgbImage& img, double sigma = 2.0);
/// Separable kernels used by the gradient channel: {x smoothing, y derivative}.
std::vector<Kernel2D> gradient_kernels(double sigma);

struct FilterBankConfig {
  std::vector<double> gaussian_sigmas{1.0, 2.0, 4.0};
  std::vector<double> log_sigmas{1.0, 2.0, 4.0, 8.0};
  std::vector<double> derivative_sigmas{2.0, 4.0};  // each gives an x and a y channel
  int size = 15;

  std::size_t channels() const {
    return gaussian_sigmas.size() + log_sigmas.size() + 2 * derivative_sigmas.size();
  }
};

/// Kernels in channel order: Gaussians, LoGs, then (dx, dy) per derivative sigma.
std::vector<Kernel2D> filter_bank_kernels(const FilterBankConfig& config = {});

/// Filter responses on intensity scaled to [0,1].
FeatureImage extract_filter_bank(const GrayImage& img, const FilterBankConfig& config = {});

Plane to_unit_plane(const GrayImage& img);

struct DocLayout {
  enum class Scheme { sliding_window, labels };

  int height = 0;
  int width = 0;
  Scheme scheme = Scheme::sliding_window;
  int window = 0;
  int stride = 0;
  std::vector<int> doc_labels;                 // region label per document (labels scheme)
  std::vector<std::vector<PixelCoord>> docs;   // per document, per word

  std::size_t word_count() const;
  void validate() const;
};

struct TiledCorpus {
  Corpus corpus;
  DocLayout layout;
};

TiledCorpus tile_documents(const FeatureImage& fimg, int window, int stride);
TiledCorpus group_by_labels(const FeatureImage& fimg, const LabelMap& labels);

}  // namespace pmlda
