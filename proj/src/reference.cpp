#include "pmlda/reference.hpp"

#include <algorithm>
#include <array>

#include "pmlda/errors.hpp"

namespace pmlda::reference {

Plane pad_replicate(const Plane& in, int pad_rows, int pad_cols) {
  Plane out(in.height + 2 * pad_rows, in.width + 2 * pad_cols);
  for (int r = 0; r < out.height; ++r) {
    const int sr = std::clamp(r - pad_rows, 0, in.height - 1);
    for (int c = 0; c < out.width; ++c) out.at(r, c) = in.at(sr, std::clamp(c - pad_cols, 0, in.width - 1));
  }
  return out;
}

GrayImage pad_replicate(const GrayImage& in, int pad) {
  GrayImage out(in.height + 2 * pad, in.width + 2 * pad);
  for (int r = 0; r < out.height; ++r) {
    const int sr = std::clamp(r - pad, 0, in.height - 1);
    for (int c = 0; c < out.width; ++c) out.at(r, c) = in.at(sr, std::clamp(c - pad, 0, in.width - 1));
  }
  return out;
}

Plane convolve(const Plane& in, const Kernel2D& kernel) {
  const int rr = kernel.rows / 2;
  const int rc = kernel.cols / 2;
  const Plane padded = pad_replicate(in, rr, rc);
  Plane out(in.height, in.width);
  for (int r = 0; r < in.height; ++r) {
    for (int c = 0; c < in.width; ++c) {
      const double centre = padded.at(r + rr, c + rc);
      double acc = 0.0;
      for (int dr = -rr; dr <= rr; ++dr)
        for (int dc = -rc; dc <= rc; ++dc)
          acc += kernel.at(dr, dc) * (padded.at(r + rr - dr, c + rc - dc) - centre);
      out.at(r, c) = kernel.dc * centre + acc;
    }
  }
  return out;
}

FeatureImage extract_intensity_entropy(const GrayImage& img, int window, double intensity_scale) {
  require(window >= 3 && window % 2 == 1, "window must be odd and >= 3");
  require(window <= img.height && window <= img.width, "window larger than image");
  const int radius = window / 2;
  const GrayImage padded = pad_replicate(img, radius);
  FeatureImage out(img.height, img.width, 2);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      std::array<int, 256> hist{};
      long total = 0;
      for (int i = 0; i < window; ++i) {
        for (int j = 0; j < window; ++j) {
          const std::uint8_t v = padded.at(r + i, c + j);
          ++hist[v];
          total += v;
        }
      }
      out.at(r, c, 0) = static_cast<double>(total) / (window * window) / 255.0 * intensity_scale;
      out.at(r, c, 1) = entropy_from_histogram(hist, window * window);
    }
  }
  return out;
}

FeatureImage extract_gradient_color(const RgbImage& img, double sigma) {
  const auto kernels = gradient_kernels(sigma);
  const Plane grad = reference::convolve(reference::convolve(luminance(img), kernels[0]), kernels[1]);
  FeatureImage out(img.height, img.width, 3);
  out.set_channel(0, grad);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      out.at(r, c, 1) = img.at(r, c, 0) / 255.0;
      out.at(r, c, 2) = img.at(r, c, 2) / 255.0;
    }
  }
  return out;
}

FeatureImage extract_filter_bank(const GrayImage& img, const FilterBankConfig& config) {
  const auto kernels = filter_bank_kernels(config);
  const Plane unit = to_unit_plane(img);
  FeatureImage out(img.height, img.width, static_cast<int>(kernels.size()));
  for (std::size_t ch = 0; ch < kernels.size(); ++ch)
    out.set_channel(static_cast<int>(ch), reference::convolve(unit, kernels[ch]));
  return out;
}

}  // namespace pmlda::reference
