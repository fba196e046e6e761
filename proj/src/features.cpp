#include "pmlda/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <set>

#include "pmlda/errors.hpp"

namespace pmlda {

namespace {

inline int clamp_index(int i, int n) { return i < 0 ? 0 : (i >= n ? n - 1 : i); }

void check_kernel_shape(int rows, int cols) {
  require(rows >= 1 && cols >= 1 && rows % 2 == 1 && cols % 2 == 1, "kernel dimensions must be odd");
}

double sum(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s;
}

// Sets the centre tap to dc minus the other taps, summed in the order convolve
// visits them, so a unit impulse reproduces the centre tap exactly.
void balance_centre(Kernel2D& k) {
  const std::size_t centre = static_cast<std::size_t>(k.rows / 2) * k.cols + k.cols / 2;
  double others = 0.0;
  for (std::size_t i = 0; i < k.taps.size(); ++i)
    if (i != centre) others += k.taps[i];
  k.taps[centre] = k.dc - others;
}

}  // namespace

Kernel2D gaussian_kernel(double sigma, int rows, int cols) {
  require(sigma > 0.0, "gaussian_kernel: sigma must be positive");
  check_kernel_shape(rows, cols);
  Kernel2D k{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols), 1.0};
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double y = i - rows / 2;
      const double x = j - cols / 2;
      k.taps[static_cast<std::size_t>(i) * cols + j] = std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
    }
  }
  const double total = sum(k.taps);
  for (double& t : k.taps) t /= total;
  balance_centre(k);
  return k;
}

Kernel2D log_kernel(double sigma, int size) {
  require(sigma > 0.0, "log_kernel: sigma must be positive");
  check_kernel_shape(size, size);
  Kernel2D k{size, size, std::vector<double>(static_cast<std::size_t>(size) * size), 0.0};
  const double s2 = sigma * sigma;
  for (int i = 0; i < size; ++i) {
    for (int j = 0; j < size; ++j) {
      const double y = i - size / 2;
      const double x = j - size / 2;
      const double r2 = x * x + y * y;
      const double g = std::exp(-r2 / (2.0 * s2)) / (2.0 * std::numbers::pi * s2);
      k.taps[static_cast<std::size_t>(i) * size + j] = (r2 - 2.0 * s2) / s2 * g;
    }
  }
  const double mean = sum(k.taps) / static_cast<double>(k.taps.size());
  for (double& t : k.taps) t -= mean;
  balance_centre(k);
  return k;
}

Kernel2D gaussian_derivative_kernel(double sigma, int rows, int cols, Axis axis) {
  require(sigma > 0.0, "gaussian_derivative_kernel: sigma must be positive");
  check_kernel_shape(rows, cols);
  Kernel2D k{rows, cols, std::vector<double>(static_cast<std::size_t>(rows) * cols), 0.0};
  double moment = 0.0;  // sum_q offset(q) * k(q)
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) {
      const double y = i - rows / 2;
      const double x = j - cols / 2;
      const double offset = axis == Axis::x ? x : y;
      const double v = -offset / (sigma * sigma) * std::exp(-(x * x + y * y) / (2.0 * sigma * sigma));
      k.taps[static_cast<std::size_t>(i) * cols + j] = v;
      moment += offset * v;
    }
  }
  require(moment < 0.0, "gaussian_derivative_kernel: support has no extent along the axis");
  const double scale = -1.0 / moment;
  for (double& t : k.taps) t *= scale;
  balance_centre(k);
  return k;
}

Plane convolve(const Plane& in, const Kernel2D& kernel) {
  require(in.height > 0 && in.width > 0, "convolve: empty input");
  check_kernel_shape(kernel.rows, kernel.cols);
  Plane out(in.height, in.width);
  const int rr = kernel.rows / 2;
  const int rc = kernel.cols / 2;
  // clamped source column for every (output column, tap column)
  std::vector<int> cols(static_cast<std::size_t>(in.width) * kernel.cols);
  for (int c = 0; c < in.width; ++c)
    for (int dc = -rc; dc <= rc; ++dc) cols[static_cast<std::size_t>(c) * kernel.cols + dc + rc] = clamp_index(c - dc, in.width);
#pragma omp parallel for schedule(static)
  for (int r = 0; r < in.height; ++r) {
    for (int c = 0; c < in.width; ++c) {
      const double centre = in.at(r, c);
      const int* src_cols = cols.data() + static_cast<std::size_t>(c) * kernel.cols;
      double acc = 0.0;
      for (int dr = -rr; dr <= rr; ++dr) {
        const double* src = in.v.data() + static_cast<std::size_t>(clamp_index(r - dr, in.height)) * in.width;
        const double* taps = kernel.taps.data() + static_cast<std::size_t>(dr + rr) * kernel.cols;
        for (int j = 0; j < kernel.cols; ++j) acc += taps[j] * (src[src_cols[j]] - centre);
      }
      out.at(r, c) = kernel.dc * centre + acc;
    }
  }
  return out;
}

double entropy_from_histogram(std::span<const int> counts, int total) {
  require(total > 0, "entropy: empty histogram");
  double h = 0.0;
  for (int c : counts) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / total;
    h += p * std::log2(static_cast<double>(total) / c);
  }
  return h;
}

double shannon_entropy_bits(std::span<const std::uint8_t> values) {
  std::array<int, 256> hist{};
  for (std::uint8_t v : values) ++hist[v];
  return entropy_from_histogram(hist, static_cast<int>(values.size()));
}

FeatureImage extract_intensity_entropy(const GrayImage& img, int window, double intensity_scale) {
  require(window >= 3 && window % 2 == 1, "window must be odd and >= 3");
  require(img.height > 0 && img.width > 0, "empty image");
  require(window <= img.height && window <= img.width, "window larger than image");
  FeatureImage out(img.height, img.width, 2);
  out.provenance = "intensity_entropy window=" + std::to_string(window) +
                   " intensity_scale=" + std::to_string(intensity_scale);
  const int radius = window / 2;
  const int area = window * window;
#pragma omp parallel for schedule(static)
  for (int r = 0; r < img.height; ++r) {
    std::array<int, 256> hist{};
    for (int c = 0; c < img.width; ++c) {
      hist.fill(0);
      long total = 0;
      for (int dr = -radius; dr <= radius; ++dr) {
        const int sr = clamp_index(r + dr, img.height);
        for (int dc = -radius; dc <= radius; ++dc) {
          const std::uint8_t v = img.at(sr, clamp_index(c + dc, img.width));
          ++hist[v];
          total += v;
        }
      }
      const double mean = static_cast<double>(total) / area;
      out.at(r, c, 0) = mean / 255.0 * intensity_scale;
      out.at(r, c, 1) = entropy_from_histogram(hist, area);
    }
  }
  return out;
}

Plane luminance(const RgbImage& img) {
  Plane out(img.height, img.width);
  for (std::size_t p = 0; p < out.v.size(); ++p) {
    const int s = img.data[p * 3] + img.data[p * 3 + 1] + img.data[p * 3 + 2];
    out.v[p] = static_cast<double>(s) / (3.0 * 255.0);
  }
  return out;
}

std::vector<Kernel2D> gradient_kernels(double sigma) {
  require(sigma > 0.0, "gradient sigma must be positive");
  const int size = 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
  return {gaussian_kernel(sigma, 1, size), gaussian_derivative_kernel(sigma, size, 1, Axis::y)};
}

FeatureImage extract_gradient_color(const RgbImage& img, double sigma) {
  require(img.height > 0 && img.width > 0, "empty image");
  require(img.data.size() == static_cast<std::size_t>(img.height) * img.width * 3, "input is not RGB");
  const auto kernels = gradient_kernels(sigma);
  const Plane grad = convolve(convolve(luminance(img), kernels[0]), kernels[1]);
  FeatureImage out(img.height, img.width, 3);
  out.provenance = "gradient_color sigma=" + std::to_string(sigma);
  out.set_channel(0, grad);
  for (int r = 0; r < img.height; ++r) {
    for (int c = 0; c < img.width; ++c) {
      out.at(r, c, 1) = img.at(r, c, 0) / 255.0;
      out.at(r, c, 2) = img.at(r, c, 2) / 255.0;
    }
  }
  return out;
}

std::vector<Kernel2D> filter_bank_kernels(const FilterBankConfig& config) {
  std::vector<Kernel2D> ks;
  const int n = config.size;
  for (double s : config.gaussian_sigmas) ks.push_back(gaussian_kernel(s, n, n));
  for (double s : config.log_sigmas) ks.push_back(log_kernel(s, n));
  for (double s : config.derivative_sigmas) {
    ks.push_back(gaussian_derivative_kernel(s, n, n, Axis::x));
    ks.push_back(gaussian_derivative_kernel(s, n, n, Axis::y));
  }
  return ks;
}

Plane to_unit_plane(const GrayImage& img) {
  Plane p(img.height, img.width);
  for (std::size_t i = 0; i < p.v.size(); ++i) p.v[i] = img.pixels[i] / 255.0;
  return p;
}

FeatureImage extract_filter_bank(const GrayImage& img, const FilterBankConfig& config) {
  require(img.height > 0 && img.width > 0, "empty image");
  require(img.pixels.size() == static_cast<std::size_t>(img.height) * img.width, "input is not grayscale");
  const auto kernels = filter_bank_kernels(config);
  const Plane unit = to_unit_plane(img);
  FeatureImage out(img.height, img.width, static_cast<int>(kernels.size()));
  out.provenance = "filter_bank size=" + std::to_string(config.size);
  for (std::size_t ch = 0; ch < kernels.size(); ++ch) out.set_channel(static_cast<int>(ch), convolve(unit, kernels[ch]));
  return out;
}

std::size_t DocLayout::word_count() const {
  std::size_t n = 0;
  for (const auto& d : docs) n += d.size();
  return n;
}

void DocLayout::validate() const {
  require(height > 0 && width > 0, "layout has empty image size");
  for (const auto& d : docs) {
    std::set<std::pair<int, int>> seen;
    for (const auto& p : d) {
      require(p.row >= 0 && p.row < height && p.col >= 0 && p.col < width, "layout coordinate out of bounds");
      require(seen.emplace(p.row, p.col).second, "layout maps two words of one document to one pixel");
    }
  }
}

TiledCorpus tile_documents(const FeatureImage& fimg, int window, int stride) {
  fimg.validate();
  require(window >= 1, "window must be positive");
  require(stride >= 1, "stride must be positive");
  require(window <= fimg.height && window <= fimg.width, "window larger than image");
  TiledCorpus out;
  out.layout.height = fimg.height;
  out.layout.width = fimg.width;
  out.layout.scheme = DocLayout::Scheme::sliding_window;
  out.layout.window = window;
  out.layout.stride = stride;
  for (int r0 = 0; r0 + window <= fimg.height; r0 += stride) {
    for (int c0 = 0; c0 + window <= fimg.width; c0 += stride) {
      Document doc;
      for (int r = r0; r < r0 + window; ++r) {
        for (int c = c0; c < c0 + window; ++c) {
          const auto px = fimg.pixel(r, c);
          doc.words.emplace_back(px.begin(), px.end());
          doc.geometry.push_back({r, c});
        }
      }
      out.layout.docs.push_back(doc.geometry);
      out.corpus.push_back(std::move(doc));
    }
  }
  return out;
}

TiledCorpus group_by_labels(const FeatureImage& fimg, const LabelMap& labels) {
  fimg.validate();
  require(labels.height == fimg.height && labels.width == fimg.width, "label map size differs from image");
  std::map<int, std::size_t> index;
  for (int l : labels.labels) index.emplace(l, 0);
  std::size_t next = 0;
  for (auto& [label, idx] : index) idx = next++;

  TiledCorpus out;
  out.layout.height = fimg.height;
  out.layout.width = fimg.width;
  out.layout.scheme = DocLayout::Scheme::labels;
  out.corpus.resize(index.size());
  for (const auto& [label, idx] : index) out.layout.doc_labels.push_back(label);
  for (int r = 0; r < fimg.height; ++r) {
    for (int c = 0; c < fimg.width; ++c) {
      Document& doc = out.corpus[index.at(labels.at(r, c))];
      const auto px = fimg.pixel(r, c);
      doc.words.emplace_back(px.begin(), px.end());
      doc.geometry.push_back({r, c});
    }
  }
  for (const auto& doc : out.corpus) out.layout.docs.push_back(doc.geometry);
  return out;
}

}  // namespace pmlda
