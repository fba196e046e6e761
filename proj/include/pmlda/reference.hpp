#pragma once

// Serial reference kernels. Each builds an explicitly edge-replicated copy of
// its input and applies the same per-pixel arithmetic as the parallel kernel,
// so results must match bit for bit. Used by tests and the benchmark.

#include "pmlda/features.hpp"

namespace pmlda::reference {

Plane pad_replicate(const Plane& in, int pad_rows, int pad_cols);
GrayImage pad_replicate(const GrayImage& in, int pad);

Plane convolve(const Plane& in, const Kernel2D& kernel);

FeatureImage extract_intensity_entropy(const GrayImage& img, int window = 21, double intensity_scale = 10.0);
FeatureImage extract_gradient_color(const RgbImage& img, double sigma = 2.0);
FeatureImage extract_filter_bank(const GrayImage& img, const FilterBankConfig& config = {});

}  // namespace pmlda::reference
