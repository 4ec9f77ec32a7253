#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "layoutgen/geometry.hpp"

namespace layoutgen {

/// Row-major grid, rows = image height.
using GrayImage = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Values in [0, 1] after normalization.
using SaliencyMap = Eigen::Array<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct SaliencyParams {
  int working_size = 64;
  int box_filter = 3;
  double blur_sigma = 2.5;
};

/// Spectral-residual saliency: resize to the working size, take the log
/// amplitude spectrum, subtract its local box average, rebuild with the
/// original phase, square the inverse transform, blur and min-max normalize.
/// A constant image has no spectral structure and maps to all zeros.
SaliencyMap spectral_residual_saliency(const GrayImage& image,
                                       const SaliencyParams& params = {});

/// Tight box around every map cell strictly above `threshold`, scaled to the
/// canvas with outward rounding so each cell's footprint is covered. nullopt
/// when no cell passes.
std::optional<BoundingBox> rectify(const SaliencyMap& map, double threshold,
                                   const CanvasSpec& canvas);

/// Zero-area box at the canvas center; the fallback for an empty saliency map.
BoundingBox center_fallback_box(const CanvasSpec& canvas);

/// 8-bit binary (P5) or ASCII (P2) greymap.
GrayImage read_pgm(const std::filesystem::path& path);
void write_pgm(const std::filesystem::path& path, const GrayImage& image);

/// Bilinear resample with pixel-center alignment.
GrayImage resize_bilinear(const GrayImage& image, int rows, int cols);

}  // namespace layoutgen
