#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <vector>

#include "vloc/errors.hpp"
#include "vloc/geometry.hpp"

namespace vloc {

/// Dense feature map at one pyramid level. Texel (x, y) at stride s sits at
/// full-resolution pixel (x*s, y*s); data is row-major [H][W][D] float32.
struct FeatureMap {
  int width = 0;
  int height = 0;
  int depth = 0;
  int stride = 1;
  std::vector<float> data;

  FeatureMap() = default;
  FeatureMap(int w, int h, int d, int s)
      : width(w), height(h), depth(d), stride(s),
        data(static_cast<std::size_t>(w) * h * d, 0.0f) {}

  const float* texel(int x, int y) const {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * depth;
  }
  float* texel(int x, int y) {
    return data.data() + (static_cast<std::size_t>(y) * width + x) * depth;
  }

  /// Full-resolution extent covered by this map, in pixels.
  double extent_x() const { return static_cast<double>(width) * stride; }
  double extent_y() const { return static_cast<double>(height) * stride; }

  void validate() const;  // throws ConfigError / NonFiniteInput
};

/// Per-texel non-negative uncertainty paired with a FeatureMap. An empty
/// data vector means "no uncertainty", treated as zero everywhere.
struct UncertaintyMap {
  int width = 0;
  int height = 0;
  int stride = 1;
  std::vector<float> data;

  bool empty() const { return data.empty(); }
  void validate() const;
};

struct PyramidLevel {
  FeatureMap features;
  UncertaintyMap uncertainty;
};

/// Multi-level pyramid with strictly increasing strides (canonically
/// {1, 4, 16}); all levels cover the same full-resolution extent.
struct FeaturePyramid {
  std::vector<PyramidLevel> levels;

  const PyramidLevel* find_level(int stride) const;
  void validate() const;
};

/// Depth-concatenation of upsampled feature maps; block b spans
/// block_depths[b] channels and is L2-normalized per texel.
struct Hypercolumn {
  FeatureMap map;
  std::vector<int> block_depths;

  int depth() const { return map.depth; }
};

/// Subpixel bilinear sample at full-resolution pixel p (grid coordinate
/// g = p / stride, borders clamped). Throws OutOfBounds when g leaves
/// [-0.5, W-0.5] x [-0.5, H-0.5].
Eigen::VectorXd bilinear_sample(const FeatureMap& fmap, const Vec2& p);
void bilinear_sample(const FeatureMap& fmap, const Vec2& p, double* out);

/// Scalar variant for uncertainty maps; empty maps sample as 0.
double bilinear_sample(const UncertaintyMap& umap, const Vec2& p);

/// Analytic D x 2 gradient of bilinear_sample with respect to the
/// full-resolution pixel p; piecewise constant per grid cell.
Eigen::MatrixXd bilinear_sample_gradient(const FeatureMap& fmap,
                                         const Vec2& p);
void bilinear_sample_gradient(const FeatureMap& fmap, const Vec2& p,
                              double* out_dx, double* out_dy);

/// Bilinear magnification to a finer stride; target_stride must divide
/// fmap.stride (throws BadStride otherwise).
FeatureMap upsample_bilinear(const FeatureMap& fmap, int target_stride);

/// Upsamples all maps to the smallest stride present, L2-normalizes each
/// map's channels per texel (zero vectors stay zero) and concatenates.
Hypercolumn build_hypercolumn(const std::vector<FeatureMap>& maps);

/// Binary pyramid file ("FPYR"): round-trips bit-exact.
FeaturePyramid load_pyramid(const std::filesystem::path& path);
void save_pyramid(const FeaturePyramid& pyramid,
                  const std::filesystem::path& path);
std::vector<std::uint8_t> pyramid_to_bytes(const FeaturePyramid& pyramid);
FeaturePyramid pyramid_from_bytes(const std::vector<std::uint8_t>& bytes);

}  // namespace vloc
