#include "vloc/feature.hpp"

#include <algorithm>
#include <cmath>

#include "vloc/io.hpp"

namespace vloc {

void FeatureMap::validate() const {
  if (width < 1 || height < 1 || depth < 1) {
    throw ConfigError("FeatureMap: dimensions must be >= 1");
  }
  if (stride < 1) throw ConfigError("FeatureMap: stride must be >= 1");
  if (data.size() != static_cast<std::size_t>(width) * height * depth) {
    throw ConfigError("FeatureMap: data length " + std::to_string(data.size()) +
                      " does not match " + std::to_string(width) + "x" +
                      std::to_string(height) + "x" + std::to_string(depth));
  }
  for (const float v : data) {
    if (!std::isfinite(v)) throw NonFiniteInput("FeatureMap: non-finite value");
  }
}

void UncertaintyMap::validate() const {
  if (empty()) return;
  if (data.size() != static_cast<std::size_t>(width) * height) {
    throw ConfigError("UncertaintyMap: data length mismatch");
  }
  for (const float v : data) {
    if (!std::isfinite(v) || v < 0.0f) {
      throw ConfigError("UncertaintyMap: values must be finite and >= 0");
    }
  }
}

const PyramidLevel* FeaturePyramid::find_level(int stride) const {
  for (const auto& level : levels) {
    if (level.features.stride == stride) return &level;
  }
  return nullptr;
}

void FeaturePyramid::validate() const {
  int last_stride = 0;
  for (const auto& level : levels) {
    level.features.validate();
    level.uncertainty.validate();
    if (level.features.stride <= last_stride) {
      throw ConfigError("FeaturePyramid: strides must strictly increase");
    }
    last_stride = level.features.stride;
    if (!level.uncertainty.empty()) {
      if (level.uncertainty.width != level.features.width ||
          level.uncertainty.height != level.features.height ||
          level.uncertainty.stride != level.features.stride) {
        throw ConfigError("FeaturePyramid: uncertainty shape mismatch");
      }
    }
  }
  if (!levels.empty()) {
    const double ex = levels.front().features.extent_x();
    const double ey = levels.front().features.extent_y();
    for (const auto& level : levels) {
      const double tol = static_cast<double>(level.features.stride);
      if (std::abs(level.features.extent_x() - ex) > tol ||
          std::abs(level.features.extent_y() - ey) > tol) {
        throw ConfigError("FeaturePyramid: levels cover different extents");
      }
    }
  }
}

namespace {

struct BilinearCell {
  int x0, x1, y0, y1;
  double fx, fy;
};

// Grid-coordinate lookup with clamped borders; throws OutOfBounds outside
// [-0.5, W-0.5] x [-0.5, H-0.5].
BilinearCell locate(int width, int height, int stride, const Vec2& p) {
  const double gx = p.x() / stride;
  const double gy = p.y() / stride;
  if (!(gx >= -0.5 && gx <= width - 0.5 && gy >= -0.5 && gy <= height - 0.5)) {
    throw OutOfBounds("sample at grid (" + std::to_string(gx) + ", " +
                      std::to_string(gy) + ") outside " +
                      std::to_string(width) + "x" + std::to_string(height));
  }
  BilinearCell c;
  const double x0f = std::floor(gx);
  const double y0f = std::floor(gy);
  c.fx = gx - x0f;
  c.fy = gy - y0f;
  c.x0 = std::clamp(static_cast<int>(x0f), 0, width - 1);
  c.y0 = std::clamp(static_cast<int>(y0f), 0, height - 1);
  c.x1 = std::clamp(static_cast<int>(x0f) + 1, 0, width - 1);
  c.y1 = std::clamp(static_cast<int>(y0f) + 1, 0, height - 1);
  return c;
}

}  // namespace

void bilinear_sample(const FeatureMap& fmap, const Vec2& p, double* out) {
  const BilinearCell c = locate(fmap.width, fmap.height, fmap.stride, p);
  const float* t00 = fmap.texel(c.x0, c.y0);
  const float* t10 = fmap.texel(c.x1, c.y0);
  const float* t01 = fmap.texel(c.x0, c.y1);
  const float* t11 = fmap.texel(c.x1, c.y1);
  const double w00 = (1.0 - c.fx) * (1.0 - c.fy);
  const double w10 = c.fx * (1.0 - c.fy);
  const double w01 = (1.0 - c.fx) * c.fy;
  const double w11 = c.fx * c.fy;
  for (int d = 0; d < fmap.depth; ++d) {
    out[d] = w00 * t00[d] + w10 * t10[d] + w01 * t01[d] + w11 * t11[d];
  }
}

Eigen::VectorXd bilinear_sample(const FeatureMap& fmap, const Vec2& p) {
  Eigen::VectorXd out(fmap.depth);
  bilinear_sample(fmap, p, out.data());
  return out;
}

double bilinear_sample(const UncertaintyMap& umap, const Vec2& p) {
  if (umap.empty()) return 0.0;
  const BilinearCell c = locate(umap.width, umap.height, umap.stride, p);
  const auto at = [&](int x, int y) {
    return static_cast<double>(
        umap.data[static_cast<std::size_t>(y) * umap.width + x]);
  };
  return (1.0 - c.fx) * (1.0 - c.fy) * at(c.x0, c.y0) +
         c.fx * (1.0 - c.fy) * at(c.x1, c.y0) +
         (1.0 - c.fx) * c.fy * at(c.x0, c.y1) + c.fx * c.fy * at(c.x1, c.y1);
}

void bilinear_sample_gradient(const FeatureMap& fmap, const Vec2& p,
                              double* out_dx, double* out_dy) {
  const BilinearCell c = locate(fmap.width, fmap.height, fmap.stride, p);
  const float* t00 = fmap.texel(c.x0, c.y0);
  const float* t10 = fmap.texel(c.x1, c.y0);
  const float* t01 = fmap.texel(c.x0, c.y1);
  const float* t11 = fmap.texel(c.x1, c.y1);
  const double inv_s = 1.0 / fmap.stride;
  for (int d = 0; d < fmap.depth; ++d) {
    const double dgx =
        (1.0 - c.fy) * (t10[d] - t00[d]) + c.fy * (t11[d] - t01[d]);
    const double dgy =
        (1.0 - c.fx) * (t01[d] - t00[d]) + c.fx * (t11[d] - t10[d]);
    out_dx[d] = dgx * inv_s;
    out_dy[d] = dgy * inv_s;
  }
}

Eigen::MatrixXd bilinear_sample_gradient(const FeatureMap& fmap,
                                         const Vec2& p) {
  Eigen::MatrixXd g(fmap.depth, 2);
  std::vector<double> dx(fmap.depth), dy(fmap.depth);
  bilinear_sample_gradient(fmap, p, dx.data(), dy.data());
  for (int d = 0; d < fmap.depth; ++d) {
    g(d, 0) = dx[d];
    g(d, 1) = dy[d];
  }
  return g;
}

FeatureMap upsample_bilinear(const FeatureMap& fmap, int target_stride) {
  if (target_stride < 1 || fmap.stride % target_stride != 0) {
    throw BadStride("upsample: target stride " + std::to_string(target_stride) +
                    " does not divide " + std::to_string(fmap.stride));
  }
  const int factor = fmap.stride / target_stride;
  if (factor == 1) return fmap;
  FeatureMap out(fmap.width * factor, fmap.height * factor, fmap.depth,
                 target_stride);
  const double inv_f = 1.0 / factor;
  std::vector<double> sample(fmap.depth);
  for (int y = 0; y < out.height; ++y) {
    for (int x = 0; x < out.width; ++x) {
      // source grid coordinate of the new texel center
      const double gx = x * inv_f;
      const double gy = y * inv_f;
      const Vec2 p(gx * fmap.stride, gy * fmap.stride);
      bilinear_sample(fmap, p, sample.data());
      float* t = out.texel(x, y);
      for (int d = 0; d < fmap.depth; ++d) {
        t[d] = static_cast<float>(sample[d]);
      }
    }
  }
  return out;
}

Hypercolumn build_hypercolumn(const std::vector<FeatureMap>& maps) {
  if (maps.empty()) throw EmptyInput("build_hypercolumn: no maps");
  int min_stride = maps.front().stride;
  for (const auto& m : maps) min_stride = std::min(min_stride, m.stride);
  const double ex = maps.front().extent_x();
  const double ey = maps.front().extent_y();
  for (const auto& m : maps) {
    const double tol = static_cast<double>(std::max(m.stride, maps.front().stride));
    if (std::abs(m.extent_x() - ex) > tol || std::abs(m.extent_y() - ey) > tol) {
      throw ExtentMismatch("build_hypercolumn: maps cover different extents");
    }
    if (min_stride < 1 || m.stride % min_stride != 0) {
      throw BadStride("build_hypercolumn: stride " + std::to_string(m.stride) +
                      " not a multiple of " + std::to_string(min_stride));
    }
  }

  std::vector<FeatureMap> up;
  up.reserve(maps.size());
  for (const auto& m : maps) up.push_back(upsample_bilinear(m, min_stride));

  const int width = up.front().width;
  const int height = up.front().height;
  for (const auto& m : up) {
    if (m.width != width || m.height != height) {
      throw ExtentMismatch("build_hypercolumn: upsampled sizes differ");
    }
  }

  Hypercolumn hc;
  int total_depth = 0;
  for (const auto& m : up) {
    hc.block_depths.push_back(m.depth);
    total_depth += m.depth;
  }
  hc.map = FeatureMap(width, height, total_depth, min_stride);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      float* dst = hc.map.texel(x, y);
      int offset = 0;
      for (const auto& m : up) {
        const float* src = m.texel(x, y);
        double sq = 0.0;
        for (int d = 0; d < m.depth; ++d) sq += double(src[d]) * src[d];
        const double inv_norm = sq > 0.0 ? 1.0 / std::sqrt(sq) : 0.0;
        for (int d = 0; d < m.depth; ++d) {
          dst[offset + d] = static_cast<float>(src[d] * inv_norm);
        }
        offset += m.depth;
      }
    }
  }
  return hc;
}

// ---------------------------------------------------------------------------
// FPYR binary format, little-endian:
//   "FPYR", then payload { u32 version=1, u32 level_count,
//   per level: u32 W, H, D, stride, u8 has_uncertainty,
//   f32 features [H][W][D], f32 uncertainty [H][W] if flagged },
//   then u32 CRC32 of the payload.
// ---------------------------------------------------------------------------

namespace {
constexpr char kPyramidMagic[4] = {'F', 'P', 'Y', 'R'};
constexpr std::uint32_t kPyramidVersion = 1;
}  // namespace

std::vector<std::uint8_t> pyramid_to_bytes(const FeaturePyramid& pyramid) {
  pyramid.validate();
  ByteWriter payload;
  payload.u32(kPyramidVersion);
  payload.u32(static_cast<std::uint32_t>(pyramid.levels.size()));
  for (const auto& level : pyramid.levels) {
    const FeatureMap& f = level.features;
    payload.u32(static_cast<std::uint32_t>(f.width));
    payload.u32(static_cast<std::uint32_t>(f.height));
    payload.u32(static_cast<std::uint32_t>(f.depth));
    payload.u32(static_cast<std::uint32_t>(f.stride));
    payload.u8(level.uncertainty.empty() ? 0 : 1);
    for (const float v : f.data) payload.f32(v);
    if (!level.uncertainty.empty()) {
      for (const float v : level.uncertainty.data) payload.f32(v);
    }
  }
  ByteWriter out;
  out.raw(kPyramidMagic, 4);
  out.raw(payload.bytes().data(), payload.bytes().size());
  out.u32(crc32_bytes(payload.bytes().data(), payload.bytes().size()));
  return out.bytes();
}

FeaturePyramid pyramid_from_bytes(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 4 || std::memcmp(bytes.data(), kPyramidMagic, 4) != 0) {
    throw BadMagic("pyramid file: bad magic");
  }
  if (bytes.size() < 8) {
    throw ParseError("pyramid file: truncated before checksum");
  }
  const std::size_t payload_size = bytes.size() - 8;
  ByteReader crc_reader(bytes.data() + 4 + payload_size, 4);
  const std::uint32_t stored_crc = crc_reader.u32();
  const std::uint32_t actual_crc = crc32_bytes(bytes.data() + 4, payload_size);
  if (stored_crc != actual_crc) {
    throw ChecksumError("pyramid file: CRC mismatch");
  }

  ByteReader in(bytes.data() + 4, payload_size);
  const std::uint32_t version = in.u32();
  if (version != kPyramidVersion) {
    throw ParseError("pyramid file: unsupported version " +
                     std::to_string(version));
  }
  const std::uint32_t level_count = in.u32();
  FeaturePyramid pyramid;
  for (std::uint32_t i = 0; i < level_count; ++i) {
    PyramidLevel level;
    const std::uint32_t w = in.u32();
    const std::uint32_t h = in.u32();
    const std::uint32_t d = in.u32();
    const std::uint32_t s = in.u32();
    const std::uint8_t has_unc = in.u8();
    if (w < 1 || h < 1 || d < 1 || s < 1 || w > (1u << 20) || h > (1u << 20) ||
        d > (1u << 16)) {
      throw ParseError("pyramid file: implausible level header");
    }
    level.features = FeatureMap(static_cast<int>(w), static_cast<int>(h),
                                static_cast<int>(d), static_cast<int>(s));
    in.f32_array(level.features.data.data(), level.features.data.size());
    if (has_unc) {
      level.uncertainty.width = static_cast<int>(w);
      level.uncertainty.height = static_cast<int>(h);
      level.uncertainty.stride = static_cast<int>(s);
      level.uncertainty.data.resize(static_cast<std::size_t>(w) * h);
      in.f32_array(level.uncertainty.data.data(),
                   level.uncertainty.data.size());
    }
    pyramid.levels.push_back(std::move(level));
  }
  if (in.remaining() != 0) {
    throw ParseError("pyramid file: trailing bytes");
  }
  try {
    pyramid.validate();
  } catch (const Error& e) {
    throw ParseError(std::string("pyramid file: ") + e.what());
  }
  return pyramid;
}

FeaturePyramid load_pyramid(const std::filesystem::path& path) {
  return pyramid_from_bytes(read_file_bytes(path));
}

void save_pyramid(const FeaturePyramid& pyramid,
                  const std::filesystem::path& path) {
  write_file_bytes(path, pyramid_to_bytes(pyramid));
}

}  // namespace vloc
