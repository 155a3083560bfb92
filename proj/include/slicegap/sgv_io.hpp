#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slicegap/errors.hpp"
#include "slicegap/volume.hpp"

namespace slicegap {

// SGV volume format: a JSON header file
//   {"dims":[D,H,W], "spacing":[s_z,s_y,s_x], "dtype":"f32le", "meta":{...}}
// plus a sibling raw file "<header path>.raw" of D*H*W little-endian f32
// in z-major, then y, then x order.

namespace detail {
void write_file_bytes(const std::string& path, const void* data, std::size_t n);
std::vector<std::uint8_t> read_file_bytes(const std::string& path);
// header (de)serialization lives in sgv_io.cpp so the JSON dependency stays
// out of this header
std::string sgv_header_json(const std::vector<Index>& dims, const std::array<double, 3>& spacing,
                            const std::map<std::string, std::string>& meta);
void parse_sgv_header(const std::string& text, std::vector<Index>& dims,
                      std::array<double, 3>& spacing, std::map<std::string, std::string>& meta);
}  // namespace detail

template <typename Scalar>
void save_volume(const Volume3<Scalar>& vol, const std::string& path) {
  if (vol.data.rank() != 3) throw IoError("save_volume: volume has no 3D grid");
  const std::string header =
      detail::sgv_header_json(vol.data.shape(), vol.spacing, vol.meta);
  detail::write_file_bytes(path, header.data(), header.size());
  std::vector<float> payload(static_cast<std::size_t>(vol.data.size()));
  for (Index i = 0; i < vol.data.size(); ++i) payload[static_cast<std::size_t>(i)] = static_cast<float>(vol.data[i]);
  detail::write_file_bytes(path + ".raw", payload.data(), payload.size() * sizeof(float));
}

template <typename Scalar = float>
Volume3<Scalar> load_volume(const std::string& path) {
  const auto header_bytes = detail::read_file_bytes(path);
  std::vector<Index> dims;
  std::array<double, 3> spacing{};
  std::map<std::string, std::string> meta;
  detail::parse_sgv_header(std::string(header_bytes.begin(), header_bytes.end()), dims, spacing,
                           meta);
  const auto raw = detail::read_file_bytes(path + ".raw");
  const Index n = dims[0] * dims[1] * dims[2];
  if (raw.size() != static_cast<std::size_t>(n) * sizeof(float))
    throw IoError("load_volume: payload size does not match header dims: " + path);

  Volume3<Scalar> vol(dims[0], dims[1], dims[2], spacing);
  vol.meta = std::move(meta);
  const float* src = reinterpret_cast<const float*>(raw.data());
  for (Index i = 0; i < n; ++i) vol.data[i] = static_cast<Scalar>(src[i]);
  return vol;
}

/// 8-bit grayscale PNG; pixels row-major, size H*W.
void write_png_gray8(const std::string& path, int height, int width,
                     const std::vector<std::uint8_t>& pixels);

/// Export one slice as PNG, mapping [0,1] linearly onto [0,255] (clamped).
template <typename Scalar>
void save_slice_png(const Volume3<Scalar>& vol, Index z, const std::string& path) {
  const Index h = vol.height(), w = vol.width();
  std::vector<std::uint8_t> px(static_cast<std::size_t>(h * w));
  for (Index y = 0; y < h; ++y)
    for (Index x = 0; x < w; ++x) {
      const double v = std::clamp(static_cast<double>(vol.at(z, y, x)), 0.0, 1.0);
      px[static_cast<std::size_t>(y * w + x)] = static_cast<std::uint8_t>(std::lround(v * 255.0));
    }
  write_png_gray8(path, static_cast<int>(h), static_cast<int>(w), px);
}

}  // namespace slicegap
