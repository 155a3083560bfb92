#include "slicegap/sgv_io.hpp"

#include <zlib.h>

#include <cstring>
#include <fstream>

namespace slicegap {

namespace {

void put_u32_be(std::vector<std::uint8_t>& out, std::uint32_t v) {
  out.push_back(static_cast<std::uint8_t>(v >> 24));
  out.push_back(static_cast<std::uint8_t>(v >> 16));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
  out.push_back(static_cast<std::uint8_t>(v));
}

void put_chunk(std::vector<std::uint8_t>& out, const char type[4],
               const std::vector<std::uint8_t>& payload) {
  put_u32_be(out, static_cast<std::uint32_t>(payload.size()));
  const std::size_t crc_start = out.size();
  out.insert(out.end(), type, type + 4);
  out.insert(out.end(), payload.begin(), payload.end());
  const auto crc = crc32(0L, out.data() + crc_start, static_cast<uInt>(out.size() - crc_start));
  put_u32_be(out, static_cast<std::uint32_t>(crc));
}

}  // namespace

void write_png_gray8(const std::string& path, int height, int width,
                     const std::vector<std::uint8_t>& pixels) {
  if (height < 1 || width < 1 ||
      pixels.size() != static_cast<std::size_t>(height) * static_cast<std::size_t>(width))
    throw IoError("write_png_gray8: pixel buffer does not match dimensions");

  // each scanline prefixed with filter byte 0 (None)
  std::vector<std::uint8_t> raw(static_cast<std::size_t>(height) * (static_cast<std::size_t>(width) + 1));
  for (int y = 0; y < height; ++y) {
    raw[static_cast<std::size_t>(y) * (static_cast<std::size_t>(width) + 1)] = 0;
    std::memcpy(raw.data() + static_cast<std::size_t>(y) * (static_cast<std::size_t>(width) + 1) + 1,
                pixels.data() + static_cast<std::size_t>(y) * static_cast<std::size_t>(width),
                static_cast<std::size_t>(width));
  }

  uLongf comp_cap = compressBound(static_cast<uLong>(raw.size()));
  std::vector<std::uint8_t> compressed(comp_cap);
  if (compress2(compressed.data(), &comp_cap, raw.data(), static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw IoError("write_png_gray8: zlib compression failed");
  compressed.resize(comp_cap);

  std::vector<std::uint8_t> ihdr;
  put_u32_be(ihdr, static_cast<std::uint32_t>(width));
  put_u32_be(ihdr, static_cast<std::uint32_t>(height));
  ihdr.push_back(8);  // bit depth
  ihdr.push_back(0);  // color type: grayscale
  ihdr.push_back(0);  // compression
  ihdr.push_back(0);  // filter
  ihdr.push_back(0);  // interlace

  std::vector<std::uint8_t> file;
  const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  file.insert(file.end(), sig, sig + 8);
  put_chunk(file, "IHDR", ihdr);
  put_chunk(file, "IDAT", compressed);
  put_chunk(file, "IEND", {});

  detail::write_file_bytes(path, file.data(), file.size());
}

}  // namespace slicegap
