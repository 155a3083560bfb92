#include "slicegap/sgv_io.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace slicegap::detail {

using nlohmann::json;

void write_file_bytes(const std::string& path, const void* data, std::size_t n) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
  if (!os) throw IoError("write failed: " + path);
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream is(path, std::ios::binary | std::ios::ate);
  if (!is) throw IoError("cannot open: " + path);
  const auto size = is.tellg();
  is.seekg(0);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  is.read(reinterpret_cast<char*>(bytes.data()), size);
  if (!is) throw IoError("read failed: " + path);
  return bytes;
}

std::string sgv_header_json(const std::vector<Index>& dims, const std::array<double, 3>& spacing,
                            const std::map<std::string, std::string>& meta) {
  json j;
  j["dims"] = dims;
  j["spacing"] = spacing;
  j["dtype"] = "f32le";
  j["meta"] = meta;
  return j.dump(2) + "\n";
}

void parse_sgv_header(const std::string& text, std::vector<Index>& dims,
                      std::array<double, 3>& spacing, std::map<std::string, std::string>& meta) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw IoError(std::string("SGV header is not valid JSON: ") + e.what());
  }
  try {
    dims = j.at("dims").get<std::vector<Index>>();
    const auto sp = j.at("spacing").get<std::vector<double>>();
    const std::string dtype = j.at("dtype").get<std::string>();
    if (dims.size() != 3 || sp.size() != 3) throw IoError("SGV header: dims/spacing must have 3 entries");
    if (dims[0] < 1 || dims[1] < 1 || dims[2] < 1) throw IoError("SGV header: non-positive dims");
    if (sp[0] <= 0 || sp[1] <= 0 || sp[2] <= 0) throw IoError("SGV header: non-positive spacing");
    if (dtype != "f32le") throw IoError("SGV header: unsupported dtype " + dtype);
    spacing = {sp[0], sp[1], sp[2]};
    meta.clear();
    if (j.contains("meta"))
      for (const auto& [k, v] : j.at("meta").items()) meta[k] = v.get<std::string>();
  } catch (const json::exception& e) {
    throw IoError(std::string("SGV header: missing or malformed field: ") + e.what());
  }
}

}  // namespace slicegap::detail
