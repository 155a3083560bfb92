#include "slicegap/checkpoint.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace slicegap {

using nlohmann::json;

namespace {
constexpr char kMagic[4] = {'S', 'G', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void CheckpointFile::save(const std::string& path) const {
  json header;
  header["kind"] = kind;
  header["config"] = json::parse(config_json);
  header["iteration"] = iteration;
  header["seed"] = seed;
  header["rng_state"] = rng_state;
  header["extra"] = extra;

  json tensors = json::array();
  std::uint64_t offset = 0;
  for (const auto& [name, e] : entries_) {
    json t;
    t["name"] = name;
    t["shape"] = e.shape;
    t["dtype"] = e.dtype;
    t["offset"] = offset;
    t["nbytes"] = e.bytes.size();
    tensors.push_back(t);
    offset += e.bytes.size();
  }
  header["tensors"] = tensors;
  const std::string htext = header.dump();

  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("checkpoint: cannot open for writing: " + path);
  os.write(kMagic, 4);
  std::uint32_t version = kVersion;
  os.write(reinterpret_cast<const char*>(&version), sizeof(version));
  std::uint64_t hlen = htext.size();
  os.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  os.write(htext.data(), static_cast<std::streamsize>(htext.size()));
  for (const auto& [name, e] : entries_)
    os.write(reinterpret_cast<const char*>(e.bytes.data()), static_cast<std::streamsize>(e.bytes.size()));
  if (!os) throw IoError("checkpoint: write failed: " + path);
}

CheckpointFile CheckpointFile::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("checkpoint: cannot open: " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t hlen = 0;
  is.read(magic, 4);
  is.read(reinterpret_cast<char*>(&version), sizeof(version));
  is.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!is || std::memcmp(magic, kMagic, 4) != 0) throw IoError("checkpoint: bad magic: " + path);
  if (version != kVersion) throw IoError("checkpoint: unsupported version");

  std::string htext(hlen, '\0');
  is.read(htext.data(), static_cast<std::streamsize>(hlen));
  if (!is) throw IoError("checkpoint: truncated header: " + path);

  json header;
  try {
    header = json::parse(htext);
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint: header not valid JSON: ") + e.what());
  }

  CheckpointFile ck;
  try {
    ck.kind = header.at("kind").get<std::string>();
    ck.config_json = header.at("config").dump();
    ck.iteration = header.at("iteration").get<std::int64_t>();
    ck.seed = header.at("seed").get<std::uint64_t>();
    ck.rng_state = header.at("rng_state").get<std::string>();
    for (const auto& [k, v] : header.at("extra").items()) ck.extra[k] = v.get<std::string>();
    for (const auto& t : header.at("tensors")) {
      Entry e;
      e.shape = t.at("shape").get<std::vector<Index>>();
      e.dtype = t.at("dtype").get<std::string>();
      e.bytes.resize(t.at("nbytes").get<std::size_t>());
      ck.entries_[t.at("name").get<std::string>()] = std::move(e);
    }
  } catch (const json::exception& e) {
    throw IoError(std::string("checkpoint: malformed header: ") + e.what());
  }

  // entries_ is ordered by name, matching the save-side offsets
  for (auto& [name, e] : ck.entries_) {
    is.read(reinterpret_cast<char*>(e.bytes.data()), static_cast<std::streamsize>(e.bytes.size()));
    if (!is) throw IoError("checkpoint: truncated payload: " + path);
  }
  return ck;
}

}  // namespace slicegap
