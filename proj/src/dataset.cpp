#include "slicegap/dataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

#include <nlohmann/json.hpp>

namespace slicegap {

using nlohmann::json;
namespace fs = std::filesystem;

void save_manifest(const DatasetManifest& m, const std::string& path) {
  json j;
  j["root"] = m.root;
  j["train"] = m.train_ids;
  j["test"] = m.test_ids;
  j["split_seed"] = m.split_seed;
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot write manifest: " + path);
  os << j.dump(2) << "\n";
}

DatasetManifest load_manifest(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open manifest: " + path);
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest is not valid JSON: ") + e.what());
  }
  DatasetManifest m;
  try {
    m.root = j.at("root").get<std::string>();
    m.train_ids = j.at("train").get<std::vector<std::string>>();
    m.test_ids = j.at("test").get<std::vector<std::string>>();
    m.split_seed = j.at("split_seed").get<std::uint64_t>();
  } catch (const json::exception& e) {
    throw IoError(std::string("manifest: missing field: ") + e.what());
  }
  // root is stored relative to the manifest location
  if (!m.root.empty() && !fs::path(m.root).is_absolute())
    m.root = (fs::path(path).parent_path() / m.root).string();
  return m;
}

std::string volume_path(const DatasetManifest& m, const std::string& id) {
  return (fs::path(m.root) / (id + ".sgv")).string();
}

DatasetManifest build_dataset(int n, const PhantomSpec& spec_template, double train_frac,
                              std::uint64_t seed, const std::string& out_dir) {
  if (n < 1) throw ConfigError("build_dataset: need at least one volume");
  if (train_frac < 0.0 || train_frac > 1.0) throw ConfigError("build_dataset: train_frac outside [0,1]");
  fs::create_directories(out_dir);

  std::vector<std::string> ids;
  for (int i = 0; i < n; ++i) {
    PhantomSpec spec = spec_template;
    spec.seed = mix_seed(seed, static_cast<std::uint64_t>(i));
    auto vol = make_phantom<float>(spec);
    char name[32];
    std::snprintf(name, sizeof(name), "phantom_%04d", i);
    vol.meta["id"] = name;
    save_volume(vol, (fs::path(out_dir) / (std::string(name) + ".sgv")).string());
    ids.emplace_back(name);
  }

  // deterministic Fisher-Yates split
  Rng rng(mix_seed(seed, 0xda7a5e7ULL));
  std::vector<std::string> shuffled = ids;
  for (std::size_t i = shuffled.size(); i > 1; --i)
    std::swap(shuffled[i - 1], shuffled[static_cast<std::size_t>(rng.uniform_int(static_cast<std::int64_t>(i)))]);

  const auto n_train = static_cast<std::size_t>(std::llround(train_frac * n));
  DatasetManifest m;
  m.root = ".";
  m.split_seed = seed;
  m.train_ids.assign(shuffled.begin(), shuffled.begin() + static_cast<std::ptrdiff_t>(n_train));
  m.test_ids.assign(shuffled.begin() + static_cast<std::ptrdiff_t>(n_train), shuffled.end());
  std::sort(m.train_ids.begin(), m.train_ids.end());
  std::sort(m.test_ids.begin(), m.test_ids.end());
  save_manifest(m, (fs::path(out_dir) / "manifest.json").string());
  m.root = out_dir;
  return m;
}

}  // namespace slicegap
