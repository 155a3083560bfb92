#pragma once

#include <string>
#include <vector>

#include "slicegap/phantom.hpp"
#include "slicegap/sgv_io.hpp"

namespace slicegap {

/// Train/test split over SGV volumes stored in one directory.
struct DatasetManifest {
  std::string root;  // directory holding "<id>.sgv" files
  std::vector<std::string> train_ids;
  std::vector<std::string> test_ids;
  std::uint64_t split_seed = 0;
};

void save_manifest(const DatasetManifest& m, const std::string& path);
DatasetManifest load_manifest(const std::string& path);

std::string volume_path(const DatasetManifest& m, const std::string& id);

/// Generate n phantoms from the spec template (per-phantom seeds derived
/// from `seed`), write them as SGV under out_dir, and split train/test
/// disjointly. Deterministic end to end.
DatasetManifest build_dataset(int n, const PhantomSpec& spec_template, double train_frac,
                              std::uint64_t seed, const std::string& out_dir);

template <typename Scalar = float>
std::vector<Volume3<Scalar>> load_volumes(const DatasetManifest& m,
                                          const std::vector<std::string>& ids) {
  std::vector<Volume3<Scalar>> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(load_volume<Scalar>(volume_path(m, id)));
  return out;
}

}  // namespace slicegap
