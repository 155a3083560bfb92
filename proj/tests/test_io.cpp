#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "slicegap/checkpoint.hpp"
#include "slicegap/dataset.hpp"
#include "slicegap/phantom.hpp"
#include "slicegap/sgv_io.hpp"

using namespace slicegap;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  auto p = fs::temp_directory_path() / "slicegap_io_test";
  fs::create_directories(p);
  return p;
}

std::vector<std::uint8_t> file_bytes(const fs::path& p) {
  std::ifstream is(p, std::ios::binary | std::ios::ate);
  REQUIRE(is.good());
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(is.tellg()));
  is.seekg(0);
  is.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  return bytes;
}

}  // namespace

TEST_CASE("SGV save/load/save produces byte-identical files") {
  auto dir = scratch_dir();
  PhantomSpec spec;
  spec.seed = 5;
  auto vol = make_phantom<float>(spec);
  vol.spacing = {3.3, 0.4, 0.4};
  vol.meta["tag"] = "roundtrip";

  const auto p1 = dir / "a.sgv";
  const auto p2 = dir / "b.sgv";
  save_volume(vol, p1.string());
  auto loaded = load_volume<float>(p1.string());
  save_volume(loaded, p2.string());

  CHECK(file_bytes(p1) == file_bytes(p2));
  CHECK(file_bytes(fs::path(p1.string() + ".raw")) == file_bytes(fs::path(p2.string() + ".raw")));
  CHECK(loaded.spacing[0] == doctest::Approx(3.3));
  CHECK(loaded.meta.at("tag") == "roundtrip");
  for (Index i = 0; i < vol.data.size(); ++i) CHECK(loaded.data[i] == vol.data[i]);
}

TEST_CASE("SGV loader rejects corrupted headers") {
  auto dir = scratch_dir();
  const auto p = dir / "bad.sgv";
  std::ofstream(p) << "{ not json";
  CHECK_THROWS_AS(load_volume<float>(p.string()), IoError);

  std::ofstream(p) << R"({"dims":[2,2],"spacing":[1,1,1],"dtype":"f32le","meta":{}})";
  CHECK_THROWS_AS(load_volume<float>(p.string()), IoError);

  std::ofstream(p) << R"({"dims":[2,2,2],"spacing":[1,1,1],"dtype":"u8","meta":{}})";
  CHECK_THROWS_AS(load_volume<float>(p.string()), IoError);
}

TEST_CASE("SGV loader rejects payload length mismatch") {
  auto dir = scratch_dir();
  Volume3<float> vol(2, 2, 2);
  const auto p = dir / "short.sgv";
  save_volume(vol, p.string());
  std::ofstream(p.string() + ".raw", std::ios::binary | std::ios::trunc) << "abc";
  CHECK_THROWS_AS(load_volume<float>(p.string()), IoError);
}

TEST_CASE("missing files raise IoError") {
  CHECK_THROWS_AS(load_volume<float>("/nonexistent/path.sgv"), IoError);
}

TEST_CASE("slice PNG export writes a valid PNG signature") {
  auto dir = scratch_dir();
  PhantomSpec spec;
  spec.seed = 6;
  auto vol = make_phantom<float>(spec);
  const auto p = dir / "slice.png";
  save_slice_png(vol, vol.depth() / 2, p.string());
  auto bytes = file_bytes(p);
  REQUIRE(bytes.size() > 8);
  const std::uint8_t sig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  for (int i = 0; i < 8; ++i) CHECK(bytes[static_cast<std::size_t>(i)] == sig[i]);
}

TEST_CASE("build_dataset splits deterministically and round-trips") {
  auto dir = scratch_dir() / "ds";
  fs::remove_all(dir);
  PhantomSpec spec;
  spec.depth = 9;
  spec.height = 16;
  spec.width = 16;
  auto m = build_dataset(10, spec, 0.8, 123, dir.string());
  CHECK(m.train_ids.size() == 8);
  CHECK(m.test_ids.size() == 2);
  for (const auto& id : m.train_ids)
    CHECK(std::find(m.test_ids.begin(), m.test_ids.end(), id) == m.test_ids.end());

  auto m2 = load_manifest((dir / "manifest.json").string());
  CHECK(m2.train_ids == m.train_ids);
  CHECK(m2.test_ids == m.test_ids);

  auto vols = load_volumes<float>(m2, m2.test_ids);
  REQUIRE(vols.size() == 2);
  CHECK(vols[0].depth() == 9);

  // regeneration with the same seed gives identical bytes
  auto dir2 = scratch_dir() / "ds2";
  fs::remove_all(dir2);
  build_dataset(10, spec, 0.8, 123, dir2.string());
  CHECK(file_bytes(dir / "phantom_0003.sgv.raw") == file_bytes(dir2 / "phantom_0003.sgv.raw"));
  CHECK(file_bytes(dir / "manifest.json") == file_bytes(dir2 / "manifest.json"));
}

TEST_CASE("build_dataset validates arguments") {
  CHECK_THROWS_AS(build_dataset(0, PhantomSpec{}, 0.5, 1, scratch_dir().string()), ConfigError);
  CHECK_THROWS_AS(build_dataset(2, PhantomSpec{}, 1.5, 1, scratch_dir().string()), ConfigError);
}

TEST_CASE("checkpoint container round-trips tensors and metadata") {
  auto dir = scratch_dir();
  CheckpointFile ck;
  ck.kind = "vae";
  ck.config_json = R"({"latent_dim":8})";
  ck.iteration = 77;
  ck.seed = 12345;
  ck.rng_state = "state string";
  ck.extra["phase"] = "2";

  Tensor<float> t({2, 3});
  for (Index i = 0; i < 6; ++i) t[i] = static_cast<float>(i) * 0.5f;
  ck.put("enc.w", t);
  Tensor<double> u({4});
  for (Index i = 0; i < 4; ++i) u[i] = static_cast<double>(i) - 1.5;
  ck.put("opt.m", u);

  const auto p = dir / "ck.bin";
  ck.save(p.string());
  auto loaded = CheckpointFile::load(p.string());
  CHECK(loaded.kind == "vae");
  CHECK(loaded.iteration == 77);
  CHECK(loaded.seed == 12345);
  CHECK(loaded.rng_state == "state string");
  CHECK(loaded.extra.at("phase") == "2");

  auto t2 = loaded.get<float>("enc.w");
  REQUIRE(t2.shape() == t.shape());
  for (Index i = 0; i < 6; ++i) CHECK(t2[i] == t[i]);
  auto u2 = loaded.get<double>("opt.m");
  for (Index i = 0; i < 4; ++i) CHECK(u2[i] == u[i]);

  CHECK_THROWS_AS(loaded.get<float>("missing"), IoError);
  CHECK_THROWS_AS(loaded.get<double>("enc.w"), IoError);  // dtype mismatch
}
