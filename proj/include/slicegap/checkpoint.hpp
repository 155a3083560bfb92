#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "slicegap/errors.hpp"
#include "slicegap/tensor.hpp"

namespace slicegap {

/// Self-describing binary container for training state: named tensors plus a
/// JSON header carrying kind, config, iteration, seed, and the RNG state.
/// Loading and resuming reproduces an uninterrupted run bit for bit.
class CheckpointFile {
 public:
  std::string kind;                                // "vae" or "sr"
  std::string config_json = "{}";                  // module config, nested JSON
  std::int64_t iteration = 0;
  std::uint64_t seed = 0;
  std::string rng_state;
  std::map<std::string, std::string> extra;        // small string fields (k, phase, ...)

  struct Entry {
    std::vector<Index> shape;
    std::string dtype;  // "f32le" | "f64le"
    std::vector<std::uint8_t> bytes;
  };

  template <typename T>
  void put(const std::string& name, const Tensor<T>& t) {
    Entry e;
    e.shape = t.shape();
    e.dtype = dtype_of<T>();
    e.bytes.resize(static_cast<std::size_t>(t.size()) * sizeof(T));
    std::memcpy(e.bytes.data(), t.data(), e.bytes.size());
    entries_[name] = std::move(e);
  }

  template <typename T>
  Tensor<T> get(const std::string& name) const {
    const auto it = entries_.find(name);
    if (it == entries_.end()) throw IoError("checkpoint: missing tensor " + name);
    const Entry& e = it->second;
    if (e.dtype != dtype_of<T>())
      throw IoError("checkpoint: tensor " + name + " has dtype " + e.dtype);
    Tensor<T> t(e.shape);
    std::memcpy(t.data(), e.bytes.data(), e.bytes.size());
    return t;
  }

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  const std::map<std::string, Entry>& entries() const { return entries_; }

  void save(const std::string& path) const;
  static CheckpointFile load(const std::string& path);

 private:
  template <typename T>
  static std::string dtype_of() {
    if constexpr (std::is_same_v<T, float>) return "f32le";
    else if constexpr (std::is_same_v<T, double>) return "f64le";
    else static_assert(sizeof(T) == 0, "unsupported checkpoint scalar");
  }

  std::map<std::string, Entry> entries_;
};

}  // namespace slicegap
