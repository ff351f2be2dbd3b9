#pragma once

#include <cstdint>
#include <filesystem>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "selfprompt/tensor.hpp"

namespace selfprompt::nn {

struct NamedArray {
  std::vector<std::uint64_t> dims;
  std::vector<double> values;

  static NamedArray from(const Matrix& m);
  static NamedArray from(const Tensor3& t);
  static NamedArray from(const std::vector<double>& v);
  Matrix to_matrix() const;

  bool operator==(const NamedArray&) const = default;
};

// Ordered by name, which fixes the on-disk record order.
using Checkpoint = std::map<std::string, NamedArray>;

// Each record: u32 name length | UTF-8 name | u8 rank | rank x u64 dims |
// f64 payload, all little-endian, records sorted by name.
std::vector<std::byte> encode_checkpoint(const Checkpoint& ckpt);
Checkpoint decode_checkpoint(std::span<const std::byte> bytes);

void write_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);
Checkpoint read_checkpoint(const std::filesystem::path& path);

}  // namespace selfprompt::nn
