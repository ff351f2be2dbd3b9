#pragma once

#include <cstddef>
#include <filesystem>
#include <span>
#include <variant>
#include <vector>

#include "selfprompt/volume.hpp"

namespace selfprompt {

// SPV is a little-endian container for a single label or scalar volume.
// The 76-byte header layout is documented in docs/spv_format.md.
inline constexpr std::size_t kSpvHeaderSize = 76;
inline constexpr std::uint32_t kSpvVersion = 1;

using SpvVolume = std::variant<LabelVolume, ScalarVolume>;

std::vector<std::byte> encode_spv(const LabelVolume& volume);
std::vector<std::byte> encode_spv(const ScalarVolume& volume);

// Throws FormatError (bad magic/version/header fields), CorruptionError
// (payload length mismatch) or ValidationError (labels >= K, bad geometry,
// non-finite scalars).
SpvVolume decode_spv(std::span<const std::byte> bytes);

SpvVolume read_spv(const std::filesystem::path& path);
void write_spv(const LabelVolume& volume, const std::filesystem::path& path);
void write_spv(const ScalarVolume& volume, const std::filesystem::path& path);
void write_spv(const SpvVolume& volume, const std::filesystem::path& path);

// Convenience for callers that require a particular kind; throws
// FormatError naming the actual kind otherwise.
LabelVolume read_label_spv(const std::filesystem::path& path);
ScalarVolume read_scalar_spv(const std::filesystem::path& path);

}  // namespace selfprompt
