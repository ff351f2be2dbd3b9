#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "selfprompt/edt.hpp"
#include "selfprompt/volume.hpp"

namespace selfprompt {

enum class PromptMode { kSlice, kVolume };

std::string to_string(PromptMode mode);
// Throws FormatError for anything other than "slice" or "volume".
PromptMode parse_prompt_mode(const std::string& text);

// Inclusive voxel-index box. rank is 2 in slice mode (x, y) and 3 in volume
// mode; unused trailing components stay zero.
struct BoxPrompt {
  int rank = 3;
  Index3 min{};
  Index3 max{};

  bool operator==(const BoxPrompt&) const = default;
};

struct PointPrompt {
  int rank = 3;
  Index3 index{};
  double sq_distance_mm2 = 0.0;

  bool operator==(const PointPrompt&) const = default;
};

// Prompts for one class (and one slice in slice mode). An absent class keeps
// present = false with every box and point coordinate zero.
struct PromptSet {
  int class_id = 0;
  bool present = false;
  BoxPrompt box;
  PointPrompt point;
  std::string mask_ref;
  PromptMode mode = PromptMode::kSlice;
  std::optional<std::size_t> slice_index;

  bool operator==(const PromptSet&) const = default;
};

// Componentwise min/max of true-voxel indices; nullopt for an empty mask.
std::optional<BoxPrompt> extract_box(const BinaryMask& mask);

// Voxel maximizing `field` over the mask, ties to the smallest (z, y, x).
// Throws ValidationError when mask and field geometry differ.
std::optional<PointPrompt> select_point(const BinaryMask& mask, const DistanceField& field);

// Identifier of the one-hot mask a prompt refers to, e.g. "onehot/c2" or
// "onehot/c2/z5".
std::string mask_ref(int class_id, std::optional<std::size_t> slice_index);

// One PromptSet per foreground class (per slice in slice mode; slices are
// the outer loop). Background class 0 is skipped.
std::vector<PromptSet> generate_prompts(const LabelVolume& labels,
                                        PromptMode mode = PromptMode::kSlice);

// JSON document with schema "selfprompt/1".
struct PromptDocument {
  PromptMode mode = PromptMode::kSlice;
  int num_classes = 1;
  std::vector<PromptSet> prompts;

  bool operator==(const PromptDocument&) const = default;
};

inline constexpr const char* kPromptSchema = "selfprompt/1";

std::string prompts_to_json(const PromptDocument& doc, int indent = 2);
// Throws FormatError on malformed JSON, wrong schema or missing fields.
PromptDocument prompts_from_json(const std::string& text);

void write_prompts(const PromptDocument& doc, const std::filesystem::path& path);
PromptDocument read_prompts(const std::filesystem::path& path);

}  // namespace selfprompt
