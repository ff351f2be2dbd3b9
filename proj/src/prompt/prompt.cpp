#include "selfprompt/prompt.hpp"

#include <algorithm>
#include <limits>

#include "selfprompt/errors.hpp"

namespace selfprompt {

std::string to_string(PromptMode mode) { return mode == PromptMode::kSlice ? "slice" : "volume"; }

PromptMode parse_prompt_mode(const std::string& text) {
  if (text == "slice") return PromptMode::kSlice;
  if (text == "volume") return PromptMode::kVolume;
  throw FormatError("unknown prompt mode '" + text + "' (expected slice or volume)");
}

std::optional<BoxPrompt> extract_box(const BinaryMask& mask) {
  const auto& dims = mask.dims();
  BoxPrompt box;
  box.min = {std::numeric_limits<std::int64_t>::max(), std::numeric_limits<std::int64_t>::max(),
             std::numeric_limits<std::int64_t>::max()};
  box.max = {-1, -1, -1};
  bool any = false;
  for (std::size_t z = 0; z < dims.nz; ++z) {
    for (std::size_t y = 0; y < dims.ny; ++y) {
      for (std::size_t x = 0; x < dims.nx; ++x) {
        if (!mask.at(x, y, z)) continue;
        any = true;
        const Index3 p{static_cast<std::int64_t>(x), static_cast<std::int64_t>(y),
                       static_cast<std::int64_t>(z)};
        for (int a = 0; a < 3; ++a) {
          box.min[a] = std::min(box.min[a], p[a]);
          box.max[a] = std::max(box.max[a], p[a]);
        }
      }
    }
  }
  if (!any) return std::nullopt;
  return box;
}

std::optional<PointPrompt> select_point(const BinaryMask& mask, const DistanceField& field) {
  if (mask.dims() != field.dims() || mask.spacing() != field.spacing()) {
    throw ValidationError("mask and distance field geometry differ");
  }
  // Storage is x-fastest, so the first strict maximum in flat order is the
  // smallest (z, y, x).
  std::optional<std::size_t> best;
  double best_value = -1.0;
  for (std::size_t i = 0; i < mask.dims().count(); ++i) {
    if (mask.at(i) && field.at(i) > best_value) {
      best = i;
      best_value = field.at(i);
    }
  }
  if (!best) return std::nullopt;
  return PointPrompt{3, unravel(mask.dims(), *best), best_value};
}

std::string mask_ref(int class_id, std::optional<std::size_t> slice_index) {
  std::string ref = "onehot/c" + std::to_string(class_id);
  if (slice_index) ref += "/z" + std::to_string(*slice_index);
  return ref;
}

namespace {

PromptSet prompt_for_mask(const BinaryMask& mask, int class_id, PromptMode mode,
                          std::optional<std::size_t> slice_index) {
  const int rank = mode == PromptMode::kSlice ? 2 : 3;
  PromptSet set;
  set.class_id = class_id;
  set.mode = mode;
  set.slice_index = slice_index;
  set.mask_ref = mask_ref(class_id, slice_index);
  set.box.rank = rank;
  set.point.rank = rank;

  auto box = extract_box(mask);
  if (!box) return set;
  const auto point = select_point(mask, edt_exact(mask));
  set.present = true;
  set.box = *box;
  set.point = *point;
  set.box.rank = rank;
  set.point.rank = rank;
  if (rank == 2) {
    // Slice masks have nz = 1, so the z components are already zero.
    set.box.min[2] = set.box.max[2] = 0;
    set.point.index[2] = 0;
  }
  return set;
}

}  // namespace

std::vector<PromptSet> generate_prompts(const LabelVolume& labels, PromptMode mode) {
  std::vector<PromptSet> out;
  const int k = labels.num_classes();
  if (mode == PromptMode::kVolume) {
    out.reserve(static_cast<std::size_t>(std::max(0, k - 1)));
    for (int c = 1; c < k; ++c) {
      out.push_back(prompt_for_mask(one_hot(labels, c), c, mode, std::nullopt));
    }
    return out;
  }
  out.reserve(labels.dims().nz * static_cast<std::size_t>(std::max(0, k - 1)));
  for (std::size_t z = 0; z < labels.dims().nz; ++z) {
    const LabelVolume plane = slice(labels, z);
    for (int c = 1; c < k; ++c) {
      out.push_back(prompt_for_mask(one_hot(plane, c), c, mode, z));
    }
  }
  return out;
}

}  // namespace selfprompt
