#pragma once

#include "selfprompt/conv.hpp"
#include "selfprompt/volume.hpp"

namespace selfprompt::nn {

struct FusionResult {
  ScalarVolume probabilities;  // C = K, sums to 1 per voxel
  LabelVolume labels;          // per-voxel argmax, ties to the smallest class id
};

// Trainable MC-Adapter: 3x3 conv K -> 4K with GELU, then 1x1 conv 4K -> K.
ConvStack make_mc_adapter(std::size_t num_classes, std::mt19937_64& rng);

// MC-Adapter: the K -> K conv stack applied per z-slice, then a softmax
// across the K class channels at every voxel. Throws ValidationError for
// K < 2 or a stack that does not map K channels to K at unchanged size.
FusionResult mcadapter_fuse(const ScalarVolume& per_class_logits, const ConvStack& stack);

// Numerically stable softmax of one voxel's logits, in place.
void softmax_inplace(std::span<double> logits);

}  // namespace selfprompt::nn
