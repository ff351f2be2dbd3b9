#pragma once

#include <cstddef>
#include <random>
#include <vector>

#include "selfprompt/conv.hpp"
#include "selfprompt/tensor.hpp"

namespace selfprompt::nn {

inline constexpr std::size_t kMspLevels = 5;

// Multi-scale prompt generator. Inputs are five encoder feature maps F1..F5
// (shallow to deep), all (c_enc, H/16, W/16). Stage 1 convolves F5; stage
// i = 2..5 doubles the running map with a transposed convolution and
// concatenates F(6-i) upsampled by (i-1) chained transposed convolutions,
// then fuses with a 3x3 conv. A 1x1 head after every stage emits K logits.
struct MspGenerator {
  std::size_t enc_channels = 0;
  std::size_t dec_channels = 0;
  std::size_t num_classes = 0;

  ConvLayer stem;                     // c_enc -> c_dec, 3x3, GELU
  std::vector<ConvLayer> upsample;    // 4 x (c_dec -> c_dec), x2
  std::vector<ConvStack> skip;        // skip[j] upsamples F(4-j) by 2^(j+1)
  std::vector<ConvLayer> fuse;        // 4 x (2 c_dec -> c_dec), 3x3, GELU
  std::vector<ConvLayer> heads;       // 5 x (c_dec -> K), 1x1

  // Seeded uniform [-scale, scale] weights and biases; scale 0 gives an
  // all-zero network.
  static MspGenerator init(std::size_t enc_channels, std::size_t dec_channels,
                           std::size_t num_classes, std::mt19937_64& rng, double scale = 0.1);

  Checkpoint named_arrays() const;
};

struct MspOutput {
  // Head outputs from coarsest (H/16) to finest (H).
  std::vector<FeatureMap> levels;

  const FeatureMap& final_logits() const { return levels.back(); }
  // The four coarser heads, H/16 .. H/2.
  std::vector<FeatureMap> deep_supervision() const {
    return {levels.begin(), levels.end() - 1};
  }
};

// Throws ValidationError unless there are exactly five feature maps of
// identical shape with enc_channels channels.
MspOutput mspgenerator_forward(const MspGenerator& gen, const std::vector<FeatureMap>& features);

}  // namespace selfprompt::nn
