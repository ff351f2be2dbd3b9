#pragma once

#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "selfprompt/activation.hpp"
#include "selfprompt/checkpoint.hpp"
#include "selfprompt/tensor.hpp"

namespace selfprompt::nn {

enum class ConvKind { kConv, kTransposed };

// One 2-D (transposed) convolution followed by an activation.
//   kConv:       weights [out][in][k][k],  out = (H + 2p - k) / s + 1
//   kTransposed: weights [in][out][k][k],  out = (H - 1) s - 2p + k + output_padding
struct ConvLayer {
  ConvKind kind = ConvKind::kConv;
  std::size_t in_channels = 1;
  std::size_t out_channels = 1;
  std::size_t kernel = 1;
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t output_padding = 0;
  std::vector<double> weights;
  std::vector<double> bias;
  Activation activation = Activation::kIdentity;

  // Same-size convolution (stride 1, padding k/2), zero weights.
  static ConvLayer conv(std::size_t in, std::size_t out, std::size_t kernel,
                        Activation act = Activation::kIdentity);
  // 3x3 stride-2 transposed convolution that exactly doubles H and W.
  static ConvLayer upsample2x(std::size_t in, std::size_t out, Activation act = Activation::kIdentity);

  double& weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx);
  double weight(std::size_t o, std::size_t i, std::size_t ky, std::size_t kx) const;

  std::size_t output_size(std::size_t input) const;
  // Throws ValidationError on even kernels, zero stride or buffer mismatch.
  void validate() const;
  void randomize(std::mt19937_64& rng, double scale = 0.1);

  FeatureMap forward(const FeatureMap& input) const;
};

// Ordered layer sequence whose channel counts chain.
class ConvStack {
 public:
  ConvStack() = default;
  // Throws ValidationError if adjacent channel counts do not chain.
  explicit ConvStack(std::vector<ConvLayer> layers);

  const std::vector<ConvLayer>& layers() const { return layers_; }
  std::size_t in_channels() const;
  std::size_t out_channels() const;

  FeatureMap forward(const FeatureMap& input) const;

  void add_named_arrays(Checkpoint& ckpt, const std::string& prefix) const;

 private:
  std::vector<ConvLayer> layers_;
};

// Invert-bottleneck pair: k x k conv in -> 4*max(in, out) with GELU, then
// 1x1 conv to `out`. Weights seeded uniform in [-0.1, 0.1].
ConvStack make_invert_bottleneck(std::size_t in, std::size_t out, std::size_t kernel,
                                 std::mt19937_64& rng);

// Two 1x1 layers (channels -> 4*channels -> channels) with identity
// activations that reproduce their input exactly.
ConvStack make_identity_stack(std::size_t channels);

// Maps an M-modality image stack (M, H, W) to 3 channels.
ConvStack make_madapter(std::size_t modalities, std::mt19937_64& rng);

// Throws ValidationError unless the stack maps M channels to 3.
FeatureMap madapter_forward(const FeatureMap& image, const ConvStack& stack);

}  // namespace selfprompt::nn
