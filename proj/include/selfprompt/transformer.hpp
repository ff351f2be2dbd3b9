#pragma once

#include <cstddef>
#include <optional>
#include <random>
#include <vector>

#include "selfprompt/dfused_adapter.hpp"
#include "selfprompt/tensor.hpp"

namespace selfprompt::nn {

// Learnable (D_max x C) table added to every token of depth frame d.
struct DepthPosEmbed {
  Matrix table;

  std::size_t max_depth() const { return table.rows(); }
  std::size_t channels() const { return table.cols(); }
};

// out[d,n,c] = x[d,n,c] + e[d,c]. Throws ValidationError when x.D > D_max or
// channel counts differ.
Tensor3 apply_depth_pos_embed(const Tensor3& x, const DepthPosEmbed& embed);

struct LayerNormParams {
  std::vector<double> gamma;
  std::vector<double> beta;
  double eps = 1e-6;
};

// Pre-norm ViT block weights; all projections act on the channel axis.
struct BlockParams {
  std::size_t heads = 1;
  LayerNormParams norm1;
  LayerNormParams norm2;
  Matrix w_q, w_k, w_v, w_o;  // C x C
  std::vector<double> b_q, b_k, b_v, b_o;
  Matrix w_fc1;  // C x hidden
  std::vector<double> b_fc1;
  Matrix w_fc2;  // hidden x C
  std::vector<double> b_fc2;

  std::size_t channels() const { return w_q.rows(); }
  void validate() const;

  static BlockParams init(std::size_t channels, std::size_t heads, std::size_t mlp_ratio,
                          std::mt19937_64& rng, double scale = 0.1);
};

// The two adapters of one block: one after self-attention, one in parallel
// with the MLP.
struct AdapterPair {
  AdapterParams after_attention;
  AdapterParams parallel_mlp;
};

// Per-token layer norm over channels.
Tensor3 layer_norm(const Tensor3& x, const LayerNormParams& p);
// Multi-head self-attention over the N tokens of each depth frame
// independently.
Tensor3 self_attention(const Tensor3& x, const BlockParams& p);
Tensor3 mlp(const Tensor3& x, const BlockParams& p);

// y1  = x + MSA(LN1(x))
// y2  = y1 + delta_a(y1)                     (adapters only)
// out = y2 + MLP(LN2(y2)) + delta_p(LN2(y2)) (delta_p only with adapters)
// where delta_* is the adapter increment without its skip connection.
Tensor3 transformer_block_forward(const Tensor3& x, const BlockParams& block,
                                  const std::optional<AdapterPair>& adapters = std::nullopt);

}  // namespace selfprompt::nn
