#include "selfprompt/transformer.hpp"

#include <cmath>
#include <string>

#include "selfprompt/activation.hpp"
#include "selfprompt/errors.hpp"
#include "selfprompt/mc_adapter.hpp"

namespace selfprompt::nn {

namespace {

std::vector<double> uniform_vector(std::size_t n, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-scale, scale);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(rng);
  return v;
}

void check_len(const std::vector<double>& v, std::size_t n, const char* name) {
  if (v.size() != n) throw ValidationError(std::string(name) + " must have length " + std::to_string(n));
}

void check_mat(const Matrix& m, std::size_t r, std::size_t c, const char* name) {
  if (m.rows() != r || m.cols() != c) {
    throw ValidationError(std::string(name) + " must be " + std::to_string(r) + "x" + std::to_string(c));
  }
}

Tensor3 affine(const Tensor3& x, const Matrix& w, const std::vector<double>& b) {
  Tensor3 out = channel_matmul(x, w);
  for (std::size_t d = 0; d < out.depth(); ++d) {
    for (std::size_t n = 0; n < out.tokens(); ++n) {
      for (std::size_t c = 0; c < out.channels(); ++c) out.at(d, n, c) += b[c];
    }
  }
  return out;
}

void add_inplace(Tensor3& a, const Tensor3& b) {
  auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) av[i] += bv[i];
}

}  // namespace

Tensor3 apply_depth_pos_embed(const Tensor3& x, const DepthPosEmbed& embed) {
  if (x.depth() > embed.max_depth()) {
    throw ValidationError("input depth " + std::to_string(x.depth()) + " exceeds embedding D_max " +
                          std::to_string(embed.max_depth()));
  }
  if (x.channels() != embed.channels()) {
    throw ValidationError("depth embedding has " + std::to_string(embed.channels()) +
                          " channels, input has " + std::to_string(x.channels()));
  }
  Tensor3 out = x;
  for (std::size_t d = 0; d < x.depth(); ++d) {
    for (std::size_t n = 0; n < x.tokens(); ++n) {
      for (std::size_t c = 0; c < x.channels(); ++c) out.at(d, n, c) += embed.table.at(d, c);
    }
  }
  return out;
}

void BlockParams::validate() const {
  const std::size_t c = channels();
  if (c == 0 || heads == 0 || c % heads != 0) {
    throw ValidationError("channels (" + std::to_string(c) + ") must be divisible by heads (" +
                          std::to_string(heads) + ")");
  }
  check_len(norm1.gamma, c, "norm1.gamma");
  check_len(norm1.beta, c, "norm1.beta");
  check_len(norm2.gamma, c, "norm2.gamma");
  check_len(norm2.beta, c, "norm2.beta");
  for (const auto* m : {&w_q, &w_k, &w_v, &w_o}) check_mat(*m, c, c, "attention projection");
  for (const auto* b : {&b_q, &b_k, &b_v, &b_o}) check_len(*b, c, "attention bias");
  const std::size_t hidden = w_fc1.cols();
  check_mat(w_fc1, c, hidden, "w_fc1");
  check_mat(w_fc2, hidden, c, "w_fc2");
  check_len(b_fc1, hidden, "b_fc1");
  check_len(b_fc2, c, "b_fc2");
}

BlockParams BlockParams::init(std::size_t channels, std::size_t heads, std::size_t mlp_ratio,
                              std::mt19937_64& rng, double scale) {
  BlockParams p;
  p.heads = heads;
  for (auto* norm : {&p.norm1, &p.norm2}) {
    norm->gamma = uniform_vector(channels, scale, rng);
    for (auto& g : norm->gamma) g += 1.0;
    norm->beta = uniform_vector(channels, scale, rng);
  }
  p.w_q = Matrix::uniform(channels, channels, -scale, scale, rng);
  p.w_k = Matrix::uniform(channels, channels, -scale, scale, rng);
  p.w_v = Matrix::uniform(channels, channels, -scale, scale, rng);
  p.w_o = Matrix::uniform(channels, channels, -scale, scale, rng);
  p.b_q = uniform_vector(channels, scale, rng);
  p.b_k = uniform_vector(channels, scale, rng);
  p.b_v = uniform_vector(channels, scale, rng);
  p.b_o = uniform_vector(channels, scale, rng);
  const std::size_t hidden = channels * mlp_ratio;
  p.w_fc1 = Matrix::uniform(channels, hidden, -scale, scale, rng);
  p.b_fc1 = uniform_vector(hidden, scale, rng);
  p.w_fc2 = Matrix::uniform(hidden, channels, -scale, scale, rng);
  p.b_fc2 = uniform_vector(channels, scale, rng);
  p.validate();
  return p;
}

Tensor3 layer_norm(const Tensor3& x, const LayerNormParams& p) {
  check_len(p.gamma, x.channels(), "layer norm gamma");
  check_len(p.beta, x.channels(), "layer norm beta");
  Tensor3 out(x.depth(), x.tokens(), x.channels());
  const auto c_count = static_cast<double>(x.channels());
  for (std::size_t d = 0; d < x.depth(); ++d) {
    for (std::size_t n = 0; n < x.tokens(); ++n) {
      double mean = 0.0;
      for (std::size_t c = 0; c < x.channels(); ++c) mean += x.at(d, n, c);
      mean /= c_count;
      double var = 0.0;
      for (std::size_t c = 0; c < x.channels(); ++c) {
        const double centered = x.at(d, n, c) - mean;
        var += centered * centered;
      }
      var /= c_count;
      const double inv = 1.0 / std::sqrt(var + p.eps);
      for (std::size_t c = 0; c < x.channels(); ++c) {
        out.at(d, n, c) = (x.at(d, n, c) - mean) * inv * p.gamma[c] + p.beta[c];
      }
    }
  }
  return out;
}

Tensor3 self_attention(const Tensor3& x, const BlockParams& p) {
  const Tensor3 q = affine(x, p.w_q, p.b_q);
  const Tensor3 k = affine(x, p.w_k, p.b_k);
  const Tensor3 v = affine(x, p.w_v, p.b_v);
  const std::size_t head_dim = x.channels() / p.heads;
  const double scale = 1.0 / std::sqrt(static_cast<double>(head_dim));
  const std::size_t tokens = x.tokens();

  Tensor3 attended(x.depth(), tokens, x.channels());
  std::vector<double> scores(tokens);
  for (std::size_t d = 0; d < x.depth(); ++d) {
    for (std::size_t h = 0; h < p.heads; ++h) {
      const std::size_t off = h * head_dim;
      for (std::size_t i = 0; i < tokens; ++i) {
        for (std::size_t j = 0; j < tokens; ++j) {
          double s = 0.0;
          for (std::size_t c = 0; c < head_dim; ++c) s += q.at(d, i, off + c) * k.at(d, j, off + c);
          scores[j] = s * scale;
        }
        softmax_inplace(scores);
        for (std::size_t j = 0; j < tokens; ++j) {
          for (std::size_t c = 0; c < head_dim; ++c) {
            attended.at(d, i, off + c) += scores[j] * v.at(d, j, off + c);
          }
        }
      }
    }
  }
  return affine(attended, p.w_o, p.b_o);
}

Tensor3 mlp(const Tensor3& x, const BlockParams& p) {
  Tensor3 hidden = affine(x, p.w_fc1, p.b_fc1);
  for (auto& v : hidden.values()) v = activate(Activation::kGelu, v);
  return affine(hidden, p.w_fc2, p.b_fc2);
}

Tensor3 transformer_block_forward(const Tensor3& x, const BlockParams& block,
                                  const std::optional<AdapterPair>& adapters) {
  block.validate();
  if (x.channels() != block.channels()) {
    throw ValidationError("block expects " + std::to_string(block.channels()) + " channels, got " +
                          std::to_string(x.channels()));
  }
  Tensor3 y = x;
  add_inplace(y, self_attention(layer_norm(x, block.norm1), block));
  if (adapters) add_inplace(y, dfused_delta(y, adapters->after_attention));

  const Tensor3 normed = layer_norm(y, block.norm2);
  Tensor3 out = y;
  add_inplace(out, mlp(normed, block));
  if (adapters) add_inplace(out, dfused_delta(normed, adapters->parallel_mlp));
  return out;
}

}  // namespace selfprompt::nn
