#pragma once

#include <cstddef>
#include <map>
#include <random>
#include <string>

#include "selfprompt/activation.hpp"
#include "selfprompt/tensor.hpp"

namespace selfprompt::nn {

struct NamedArray;

// Depth-fused adapter weights for channels C and depth D:
//   w_dn  C x C/4   channel down-projection
//   w_up  C/4 x C   channel up-projection
//   w_dup D x 4D    depth expansion
//   w_ddn 4D x D    depth contraction
struct AdapterParams {
  Matrix w_dn;
  Matrix w_up;
  Matrix w_dup;
  Matrix w_ddn;
  Activation activation = Activation::kGelu;

  std::size_t channels() const { return w_dn.rows(); }
  std::size_t depth() const { return w_dup.rows(); }

  // Throws ValidationError unless C % 4 == 0 and every shape matches.
  void validate() const;

  // Seeded uniform [-scale, scale] init. The up-projection starts at zero
  // unless zero_up is false, so a fresh adapter is the identity map.
  static AdapterParams init(std::size_t channels, std::size_t depth, std::mt19937_64& rng,
                            bool zero_up = true, double scale = 0.1);

  // Exported as "<prefix>w_dn", "<prefix>w_up", "<prefix>w_dup", "<prefix>w_ddn".
  std::map<std::string, NamedArray> named_arrays(const std::string& prefix = "") const;
};

struct AdapterGrads {
  Tensor3 x;
  Matrix w_dn;
  Matrix w_up;
  Matrix w_dup;
  Matrix w_ddn;
};

// Adapter increment (s(X Wdn) + s(s(X Wdn) Wdup) Wddn) Wup, without the skip
// connection. Channel matrices act on the last axis, depth matrices on the
// first.
Tensor3 dfused_delta(const Tensor3& x, const AdapterParams& p);

// X + dfused_delta(X). Output shape equals input shape.
Tensor3 dfused_forward(const Tensor3& x, const AdapterParams& p);

// Exact gradients of <upstream, dfused_forward(x, p)> with respect to x and
// all four weight matrices.
AdapterGrads dfused_backward(const Tensor3& x, const AdapterParams& p, const Tensor3& upstream);

}  // namespace selfprompt::nn
