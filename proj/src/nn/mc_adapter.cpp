#include "selfprompt/mc_adapter.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt::nn {

void softmax_inplace(std::span<double> logits) {
  const double peak = *std::max_element(logits.begin(), logits.end());
  double sum = 0.0;
  for (auto& v : logits) {
    v = std::exp(v - peak);
    sum += v;
  }
  for (auto& v : logits) v /= sum;
}

ConvStack make_mc_adapter(std::size_t num_classes, std::mt19937_64& rng) {
  return make_invert_bottleneck(num_classes, num_classes, 3, rng);
}

FusionResult mcadapter_fuse(const ScalarVolume& per_class_logits, const ConvStack& stack) {
  const std::size_t k = per_class_logits.channels();
  if (k < 2) throw ValidationError("MC-Adapter needs at least 2 classes, got " + std::to_string(k));
  if (k > 256) throw ValidationError("MC-Adapter supports at most 256 classes");
  if (stack.in_channels() != k || stack.out_channels() != k) {
    throw ValidationError("MC-Adapter stack must map " + std::to_string(k) + " channels to " +
                          std::to_string(k));
  }
  const auto& dims = per_class_logits.dims();
  const std::size_t plane = dims.nx * dims.ny;
  const std::size_t voxels = dims.count();

  std::vector<double> probs(k * voxels);
  std::vector<std::uint8_t> labels(voxels);
  std::vector<double> voxel(k);
  for (std::size_t z = 0; z < dims.nz; ++z) {
    FeatureMap slice(k, dims.ny, dims.nx);
    for (std::size_t c = 0; c < k; ++c) {
      const auto src = per_class_logits.channel(c).subspan(z * plane, plane);
      std::copy(src.begin(), src.end(), slice.values().begin() + static_cast<std::ptrdiff_t>(c * plane));
    }
    const FeatureMap adapted = stack.forward(slice);
    if (adapted.height() != dims.ny || adapted.width() != dims.nx) {
      throw ValidationError("MC-Adapter stack must preserve spatial size");
    }
    for (std::size_t i = 0; i < plane; ++i) {
      for (std::size_t c = 0; c < k; ++c) voxel[c] = adapted.values()[c * plane + i];
      softmax_inplace(voxel);
      std::size_t best = 0;
      for (std::size_t c = 0; c < k; ++c) {
        probs[c * voxels + z * plane + i] = voxel[c];
        if (voxel[c] > voxel[best]) best = c;
      }
      labels[z * plane + i] = static_cast<std::uint8_t>(best);
    }
  }
  return {ScalarVolume(dims, per_class_logits.spacing(), k, std::move(probs)),
          LabelVolume(dims, per_class_logits.spacing(), static_cast<int>(k), std::move(labels))};
}

}  // namespace selfprompt::nn
