#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "selfprompt/volume.hpp"

namespace selfprompt::train {

// 2|a & b| / (|a| + |b|). Both empty gives 1.0, exactly one empty gives 0.0.
// Throws ValidationError on a dims mismatch.
double dice_score(const BinaryMask& a, const BinaryMask& b);

inline constexpr double kDiceSmoothing = 1e-5;
inline constexpr double kLogClamp = 1e-12;

// 1 - mean_c (2 sum p g + eps) / (sum p + sum g + eps) over all K classes.
double soft_dice_loss(const ScalarVolume& probabilities, const LabelVolume& target);
// Mean over voxels of -log(max(p[target], 1e-12)).
double cross_entropy(const ScalarVolume& probabilities, const LabelVolume& target);
// Plain sum of the two terms above. Throws ValidationError on shape
// mismatches or per-voxel probability sums off 1 by more than 1e-6.
double dice_ce_loss(const ScalarVolume& probabilities, const LabelVolume& target);

// Deep-supervision weights for n levels, w_1 at the highest resolution,
// halving per level and normalized to sum to 1.
std::vector<double> ds_weights(std::size_t n);

// Block-origin (nearest-neighbor) label downsampling. Throws ValidationError
// when a dim is not divisible by its factor.
LabelVolume downsample_labels(const LabelVolume& target, const std::array<std::size_t, 3>& factor);

struct LrSchedule {
  double init_lr = 0.01;
  int max_epoch = 1000;
  static constexpr double kExponent = 0.9;
};

// init_lr * (1 - e / max_epoch)^0.9. Throws RangeError outside [0, max_epoch]
// and ValidationError for a non-positive init_lr or max_epoch.
double poly_lr(const LrSchedule& schedule, int epoch);

// Epoch at which the final-head loss joins the deep-supervision loss.
inline constexpr int kPhaseTwoEpoch = 200;

struct LevelLoss {
  std::size_t resolution_divisor = 1;  // level i is at 1 / 2^(i-1) resolution
  double weight = 0.0;
  double loss = 0.0;
};

struct LossReport {
  double total = 0.0;
  std::vector<LevelLoss> levels;
  double final_loss = 0.0;
  int phase = 1;
  int epoch = 0;

  std::string to_json(int indent = 2) const;
};

// Phase 1 (epoch < 200): total = sum w_i L_i. Phase 2: that plus final_loss.
// ds_losses[0] is the highest-resolution level.
LossReport compose_loss(int epoch, const std::vector<double>& ds_losses, double final_loss);

}  // namespace selfprompt::train
