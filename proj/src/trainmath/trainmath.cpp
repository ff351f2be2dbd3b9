#include "selfprompt/trainmath.hpp"

#include <cmath>
#include <string>

#include "json.hpp"
#include "selfprompt/errors.hpp"

namespace selfprompt::train {

namespace {

void check_pair(const ScalarVolume& probabilities, const LabelVolume& target) {
  if (probabilities.dims() != target.dims()) {
    throw ValidationError("probability and target dims differ");
  }
  if (probabilities.channels() != static_cast<std::size_t>(target.num_classes())) {
    throw ValidationError("probability channels (" + std::to_string(probabilities.channels()) +
                          ") must equal target K (" + std::to_string(target.num_classes()) + ")");
  }
  const std::size_t voxels = target.dims().count();
  for (std::size_t i = 0; i < voxels; ++i) {
    double sum = 0.0;
    for (std::size_t c = 0; c < probabilities.channels(); ++c) sum += probabilities.at(c, i);
    if (std::abs(sum - 1.0) > 1e-6) {
      throw ValidationError("probabilities at voxel " + std::to_string(i) + " sum to " +
                            std::to_string(sum));
    }
  }
}

}  // namespace

double dice_score(const BinaryMask& a, const BinaryMask& b) {
  if (a.dims() != b.dims()) throw ValidationError("dice_score: mask dims differ");
  std::size_t count_a = 0;
  std::size_t count_b = 0;
  std::size_t both = 0;
  const auto bits_a = a.bits();
  const auto bits_b = b.bits();
  for (std::size_t i = 0; i < bits_a.size(); ++i) {
    count_a += bits_a[i];
    count_b += bits_b[i];
    both += bits_a[i] & bits_b[i];
  }
  if (count_a == 0 && count_b == 0) return 1.0;
  return 2.0 * static_cast<double>(both) / static_cast<double>(count_a + count_b);
}

double soft_dice_loss(const ScalarVolume& probabilities, const LabelVolume& target) {
  check_pair(probabilities, target);
  const auto labels = target.labels();
  const std::size_t k = probabilities.channels();
  double mean = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    const auto p = probabilities.channel(c);
    double inter = 0.0;
    double sum_p = 0.0;
    double sum_g = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = labels[i] == c ? 1.0 : 0.0;
      inter += p[i] * g;
      sum_p += p[i];
      sum_g += g;
    }
    mean += (2.0 * inter + kDiceSmoothing) / (sum_p + sum_g + kDiceSmoothing);
  }
  return 1.0 - mean / static_cast<double>(k);
}

double cross_entropy(const ScalarVolume& probabilities, const LabelVolume& target) {
  check_pair(probabilities, target);
  const auto labels = target.labels();
  double sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    sum -= std::log(std::max(probabilities.at(labels[i], i), kLogClamp));
  }
  return sum / static_cast<double>(labels.size());
}

double dice_ce_loss(const ScalarVolume& probabilities, const LabelVolume& target) {
  return soft_dice_loss(probabilities, target) + cross_entropy(probabilities, target);
}

std::vector<double> ds_weights(std::size_t n) {
  if (n == 0) throw ValidationError("ds_weights needs at least one level");
  std::vector<double> w(n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    w[i] = std::ldexp(1.0, -static_cast<int>(i));
    total += w[i];
  }
  // Dividing powers of two by the same total keeps consecutive ratios exact.
  for (auto& v : w) v /= total;
  return w;
}

LabelVolume downsample_labels(const LabelVolume& target, const std::array<std::size_t, 3>& factor) {
  const auto& d = target.dims();
  for (int a = 0; a < 3; ++a) {
    if (factor[a] == 0 || d[a] % factor[a] != 0) {
      throw ValidationError("dim " + std::to_string(d[a]) + " not divisible by factor " +
                            std::to_string(factor[a]));
    }
  }
  const Dims out_dims{d.nx / factor[0], d.ny / factor[1], d.nz / factor[2]};
  const auto& sp = target.spacing();
  const Spacing out_spacing{sp.sx * static_cast<double>(factor[0]),
                            sp.sy * static_cast<double>(factor[1]),
                            sp.sz * static_cast<double>(factor[2])};
  std::vector<std::uint8_t> labels(out_dims.count());
  for (std::size_t z = 0; z < out_dims.nz; ++z) {
    for (std::size_t y = 0; y < out_dims.ny; ++y) {
      for (std::size_t x = 0; x < out_dims.nx; ++x) {
        labels[out_dims.index(x, y, z)] = target.at(x * factor[0], y * factor[1], z * factor[2]);
      }
    }
  }
  return LabelVolume(out_dims, out_spacing, target.num_classes(), std::move(labels));
}

double poly_lr(const LrSchedule& schedule, int epoch) {
  if (!(schedule.init_lr > 0.0)) throw ValidationError("init_lr must be positive");
  if (schedule.max_epoch <= 0) throw ValidationError("max_epoch must be positive");
  if (epoch < 0 || epoch > schedule.max_epoch) {
    throw RangeError("epoch " + std::to_string(epoch) + " outside [0, " +
                     std::to_string(schedule.max_epoch) + "]");
  }
  const double remaining =
      1.0 - static_cast<double>(epoch) / static_cast<double>(schedule.max_epoch);
  return schedule.init_lr * std::pow(remaining, LrSchedule::kExponent);
}

LossReport compose_loss(int epoch, const std::vector<double>& ds_losses, double final_loss) {
  if (ds_losses.empty()) throw ValidationError("compose_loss needs at least one level loss");
  if (epoch < 0) throw RangeError("epoch must be non-negative");
  LossReport report;
  report.epoch = epoch;
  report.phase = epoch < kPhaseTwoEpoch ? 1 : 2;
  report.final_loss = final_loss;
  const auto weights = ds_weights(ds_losses.size());
  for (std::size_t i = 0; i < ds_losses.size(); ++i) {
    report.levels.push_back({std::size_t{1} << i, weights[i], ds_losses[i]});
    report.total += weights[i] * ds_losses[i];
  }
  if (report.phase == 2) report.total += final_loss;
  return report;
}

std::string LossReport::to_json(int indent) const {
  nlohmann::json levels_json = nlohmann::json::array();
  for (const auto& l : levels) {
    levels_json.push_back(
        {{"resolution_divisor", l.resolution_divisor}, {"weight", l.weight}, {"loss", l.loss}});
  }
  nlohmann::json root{{"total", total},   {"phase", phase},         {"epoch", epoch},
                      {"levels", levels_json}, {"final_loss", final_loss}};
  return root.dump(indent);
}

}  // namespace selfprompt::train
