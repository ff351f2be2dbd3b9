#include "selfprompt/volume.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt {

namespace {

void check_geometry(const Dims& dims, const Spacing& spacing) {
  if (dims.nx == 0 || dims.ny == 0 || dims.nz == 0) {
    throw_validation("volume dims must be positive");
  }
  for (int a = 0; a < 3; ++a) {
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
      throw_validation("voxel spacing must be positive and finite");
    }
  }
}

}  // namespace

Index3 unravel(const Dims& dims, std::size_t flat) {
  const auto x = static_cast<std::int64_t>(flat % dims.nx);
  flat /= dims.nx;
  const auto y = static_cast<std::int64_t>(flat % dims.ny);
  const auto z = static_cast<std::int64_t>(flat / dims.ny);
  return {x, y, z};
}

LabelVolume::LabelVolume(Dims dims, Spacing spacing, int num_classes,
                         std::vector<std::uint8_t> labels)
    : dims_(dims), spacing_(spacing), num_classes_(num_classes), labels_(std::move(labels)) {
  check_geometry(dims_, spacing_);
  if (num_classes_ < 1 || num_classes_ > 256) {
    throw_validation("num_classes must lie in [1, 256], got " + std::to_string(num_classes_));
  }
  if (labels_.size() != dims_.count()) {
    throw_validation("label count " + std::to_string(labels_.size()) +
                     " does not match dims product " + std::to_string(dims_.count()));
  }
  for (const auto label : labels_) {
    if (label >= num_classes_) {
      throw_validation("label " + std::to_string(label) + " >= num_classes " +
                       std::to_string(num_classes_));
    }
  }
}

LabelVolume::LabelVolume(Dims dims, Spacing spacing, int num_classes)
    : LabelVolume(dims, spacing, num_classes, std::vector<std::uint8_t>(dims.count(), 0)) {}

std::vector<std::size_t> LabelVolume::histogram() const {
  std::vector<std::size_t> counts(static_cast<std::size_t>(num_classes_), 0);
  for (const auto label : labels_) ++counts[label];
  return counts;
}

ScalarVolume::ScalarVolume(Dims dims, Spacing spacing, std::size_t channels,
                           std::vector<double> values)
    : dims_(dims), spacing_(spacing), channels_(channels), values_(std::move(values)) {
  check_geometry(dims_, spacing_);
  if (channels_ == 0) throw_validation("scalar volume needs at least one channel");
  if (values_.size() != dims_.count() * channels_) {
    throw_validation("value count " + std::to_string(values_.size()) +
                     " does not match dims*channels " + std::to_string(dims_.count() * channels_));
  }
  if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); })) {
    throw_validation("scalar volume contains NaN or Inf");
  }
}

BinaryMask::BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> bits)
    : dims_(dims), spacing_(spacing), bits_(std::move(bits)) {
  check_geometry(dims_, spacing_);
  if (bits_.size() != dims_.count()) {
    throw_validation("mask bit count does not match dims product");
  }
  for (auto& b : bits_) b = b != 0 ? 1 : 0;
}

BinaryMask::BinaryMask(Dims dims, Spacing spacing)
    : BinaryMask(dims, spacing, std::vector<std::uint8_t>(dims.count(), 0)) {}

std::size_t BinaryMask::count() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BinaryMask BinaryMask::slice(std::size_t z) const {
  if (z >= dims_.nz) throw RangeError("slice index out of range");
  const std::size_t plane = dims_.nx * dims_.ny;
  std::vector<std::uint8_t> bits(bits_.begin() + static_cast<std::ptrdiff_t>(z * plane),
                                 bits_.begin() + static_cast<std::ptrdiff_t>((z + 1) * plane));
  return BinaryMask({dims_.nx, dims_.ny, 1}, spacing_, std::move(bits));
}

BinaryMask one_hot(const LabelVolume& volume, int class_id) {
  if (class_id < 0 || class_id >= volume.num_classes()) {
    throw RangeError("class id " + std::to_string(class_id) + " outside [0, " +
                     std::to_string(volume.num_classes()) + ")");
  }
  const auto labels = volume.labels();
  std::vector<std::uint8_t> bits(labels.size());
  std::transform(labels.begin(), labels.end(), bits.begin(),
                 [class_id](std::uint8_t l) { return static_cast<std::uint8_t>(l == class_id); });
  return BinaryMask(volume.dims(), volume.spacing(), std::move(bits));
}

LabelVolume slice(const LabelVolume& volume, std::size_t z) {
  const auto& d = volume.dims();
  if (z >= d.nz) throw RangeError("slice index out of range");
  const std::size_t plane = d.nx * d.ny;
  const auto labels = volume.labels();
  std::vector<std::uint8_t> out(labels.begin() + static_cast<std::ptrdiff_t>(z * plane),
                                labels.begin() + static_cast<std::ptrdiff_t>((z + 1) * plane));
  return LabelVolume({d.nx, d.ny, 1}, volume.spacing(), volume.num_classes(), std::move(out));
}

}  // namespace selfprompt
