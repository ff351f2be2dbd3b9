#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace selfprompt {

// Voxel counts along x, y, z. Storage order everywhere is x-fastest, so a
// fixed-z slice is one contiguous run of nx*ny elements.
struct Dims {
  std::size_t nx = 1;
  std::size_t ny = 1;
  std::size_t nz = 1;

  std::size_t count() const { return nx * ny * nz; }
  std::size_t operator[](int axis) const { return axis == 0 ? nx : axis == 1 ? ny : nz; }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const {
    return x + nx * (y + ny * z);
  }
  bool operator==(const Dims&) const = default;
};

// Millimeters per voxel along each axis.
struct Spacing {
  double sx = 1.0;
  double sy = 1.0;
  double sz = 1.0;

  double operator[](int axis) const { return axis == 0 ? sx : axis == 1 ? sy : sz; }
  bool operator==(const Spacing&) const = default;
};

using Index3 = std::array<std::int64_t, 3>;

// Inverse of Dims::index.
Index3 unravel(const Dims& dims, std::size_t flat);

// 3-D grid of u8 class ids in [0, K-1]. Class 0 is background.
class LabelVolume {
 public:
  LabelVolume() = default;
  // Throws ValidationError if any invariant is violated.
  LabelVolume(Dims dims, Spacing spacing, int num_classes, std::vector<std::uint8_t> labels);
  // All-background volume.
  LabelVolume(Dims dims, Spacing spacing, int num_classes);

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  int num_classes() const { return num_classes_; }
  std::span<const std::uint8_t> labels() const { return labels_; }
  std::uint8_t at(std::size_t x, std::size_t y, std::size_t z) const {
    return labels_[dims_.index(x, y, z)];
  }

  // Voxel count per class id, length K.
  std::vector<std::size_t> histogram() const;

  bool operator==(const LabelVolume&) const = default;

 private:
  Dims dims_;
  Spacing spacing_;
  int num_classes_ = 1;
  std::vector<std::uint8_t> labels_;
};

// 3-D real grid with C channels, channel-major then x-fastest. Values are
// finite at every public boundary.
class ScalarVolume {
 public:
  ScalarVolume() = default;
  ScalarVolume(Dims dims, Spacing spacing, std::size_t channels, std::vector<double> values);

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  std::size_t channels() const { return channels_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> channel(std::size_t c) const {
    return std::span<const double>(values_).subspan(c * dims_.count(), dims_.count());
  }
  double at(std::size_t c, std::size_t flat) const { return values_[c * dims_.count() + flat]; }

  bool operator==(const ScalarVolume&) const = default;

 private:
  Dims dims_;
  Spacing spacing_;
  std::size_t channels_ = 1;
  std::vector<double> values_;
};

class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(Dims dims, Spacing spacing, std::vector<std::uint8_t> bits);
  // All-false mask.
  BinaryMask(Dims dims, Spacing spacing);

  const Dims& dims() const { return dims_; }
  const Spacing& spacing() const { return spacing_; }
  std::span<const std::uint8_t> bits() const { return bits_; }
  bool at(std::size_t flat) const { return bits_[flat] != 0; }
  bool at(std::size_t x, std::size_t y, std::size_t z) const {
    return bits_[dims_.index(x, y, z)] != 0;
  }
  std::size_t count() const;
  bool empty() const { return count() == 0; }

  // Extracts the fixed-z plane as an nz=1 mask.
  BinaryMask slice(std::size_t z) const;

  bool operator==(const BinaryMask&) const = default;

 private:
  Dims dims_;
  Spacing spacing_;
  std::vector<std::uint8_t> bits_;
};

// True exactly where labels == class_id. Throws RangeError unless
// 0 <= class_id < K.
BinaryMask one_hot(const LabelVolume& volume, int class_id);

// Fixed-z plane of a label volume as an nz=1 volume.
LabelVolume slice(const LabelVolume& volume, std::size_t z);

}  // namespace selfprompt
