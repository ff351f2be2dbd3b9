#pragma once

#include <array>
#include <cstddef>
#include <span>

#include "selfprompt/volume.hpp"

namespace selfprompt {

// Squared Euclidean distance (mm^2) from each voxel to the nearest
// background voxel. Zero exactly on background.
class DistanceField {
 public:
  DistanceField() = default;
  explicit DistanceField(ScalarVolume squared_mm2);

  const ScalarVolume& volume() const { return volume_; }
  const Dims& dims() const { return volume_.dims(); }
  const Spacing& spacing() const { return volume_.spacing(); }
  std::span<const double> values() const { return volume_.values(); }
  double at(std::size_t flat) const { return volume_.values()[flat]; }

 private:
  ScalarVolume volume_;
};

// Axes that carry spatial extent. The image border along every spatial axis
// acts as a one-voxel background shell; axes of extent 1 are flat (a 2-D
// slice is a volume with nz = 1). With all extents 1, x counts as spatial.
std::array<bool, 3> spatial_axes(const Dims& dims);

// Separable lower-envelope transform: one linear-time parabola pass per
// spatial axis. Scanlines are processed in parallel with results identical
// to a sequential run.
DistanceField edt_exact(const BinaryMask& mask);

inline constexpr std::size_t kBruteforceMaxVoxels = 64 * 64 * 64;

// Exhaustive pairwise minimum, quadratic in voxel count. Test oracle for
// edt_exact. Throws SizeError above kBruteforceMaxVoxels.
DistanceField edt_bruteforce(const BinaryMask& mask);

}  // namespace selfprompt
