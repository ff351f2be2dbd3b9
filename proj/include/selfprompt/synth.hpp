#pragma once

#include <cstdint>
#include <vector>

#include "selfprompt/volume.hpp"

namespace selfprompt {

struct Sphere {
  std::array<double, 3> center{};  // voxel coordinates
  double radius = 1.0;             // millimeters
  int class_id = 1;
};

// Rasterizes spheres into a K-class label volume. A voxel takes the class of
// the last sphere whose anisotropic (mm) distance from center is <= radius.
// Throws ValidationError for radius <= 0 or class ids outside [1, K-1].
LabelVolume synth_spheres(const Dims& dims, const Spacing& spacing, int num_classes,
                          const std::vector<Sphere>& spheres);

// Draws `count` spheres with integer voxel centers, classes cycling through
// 1..K-1, radii in [min_radius_mm, max_radius_mm]. Pure function of its
// arguments; all randomness comes from `seed`.
std::vector<Sphere> random_spheres(const Dims& dims, int num_classes,
                                   std::size_t count, double min_radius_mm, double max_radius_mm,
                                   std::uint64_t seed);

}  // namespace selfprompt
