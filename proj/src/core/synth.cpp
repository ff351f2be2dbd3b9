#include "selfprompt/synth.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "selfprompt/errors.hpp"

namespace selfprompt {

LabelVolume synth_spheres(const Dims& dims, const Spacing& spacing, int num_classes,
                          const std::vector<Sphere>& spheres) {
  LabelVolume empty(dims, spacing, num_classes);
  for (const auto& s : spheres) {
    if (!(s.radius > 0.0) || !std::isfinite(s.radius)) {
      throw_validation("sphere radius must be positive, got " + std::to_string(s.radius));
    }
    if (s.class_id < 1 || s.class_id >= num_classes) {
      throw_validation("sphere class id " + std::to_string(s.class_id) + " outside [1, " +
                       std::to_string(num_classes - 1) + "]");
    }
  }

  std::vector<std::uint8_t> labels(dims.count(), 0);
  for (const auto& s : spheres) {
    const double r2 = s.radius * s.radius;
    // Only scan the sphere's bounding box.
    std::array<std::size_t, 3> lo{}, hi{};
    for (int a = 0; a < 3; ++a) {
      const double extent = s.radius / spacing[a];
      const double first = std::ceil(s.center[a] - extent);
      const double last = std::floor(s.center[a] + extent);
      if (last < 0.0 || first > static_cast<double>(dims[a]) - 1.0) {
        lo[a] = 1;
        hi[a] = 0;
        continue;
      }
      lo[a] = static_cast<std::size_t>(std::max(0.0, first));
      hi[a] = static_cast<std::size_t>(std::min(static_cast<double>(dims[a]) - 1.0, last));
    }
    if (lo[0] > hi[0] || lo[1] > hi[1] || lo[2] > hi[2]) continue;
    for (std::size_t z = lo[2]; z <= hi[2]; ++z) {
      const double dz = spacing.sz * (static_cast<double>(z) - s.center[2]);
      for (std::size_t y = lo[1]; y <= hi[1]; ++y) {
        const double dy = spacing.sy * (static_cast<double>(y) - s.center[1]);
        for (std::size_t x = lo[0]; x <= hi[0]; ++x) {
          const double dx = spacing.sx * (static_cast<double>(x) - s.center[0]);
          if (dx * dx + dy * dy + dz * dz <= r2) {
            labels[dims.index(x, y, z)] = static_cast<std::uint8_t>(s.class_id);
          }
        }
      }
    }
  }
  return LabelVolume(dims, spacing, num_classes, std::move(labels));
}

std::vector<Sphere> random_spheres(const Dims& dims, int num_classes,
                                   std::size_t count, double min_radius_mm, double max_radius_mm,
                                   std::uint64_t seed) {
  if (num_classes < 2 && count > 0) throw_validation("random spheres need K >= 2");
  if (!(min_radius_mm > 0.0) || max_radius_mm < min_radius_mm) {
    throw_validation("invalid random sphere radius range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius_dist(min_radius_mm, max_radius_mm);
  std::vector<Sphere> spheres;
  spheres.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Sphere s;
    s.radius = radius_dist(rng);
    for (int a = 0; a < 3; ++a) {
      std::uniform_int_distribution<std::size_t> pos(0, dims[a] - 1);
      s.center[a] = static_cast<double>(pos(rng));
    }
    s.class_id = 1 + static_cast<int>(i % static_cast<std::size_t>(num_classes - 1));
    spheres.push_back(s);
  }
  return spheres;
}

}  // namespace selfprompt
