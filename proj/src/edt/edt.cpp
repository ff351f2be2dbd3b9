#include "selfprompt/edt.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "selfprompt/errors.hpp"
#include "selfprompt/parallel.hpp"

namespace selfprompt {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Workspace for one 1-D pass. Sample positions run from -1 (shell) to n
// (shell), so they are stored as signed offsets.
struct Envelope {
  std::vector<std::int64_t> site;
  std::vector<double> height;
  std::vector<double> boundary;
  std::vector<double> line;

  explicit Envelope(std::size_t n) : site(n + 2), height(n + 2), boundary(n + 3), line(n) {}
};

// out[p] = min_q height(q) + (s*(p-q))^2 over finite samples q in [0, n)
// plus zero-height shell samples at -1 and n. Works in place on env.line.
void lower_envelope_pass(Envelope& env, std::size_t n, double s) {
  const double s2 = s * s;
  std::size_t k = 0;
  auto push = [&](std::int64_t q, double h) {
    const auto qd = static_cast<double>(q);
    if (k == 0) {
      env.site[0] = q;
      env.height[0] = h;
      env.boundary[0] = -kInf;
      env.boundary[1] = kInf;
      k = 1;
      return;
    }
    // boundary[0] is -inf, so the first parabola (the -1 shell) is never popped.
    double x = 0.0;
    while (true) {
      const std::size_t top = k - 1;
      const auto vd = static_cast<double>(env.site[top]);
      x = ((h + s2 * qd * qd) - (env.height[top] + s2 * vd * vd)) / (2.0 * s2 * (qd - vd));
      if (x > env.boundary[top]) break;
      --k;
    }
    env.site[k] = q;
    env.height[k] = h;
    env.boundary[k] = x;
    env.boundary[k + 1] = kInf;
    ++k;
  };

  push(-1, 0.0);
  for (std::size_t q = 0; q < n; ++q) {
    if (env.line[q] < kInf) push(static_cast<std::int64_t>(q), env.line[q]);
  }
  push(static_cast<std::int64_t>(n), 0.0);

  std::size_t j = 0;
  for (std::size_t p = 0; p < n; ++p) {
    const auto pd = static_cast<double>(p);
    while (env.boundary[j + 1] < pd) ++j;
    const double d = s * static_cast<double>(static_cast<std::int64_t>(p) - env.site[j]);
    env.line[p] = env.height[j] + d * d;
  }
}

void run_axis(std::vector<double>& values, const Dims& dims, int axis, double spacing) {
  const std::size_t n = dims[axis];
  const std::size_t stride = axis == 0 ? 1 : axis == 1 ? dims.nx : dims.nx * dims.ny;
  const std::size_t lines = dims.count() / n;
  // Line l enumerates the other two axes in storage order.
  const std::size_t inner = stride;
  parallel_for(lines, [&](std::size_t begin, std::size_t end) {
    Envelope env(n);
    for (std::size_t l = begin; l < end; ++l) {
      const std::size_t base = (l / inner) * inner * n + (l % inner);
      for (std::size_t i = 0; i < n; ++i) env.line[i] = values[base + i * stride];
      lower_envelope_pass(env, n, spacing);
      for (std::size_t i = 0; i < n; ++i) values[base + i * stride] = env.line[i];
    }
  });
}

}  // namespace

DistanceField::DistanceField(ScalarVolume squared_mm2) : volume_(std::move(squared_mm2)) {
  if (volume_.channels() != 1) throw_validation("distance field must have one channel");
}

std::array<bool, 3> spatial_axes(const Dims& dims) {
  std::array<bool, 3> spatial{dims.nx > 1, dims.ny > 1, dims.nz > 1};
  if (!spatial[0] && !spatial[1] && !spatial[2]) spatial[0] = true;
  return spatial;
}

DistanceField edt_exact(const BinaryMask& mask) {
  const auto& dims = mask.dims();
  const auto bits = mask.bits();
  std::vector<double> values(dims.count());
  std::transform(bits.begin(), bits.end(), values.begin(),
                 [](std::uint8_t b) { return b != 0 ? kInf : 0.0; });
  const auto spatial = spatial_axes(dims);
  for (int axis = 0; axis < 3; ++axis) {
    if (spatial[axis]) run_axis(values, dims, axis, mask.spacing()[axis]);
  }
  return DistanceField(ScalarVolume(dims, mask.spacing(), 1, std::move(values)));
}

DistanceField edt_bruteforce(const BinaryMask& mask) {
  const auto& dims = mask.dims();
  if (dims.count() > kBruteforceMaxVoxels) {
    throw SizeError("brute-force EDT limited to " + std::to_string(kBruteforceMaxVoxels) +
                    " voxels, got " + std::to_string(dims.count()));
  }
  const auto& sp = mask.spacing();
  const auto spatial = spatial_axes(dims);

  std::vector<Index3> background;
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (!mask.at(i)) background.push_back(unravel(dims, i));
  }

  std::vector<double> values(dims.count(), 0.0);
  for (std::size_t i = 0; i < dims.count(); ++i) {
    if (!mask.at(i)) continue;
    const Index3 p = unravel(dims, i);
    double best = kInf;
    for (const auto& q : background) {
      const double dx = sp.sx * static_cast<double>(p[0] - q[0]);
      const double dy = sp.sy * static_cast<double>(p[1] - q[1]);
      const double dz = sp.sz * static_cast<double>(p[2] - q[2]);
      best = std::min(best, dx * dx + dy * dy + dz * dz);
    }
    // Border shell: the closest shell voxel on a face is the perpendicular
    // projection of p, at index -1 or n along that axis.
    for (int a = 0; a < 3; ++a) {
      if (!spatial[a]) continue;
      const auto n = static_cast<std::int64_t>(dims[a]);
      for (const std::int64_t shell : {std::int64_t{-1}, n}) {
        const double d = sp[a] * static_cast<double>(p[a] - shell);
        best = std::min(best, d * d);
      }
    }
    values[i] = best;
  }
  return DistanceField(ScalarVolume(dims, sp, 1, std::move(values)));
}

}  // namespace selfprompt
