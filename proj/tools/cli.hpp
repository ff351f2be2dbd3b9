#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "selfprompt/dfused_adapter.hpp"
#include "selfprompt/prompt.hpp"
#include "selfprompt/synth.hpp"

namespace selfprompt::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitCheckFailed = 1;
inline constexpr int kExitUsage = 2;

// Entry point used by main() and by the tests. args excludes the program
// name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct GradcheckTensor {
  std::string name;
  std::size_t entries = 0;
  double max_rel_error = 0.0;
};

struct GradcheckReport {
  std::vector<GradcheckTensor> tensors;
  double max_rel_error = 0.0;
  double tolerance = 1e-6;
  bool passed() const { return max_rel_error < tolerance; }
};

struct GradcheckOptions {
  std::uint64_t seed = 0;
  std::size_t depth = 3;
  std::size_t tokens = 5;
  std::size_t channels = 8;
  double step = 1e-5;
  double tolerance = 1e-6;
  // Test hook: analytic gradients are taken at slightly shifted weights, so
  // the check must fail.
  bool perturb = false;
};

// Central finite differences of <upstream, dfused_forward(x, p)> against
// dfused_backward for x and all four adapter matrices. Relative error is
// |analytic - numeric| / max(|analytic|, |numeric|, 1e-3).
GradcheckReport run_gradcheck(const GradcheckOptions& options);

struct DemoOptions {
  std::uint64_t seed = 0;
  std::size_t size = 64;
  std::filesystem::path out_dir = "selfprompt_demo";
};

struct DemoSphereCheck {
  Sphere sphere;
  Index3 center_voxel{};
  PromptSet prompt;
  bool point_is_center = false;
  bool box_is_tight = false;
};

struct DemoResult {
  LabelVolume labels;
  std::vector<Sphere> spheres;
  std::vector<PromptSet> prompts;
  std::vector<DemoSphereCheck> checks;
  std::vector<double> fused_dice;  // per class 1..K-1
  std::vector<std::filesystem::path> artifacts;
  bool passed = false;
};

// synth -> prompts -> one-hot logits -> MC fusion (identity stack) -> Dice.
DemoResult run_demo(const DemoOptions& options);

// Three disjoint spheres of classes 1..3 fully inside a size^3 volume.
std::vector<Sphere> demo_spheres(std::size_t size, std::uint64_t seed);

}  // namespace selfprompt::cli
