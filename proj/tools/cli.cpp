#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "selfprompt/conv.hpp"
#include "selfprompt/edt.hpp"
#include "selfprompt/errors.hpp"
#include "selfprompt/mc_adapter.hpp"
#include "selfprompt/spv_io.hpp"
#include "selfprompt/trainmath.hpp"

namespace selfprompt::cli {

namespace {

using nlohmann::json;

// Sphere list file: {"num_classes": K, "spheres": [{"center": [x, y, z],
// "radius": r, "class_id": c}, ...]}.
struct SphereList {
  int num_classes = 2;
  std::vector<Sphere> spheres;
};

SphereList load_sphere_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open sphere list '" + path.string() + "'");
  json root;
  try {
    root = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("malformed sphere list: ") + e.what());
  }
  SphereList list;
  try {
    list.num_classes = root.value("num_classes", 2);
    for (const auto& s : root.value("spheres", json::array())) {
      Sphere sphere;
      const auto& c = s.at("center");
      if (!c.is_array() || c.size() != 3) throw FormatError("sphere center must have 3 entries");
      for (int a = 0; a < 3; ++a) sphere.center[a] = c[a].get<double>();
      sphere.radius = s.at("radius").get<double>();
      sphere.class_id = s.at("class_id").get<int>();
      list.spheres.push_back(sphere);
    }
  } catch (const json::exception& e) {
    throw FormatError(std::string("invalid sphere list: ") + e.what());
  }
  return list;
}

json histogram_json(const LabelVolume& labels) {
  const auto hist = labels.histogram();
  const auto total = static_cast<double>(labels.dims().count());
  json rows = json::array();
  for (std::size_t c = 0; c < hist.size(); ++c) {
    rows.push_back({{"class_id", c}, {"voxels", hist[c]}, {"fraction", static_cast<double>(hist[c]) / total}});
  }
  return rows;
}

void print_histogram(std::ostream& out, const json& rows) {
  out << "class  voxels      percent\n";
  for (const auto& r : rows) {
    out << std::setw(5) << r["class_id"].get<int>() << "  " << std::setw(10)
        << r["voxels"].get<std::size_t>() << "  " << std::fixed << std::setprecision(3)
        << std::setw(7) << 100.0 * r["fraction"].get<double>() << "%\n";
  }
  out.unsetf(std::ios::floatfield);
}

Index3 rounded_center(const Sphere& s) {
  return {static_cast<std::int64_t>(std::llround(s.center[0])),
          static_cast<std::int64_t>(std::llround(s.center[1])),
          static_cast<std::int64_t>(std::llround(s.center[2]))};
}

// Entries below this magnitude are judged on absolute error.
constexpr double kRelErrorFloor = 1e-3;

double max_rel_error(std::span<const double> analytic, std::span<const double> numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double scale = std::max({std::abs(analytic[i]), std::abs(numeric[i]), kRelErrorFloor});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / scale);
  }
  return worst;
}

double probe_loss(const nn::Tensor3& x, const nn::AdapterParams& p, const nn::Tensor3& upstream) {
  const nn::Tensor3 y = nn::dfused_forward(x, p);
  double acc = 0.0;
  for (std::size_t i = 0; i < y.size(); ++i) acc += y.values()[i] * upstream.values()[i];
  return acc;
}

template <typename Mutate>
std::vector<double> central_differences(std::size_t count, double step, Mutate&& evaluate_at) {
  std::vector<double> grads(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double plus = evaluate_at(i, step);
    const double minus = evaluate_at(i, -step);
    grads[i] = (plus - minus) / (2.0 * step);
  }
  return grads;
}

}  // namespace

GradcheckReport run_gradcheck(const GradcheckOptions& options) {
  std::mt19937_64 rng(options.seed);
  nn::AdapterParams params =
      nn::AdapterParams::init(options.channels, options.depth, rng, /*zero_up=*/false, 0.5);
  const nn::Tensor3 x = nn::Tensor3::uniform(options.depth, options.tokens, options.channels, -1.0, 1.0, rng);
  const nn::Tensor3 upstream =
      nn::Tensor3::uniform(options.depth, options.tokens, options.channels, -1.0, 1.0, rng);

  nn::AdapterParams analytic_params = params;
  if (options.perturb) {
    for (auto& v : analytic_params.w_up.values()) v += 1e-3;
  }
  const nn::AdapterGrads grads = nn::dfused_backward(x, analytic_params, upstream);

  GradcheckReport report;
  report.tolerance = options.tolerance;
  auto record = [&report](std::string name, std::span<const double> analytic,
                          const std::vector<double>& numeric) {
    GradcheckTensor t{std::move(name), analytic.size(), max_rel_error(analytic, numeric)};
    report.max_rel_error = std::max(report.max_rel_error, t.max_rel_error);
    report.tensors.push_back(std::move(t));
  };

  {
    nn::Tensor3 probe = x;
    record("x", grads.x.values(), central_differences(x.size(), options.step, [&](std::size_t i, double h) {
             const double saved = probe.values()[i];
             probe.values()[i] = saved + h;
             const double loss = probe_loss(probe, params, upstream);
             probe.values()[i] = saved;
             return loss;
           }));
  }
  const std::pair<const char*, nn::Matrix nn::AdapterParams::*> matrices[] = {
      {"w_dn", &nn::AdapterParams::w_dn},
      {"w_up", &nn::AdapterParams::w_up},
      {"w_dup", &nn::AdapterParams::w_dup},
      {"w_ddn", &nn::AdapterParams::w_ddn}};
  const std::span<const double> analytic[] = {grads.w_dn.values(), grads.w_up.values(),
                                              grads.w_dup.values(), grads.w_ddn.values()};
  for (std::size_t m = 0; m < 4; ++m) {
    nn::AdapterParams probe = params;
    auto& target = probe.*(matrices[m].second);
    record(matrices[m].first, analytic[m],
           central_differences(target.values().size(), options.step, [&](std::size_t i, double h) {
             const double saved = target.values()[i];
             target.values()[i] = saved + h;
             const double loss = probe_loss(x, probe, upstream);
             target.values()[i] = saved;
             return loss;
           }));
  }
  return report;
}

std::vector<Sphere> demo_spheres(std::size_t size, std::uint64_t seed) {
  if (size < 24) throw ValidationError("demo volume size must be at least 24");
  std::mt19937_64 rng(seed);
  const double max_radius = std::min(9.0, static_cast<double>(size) / 6.0);
  std::uniform_real_distribution<double> radius_dist(4.0, max_radius);
  std::vector<Sphere> spheres;
  for (int attempt = 0; attempt < 10000 && spheres.size() < 3; ++attempt) {
    Sphere s;
    s.radius = radius_dist(rng);
    s.class_id = static_cast<int>(spheres.size()) + 1;
    const auto margin = static_cast<std::int64_t>(std::ceil(s.radius)) + 2;
    std::uniform_int_distribution<std::int64_t> pos(margin, static_cast<std::int64_t>(size) - 1 - margin);
    for (int a = 0; a < 3; ++a) s.center[a] = static_cast<double>(pos(rng));
    const bool clear = std::all_of(spheres.begin(), spheres.end(), [&s](const Sphere& o) {
      double d2 = 0.0;
      for (int a = 0; a < 3; ++a) d2 += (s.center[a] - o.center[a]) * (s.center[a] - o.center[a]);
      return std::sqrt(d2) > s.radius + o.radius + 2.0;
    });
    if (clear) spheres.push_back(s);
  }
  if (spheres.size() < 3) throw ValidationError("could not place three disjoint demo spheres");
  return spheres;
}

DemoResult run_demo(const DemoOptions& options) {
  DemoResult result;
  constexpr int kClasses = 4;
  const Dims dims{options.size, options.size, options.size};
  const Spacing spacing{1.0, 1.0, 1.0};
  result.spheres = demo_spheres(options.size, options.seed);
  result.labels = synth_spheres(dims, spacing, kClasses, result.spheres);
  result.prompts = generate_prompts(result.labels, PromptMode::kVolume);

  bool ok = result.prompts.size() == kClasses - 1;
  for (const auto& sphere : result.spheres) {
    DemoSphereCheck check;
    check.sphere = sphere;
    check.center_voxel = rounded_center(sphere);
    check.prompt = result.prompts[static_cast<std::size_t>(sphere.class_id - 1)];
    check.point_is_center = check.prompt.present && check.prompt.point.index == check.center_voxel;
    const auto box = extract_box(one_hot(result.labels, sphere.class_id));
    check.box_is_tight = box && check.prompt.box == *box;
    ok = ok && check.point_is_center && check.box_is_tight;
    result.checks.push_back(check);
  }

  // Exact one-hot logits: 1 for the true class, 0 elsewhere.
  const std::size_t voxels = dims.count();
  std::vector<double> logits(kClasses * voxels, 0.0);
  const auto labels = result.labels.labels();
  for (std::size_t i = 0; i < voxels; ++i) logits[labels[i] * voxels + i] = 1.0;
  const ScalarVolume logit_volume(dims, spacing, kClasses, std::move(logits));
  const auto fused = nn::mcadapter_fuse(logit_volume, nn::make_identity_stack(kClasses));
  for (int c = 1; c < kClasses; ++c) {
    const double dsc = train::dice_score(one_hot(fused.labels, c), one_hot(result.labels, c));
    result.fused_dice.push_back(dsc);
    ok = ok && dsc == 1.0;
  }

  std::filesystem::create_directories(options.out_dir);
  const auto labels_path = options.out_dir / "labels.spv";
  const auto prompts_path = options.out_dir / "prompts.json";
  const auto probs_path = options.out_dir / "fused_probabilities.spv";
  const auto fused_path = options.out_dir / "fused_labels.spv";
  write_spv(result.labels, labels_path);
  write_prompts({PromptMode::kVolume, kClasses, result.prompts}, prompts_path);
  write_spv(fused.probabilities, probs_path);
  write_spv(fused.labels, fused_path);
  result.artifacts = {labels_path, prompts_path, probs_path, fused_path};
  result.passed = ok;
  return result;
}

namespace {

struct Context {
  std::ostream& out;
  std::ostream& err;
  bool json_output = false;
  std::uint64_t seed = 0;
};

void emit(Context& ctx, const json& report, const std::function<void()>& table) {
  if (ctx.json_output) {
    ctx.out << report.dump(2) << '\n';
  } else {
    table();
  }
}

int cmd_synth(Context& ctx, const std::vector<std::size_t>& dims_arg,
              const std::vector<double>& spacing_arg, const std::string& spheres_path,
              std::size_t random_count, int classes, const std::string& out_path) {
  SphereList list;
  if (!spheres_path.empty()) list = load_sphere_list(spheres_path);
  if (classes > 0) list.num_classes = classes;
  const Dims dims{dims_arg[0], dims_arg[1], dims_arg[2]};
  const Spacing spacing{spacing_arg[0], spacing_arg[1], spacing_arg[2]};
  if (random_count > 0) {
    const double extent = static_cast<double>(std::min({dims.nx, dims.ny, dims.nz}));
    auto extra = random_spheres(dims, list.num_classes, random_count, std::max(1.0, 0.05 * extent),
                                std::max(1.0, 0.2 * extent), ctx.seed);
    list.spheres.insert(list.spheres.end(), extra.begin(), extra.end());
  }
  const LabelVolume labels = synth_spheres(dims, spacing, list.num_classes, list.spheres);
  write_spv(labels, out_path);
  const json rows = histogram_json(labels);
  emit(ctx, {{"output", out_path}, {"num_classes", list.num_classes}, {"histogram", rows}}, [&] {
    ctx.out << "wrote " << out_path << "\n";
    print_histogram(ctx.out, rows);
  });
  return kExitOk;
}

int cmd_prompts(Context& ctx, const std::string& in_path, const std::string& mode_text,
                const std::string& out_path) {
  const LabelVolume labels = read_label_spv(in_path);
  const PromptMode mode = parse_prompt_mode(mode_text);
  PromptDocument doc{mode, labels.num_classes(), generate_prompts(labels, mode)};
  write_prompts(doc, out_path);
  const auto present = std::count_if(doc.prompts.begin(), doc.prompts.end(),
                                     [](const PromptSet& p) { return p.present; });
  emit(ctx,
       {{"output", out_path}, {"mode", mode_text}, {"prompt_sets", doc.prompts.size()}, {"present", present}},
       [&] {
         ctx.out << "wrote " << out_path << ": " << doc.prompts.size() << " prompt sets (" << present
                 << " present, mode " << mode_text << ")\n";
       });
  return kExitOk;
}

int cmd_edt(Context& ctx, const std::string& in_path, int class_id, const std::string& out_path,
            bool oracle) {
  const LabelVolume labels = read_label_spv(in_path);
  const BinaryMask mask = one_hot(labels, class_id);
  const DistanceField field = oracle ? edt_bruteforce(mask) : edt_exact(mask);
  write_spv(field.volume(), out_path);
  const auto values = field.values();
  const double peak = values.empty() ? 0.0 : *std::max_element(values.begin(), values.end());
  emit(ctx,
       {{"output", out_path}, {"class_id", class_id}, {"method", oracle ? "bruteforce" : "exact"},
        {"foreground_voxels", mask.count()}, {"max_sq_distance_mm2", peak}},
       [&] {
         ctx.out << "wrote " << out_path << " (" << (oracle ? "brute force" : "exact")
                 << "), class " << class_id << ", " << mask.count()
                 << " foreground voxels, max squared distance " << peak << " mm^2\n";
       });
  return kExitOk;
}

int cmd_dice(Context& ctx, const std::string& a_path, const std::string& b_path) {
  const LabelVolume a = read_label_spv(a_path);
  const LabelVolume b = read_label_spv(b_path);
  if (a.dims() != b.dims()) throw ValidationError("dice: volumes have different dims");
  const int k = std::max(a.num_classes(), b.num_classes());
  // Re-wrap both with the shared K so one_hot accepts every class id.
  const LabelVolume wa(a.dims(), a.spacing(), k, {a.labels().begin(), a.labels().end()});
  const LabelVolume wb(b.dims(), a.spacing(), k, {b.labels().begin(), b.labels().end()});
  json rows = json::array();
  double sum = 0.0;
  for (int c = 1; c < k; ++c) {
    const double dsc = train::dice_score(one_hot(wa, c), one_hot(wb, c));
    sum += dsc;
    rows.push_back({{"class_id", c}, {"dice", dsc}});
  }
  const double mean = k > 1 ? sum / (k - 1) : 1.0;
  emit(ctx, {{"per_class", rows}, {"mean_dice", mean}}, [&] {
    ctx.out << "class  dice\n";
    for (const auto& r : rows) {
      ctx.out << std::setw(5) << r["class_id"].get<int>() << "  " << std::fixed << std::setprecision(6)
              << r["dice"].get<double>() << "\n";
    }
    ctx.out << " mean  " << std::fixed << std::setprecision(6) << mean << "\n";
    ctx.out.unsetf(std::ios::floatfield);
  });
  return kExitOk;
}

int cmd_schedule_lr(Context& ctx, double init_lr, int max_epoch, int epoch, int step) {
  const train::LrSchedule schedule{init_lr, max_epoch};
  std::vector<int> epochs;
  if (epoch >= 0) {
    epochs.push_back(epoch);
  } else {
    if (step <= 0) throw ValidationError("--step must be positive");
    for (int e = 0; e < max_epoch; e += step) epochs.push_back(e);
    epochs.push_back(max_epoch);
  }
  json rows = json::array();
  for (const int e : epochs) rows.push_back({{"epoch", e}, {"lr", train::poly_lr(schedule, e)}});
  emit(ctx, {{"schedule", "poly"}, {"init_lr", init_lr}, {"max_epoch", max_epoch}, {"exponent", 0.9}, {"rows", rows}},
       [&] {
         ctx.out << "epoch  lr\n";
         for (const auto& r : rows) {
           ctx.out << std::setw(5) << r["epoch"].get<int>() << "  " << std::setprecision(17)
                   << r["lr"].get<double>() << "\n";
         }
       });
  return kExitOk;
}

int cmd_schedule_dsw(Context& ctx, std::size_t levels) {
  const auto weights = train::ds_weights(levels);
  json rows = json::array();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    rows.push_back({{"level", i + 1}, {"resolution_divisor", std::size_t{1} << i}, {"weight", weights[i]}});
  }
  emit(ctx, {{"schedule", "deep_supervision"}, {"levels", levels}, {"rows", rows}}, [&] {
    ctx.out << "level  divisor  weight\n";
    for (const auto& r : rows) {
      ctx.out << std::setw(5) << r["level"].get<int>() << "  " << std::setw(7)
              << r["resolution_divisor"].get<std::size_t>() << "  " << std::setprecision(17)
              << r["weight"].get<double>() << "\n";
    }
  });
  return kExitOk;
}

int cmd_gradcheck(Context& ctx, GradcheckOptions options) {
  options.seed = ctx.seed;
  const GradcheckReport report = run_gradcheck(options);
  json rows = json::array();
  for (const auto& t : report.tensors) {
    rows.push_back({{"name", t.name}, {"entries", t.entries}, {"max_rel_error", t.max_rel_error}});
  }
  emit(ctx,
       {{"seed", ctx.seed}, {"step", options.step}, {"tolerance", report.tolerance},
        {"tensors", rows}, {"max_rel_error", report.max_rel_error}, {"passed", report.passed()}},
       [&] {
         ctx.out << "tensor  entries  max_rel_error\n";
         for (const auto& t : report.tensors) {
           ctx.out << std::setw(6) << t.name << "  " << std::setw(7) << t.entries << "  "
                   << std::scientific << std::setprecision(3) << t.max_rel_error << "\n";
         }
         ctx.out.unsetf(std::ios::floatfield);
         ctx.out << (report.passed() ? "PASS" : "FAIL") << " (max rel error " << report.max_rel_error
                 << ", tolerance " << report.tolerance << ")\n";
       });
  return report.passed() ? kExitOk : kExitCheckFailed;
}

int cmd_demo(Context& ctx, DemoOptions options) {
  options.seed = ctx.seed;
  const DemoResult result = run_demo(options);
  json spheres = json::array();
  for (const auto& c : result.checks) {
    spheres.push_back({{"class_id", c.sphere.class_id},
                       {"center", c.center_voxel},
                       {"radius_mm", c.sphere.radius},
                       {"point", c.prompt.point.index},
                       {"box_min", c.prompt.box.min},
                       {"box_max", c.prompt.box.max},
                       {"point_is_center", c.point_is_center},
                       {"box_is_tight", c.box_is_tight}});
  }
  json artifacts = json::array();
  for (const auto& p : result.artifacts) artifacts.push_back(p.string());
  emit(ctx,
       {{"seed", ctx.seed}, {"size", options.size}, {"spheres", spheres},
        {"fused_dice", result.fused_dice}, {"artifacts", artifacts}, {"passed", result.passed}},
       [&] {
         for (const auto& c : result.checks) {
           ctx.out << "class " << c.sphere.class_id << ": center (" << c.center_voxel[0] << ", "
                   << c.center_voxel[1] << ", " << c.center_voxel[2] << ") point ("
                   << c.prompt.point.index[0] << ", " << c.prompt.point.index[1] << ", "
                   << c.prompt.point.index[2] << ") " << (c.point_is_center ? "ok" : "MISMATCH")
                   << ", box " << (c.box_is_tight ? "tight" : "NOT TIGHT") << "\n";
         }
         for (std::size_t i = 0; i < result.fused_dice.size(); ++i) {
           ctx.out << "fused dice class " << i + 1 << ": " << result.fused_dice[i] << "\n";
         }
         for (const auto& p : result.artifacts) ctx.out << "artifact: " << p.string() << "\n";
         ctx.out << (result.passed ? "PASS" : "FAIL") << "\n";
       });
  return result.passed ? kExitOk : kExitCheckFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Automatic SAM prompt generation, adapter numerics and training math", "selfprompt"};
  app.require_subcommand(1);
  // Global flags are also accepted after the subcommand name.
  app.fallthrough();
  Context ctx{out, err};
  app.add_flag("--json", ctx.json_output, "Print the report as JSON");
  app.add_option("--seed", ctx.seed, "Seed for every random draw")->capture_default_str();

  std::vector<std::size_t> dims{32, 32, 32};
  std::vector<double> spacing{1.0, 1.0, 1.0};
  std::string spheres_path, in_path, out_path, a_path, b_path, mode = "slice";
  std::size_t random_count = 0;
  int classes = 0;
  int class_id = 1;
  bool oracle = false;

  auto* synth = app.add_subcommand("synth", "Rasterize spheres into a label volume");
  synth->add_option("--dims", dims, "nx ny nz")->expected(3)->capture_default_str();
  synth->add_option("--spacing", spacing, "sx sy sz in mm")->expected(3)->capture_default_str();
  synth->add_option("--spheres", spheres_path, "Sphere list JSON")->check(CLI::ExistingFile);
  synth->add_option("--random", random_count, "Add N seeded random spheres");
  synth->add_option("--classes", classes, "Number of classes K (overrides the sphere list)");
  synth->add_option("--out", out_path, "Output SPV")->required();

  auto* prompts = app.add_subcommand("prompts", "Generate box/point/mask prompts per class");
  prompts->add_option("--in", in_path, "Label SPV")->required()->check(CLI::ExistingFile);
  prompts->add_option("--mode", mode, "slice or volume")->check(CLI::IsMember({"slice", "volume"}))->capture_default_str();
  prompts->add_option("--out", out_path, "Prompt JSON")->required();

  auto* edt = app.add_subcommand("edt", "Squared distance transform of one class");
  edt->add_option("--in", in_path, "Label SPV")->required()->check(CLI::ExistingFile);
  edt->add_option("--class", class_id, "Class id")->required();
  edt->add_option("--out", out_path, "Distance SPV")->required();
  edt->add_flag("--oracle", oracle, "Use the brute-force transform");

  auto* dice = app.add_subcommand("dice", "Per-class Dice between two label volumes");
  dice->add_option("a", a_path, "First label SPV")->required()->check(CLI::ExistingFile);
  dice->add_option("b", b_path, "Second label SPV")->required()->check(CLI::ExistingFile);

  auto* schedule = app.add_subcommand("schedule", "Print training schedules");
  schedule->require_subcommand(1);
  schedule->fallthrough();
  double init_lr = 0.01;
  int max_epoch = 1000;
  int epoch = -1;
  int step = 100;
  std::size_t levels = 5;
  auto* lr = schedule->add_subcommand("lr", "Poly learning-rate decay");
  lr->add_option("--init", init_lr)->capture_default_str();
  lr->add_option("--max-epoch", max_epoch)->capture_default_str();
  lr->add_option("--epoch", epoch, "Single epoch to evaluate");
  lr->add_option("--step", step, "Table step when --epoch is absent")->capture_default_str();
  auto* dsw = schedule->add_subcommand("dsw", "Deep-supervision weights");
  dsw->add_option("--levels", levels)->capture_default_str();

  GradcheckOptions gc;
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of the depth-fused adapter");
  gradcheck->add_option("--depth", gc.depth)->capture_default_str();
  gradcheck->add_option("--tokens", gc.tokens)->capture_default_str();
  gradcheck->add_option("--channels", gc.channels)->capture_default_str();
  gradcheck->add_option("--step", gc.step)->capture_default_str();
  gradcheck->add_option("--tolerance", gc.tolerance)->capture_default_str();
  gradcheck->add_flag("--perturb", gc.perturb, "Test hook: corrupt the analytic pass");

  DemoOptions demo_opts;
  std::string demo_dir = demo_opts.out_dir.string();
  auto* demo = app.add_subcommand("demo", "End-to-end synthetic run");
  demo->add_option("--size", demo_opts.size)->capture_default_str();
  demo->add_option("--out-dir", demo_dir)->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) return cmd_synth(ctx, dims, spacing, spheres_path, random_count, classes, out_path);
    if (*prompts) return cmd_prompts(ctx, in_path, mode, out_path);
    if (*edt) return cmd_edt(ctx, in_path, class_id, out_path, oracle);
    if (*dice) return cmd_dice(ctx, a_path, b_path);
    if (*lr) return cmd_schedule_lr(ctx, init_lr, max_epoch, epoch, step);
    if (*dsw) return cmd_schedule_dsw(ctx, levels);
    if (*gradcheck) return cmd_gradcheck(ctx, gc);
    if (*demo) {
      demo_opts.out_dir = demo_dir;
      return cmd_demo(ctx, demo_opts);
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}

}  // namespace selfprompt::cli
