// Command-line front end: forward moment summaries, single-run adjoint
// gradients, finite-difference cross-checks, and the canned experiments.

#include <chrono>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dsmc/adjoint.hpp"
#include "dsmc/forward.hpp"
#include "dsmc/io.hpp"
#include "dsmc/presets.hpp"
#include "dsmc/verify.hpp"

namespace {

using namespace dsmc;

struct CommonArgs {
  std::vector<std::size_t> particles;
  std::optional<int> replicas;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string config_path;
  std::string preset_name;
  bool use_desk_scale = false;
};

void add_common(CLI::App* cmd, CommonArgs& args, bool with_preset_option) {
  cmd->add_option("--particles,-N", args.particles, "Particle count(s)");
  cmd->add_option("--replicas", args.replicas, "Independent replicas");
  cmd->add_option("--seed", args.seed, "Base seed");
  cmd->add_option("--out", args.out, "Output file path");
  cmd->add_option("--config", args.config_path, "JSON config file");
  if (with_preset_option)
    cmd->add_option("--preset", args.preset_name, "Experiment preset name");
  cmd->add_flag("--desk-scale", args.use_desk_scale,
                "Shrink replica counts and the N sweep");
}

// Resolve config/init/params either from --config or from a preset.
struct Resolved {
  SimConfig config;
  InitialParams init;
  std::vector<Parameter> params;
  double fd_delta = 0.01;
  int replicas = 4;
  std::string name = "config";
};

Resolved resolve(const CommonArgs& args, std::size_t n_for_density) {
  Resolved r;
  if (!args.config_path.empty()) {
    const ParsedConfig parsed = parse_config_file(args.config_path);
    r.config = parsed.config;
    r.init = parsed.init;
    r.params.push_back({Parameter::Kind::init_scale, -1});
    auto add_wall = [&](const BoundarySpec& bc, Parameter::Kind kind) {
      if (bc.kind == WallKind::thermal || bc.kind == WallKind::inflow)
        for (int j = 0; j < 3; ++j) r.params.push_back({kind, j});
    };
    add_wall(r.config.left_bc, Parameter::Kind::theta_left);
    add_wall(r.config.right_bc, Parameter::Kind::theta_right);
  } else if (!args.preset_name.empty()) {
    ExperimentPreset preset = make_preset(args.preset_name);
    if (args.use_desk_scale) desk_scale(preset);
    r.config = preset_config_for(preset, n_for_density);
    r.init = preset.init;
    r.params = preset.params;
    r.fd_delta = preset.fd_delta;
    r.replicas = preset.replicas;
    r.name = preset.name;
  } else {
    throw ConfigError("either --config or --preset is required");
  }
  if (args.seed) r.config.seed = *args.seed;
  if (args.replicas) r.replicas = *args.replicas;
  if (r.replicas < 1) throw std::invalid_argument("replicas must be >= 1");
  return r;
}

void write_or_print(const std::string& path, const std::string& body) {
  if (path.empty()) {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::ios_base::failure("cannot open output path: " + path);
  out << body;
  if (!out) throw std::ios_base::failure("write failed: " + path);
}

int cmd_forward(const CommonArgs& args) {
  const std::size_t n = args.particles.empty() ? 10000 : args.particles.front();
  std::string body =
      "cell,x_center,count,density,mean_vx,mean_vy,mean_vz,temperature\n";
  if (n == 0) {
    write_or_print(args.out, body);
    return 0;
  }
  const Resolved r = resolve(args, n);
  const Observable obs = local_kinetic_energy();
  ForwardOptions opt;
  opt.record_tape = false;
  const ForwardRun run = run_forward(r.config, r.init, n, obs, opt);
  const auto cells = bin_particles(run.ensemble, r.config);
  const double width = r.config.cell_width();
  for (std::size_t c = 0; c < cells.size(); ++c) {
    const auto& members = cells[c];
    Vec3 mean_v = Vec3::Zero();
    for (const int i : members) mean_v += run.ensemble.v[i];
    if (!members.empty()) mean_v /= static_cast<double>(members.size());
    double temperature = 0.0;
    for (const int i : members)
      temperature += (run.ensemble.v[i] - mean_v).squaredNorm();
    if (!members.empty())
      temperature /= 3.0 * static_cast<double>(members.size());
    const double density = static_cast<double>(members.size()) /
                           (static_cast<double>(n) * width);
    body += std::to_string(c) + ',' +
            format_double(r.config.domain_left + (c + 0.5) * width) + ',' +
            std::to_string(members.size()) + ',' + format_double(density) +
            ',' + format_double(mean_v[0]) + ',' + format_double(mean_v[1]) +
            ',' + format_double(mean_v[2]) + ',' + format_double(temperature) +
            '\n';
  }
  write_or_print(args.out, body);
  return 0;
}

int cmd_gradient(const CommonArgs& args) {
  const std::size_t n = args.particles.empty() ? 10000 : args.particles.front();
  const Resolved r = resolve(args, n);
  const Observable obs = local_kinetic_energy();
  const ForwardRun run = run_forward(r.config, r.init, n, obs);
  const GradientReport report = run_adjoint(run, obs);
  write_or_print(args.out, report_json(report).dump(2) + "\n");
  return 0;
}

std::vector<ResultRow> sweep_rows(const CommonArgs& args,
                                  const ExperimentPreset& preset,
                                  const std::vector<std::size_t>& counts,
                                  int replicas, bool timing) {
  const Observable obs = local_kinetic_energy();
  std::vector<ResultRow> rows;
  for (const std::size_t n : counts) {
    const auto start = std::chrono::steady_clock::now();
    SimConfig cfg = preset_config_for(preset, n);
    if (args.seed) cfg.seed = *args.seed;
    const ReplicaSpec rs{replicas, cfg.seed};
    const GradStats adjoint = adjoint_gradient_stats(cfg, preset.init, n, obs,
                                                     preset.params, rs);
    const GradStats fd = fd_gradient(cfg, preset.init, n, obs, preset.params,
                                     preset.fd_delta, rs);
    const auto errors = compare(adjoint, fd);
    const double elapsed =
        timing ? std::chrono::duration<double>(
                     std::chrono::steady_clock::now() - start)
                     .count()
               : 0.0;
    for (const ErrorRow& e : errors) {
      rows.push_back({preset.name, n, replicas, e.param.label(),
                      e.adjoint_mean, e.adjoint_std, e.fd_mean, e.fd_std,
                      e.error, e.relative, elapsed});
    }
  }
  return rows;
}

int cmd_fd_check(const CommonArgs& args, double delta_override, bool timing) {
  const std::size_t n = args.particles.empty() ? 10000 : args.particles.front();
  if (args.preset_name.empty())
    throw ConfigError("fd-check requires --preset");
  ExperimentPreset preset = make_preset(args.preset_name);
  if (args.use_desk_scale) desk_scale(preset);
  if (args.replicas) preset.replicas = *args.replicas;
  if (preset.replicas < 1)
    throw std::invalid_argument("replicas must be >= 1");
  if (delta_override > 0.0) preset.fd_delta = delta_override;
  const auto rows = sweep_rows(args, preset, {n}, preset.replicas, timing);
  write_or_print(args.out, result_csv(rows));
  return 0;
}

int cmd_experiment(const CommonArgs& args, bool timing, const std::string& json_out) {
  if (args.preset_name.empty())
    throw ConfigError("experiment requires a preset name");
  ExperimentPreset preset = make_preset(args.preset_name);
  if (args.use_desk_scale) desk_scale(preset);
  if (args.replicas) preset.replicas = *args.replicas;
  if (preset.replicas < 1)
    throw std::invalid_argument("replicas must be >= 1");
  const std::vector<std::size_t> counts =
      args.particles.empty() ? preset.particle_counts : args.particles;
  const auto rows = sweep_rows(args, preset, counts, preset.replicas, timing);
  write_or_print(args.out, result_csv(rows));
  if (!json_out.empty())
    write_or_print(json_out, result_json(rows).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1d slab DSMC solver with tape-based adjoint gradients"};
  app.require_subcommand(1);

  CommonArgs fwd_args, grad_args, fd_args, exp_args;
  double fd_delta = 0.0;
  bool fd_timing = false, exp_timing = false;
  std::string exp_json_out;

  CLI::App* fwd = app.add_subcommand("forward", "Run forward, write moments");
  add_common(fwd, fwd_args, true);

  CLI::App* grad =
      app.add_subcommand("gradient", "Single-run adjoint gradient report");
  add_common(grad, grad_args, true);

  CLI::App* fd = app.add_subcommand(
      "fd-check", "Adjoint vs. finite-difference comparison at one N");
  add_common(fd, fd_args, true);
  fd->add_option("--delta", fd_delta, "FD perturbation size");
  fd->add_flag("--timing", fd_timing, "Record wall-clock seconds");

  CLI::App* exp = app.add_subcommand(
      "experiment", "Full N sweep of adjoint and FD gradients for a preset");
  exp->add_option("preset", exp_args.preset_name, "Preset name")->required();
  add_common(exp, exp_args, false);
  exp->add_flag("--timing", exp_timing, "Record wall-clock seconds");
  exp->add_option("--json", exp_json_out, "Also write a JSON mirror");

  CLI11_PARSE(app, argc, argv);

  try {
    if (fwd->parsed()) return cmd_forward(fwd_args);
    if (grad->parsed()) return cmd_gradient(grad_args);
    if (fd->parsed()) return cmd_fd_check(fd_args, fd_delta, fd_timing);
    if (exp->parsed()) return cmd_experiment(exp_args, exp_timing, exp_json_out);
  } catch (const std::ios_base::failure& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 2;
  }
  return 0;
}
