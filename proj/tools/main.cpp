#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "entseq/archive.hpp"
#include "entseq/harness.hpp"
#include "entseq/noise.hpp"
#include "entseq/optimizer.hpp"
#include "entseq/rng.hpp"
#include "entseq/sequence.hpp"

namespace {

using namespace entseq;

struct CommonOptions {
  std::string interaction = "zz";
  int realizations = 100;
  double sigma_logical = 0.065;
  double sigma_leakage = 0.065;
  double sigma_local = 0.002;
  bool local_noise = false;
  bool virtual_z = false;
  std::uint64_t seed = 0;
  int eval_realizations = 1000;
  std::string out_dir = "out";
};

void add_common_options(CLI::App* cmd, CommonOptions& opts) {
  cmd->add_option("--interaction", opts.interaction, "Coupling kind")
      ->check(CLI::IsMember({"zz", "xxyy"}))
      ->capture_default_str();
  cmd->add_option("--m", opts.realizations, "Training ensemble size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--sigma-logical", opts.sigma_logical,
                  "Std dev of logical nonlocal channels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--sigma-leakage", opts.sigma_leakage,
                  "Std dev of leakage nonlocal channels")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_option("--sigma-local", opts.sigma_local,
                  "Std dev of per-rotation error coefficients")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  cmd->add_flag("--local-noise", opts.local_noise,
                "Sample per-rotation amplitude and leakage errors");
  cmd->add_flag("--virtual-z", opts.virtual_z,
                "Treat z angles as software updates (no amplitude error)");
  cmd->add_option("--seed", opts.seed, "Base RNG seed")->capture_default_str();
  cmd->add_option("--eval-m", opts.eval_realizations,
                  "Out-of-sample ensemble size")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", opts.out_dir, "Output directory")
      ->capture_default_str();
}

InteractionKind to_kind(const std::string& name) {
  return name == "zz" ? InteractionKind::ZZ : InteractionKind::XXplusYY;
}

NoiseConfig to_config(const CommonOptions& opts) {
  NoiseConfig config;
  config.sigma_logical = opts.sigma_logical;
  config.sigma_leakage = opts.sigma_leakage;
  config.sigma_local = opts.sigma_local;
  config.local_enabled = opts.local_noise;
  config.virtual_z = opts.virtual_z;
  config.realizations = opts.realizations;
  config.seed = opts.seed;
  return config;
}

// "1-16", "3", or comma-separated mix of both.
std::vector<int> parse_lengths(const std::string& text) {
  std::set<int> collected;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (token.empty()) continue;
    const auto dash = token.find('-', 1);
    try {
      if (dash == std::string::npos) {
        collected.insert(std::stoi(token));
      } else {
        const int lo = std::stoi(token.substr(0, dash));
        const int hi = std::stoi(token.substr(dash + 1));
        if (lo > hi) throw std::invalid_argument(token);
        for (int n = lo; n <= hi; ++n) collected.insert(n);
      }
    } catch (const std::exception&) {
      throw std::invalid_argument("cannot parse lengths token '" + token + "'");
    }
  }
  if (collected.empty() || *collected.begin() < 1) {
    throw std::invalid_argument("lengths must be positive integers");
  }
  return {collected.begin(), collected.end()};
}

std::vector<double> parse_axis(const std::string& text) {
  std::vector<double> values;
  std::stringstream stream(text);
  std::string token;
  while (std::getline(stream, token, ',')) {
    if (!token.empty()) values.push_back(std::stod(token));
  }
  if (values.empty()) {
    throw std::invalid_argument("axis '" + text + "' is empty");
  }
  return values;
}

// Divisor chain ending at n: starts at the first prime (or 1) of the
// greatest-proper-divisor recursion so warm starts are available throughout.
std::vector<int> divisor_chain(int n) {
  std::vector<int> chain;
  int k = n;
  while (true) {
    chain.push_back(k);
    int divisor = 1;
    for (int d = 2; d * d <= k; ++d) {
      if (k % d == 0) {
        divisor = k / d;
        break;
      }
    }
    if (divisor == 1) break;
    k = divisor;
  }
  std::reverse(chain.begin(), chain.end());
  return chain;
}

RunManifest make_manifest(const CommonOptions& opts,
                          const LengthSweepResult& sweep) {
  RunManifest manifest;
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.interaction = opts.interaction;
  manifest.config = to_config(opts);
  manifest.eval_realizations = opts.eval_realizations;
  manifest.timestamp = iso8601_utc_now();
  for (const SweepRow& row : sweep.rows) {
    manifest.iterations_per_length.emplace_back(row.n_steps, row.iterations);
  }
  return manifest;
}

void print_sweep(const LengthSweepResult& sweep) {
  std::cout << "  n   in_error     oos_error    pe_error     iters  conv\n";
  for (const SweepRow& row : sweep.rows) {
    std::printf("%3d   %-11.5g  %-11.5g  %-11.3g  %5d  %s\n", row.n_steps,
                row.in_sample_error, row.out_of_sample_error, row.pe_error,
                row.iterations, row.converged ? "yes" : "no");
    if (!row.note.empty()) {
      std::cout << "      failed: " << row.note << '\n';
    }
  }
}

int write_outputs(const CommonOptions& opts, const LengthSweepResult& sweep) {
  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  write_sweep_csv(dir / "sweep.csv", sweep.rows);
  save_solution_archive(dir / "solutions.json", sweep.solutions);
  save_manifest(dir / "manifest.json", make_manifest(opts, sweep));
  std::cout << "wrote " << (dir / "sweep.csv").string() << ", solutions.json, "
            << "manifest.json\n";
  return 0;
}

OptimizerOptions to_optimizer_options(const CommonOptions& opts, int restarts) {
  OptimizerOptions out;
  out.eval_realizations = opts.eval_realizations;
  out.restarts = restarts;
  return out;
}

int run_sweep_command(const CommonOptions& opts, const std::string& lengths_text,
                      int restarts) {
  const LengthSweepResult sweep =
      run_length_sweep(to_kind(opts.interaction), parse_lengths(lengths_text),
                       to_config(opts), to_optimizer_options(opts, restarts));
  print_sweep(sweep);
  return write_outputs(opts, sweep);
}

int run_optimize_command(const CommonOptions& opts, int n, int restarts) {
  std::vector<int> chain = divisor_chain(n);
  const LengthSweepResult sweep =
      run_length_sweep(to_kind(opts.interaction), chain, to_config(opts),
                       to_optimizer_options(opts, restarts));
  print_sweep(sweep);
  return write_outputs(opts, sweep);
}

int run_sigma_grid_command(const CommonOptions& opts, std::string solutions_path,
                           int pick_n, const std::string& logical_axis,
                           const std::string& leakage_axis, int grid_m,
                           std::uint64_t grid_seed) {
  if (solutions_path.empty()) {
    solutions_path = (std::filesystem::path(opts.out_dir) / "solutions.json").string();
  }
  const std::vector<SolutionRecord> records = load_solution_archive(solutions_path);
  if (records.empty()) {
    throw std::runtime_error("archive " + solutions_path + " holds no solutions");
  }
  const SolutionRecord* chosen = nullptr;
  for (const SolutionRecord& record : records) {
    if (pick_n > 0 ? record.n_steps == pick_n
                   : (chosen == nullptr || record.n_steps > chosen->n_steps)) {
      chosen = &record;
    }
  }
  if (chosen == nullptr) {
    throw std::runtime_error("no archived solution with n=" + std::to_string(pick_n));
  }
  NoiseConfig base = chosen->config;
  const std::vector<SigmaGridRow> rows = run_sigma_grid(
      record_to_params(*chosen), base, parse_axis(logical_axis),
      parse_axis(leakage_axis), grid_m, grid_seed);
  const std::filesystem::path dir(opts.out_dir);
  std::filesystem::create_directories(dir);
  write_sigma_grid_csv(dir / "sigma_grid.csv", rows);
  for (const SigmaGridRow& row : rows) {
    std::printf("sigma_logical=%-8.4g sigma_leakage=%-8.4g gate_error=%.6g\n",
                row.sigma_logical, row.sigma_leakage, row.gate_error);
  }
  std::cout << "wrote " << (dir / "sigma_grid.csv").string() << '\n';
  return 0;
}

int run_verify_command(const CommonOptions& opts, std::string solutions_path) {
  if (solutions_path.empty()) {
    solutions_path = (std::filesystem::path(opts.out_dir) / "solutions.json").string();
  }
  const std::vector<SolutionRecord> records = load_solution_archive(solutions_path);
  const std::vector<VerifyRow> rows = verify_archive(records);
  bool all_ok = true;
  for (const VerifyRow& row : rows) {
    std::printf("n=%-3d stored_in=%.12g recomputed_in=%.12g stored_oos=%.12g "
                "recomputed_oos=%.12g %s\n",
                row.n_steps, row.stored_in_sample, row.recomputed_in_sample,
                row.stored_out_of_sample, row.recomputed_out_of_sample,
                row.ok ? "ok" : "MISMATCH");
    all_ok = all_ok && row.ok;
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Composite two-qutrit entangling sequences: optimization, "
               "noise sweeps and solution archives"};
  app.require_subcommand(1);

  CommonOptions opts;
  int n = 16;
  int restarts = 0;
  std::string lengths_text = "1-16";
  std::string solutions_path;
  int pick_n = 0;
  std::string logical_axis = "0,0.0325,0.065,0.0975,0.13";
  std::string leakage_axis = "0,0.0325,0.065,0.0975,0.13";
  int grid_m = 1000;
  std::uint64_t grid_seed = 424242;
  int coefficient_sets = 1000;
  int angle_sets = 1000;

  CLI::App* optimize = app.add_subcommand(
      "optimize", "Optimize one length (solving its divisor chain first)");
  add_common_options(optimize, opts);
  optimize->add_option("--n", n, "Sequence length")->required()->check(CLI::PositiveNumber);
  optimize->add_option("--restarts", restarts, "Extra randomized restarts")
      ->check(CLI::NonNegativeNumber);

  CLI::App* sweep = app.add_subcommand("sweep", "Optimize a range of lengths");
  add_common_options(sweep, opts);
  sweep->add_option("--lengths", lengths_text, "Lengths, e.g. 1-16 or 1,2,4,8")
      ->capture_default_str();
  sweep->add_option("--restarts", restarts, "Extra randomized restarts")
      ->check(CLI::NonNegativeNumber);

  CLI::App* grid = app.add_subcommand(
      "sigma-grid", "Noise-sensitivity grid of an archived solution");
  add_common_options(grid, opts);
  grid->add_option("--solutions", solutions_path, "Archive path (default <out>/solutions.json)");
  grid->add_option("--n", pick_n, "Length to pick (default: largest archived)");
  grid->add_option("--logical-axis", logical_axis, "Comma-separated sigma values")
      ->capture_default_str();
  grid->add_option("--leakage-axis", leakage_axis, "Comma-separated sigma values")
      ->capture_default_str();
  grid->add_option("--grid-m", grid_m, "Realizations per grid cell")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  grid->add_option("--grid-seed", grid_seed, "Base seed for grid cells")
      ->capture_default_str();

  CLI::App* baseline = app.add_subcommand(
      "baseline", "Mean gate error with all-identity rotations");
  add_common_options(baseline, opts);
  baseline->add_option("--n", n, "Sequence length")->capture_default_str();

  CLI::App* local_fid = app.add_subcommand(
      "local-fidelity", "Mean fidelity of one noisy local rotation");
  add_common_options(local_fid, opts);
  local_fid->add_option("--coefficient-sets", coefficient_sets, "Error-draw count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  local_fid->add_option("--angle-sets", angle_sets, "Angle-draw count")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* verify = app.add_subcommand(
      "verify", "Recompute archived errors from their stored configs");
  add_common_options(verify, opts);
  verify->add_option("--solutions", solutions_path, "Archive path (default <out>/solutions.json)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (optimize->parsed()) {
      return run_optimize_command(opts, n, restarts);
    }
    if (sweep->parsed()) {
      return run_sweep_command(opts, lengths_text, restarts);
    }
    if (grid->parsed()) {
      return run_sigma_grid_command(opts, solutions_path, pick_n, logical_axis,
                                    leakage_axis, grid_m, grid_seed);
    }
    if (baseline->parsed()) {
      const double error = run_baseline(to_kind(opts.interaction), n, to_config(opts));
      std::printf("baseline n=%d mean_gate_error=%.6g\n", n, error);
      return 0;
    }
    if (local_fid->parsed()) {
      const double fidelity = local_rotation_fidelity(
          opts.sigma_local, coefficient_sets, angle_sets, opts.seed);
      std::printf("local rotation fidelity=%.8g (sigma_local=%g)\n", fidelity,
                  opts.sigma_local);
      return 0;
    }
    if (verify->parsed()) {
      return run_verify_command(opts, solutions_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
