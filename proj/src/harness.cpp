#include "entseq/harness.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace entseq {

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

LengthSweepResult run_length_sweep(InteractionKind kind,
                                   const std::vector<int>& lengths,
                                   const NoiseConfig& config,
                                   const OptimizerOptions& opts) {
  if (lengths.empty()) {
    throw std::invalid_argument("run_length_sweep: no lengths given");
  }
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1 || (i > 0 && lengths[i] <= lengths[i - 1])) {
      throw std::invalid_argument(
          "run_length_sweep: lengths must be positive and strictly ascending");
    }
  }
  LengthSweepResult result;
  std::map<int, SequenceParams> solved;
  for (const int n : lengths) {
    NoiseConfig length_config = config;
    length_config.seed = config.seed + 1000 * static_cast<std::uint64_t>(n);
    SweepRow row;
    row.n_steps = n;
    try {
      const OptimizationResult opt =
          optimize_sequence(kind, n, length_config, opts, solved);
      solved[n] = opt.params;
      row.in_sample_error = opt.in_sample_gate_error;
      row.out_of_sample_error = opt.out_of_sample_gate_error;
      row.pe_error = opt.in_sample_pe_error;
      row.iterations = opt.iterations;
      row.converged = opt.converged;
      result.solutions.push_back(
          make_record(opt, length_config, opts.eval_realizations));
    } catch (const std::exception& e) {
      row.in_sample_error = std::numeric_limits<double>::quiet_NaN();
      row.out_of_sample_error = std::numeric_limits<double>::quiet_NaN();
      row.pe_error = std::numeric_limits<double>::quiet_NaN();
      row.converged = false;
      row.note = e.what();
    }
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::vector<SigmaGridRow> run_sigma_grid(const SequenceParams& seq,
                                         const NoiseConfig& base,
                                         const std::vector<double>& logical_axis,
                                         const std::vector<double>& leakage_axis,
                                         int realizations, std::uint64_t seed) {
  if (logical_axis.empty() || leakage_axis.empty()) {
    throw std::invalid_argument("run_sigma_grid: empty axis");
  }
  std::vector<SigmaGridRow> rows;
  rows.reserve(logical_axis.size() * leakage_axis.size());
  std::uint64_t cell = 0;
  for (const double sigma_logical : logical_axis) {
    for (const double sigma_leakage : leakage_axis) {
      NoiseConfig cell_config = base;
      cell_config.sigma_logical = sigma_logical;
      cell_config.sigma_leakage = sigma_leakage;
      cell_config.realizations = realizations;
      cell_config.seed = seed + cell;
      const NoiseEnsemble ensemble = sample_ensemble(cell_config, seq.n_steps);
      rows.push_back(
          {sigma_logical, sigma_leakage, mean_errors(seq, ensemble).gate_error});
      ++cell;
    }
  }
  return rows;
}

double run_baseline(InteractionKind kind, int n_steps, const NoiseConfig& config) {
  const NoiseEnsemble ensemble = sample_ensemble(config, n_steps);
  return mean_errors(SequenceParams::zeros(kind, n_steps), ensemble).gate_error;
}

void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "n,in_sample_error,out_of_sample_error,pe_error,iterations,converged\n";
  for (const SweepRow& row : rows) {
    out << row.n_steps << ',' << format_double(row.in_sample_error) << ','
        << format_double(row.out_of_sample_error) << ','
        << format_double(row.pe_error) << ',' << row.iterations << ','
        << (row.converged ? 1 : 0) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed while writing " + path.string());
  }
}

void write_sigma_grid_csv(const std::filesystem::path& path,
                          const std::vector<SigmaGridRow>& rows) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << "sigma_logical,sigma_leakage,gate_error\n";
  for (const SigmaGridRow& row : rows) {
    out << format_double(row.sigma_logical) << ','
        << format_double(row.sigma_leakage) << ','
        << format_double(row.gate_error) << '\n';
  }
  if (!out) {
    throw std::runtime_error("failed while writing " + path.string());
  }
}

}  // namespace entseq
