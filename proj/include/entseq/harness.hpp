#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entseq/archive.hpp"
#include "entseq/noise.hpp"
#include "entseq/optimizer.hpp"
#include "entseq/sequence.hpp"

namespace entseq {

struct SweepRow {
  int n_steps = 0;
  double in_sample_error = 0.0;
  double out_of_sample_error = 0.0;
  double pe_error = 0.0;  // in-sample PE error of the solution
  int iterations = 0;
  bool converged = false;
  std::string note;  // failure message when a length errored out
};

struct LengthSweepResult {
  std::vector<SweepRow> rows;
  std::vector<SolutionRecord> solutions;
};

// Optimizes each length in ascending order, feeding solved lengths to the
// warm start of later ones.  Per-length seeds are derived as config.seed +
// 1000 * n so every length gets an independent ensemble.  A length that
// throws is recorded in its row (note + NaN errors) and the sweep continues.
LengthSweepResult run_length_sweep(InteractionKind kind,
                                   const std::vector<int>& lengths,
                                   const NoiseConfig& config,
                                   const OptimizerOptions& opts);

struct SigmaGridRow {
  double sigma_logical = 0.0;
  double sigma_leakage = 0.0;
  double gate_error = 0.0;
};

// Mean gate error of a fixed sequence on fresh ensembles over the direct
// product of the two sigma axes (logical-major row order).  Cell seeds are
// seed + row-major cell index.
std::vector<SigmaGridRow> run_sigma_grid(const SequenceParams& seq,
                                         const NoiseConfig& base,
                                         const std::vector<double>& logical_axis,
                                         const std::vector<double>& leakage_axis,
                                         int realizations, std::uint64_t seed);

// Mean gate error of the all-identity-rotation sequence of n_steps slices.
double run_baseline(InteractionKind kind, int n_steps, const NoiseConfig& config);

// CSV writers with fixed 17-significant-digit formatting, so identical
// inputs produce byte-identical files.
void write_sweep_csv(const std::filesystem::path& path,
                     const std::vector<SweepRow>& rows);
void write_sigma_grid_csv(const std::filesystem::path& path,
                          const std::vector<SigmaGridRow>& rows);

}  // namespace entseq
