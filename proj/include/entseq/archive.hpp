#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "entseq/noise.hpp"
#include "entseq/optimizer.hpp"
#include "entseq/sequence.hpp"

namespace entseq {

inline constexpr int kArchiveSchemaVersion = 1;

// One archived optimization outcome, self-contained: the solved angles plus
// everything needed to regenerate both ensembles and reproduce the reported
// errors exactly.
struct SolutionRecord {
  InteractionKind interaction = InteractionKind::ZZ;
  int n_steps = 0;
  std::vector<double> angles;  // step-major flattening
  NoiseConfig config;
  int eval_realizations = 1000;
  double j_value = 0.0;
  double in_sample_gate_error = 0.0;
  double in_sample_pe_error = 0.0;
  double out_of_sample_gate_error = 0.0;
  double out_of_sample_pe_error = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Run-level provenance written next to every output set.
struct RunManifest {
  int schema_version = kArchiveSchemaVersion;
  std::string rng_algorithm;
  std::string interaction;
  NoiseConfig config;
  int eval_realizations = 1000;
  std::string timestamp;  // ISO 8601 UTC
  std::vector<std::pair<int, int>> iterations_per_length;
};

SequenceParams record_to_params(const SolutionRecord& record);
SolutionRecord make_record(const OptimizationResult& result,
                           const NoiseConfig& config, int eval_realizations);

// Current time as "YYYY-MM-DDTHH:MM:SSZ".
std::string iso8601_utc_now();

// JSON round-trip.  Readers reject unknown schema versions and report the
// offending file in the exception message.
void save_solution_archive(const std::filesystem::path& path,
                           const std::vector<SolutionRecord>& records);
std::vector<SolutionRecord> load_solution_archive(const std::filesystem::path& path);
void save_manifest(const std::filesystem::path& path, const RunManifest& manifest);
RunManifest load_manifest(const std::filesystem::path& path);

struct VerifyRow {
  int n_steps = 0;
  double stored_in_sample = 0.0;
  double recomputed_in_sample = 0.0;
  double stored_out_of_sample = 0.0;
  double recomputed_out_of_sample = 0.0;
  bool ok = false;
};

// Regenerates both ensembles of each record from its stored config and
// recomputes the errors; ok requires agreement within tol.
std::vector<VerifyRow> verify_archive(const std::vector<SolutionRecord>& records,
                                      double tol = 1e-10);

}  // namespace entseq
