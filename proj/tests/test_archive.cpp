#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "entseq/archive.hpp"
#include "entseq/optimizer.hpp"
#include "entseq/rng.hpp"
#include "entseq/sequence.hpp"

using namespace entseq;
namespace fs = std::filesystem;

namespace {

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path temp_file(const std::string& name) {
  return fs::temp_directory_path() / name;
}

// A quick genuine optimization so the record's stored errors really are
// reproducible from its config.
SolutionRecord small_record() {
  NoiseConfig config;
  config.realizations = 5;
  config.seed = 71;
  OptimizerOptions opts;
  opts.max_iterations = 3;
  opts.eval_realizations = 10;
  const OptimizationResult result = optimize_sequence(
      InteractionKind::ZZ, 1, config, opts, std::map<int, SequenceParams>{});
  return make_record(result, config, opts.eval_realizations);
}

}  // namespace

TEST_CASE("record_to_params restores the flattened angles") {
  const SolutionRecord record = small_record();
  REQUIRE(record.n_steps == 1);
  REQUIRE(record.angles.size() == 6);
  const SequenceParams params = record_to_params(record);
  CHECK(params.interaction == record.interaction);
  CHECK(params.n_steps == 1);
  const Vector x = flatten(params);
  for (int i = 0; i < 6; ++i) {
    CHECK(x[i] == record.angles[static_cast<std::size_t>(i)]);
  }

  SolutionRecord bad = record;
  bad.angles.pop_back();
  CHECK_THROWS_AS(record_to_params(bad), std::invalid_argument);
}

TEST_CASE("solution archive round-trips exactly and writes stable bytes") {
  const SolutionRecord record = small_record();
  std::vector<SolutionRecord> records = {record};

  const fs::path path = temp_file("entseq_test_archive.json");
  save_solution_archive(path, records);
  const std::vector<SolutionRecord> loaded = load_solution_archive(path);
  REQUIRE(loaded.size() == 1);
  const SolutionRecord& r = loaded[0];
  CHECK(r.interaction == record.interaction);
  CHECK(r.n_steps == record.n_steps);
  CHECK(r.angles == record.angles);
  CHECK(r.config.sigma_logical == record.config.sigma_logical);
  CHECK(r.config.sigma_leakage == record.config.sigma_leakage);
  CHECK(r.config.sigma_local == record.config.sigma_local);
  CHECK(r.config.local_enabled == record.config.local_enabled);
  CHECK(r.config.virtual_z == record.config.virtual_z);
  CHECK(r.config.realizations == record.config.realizations);
  CHECK(r.config.seed == record.config.seed);
  CHECK(r.eval_realizations == record.eval_realizations);
  CHECK(r.j_value == record.j_value);
  CHECK(r.in_sample_gate_error == record.in_sample_gate_error);
  CHECK(r.in_sample_pe_error == record.in_sample_pe_error);
  CHECK(r.out_of_sample_gate_error == record.out_of_sample_gate_error);
  CHECK(r.out_of_sample_pe_error == record.out_of_sample_pe_error);
  CHECK(r.iterations == record.iterations);
  CHECK(r.converged == record.converged);

  const std::string first = read_bytes(path);
  save_solution_archive(path, records);
  CHECK(read_bytes(path) == first);
  fs::remove(path);
}

TEST_CASE("archive readers reject unknown schema versions and missing files") {
  const fs::path path = temp_file("entseq_test_bad_schema.json");
  {
    std::ofstream out(path);
    out << "{\"schema_version\": 99, \"solutions\": []}";
  }
  try {
    load_solution_archive(path);
    FAIL("expected a schema rejection");
  } catch (const std::exception& e) {
    CHECK(std::string(e.what()).find(path.filename().string()) !=
          std::string::npos);
  }
  fs::remove(path);

  CHECK_THROWS(load_solution_archive(temp_file("entseq_does_not_exist.json")));
}

TEST_CASE("manifest round-trips every field") {
  RunManifest manifest;
  manifest.rng_algorithm = kRngAlgorithm;
  manifest.interaction = "zz";
  manifest.config.sigma_logical = 0.01;
  manifest.config.realizations = 7;
  manifest.config.seed = 99;
  manifest.eval_realizations = 123;
  manifest.timestamp = "2025-05-06T07:08:09Z";
  manifest.iterations_per_length = {{1, 5}, {2, 17}};

  const fs::path path = temp_file("entseq_test_manifest.json");
  save_manifest(path, manifest);
  const RunManifest loaded = load_manifest(path);
  CHECK(loaded.schema_version == kArchiveSchemaVersion);
  CHECK(loaded.rng_algorithm == manifest.rng_algorithm);
  CHECK(loaded.interaction == manifest.interaction);
  CHECK(loaded.config.sigma_logical == manifest.config.sigma_logical);
  CHECK(loaded.config.realizations == manifest.config.realizations);
  CHECK(loaded.config.seed == manifest.config.seed);
  CHECK(loaded.eval_realizations == manifest.eval_realizations);
  CHECK(loaded.timestamp == manifest.timestamp);
  CHECK(loaded.iterations_per_length == manifest.iterations_per_length);
  fs::remove(path);
}

TEST_CASE("timestamps are ISO 8601 UTC") {
  const std::string stamp = iso8601_utc_now();
  const std::regex pattern(R"(\d{4}-\d{2}-\d{2}T\d{2}:\d{2}:\d{2}Z)");
  CHECK(std::regex_match(stamp, pattern));
}

TEST_CASE("verify_archive accepts honest records and flags tampered ones") {
  const SolutionRecord record = small_record();
  const std::vector<VerifyRow> ok = verify_archive({record});
  REQUIRE(ok.size() == 1);
  CHECK(ok[0].ok);
  CHECK(ok[0].n_steps == 1);
  CHECK(ok[0].stored_in_sample == ok[0].recomputed_in_sample);
  CHECK(ok[0].stored_out_of_sample == ok[0].recomputed_out_of_sample);

  SolutionRecord tampered = record;
  tampered.in_sample_gate_error += 1e-3;
  const std::vector<VerifyRow> bad = verify_archive({tampered});
  REQUIRE(bad.size() == 1);
  CHECK_FALSE(bad[0].ok);
}
