#include "entseq/archive.hpp"

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace entseq {

namespace {

std::string interaction_name(InteractionKind kind) {
  return kind == InteractionKind::ZZ ? "zz" : "xxyy";
}

InteractionKind parse_interaction_name(const std::string& name) {
  if (name == "zz") return InteractionKind::ZZ;
  if (name == "xxyy") return InteractionKind::XXplusYY;
  throw std::invalid_argument("unknown interaction '" + name + "'");
}

}  // namespace

void to_json(nlohmann::json& j, const NoiseConfig& c) {
  j = nlohmann::json{{"sigma_logical", c.sigma_logical},
                     {"sigma_leakage", c.sigma_leakage},
                     {"sigma_local", c.sigma_local},
                     {"local_enabled", c.local_enabled},
                     {"virtual_z", c.virtual_z},
                     {"shared_amplitude_error", c.shared_amplitude_error},
                     {"gamma_in_leakage_magnitude", c.gamma_in_leakage_magnitude},
                     {"realizations", c.realizations},
                     {"seed", c.seed}};
}

void from_json(const nlohmann::json& j, NoiseConfig& c) {
  j.at("sigma_logical").get_to(c.sigma_logical);
  j.at("sigma_leakage").get_to(c.sigma_leakage);
  j.at("sigma_local").get_to(c.sigma_local);
  j.at("local_enabled").get_to(c.local_enabled);
  j.at("virtual_z").get_to(c.virtual_z);
  j.at("shared_amplitude_error").get_to(c.shared_amplitude_error);
  j.at("gamma_in_leakage_magnitude").get_to(c.gamma_in_leakage_magnitude);
  j.at("realizations").get_to(c.realizations);
  j.at("seed").get_to(c.seed);
}

void to_json(nlohmann::json& j, const SolutionRecord& r) {
  j = nlohmann::json{{"interaction", interaction_name(r.interaction)},
                     {"n_steps", r.n_steps},
                     {"angles", r.angles},
                     {"config", r.config},
                     {"eval_realizations", r.eval_realizations},
                     {"j_value", r.j_value},
                     {"in_sample_gate_error", r.in_sample_gate_error},
                     {"in_sample_pe_error", r.in_sample_pe_error},
                     {"out_of_sample_gate_error", r.out_of_sample_gate_error},
                     {"out_of_sample_pe_error", r.out_of_sample_pe_error},
                     {"iterations", r.iterations},
                     {"converged", r.converged}};
}

void from_json(const nlohmann::json& j, SolutionRecord& r) {
  r.interaction = parse_interaction_name(j.at("interaction").get<std::string>());
  j.at("n_steps").get_to(r.n_steps);
  j.at("angles").get_to(r.angles);
  j.at("config").get_to(r.config);
  j.at("eval_realizations").get_to(r.eval_realizations);
  j.at("j_value").get_to(r.j_value);
  j.at("in_sample_gate_error").get_to(r.in_sample_gate_error);
  j.at("in_sample_pe_error").get_to(r.in_sample_pe_error);
  j.at("out_of_sample_gate_error").get_to(r.out_of_sample_gate_error);
  j.at("out_of_sample_pe_error").get_to(r.out_of_sample_pe_error);
  j.at("iterations").get_to(r.iterations);
  j.at("converged").get_to(r.converged);
}

void to_json(nlohmann::json& j, const RunManifest& m) {
  nlohmann::json iterations = nlohmann::json::array();
  for (const auto& [n, count] : m.iterations_per_length) {
    iterations.push_back({{"n_steps", n}, {"iterations", count}});
  }
  j = nlohmann::json{{"schema_version", m.schema_version},
                     {"rng_algorithm", m.rng_algorithm},
                     {"interaction", m.interaction},
                     {"config", m.config},
                     {"eval_realizations", m.eval_realizations},
                     {"timestamp", m.timestamp},
                     {"iterations_per_length", iterations}};
}

void from_json(const nlohmann::json& j, RunManifest& m) {
  j.at("schema_version").get_to(m.schema_version);
  j.at("rng_algorithm").get_to(m.rng_algorithm);
  j.at("interaction").get_to(m.interaction);
  j.at("config").get_to(m.config);
  j.at("eval_realizations").get_to(m.eval_realizations);
  j.at("timestamp").get_to(m.timestamp);
  m.iterations_per_length.clear();
  for (const auto& entry : j.at("iterations_per_length")) {
    m.iterations_per_length.emplace_back(entry.at("n_steps").get<int>(),
                                         entry.at("iterations").get<int>());
  }
}

SequenceParams record_to_params(const SolutionRecord& record) {
  if (record.n_steps < 1 ||
      record.angles.size() != static_cast<std::size_t>(6 * record.n_steps)) {
    throw std::invalid_argument("record_to_params: angle count does not match n_steps");
  }
  Vector x(record.angles.size());
  for (std::size_t i = 0; i < record.angles.size(); ++i) {
    x[static_cast<Eigen::Index>(i)] = record.angles[i];
  }
  return unflatten(record.interaction, record.n_steps, x);
}

SolutionRecord make_record(const OptimizationResult& result,
                           const NoiseConfig& config, int eval_realizations) {
  SolutionRecord record;
  record.interaction = result.params.interaction;
  record.n_steps = result.params.n_steps;
  const Vector x = flatten(result.params);
  record.angles.assign(x.data(), x.data() + x.size());
  record.config = config;
  record.eval_realizations = eval_realizations;
  record.j_value = result.j_value;
  record.in_sample_gate_error = result.in_sample_gate_error;
  record.in_sample_pe_error = result.in_sample_pe_error;
  record.out_of_sample_gate_error = result.out_of_sample_gate_error;
  record.out_of_sample_pe_error = result.out_of_sample_pe_error;
  record.iterations = result.iterations;
  record.converged = result.converged;
  return record;
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                utc.tm_year + 1900, utc.tm_mon + 1, utc.tm_mday, utc.tm_hour,
                utc.tm_min, utc.tm_sec);
  return buf;
}

namespace {

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open " + path.string());
  }
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("failed to parse " + path.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot open " + path.string() + " for writing");
  }
  out << doc.dump(2) << '\n';
  if (!out) {
    throw std::runtime_error("failed while writing " + path.string());
  }
}

void check_schema(const nlohmann::json& doc, const std::filesystem::path& path) {
  const int version = doc.at("schema_version").get<int>();
  if (version != kArchiveSchemaVersion) {
    throw std::runtime_error(path.string() + ": unsupported schema version " +
                             std::to_string(version));
  }
}

}  // namespace

void save_solution_archive(const std::filesystem::path& path,
                           const std::vector<SolutionRecord>& records) {
  nlohmann::json doc;
  doc["schema_version"] = kArchiveSchemaVersion;
  doc["solutions"] = records;
  write_json_file(path, doc);
}

std::vector<SolutionRecord> load_solution_archive(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json_file(path);
  try {
    check_schema(doc, path);
    return doc.at("solutions").get<std::vector<SolutionRecord>>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed archive " + path.string() + ": " + e.what());
  }
}

void save_manifest(const std::filesystem::path& path, const RunManifest& manifest) {
  write_json_file(path, manifest);
}

RunManifest load_manifest(const std::filesystem::path& path) {
  const nlohmann::json doc = read_json_file(path);
  try {
    check_schema(doc, path);
    return doc.get<RunManifest>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("malformed manifest " + path.string() + ": " + e.what());
  }
}

std::vector<VerifyRow> verify_archive(const std::vector<SolutionRecord>& records,
                                      double tol) {
  std::vector<VerifyRow> rows;
  rows.reserve(records.size());
  for (const SolutionRecord& record : records) {
    const SequenceParams params = record_to_params(record);
    const NoiseEnsemble train = sample_ensemble(record.config, record.n_steps);
    NoiseConfig eval_config = record.config;
    eval_config.seed = record.config.seed + 1;
    eval_config.realizations = record.eval_realizations;
    const NoiseEnsemble eval = sample_ensemble(eval_config, record.n_steps);
    const ErrorPair in_sample = mean_errors(params, train);
    const ErrorPair out_of_sample = mean_errors(params, eval);
    VerifyRow row;
    row.n_steps = record.n_steps;
    row.stored_in_sample = record.in_sample_gate_error;
    row.recomputed_in_sample = in_sample.gate_error;
    row.stored_out_of_sample = record.out_of_sample_gate_error;
    row.recomputed_out_of_sample = out_of_sample.gate_error;
    row.ok = std::abs(row.stored_in_sample - row.recomputed_in_sample) <= tol &&
             std::abs(row.stored_out_of_sample - row.recomputed_out_of_sample) <= tol &&
             std::abs(record.in_sample_pe_error - in_sample.pe_error) <= tol &&
             std::abs(record.out_of_sample_pe_error - out_of_sample.pe_error) <= tol;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace entseq
