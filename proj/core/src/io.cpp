#include "mgbench/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json.hpp"

#include "mgbench/errors.hpp"

namespace mgbench {

namespace {

using nlohmann::json;

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(what + ": " + e.what());
  }
}

const json& require(const json& j, const std::string& key,
                    const std::string& where) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw ConfigError(where + ": missing field '" + key + "'");
  }
  return *it;
}

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& item : j.items()) {
    bool known = false;
    for (const char* key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) {
      throw ConfigError(where + ": unknown field '" + item.key() + "'");
    }
  }
}

long get_integer(const json& j, const std::string& key,
                 const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number_integer()) {
    throw ConfigError(where + ": field '" + key + "' must be an integer");
  }
  return v.get<long>();
}

double get_number(const json& j, const std::string& key,
                  const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_number()) {
    throw ConfigError(where + ": field '" + key + "' must be a number");
  }
  return v.get<double>();
}

std::string get_string(const json& j, const std::string& key,
                       const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_string()) {
    throw ConfigError(where + ": field '" + key + "' must be a string");
  }
  return v.get<std::string>();
}

std::vector<int> get_int_list(const json& j, const std::string& key,
                              const std::string& where) {
  const json& v = require(j, key, where);
  if (!v.is_array()) {
    throw ConfigError(where + ": field '" + key + "' must be an array");
  }
  std::vector<int> out;
  for (const json& e : v) {
    if (!e.is_number_integer()) {
      throw ConfigError(where + ": field '" + key +
                        "' must contain integers only");
    }
    out.push_back(e.get<int>());
  }
  return out;
}

json real_matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd real_matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw ConfigError(where + ": rows must be nonempty arrays");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(where + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_number()) {
        throw ConfigError(where + ": matrix entries must be numbers");
      }
      m(r, c) = e.get<double>();
    }
  }
  return m;
}

json complex_matrix_json(const Eigen::MatrixXcd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXcd complex_matrix_from_json(const json& j,
                                          const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(where + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  if (!j[0].is_array() || j[0].empty()) {
    throw ConfigError(where + ": rows must be nonempty arrays");
  }
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Eigen::MatrixXcd m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(where + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() ||
          !e[1].is_number()) {
        throw ConfigError(where + ": entries must be [re, im] pairs");
      }
      m(r, c) = {e[0].get<double>(), e[1].get<double>()};
    }
  }
  return m;
}

NoiseGranularity granularity_from_json(const json& j,
                                       const std::string& where) {
  if (!j.contains("granularity")) return NoiseGranularity::PerElement;
  const std::string g = get_string(j, "granularity", where);
  if (g == "element") return NoiseGranularity::PerElement;
  if (g == "gate") return NoiseGranularity::PerGate;
  throw ConfigError(where + ": granularity must be 'element' or 'gate'");
}

const char* granularity_name(NoiseGranularity g) {
  return g == NoiseGranularity::PerElement ? "element" : "gate";
}

NoiseModel noise_from_json(const json& j, int n, const std::string& where);

json noise_to_json(const NoiseModel& noise) {
  json j;
  if (std::holds_alternative<NoiseNone>(noise)) {
    j["kind"] = "none";
    return j;
  }
  if (const auto* ch = std::get_if<DenseChannel>(&noise)) {
    j["kind"] = "kraus";
    j["granularity"] = granularity_name(ch->granularity);
    json ops = json::array();
    for (const auto& k : ch->kraus) ops.push_back(complex_matrix_json(k));
    j["operators"] = std::move(ops);
    return j;
  }
  if (const auto* mix = std::get_if<GaussianB>(&noise)) {
    j["kind"] = "mixture";
    j["weights"] = mix->weights;
    json rots = json::array();
    for (const auto& r : mix->rotations) rots.push_back(real_matrix_json(r));
    j["rotations"] = std::move(rots);
    return j;
  }
  const auto& gd = std::get<GateDependent>(noise);
  j["kind"] = "gate_dependent";
  j["base"] = noise_to_json(NoiseModel{gd.base});
  j["delta"] = gd.delta;
  return j;
}

NoiseModel noise_from_json(const json& j, int n, const std::string& where) {
  if (!j.is_object()) {
    throw ConfigError(where + ": noise spec must be an object");
  }
  const std::string kind = get_string(j, "kind", where);
  if (kind == "none") {
    reject_unknown(j, {"kind"}, where);
    return NoiseNone{};
  }
  if (kind == "depolarizing") {
    reject_unknown(j, {"kind", "p", "granularity"}, where);
    return depolarizing_channel(n, get_number(j, "p", where),
                                granularity_from_json(j, where));
  }
  if (kind == "amplitude_damping") {
    reject_unknown(j, {"kind", "qubit", "strength", "granularity"}, where);
    return amplitude_damping_channel(
        n, static_cast<int>(get_integer(j, "qubit", where)),
        get_number(j, "strength", where), granularity_from_json(j, where));
  }
  if (kind == "kraus") {
    reject_unknown(j, {"kind", "operators", "granularity"}, where);
    const json& ops = require(j, "operators", where);
    if (!ops.is_array() || ops.empty()) {
      throw ConfigError(where + ": field 'operators' must be a nonempty array");
    }
    DenseChannel channel;
    channel.n = n;
    channel.granularity = granularity_from_json(j, where);
    for (const json& op : ops) {
      channel.kraus.push_back(
          complex_matrix_from_json(op, where + ".operators"));
    }
    return channel;
  }
  if (kind == "mixture") {
    reject_unknown(j, {"kind", "weights", "rotations"}, where);
    const json& weights = require(j, "weights", where);
    const json& rotations = require(j, "rotations", where);
    if (!weights.is_array() || !rotations.is_array() ||
        weights.size() != rotations.size() || weights.empty()) {
      throw ConfigError(
          where + ": 'weights' and 'rotations' must be equal-length arrays");
    }
    GaussianB mix;
    for (const json& w : weights) {
      if (!w.is_number()) {
        throw ConfigError(where + ": weights must be numbers");
      }
      mix.weights.push_back(w.get<double>());
    }
    for (const json& r : rotations) {
      mix.rotations.push_back(
          real_matrix_from_json(r, where + ".rotations"));
    }
    return mix;
  }
  if (kind == "sign_mixture") {
    reject_unknown(j, {"kind", "frame", "b"}, where);
    const json& b = require(j, "b", where);
    if (!b.is_array()) {
      throw ConfigError(where + ": field 'b' must be an array");
    }
    std::vector<double> contraction;
    for (const json& e : b) {
      if (!e.is_number()) {
        throw ConfigError(where + ": field 'b' must contain numbers");
      }
      contraction.push_back(e.get<double>());
    }
    return gaussian_sign_mixture(
        real_matrix_from_json(require(j, "frame", where), where + ".frame"),
        contraction);
  }
  if (kind == "gate_dependent") {
    reject_unknown(j, {"kind", "base", "delta"}, where);
    NoiseModel base =
        noise_from_json(require(j, "base", where), n, where + ".base");
    const auto* ch = std::get_if<DenseChannel>(&base);
    if (ch == nullptr) {
      throw ConfigError(where + ": 'base' must be a Kraus-style channel");
    }
    return GateDependent{*ch, get_number(j, "delta", where)};
  }
  throw ConfigError(where + ": unknown noise kind '" + kind + "'");
}

const char* gate_kind_name(GateKind kind) {
  switch (kind) {
    case GateKind::ZRot:
      return "zrot";
    case GateKind::XXRot:
      return "xxrot";
    case GateKind::XYRot:
      return "xyrot";
    case GateKind::XFlip:
    default:
      return "xflip";
  }
}

GateKind gate_kind_from_name(const std::string& name,
                             const std::string& where) {
  if (name == "zrot") return GateKind::ZRot;
  if (name == "xxrot") return GateKind::XXRot;
  if (name == "xyrot") return GateKind::XYRot;
  if (name == "xflip") return GateKind::XFlip;
  throw ConfigError(where + ": unknown gate kind '" + name + "'");
}

json circuit_to_json(const GateCircuit& circuit) {
  json j;
  j["n"] = circuit.n;
  json gates = json::array();
  for (const Gate& g : circuit.gates) {
    json entry;
    entry["kind"] = gate_kind_name(g.kind);
    entry["qubit"] = g.qubit;
    entry["angle"] = g.angle;
    gates.push_back(std::move(entry));
  }
  j["gates"] = std::move(gates);
  return j;
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    std::string line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) lines.push_back(std::move(line));
    start = end + 1;
  }
  return lines;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = line.find(',', start);
    if (end == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, end - start));
    start = end + 1;
  }
  return fields;
}

int parse_int_field(const std::string& field, const std::string& where) {
  int value = 0;
  const auto [ptr, ec] =
      std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw ConfigError(where + ": expected an integer, got '" + field + "'");
  }
  return value;
}

double parse_double_field(const std::string& field, const std::string& where) {
  char* end = nullptr;
  const double value = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size() || field.empty()) {
    throw ConfigError(where + ": expected a number, got '" + field + "'");
  }
  return value;
}

}  // namespace

std::string format_double(double value) {
  char buffer[64];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  if (ec != std::errc()) throw NumericError("double formatting failed");
  return std::string(buffer, ptr);
}

ExperimentConfig parse_config(const std::string& text) {
  const json j = parse_json(text, "config");
  if (!j.is_object()) throw ConfigError("config: expected a JSON object");
  reject_unknown(j,
                 {"n", "k_list", "m_list", "sequences", "shots", "exact",
                  "noise", "backend", "seed", "output_dir"},
                 "config");
  ExperimentConfig config;
  config.n = static_cast<int>(get_integer(j, "n", "config"));
  config.k_list = get_int_list(j, "k_list", "config");
  config.m_list = get_int_list(j, "m_list", "config");
  config.sequences = static_cast<int>(get_integer(j, "sequences", "config"));
  if (j.contains("exact")) {
    const json& e = j["exact"];
    if (!e.is_boolean()) {
      throw ConfigError("config: field 'exact' must be a boolean");
    }
    config.exact = e.get<bool>();
  }
  if (j.contains("shots")) {
    config.shots = get_integer(j, "shots", "config");
  } else if (!config.exact) {
    throw ConfigError("config: missing field 'shots' (or set exact = true)");
  }
  if (j.contains("noise")) {
    config.noise = noise_from_json(j["noise"], config.n, "config.noise");
  }
  if (j.contains("backend")) {
    const std::string b = get_string(j, "backend", "config");
    if (b == "auto") {
      config.backend = BackendChoice::Auto;
    } else if (b == "dense") {
      config.backend = BackendChoice::Dense;
    } else if (b == "covariance") {
      config.backend = BackendChoice::Covariance;
    } else {
      throw ConfigError(
          "config: backend must be 'auto', 'dense', or 'covariance'");
    }
  }
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !s.is_number_integer()) {
      throw ConfigError("config: field 'seed' must be an integer");
    }
    if (s.is_number_integer() && !s.is_number_unsigned() &&
        s.get<long>() < 0) {
      throw ConfigError("config: field 'seed' must be nonnegative");
    }
    config.seed = s.get<std::uint64_t>();
  }
  if (j.contains("output_dir")) {
    config.output_dir = get_string(j, "output_dir", "config");
  }
  validate_plan(plan_from_config(config));
  validate_noise(config.noise, config.n);
  return config;
}

std::string config_json(const ExperimentConfig& config) {
  json j;
  j["n"] = config.n;
  j["k_list"] = config.k_list;
  j["m_list"] = config.m_list;
  j["sequences"] = config.sequences;
  j["shots"] = config.shots;
  j["exact"] = config.exact;
  j["noise"] = noise_to_json(config.noise);
  switch (config.backend) {
    case BackendChoice::Dense:
      j["backend"] = "dense";
      break;
    case BackendChoice::Covariance:
      j["backend"] = "covariance";
      break;
    case BackendChoice::Auto:
    default:
      j["backend"] = "auto";
      break;
  }
  j["seed"] = config.seed;
  j["output_dir"] = config.output_dir;
  return j.dump(2) + "\n";
}

RoundPlan plan_from_config(const ExperimentConfig& config) {
  RoundPlan plan;
  plan.n = config.n;
  plan.k_list = config.k_list;
  plan.m_list = config.m_list;
  plan.sequences = config.sequences;
  plan.shots = config.exact ? 1 : config.shots;
  plan.seed = config.seed;
  plan.mode =
      config.exact ? ProtocolMode::SequenceExact : ProtocolMode::Shots;
  return plan;
}

NoiseModel noise_from_json_text(const std::string& text, int n) {
  return noise_from_json(parse_json(text, "noise"), n, "noise");
}

std::string noise_json_text(const NoiseModel& noise) {
  return noise_to_json(noise).dump(2) + "\n";
}

std::string circuit_json(const GateCircuit& circuit) {
  return circuit_to_json(circuit).dump() + "\n";
}

std::string sample_jsonl_line(int index, const OrthogonalElement& element,
                              const GateCircuit& circuit) {
  json j;
  j["index"] = index;
  j["element"] = real_matrix_json(element.matrix());
  j["circuit"] = circuit_to_json(circuit);
  return j.dump();
}

GateCircuit circuit_from_json(const std::string& text) {
  const json j = parse_json(text, "circuit");
  if (!j.is_object()) throw ConfigError("circuit: expected a JSON object");
  reject_unknown(j, {"n", "gates"}, "circuit");
  GateCircuit circuit;
  circuit.n = static_cast<int>(get_integer(j, "n", "circuit"));
  const json& gates = require(j, "gates", "circuit");
  if (!gates.is_array()) {
    throw ConfigError("circuit: field 'gates' must be an array");
  }
  for (const json& g : gates) {
    reject_unknown(g, {"kind", "qubit", "angle"}, "circuit.gates");
    Gate gate;
    gate.kind = gate_kind_from_name(get_string(g, "kind", "circuit.gates"),
                                    "circuit.gates");
    gate.qubit = static_cast<int>(get_integer(g, "qubit", "circuit.gates"));
    gate.angle =
        g.contains("angle") ? get_number(g, "angle", "circuit.gates") : 0.0;
    circuit.gates.push_back(gate);
  }
  validate_circuit(circuit);
  return circuit;
}

std::string batch_jsonl_line(const ShotBatch& batch) {
  json j;
  j["k"] = batch.k;
  j["m"] = batch.m;
  j["sequence"] = batch.sequence_index;
  j["spam_basis"] = batch.spam_basis == SpamBasis::Z ? "Z" : "X";
  j["factor_seeds"] = batch.factor_seeds;
  j["composite"] = real_matrix_json(batch.composite.matrix());
  j["frequencies"] = batch.frequencies;
  j["shots"] = batch.shots;
  j["exact"] = batch.exact;
  return j.dump();
}

std::string fhat_csv(const std::vector<FhatRow>& rows) {
  std::string out = "k,m,f_hat,K,L\n";
  for (const FhatRow& row : rows) {
    out += std::to_string(row.k) + "," + std::to_string(row.m) + "," +
           format_double(row.f_hat) + "," + std::to_string(row.sequences) +
           "," + format_double(row.shots) + "\n";
  }
  return out;
}

std::vector<FhatRow> parse_fhat_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != "k,m,f_hat,K,L") {
    throw ConfigError("f_hat table: expected header 'k,m,f_hat,K,L'");
  }
  std::vector<FhatRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "f_hat table line " + std::to_string(i + 1);
    const std::vector<std::string> fields = split_fields(lines[i]);
    if (fields.size() != 5) {
      throw ConfigError(where + ": expected 5 fields");
    }
    FhatRow row;
    row.k = parse_int_field(fields[0], where);
    row.m = parse_int_field(fields[1], where);
    row.f_hat = parse_double_field(fields[2], where);
    row.sequences = parse_int_field(fields[3], where);
    row.shots = parse_double_field(fields[4], where);
    rows.push_back(row);
  }
  return rows;
}

std::string sequences_csv(const std::vector<SequenceRow>& rows) {
  std::string out = "k,m,sequence,f\n";
  for (const SequenceRow& row : rows) {
    out += std::to_string(row.k) + "," + std::to_string(row.m) + "," +
           std::to_string(row.sequence) + "," + format_double(row.value) +
           "\n";
  }
  return out;
}

std::vector<SequenceRow> parse_sequences_csv(const std::string& text) {
  const std::vector<std::string> lines = split_lines(text);
  if (lines.empty() || lines[0] != "k,m,sequence,f") {
    throw ConfigError("sequence table: expected header 'k,m,sequence,f'");
  }
  std::vector<SequenceRow> rows;
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::string where = "sequence table line " + std::to_string(i + 1);
    const std::vector<std::string> fields = split_fields(lines[i]);
    if (fields.size() != 4) {
      throw ConfigError(where + ": expected 4 fields");
    }
    SequenceRow row;
    row.k = parse_int_field(fields[0], where);
    row.m = parse_int_field(fields[1], where);
    row.sequence = parse_int_field(fields[2], where);
    row.value = parse_double_field(fields[3], where);
    rows.push_back(row);
  }
  return rows;
}

std::string plot_csv(const std::vector<FhatRow>& rows,
                     const std::vector<DecayEstimate>& estimates) {
  std::string out = "k,m,f_hat,fit\n";
  for (const FhatRow& row : rows) {
    double fit = std::numeric_limits<double>::quiet_NaN();
    for (const DecayEstimate& e : estimates) {
      if (e.k == row.k) {
        fit = e.amplitude * std::pow(e.lambda, row.m);
        break;
      }
    }
    out += std::to_string(row.k) + "," + std::to_string(row.m) + "," +
           format_double(row.f_hat) + "," + format_double(fit) + "\n";
  }
  return out;
}

std::string report_json(int n, const std::vector<DecayEstimate>& estimates,
                        const std::optional<FidelityReport>& report) {
  json j;
  j["n"] = n;
  json list = json::array();
  std::vector<bool> present(static_cast<std::size_t>(2 * n + 1), false);
  for (const DecayEstimate& e : estimates) {
    json entry;
    entry["k"] = e.k;
    entry["amplitude"] = e.amplitude;
    entry["lambda"] = e.lambda;
    if (e.has_interval) {
      entry["lambda_low"] = e.lambda_low;
      entry["lambda_high"] = e.lambda_high;
    } else {
      entry["lambda_low"] = nullptr;
      entry["lambda_high"] = nullptr;
    }
    entry["r_squared"] = e.r_squared;
    entry["iterations"] = e.iterations;
    entry["clamped"] = e.clamped;
    entry["residuals"] = e.residuals;
    list.push_back(std::move(entry));
    if (e.k >= 0 && e.k <= 2 * n) present[static_cast<std::size_t>(e.k)] = true;
  }
  j["estimates"] = std::move(list);
  json absent = json::array();
  for (int k = 0; k <= 2 * n; ++k) {
    if (!present[static_cast<std::size_t>(k)]) absent.push_back(k);
  }
  j["absent_k"] = std::move(absent);
  if (report.has_value()) {
    j["f_avg"] = report->f_avg;
    if (report->has_interval) {
      j["f_avg_low"] = report->f_avg_low;
      j["f_avg_high"] = report->f_avg_high;
    } else {
      j["f_avg_low"] = nullptr;
      j["f_avg_high"] = nullptr;
    }
    j["two_qubit_gates"] = report->two_qubit_gates;
    j["f_gate"] = report->f_gate;  // NaN serializes as null
  } else {
    j["f_avg"] = nullptr;
    j["f_avg_low"] = nullptr;
    j["f_avg_high"] = nullptr;
    j["two_qubit_gates"] = nullptr;
    j["f_gate"] = nullptr;
  }
  return j.dump(2) + "\n";
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(p.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw ConfigError("failed writing '" + path + "'");
}

}  // namespace mgbench
