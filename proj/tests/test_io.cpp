#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"
#include "mgbench/errors.hpp"
#include "mgbench/io.hpp"
#include "mgbench/rng.hpp"

using namespace mgbench;

namespace {

bool message_mentions(const std::exception& e, const std::string& needle) {
  return std::string(e.what()).find(needle) != std::string::npos;
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("doubles round-trip through their shortest decimal form") {
  for (double v : {0.1, 1.0 / 3.0, 2.0, -0.0, 1e-300, 6.02e23, 0.925}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(format_double(0.5) == "0.5");
  CHECK(format_double(std::numeric_limits<double>::infinity()) == "inf");
  CHECK(format_double(-std::numeric_limits<double>::infinity()) == "-inf");
  CHECK(format_double(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("configs round-trip through json") {
  ExperimentConfig config;
  config.n = 3;
  config.k_list = {0, 2, 4};
  config.m_list = {1, 2, 4, 8};
  config.sequences = 32;
  config.shots = 250;
  config.noise = NoiseModel{depolarizing_channel(3, 0.05)};
  config.backend = BackendChoice::Dense;
  config.seed = 99;
  config.output_dir = "out";

  const ExperimentConfig parsed = parse_config(config_json(config));
  CHECK(parsed.n == config.n);
  CHECK(parsed.k_list == config.k_list);
  CHECK(parsed.m_list == config.m_list);
  CHECK(parsed.sequences == config.sequences);
  CHECK(parsed.shots == config.shots);
  CHECK(parsed.exact == config.exact);
  CHECK(parsed.backend == config.backend);
  CHECK(parsed.seed == config.seed);
  CHECK(parsed.output_dir == config.output_dir);
  const auto* channel = std::get_if<DenseChannel>(&parsed.noise);
  REQUIRE(channel != nullptr);
  CHECK(channel->kraus.size() ==
        std::get_if<DenseChannel>(&config.noise)->kraus.size());
}

TEST_CASE("config parsing reports the offending field") {
  try {
    parse_config(R"({"k_list": [0], "m_list": [1], "shots": 10})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_mentions(e, "n"));
  }
  try {
    parse_config(R"({"n": 2, "k_list": "all", "m_list": [1], "shots": 1})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_mentions(e, "k_list"));
  }
  try {
    parse_config(
        R"({"n": 2, "k_list": [0], "m_list": [1], "shots": 1, "mystery": 3})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_mentions(e, "mystery"));
  }
  try {
    parse_config(R"({"n": 2, "k_list": [0], "m_list": [1], "sequences": 4})");
    FAIL("expected a config error");
  } catch (const ConfigError& e) {
    CHECK(message_mentions(e, "shots"));
  }
  CHECK_THROWS_AS(parse_config("{not json"), ConfigError);
}

TEST_CASE("exact mode needs no shot count") {
  const ExperimentConfig config = parse_config(
      R"({"n": 2, "k_list": [0, 2], "m_list": [1, 2, 3], "sequences": 2,
          "exact": true})");
  CHECK(config.exact);
  const RoundPlan plan = plan_from_config(config);
  CHECK(plan.mode == ProtocolMode::SequenceExact);
  CHECK(plan.shots == 1);

  const ExperimentConfig shot_config = parse_config(
      R"({"n": 2, "k_list": [0], "m_list": [1], "sequences": 1, "shots": 64})");
  CHECK(plan_from_config(shot_config).mode == ProtocolMode::Shots);
}

TEST_CASE("noise specifications round-trip") {
  Rng rng(1001);

  const NoiseModel none = noise_from_json_text(R"({"kind": "none"})", 2);
  CHECK(std::holds_alternative<NoiseNone>(none));

  const NoiseModel dep =
      noise_from_json_text(R"({"kind": "depolarizing", "p": 0.125})", 2);
  const auto* dep_ch = std::get_if<DenseChannel>(&dep);
  REQUIRE(dep_ch != nullptr);
  const NoiseModel dep_again = noise_from_json_text(noise_json_text(dep), 2);
  const auto* dep_ch2 = std::get_if<DenseChannel>(&dep_again);
  REQUIRE(dep_ch2 != nullptr);
  REQUIRE(dep_ch2->kraus.size() == dep_ch->kraus.size());
  for (std::size_t i = 0; i < dep_ch->kraus.size(); ++i) {
    CHECK((dep_ch->kraus[i] - dep_ch2->kraus[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  GaussianB mix;
  mix.weights = {0.25, 0.75};
  mix.rotations = {haar_sample(2, rng).matrix(), haar_sample(2, rng).matrix()};
  const NoiseModel mix_again =
      noise_from_json_text(noise_json_text(NoiseModel{mix}), 2);
  const auto* mix2 = std::get_if<GaussianB>(&mix_again);
  REQUIRE(mix2 != nullptr);
  CHECK(mix2->weights == mix.weights);
  for (int i = 0; i < 2; ++i) {
    CHECK((mix2->rotations[i] - mix.rotations[i]).cwiseAbs().maxCoeff() == 0.0);
  }

  const NoiseModel sign = noise_from_json_text(
      R"({"kind": "sign_mixture",
          "frame": [[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]],
          "b": [0.9, 0.9, 0.8, 0.8]})",
      2);
  const auto* sign_mix = std::get_if<GaussianB>(&sign);
  REQUIRE(sign_mix != nullptr);
  CHECK(sign_mix->weights.size() == 16);

  const NoiseModel gd = noise_from_json_text(
      R"({"kind": "gate_dependent",
          "base": {"kind": "depolarizing", "p": 0.02, "granularity": "gate"},
          "delta": 0.1})",
      2);
  const auto* gd_model = std::get_if<GateDependent>(&gd);
  REQUIRE(gd_model != nullptr);
  CHECK(gd_model->delta == 0.1);
  const NoiseModel gd_again = noise_from_json_text(noise_json_text(gd), 2);
  CHECK(std::get_if<GateDependent>(&gd_again)->delta == 0.1);

  CHECK_THROWS_AS(noise_from_json_text(R"({"kind": "glitter"})", 2), ConfigError);
  CHECK_THROWS_AS(noise_from_json_text(R"({"p": 0.1})", 2), ConfigError);
}

TEST_CASE("circuits round-trip exactly") {
  GateCircuit circuit{3,
                      {{GateKind::ZRot, 1, 0.1234567890123},
                       {GateKind::XXRot, 2, -2.5},
                       {GateKind::XYRot, 1, 1e-17},
                       {GateKind::XFlip, 3, 0.0}}};
  const GateCircuit parsed = circuit_from_json(circuit_json(circuit));
  CHECK(parsed.n == 3);
  REQUIRE(parsed.gates.size() == 4);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(parsed.gates[i].kind == circuit.gates[i].kind);
    CHECK(parsed.gates[i].qubit == circuit.gates[i].qubit);
    CHECK(parsed.gates[i].angle == circuit.gates[i].angle);
  }
}

TEST_CASE("sampled elements serialize with their compiled circuit") {
  Rng rng(1002);
  const OrthogonalElement q = haar_sample(2, rng);
  const GateCircuit circuit = compile(q);
  const std::string line = sample_jsonl_line(3, q, circuit);
  const nlohmann::json parsed = nlohmann::json::parse(line);
  CHECK(parsed.at("index").get<int>() == 3);
  CHECK(parsed.at("element").size() == 4);
  CHECK(parsed.at("circuit").at("n").get<int>() == 2);
}

TEST_CASE("batches serialize to single json lines") {
  ShotBatch batch{2,
                  3,
                  1,
                  OrthogonalElement::identity(4),
                  {11, 22, 33},
                  SpamBasis::Z,
                  {{"00", 40.0}, {"11", 24.0}},
                  64.0,
                  false};
  const std::string line = batch_jsonl_line(batch);
  CHECK(line.find('\n') == std::string::npos);
  const nlohmann::json parsed = nlohmann::json::parse(line);
  CHECK(parsed.at("k").get<int>() == 2);
  CHECK(parsed.at("m").get<int>() == 3);
  CHECK(parsed.at("sequence").get<int>() == 1);
  CHECK(parsed.at("spam_basis").get<std::string>() == "Z");
  CHECK(parsed.at("factor_seeds").size() == 3);
  CHECK(parsed.at("frequencies").at("00").get<double>() == 40.0);
  CHECK(parsed.at("shots").get<double>() == 64.0);
  CHECK_FALSE(parsed.at("exact").get<bool>());
}

TEST_CASE("decay tables round-trip through csv") {
  std::vector<FhatRow> rows = {
      {0, 1, 1.0, 16, 100.0},
      {2, 4, 0.731234567890123, 16, 100.0},
      {4, 12, -0.25, 16, std::numeric_limits<double>::infinity()},
  };
  const std::string csv = fhat_csv(rows);
  const auto parsed = parse_fhat_csv(csv);
  REQUIRE(parsed.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(parsed[i].k == rows[i].k);
    CHECK(parsed[i].m == rows[i].m);
    CHECK(parsed[i].f_hat == rows[i].f_hat);
    CHECK(parsed[i].sequences == rows[i].sequences);
    CHECK(parsed[i].shots == rows[i].shots);
  }
  CHECK_THROWS_AS(parse_fhat_csv("k,m\n1,2\n"), ConfigError);

  std::vector<SequenceRow> seq_rows = {{2, 1, 0, 0.92}, {2, 1, 1, 1.07}};
  const auto seq_parsed = parse_sequences_csv(sequences_csv(seq_rows));
  REQUIRE(seq_parsed.size() == 2);
  CHECK(seq_parsed[1].sequence == 1);
  CHECK(seq_parsed[1].value == 1.07);
}

TEST_CASE("plot tables pair measurements with fitted overlays") {
  std::vector<FhatRow> rows = {{2, 1, 0.85, 8, 100.0}, {2, 2, 0.73, 8, 100.0}};
  DecayEstimate estimate;
  estimate.k = 2;
  estimate.amplitude = 0.9;
  estimate.lambda = 0.95;
  const std::string csv = plot_csv(rows, {estimate});
  const auto lines = [&] {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start < csv.size()) {
      const std::size_t end = csv.find('\n', start);
      out.push_back(csv.substr(start, end - start));
      start = end + 1;
    }
    return out;
  }();
  REQUIRE(lines.size() == 3);
  CHECK(lines[0] == "k,m,f_hat,fit");
  CHECK(lines[1] == "2,1,0.85," + format_double(0.9 * std::pow(0.95, 1)));
  CHECK(lines[2] == "2,2,0.73," + format_double(0.9 * std::pow(0.95, 2)));
}

TEST_CASE("fit reports list absent subspaces and optional summaries") {
  DecayEstimate estimate;
  estimate.k = 2;
  estimate.amplitude = 0.9;
  estimate.lambda = 0.95;
  estimate.residuals = {0.001, -0.002};
  const std::string text = report_json(2, {estimate}, std::nullopt);
  const nlohmann::json parsed = nlohmann::json::parse(text);
  CHECK(parsed.at("n").get<int>() == 2);
  CHECK(parsed.at("estimates").size() == 1);
  CHECK(parsed.at("estimates")[0].at("lambda").get<double>() == 0.95);
  CHECK(parsed.at("estimates")[0].at("lambda_low").is_null());
  const auto absent = parsed.at("absent_k").get<std::vector<int>>();
  CHECK(absent == std::vector<int>{0, 1, 3, 4});
  CHECK(parsed.at("f_avg").is_null());

  std::vector<DecayEstimate> all;
  for (int k = 0; k <= 4; ++k) {
    DecayEstimate e;
    e.k = k;
    e.lambda = 0.9;
    e.amplitude = 1.0;
    all.push_back(e);
  }
  const FidelityReport report = extract_fidelity(all, 2);
  const nlohmann::json full =
      nlohmann::json::parse(report_json(2, all, report));
  CHECK(full.at("f_avg").get<double>() == doctest::Approx(report.f_avg));
  CHECK(full.at("f_gate").get<double>() == doctest::Approx(report.f_gate));
  CHECK(full.at("absent_k").empty());
}

TEST_CASE("text files round-trip and create parent directories") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "mgbench_io_test";
  fs::remove_all(dir);
  const fs::path file = dir / "nested" / "note.txt";
  write_text_file(file.string(), "alpha\nbeta\n");
  CHECK(read_text_file(file.string()) == "alpha\nbeta\n");
  CHECK_THROWS_AS(read_text_file((dir / "missing.txt").string()), ConfigError);
  fs::remove_all(dir);
}

}  // TEST_SUITE
