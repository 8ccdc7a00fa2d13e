#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "mgbench/compiler.hpp"
#include "mgbench/correlation.hpp"
#include "mgbench/covariance_sim.hpp"
#include "mgbench/dense_sim.hpp"
#include "mgbench/errors.hpp"
#include "mgbench/fitting.hpp"
#include "mgbench/io.hpp"
#include "mgbench/noise.hpp"
#include "mgbench/protocol.hpp"
#include "mgbench/rng.hpp"
#include "mgbench/skew.hpp"

namespace {

using namespace mgbench;

std::string resolve_output_dir(const std::string& flag,
                               const std::string& from_config) {
  if (!flag.empty()) return flag;
  if (!from_config.empty()) return from_config;
  if (const char* env = std::getenv("MGBENCH_OUTPUT_DIR");
      env != nullptr && *env != '\0') {
    return env;
  }
  return ".";
}

std::string join_path(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

int sample_command(int n, int count, std::uint64_t seed, bool xy,
                   const std::string& out_path) {
  if (n < 1) throw ConfigError("sample needs n >= 1");
  if (count < 0) throw ConfigError("sample count must be nonnegative");
  std::string text;
  for (int i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, 4, static_cast<std::uint64_t>(i)));
    const OrthogonalElement q = haar_sample(n, rng);
    text += sample_jsonl_line(i, q, compile(q, xy)) + "\n";
  }
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
    std::cout << "wrote " << count << " samples to " << out_path << "\n";
  }
  return 0;
}

int run_command(const std::string& config_path, const std::string& dir_flag) {
  const ExperimentConfig config = parse_config(read_text_file(config_path));
  const std::string out_dir = resolve_output_dir(dir_flag, config.output_dir);
  const RoundPlan plan = plan_from_config(config);
  const std::vector<ShotBatch> batches =
      run_protocol(plan, config.noise, config.backend);

  std::string jsonl;
  std::vector<SequenceRow> seq_rows;
  for (const ShotBatch& batch : batches) {
    jsonl += batch_jsonl_line(batch) + "\n";
    seq_rows.push_back(SequenceRow{batch.k, batch.m, batch.sequence_index,
                                   sequence_value(batch)});
  }

  const double recorded_shots =
      config.exact ? std::numeric_limits<double>::infinity()
                   : static_cast<double>(config.shots);
  std::vector<FhatRow> fhat_rows;
  for (int k : plan.k_list) {
    for (int m : plan.m_list) {
      double total = 0.0;
      long matched = 0;
      for (const SequenceRow& row : seq_rows) {
        if (row.k != k || row.m != m) continue;
        total += row.value;
        ++matched;
      }
      fhat_rows.push_back(FhatRow{k, m, total / static_cast<double>(matched),
                                  plan.sequences, recorded_shots});
    }
  }

  write_text_file(join_path(out_dir, "batches.jsonl"), jsonl);
  write_text_file(join_path(out_dir, "fhat.csv"), fhat_csv(fhat_rows));
  write_text_file(join_path(out_dir, "sequences.csv"),
                  sequences_csv(seq_rows));

  for (const FhatRow& row : fhat_rows) {
    std::cout << "k=" << row.k << " m=" << row.m
              << " f_hat=" << format_double(row.f_hat) << " K=" << row.sequences
              << " L=" << format_double(row.shots) << "\n";
  }
  if (config.exact) {
    std::cout << "total shots: exact probabilities (L = inf)\n";
  } else {
    const long long total = static_cast<long long>(batches.size()) *
                            static_cast<long long>(config.shots);
    std::cout << "total shots: " << total << "\n";
  }
  std::cout << "wrote batches.jsonl, fhat.csv, sequences.csv to " << out_dir
            << "\n";
  return 0;
}

int fit_command(const std::string& fhat_path, const std::string& seq_path,
                int bootstrap, int n_flag, int two_qubit, std::uint64_t seed,
                const std::string& dir_flag) {
  const std::vector<FhatRow> rows = parse_fhat_csv(read_text_file(fhat_path));
  if (rows.empty()) throw ConfigError("f_hat table has no data rows");

  std::map<int, std::vector<DecayPoint>> points_by_k;
  int max_k = 0;
  for (const FhatRow& row : rows) {
    points_by_k[row.k].push_back(DecayPoint{row.m, row.f_hat});
    max_k = std::max(max_k, row.k);
  }
  const int n = n_flag > 0 ? n_flag : std::max(1, (max_k + 1) / 2);

  std::map<int, SequenceTable> tables;
  if (!seq_path.empty()) {
    for (const SequenceRow& row :
         parse_sequences_csv(read_text_file(seq_path))) {
      tables[row.k][row.m].push_back(row.value);
    }
  }

  std::vector<DecayEstimate> estimates;
  int failed = 0;
  for (const auto& [k, points] : points_by_k) {
    const SequenceTable* table = nullptr;
    if (const auto it = tables.find(k); it != tables.end()) {
      table = &it->second;
    }
    try {
      DecayEstimate estimate =
          fit_decay(points, bootstrap, table,
                    derive_seed(seed, 0xf17u, static_cast<std::uint64_t>(k)));
      estimate.k = k;
      std::cout << "k=" << k << " lambda=" << format_double(estimate.lambda)
                << " amplitude=" << format_double(estimate.amplitude);
      if (estimate.has_interval) {
        std::cout << " ci=[" << format_double(estimate.lambda_low) << ","
                  << format_double(estimate.lambda_high) << "]";
      }
      std::cout << "\n";
      estimates.push_back(std::move(estimate));
    } catch (const FitError& e) {
      std::cerr << "fit error (k = " << k << "): " << e.what() << "\n";
      ++failed;
    }
  }

  std::optional<FidelityReport> report;
  if (failed == 0 && static_cast<int>(estimates.size()) == 2 * n + 1) {
    report = extract_fidelity(estimates, n, two_qubit);
    std::cout << "F_avg=" << format_double(report->f_avg);
    if (report->has_interval) {
      std::cout << " ci=[" << format_double(report->f_avg_low) << ","
                << format_double(report->f_avg_high) << "]";
    }
    std::cout << " F_gate=" << format_double(report->f_gate)
              << " two_qubit_gates=" << report->two_qubit_gates << "\n";
  }

  const std::string out_dir = resolve_output_dir(dir_flag, "");
  write_text_file(join_path(out_dir, "report.json"),
                  report_json(n, estimates, report));
  std::vector<FhatRow> sorted_rows = rows;
  std::sort(sorted_rows.begin(), sorted_rows.end(),
            [](const FhatRow& a, const FhatRow& b) {
              return a.k != b.k ? a.k < b.k : a.m < b.m;
            });
  write_text_file(join_path(out_dir, "plot.csv"),
                  plot_csv(sorted_rows, estimates));
  std::cout << "wrote report.json, plot.csv to " << out_dir << "\n";
  return failed == 0 ? 0 : 4;
}

int report_command(const std::vector<double>& lambdas, int n_flag,
                   int two_qubit, const std::string& out_path) {
  const int count = static_cast<int>(lambdas.size());
  if (count < 3 || count % 2 == 0) {
    throw ConfigError("a full decay-rate table has 2n + 1 entries, got " +
                      std::to_string(count));
  }
  const int n = n_flag > 0 ? n_flag : (count - 1) / 2;
  if (count != 2 * n + 1) {
    throw ConfigError("expected " + std::to_string(2 * n + 1) +
                      " rates for n = " + std::to_string(n) + ", got " +
                      std::to_string(count));
  }
  std::vector<DecayEstimate> estimates;
  for (int k = 0; k < count; ++k) {
    DecayEstimate estimate;
    estimate.k = k;
    estimate.lambda = lambdas[static_cast<std::size_t>(k)];
    estimate.amplitude = std::numeric_limits<double>::quiet_NaN();
    estimate.r_squared = std::numeric_limits<double>::quiet_NaN();
    estimates.push_back(estimate);
  }
  const FidelityReport report = extract_fidelity(estimates, n, two_qubit);
  const std::string text = report_json(n, estimates, report);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_text_file(out_path, text);
  }
  std::cout << "F_avg=" << format_double(report.f_avg)
            << " F_gate=" << format_double(report.f_gate)
            << " two_qubit_gates=" << report.two_qubit_gates << "\n";
  return 0;
}

int selftest_command() {
  int failures = 0;
  const auto check = [&failures](const std::string& name, bool ok) {
    std::cout << "selftest: " << name << (ok ? " ok" : " FAILED") << "\n";
    if (!ok) ++failures;
  };

  {
    Rng rng(12345);
    bool ok = true;
    for (int trial = 0; trial < 5; ++trial) {
      Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
      for (int r = 0; r < 6; ++r) {
        for (int c = r + 1; c < 6; ++c) {
          a(r, c) = rng.normal();
          a(c, r) = -a(r, c);
        }
      }
      const double pf = pfaffian(a);
      ok = ok && std::abs(pf * pf - a.determinant()) <=
                     1e-9 * std::max(1.0, std::abs(a.determinant()));
    }
    check("pfaffian squared equals determinant", ok);
  }

  {
    Rng rng(777);
    bool ok = true;
    for (int n = 2; n <= 3; ++n) {
      for (int trial = 0; trial < 5; ++trial) {
        const OrthogonalElement q = haar_sample(n, rng);
        for (bool xy : {false, true}) {
          const OrthogonalElement back = induced_rotation(compile(q, xy));
          ok = ok && (back.matrix() - q.matrix()).cwiseAbs().maxCoeff() <= 1e-9;
        }
      }
    }
    check("compiled circuits reproduce their rotations", ok);
  }

  {
    Rng rng(4242);
    bool ok = true;
    const int n = 2;
    for (int trial = 0; trial < 5; ++trial) {
      const GateCircuit circuit = compile(haar_sample(n, rng));
      const std::vector<double> dense =
          run_dense(circuit, NoiseNone{}, SpamBasis::Z);
      for (std::uint64_t idx = 0; idx < dense.size(); ++idx) {
        Rng probe(1);
        const double p = run_covariance_probability(
            circuit, NoiseNone{}, SpamBasis::Z, bits_from_index(idx, n),
            probe);
        ok = ok && std::abs(p - dense[idx]) <= 1e-9;
      }
    }
    check("covariance backend matches dense probabilities", ok);
  }

  {
    RoundPlan plan;
    plan.n = 2;
    plan.k_list = {0, 1, 2, 3, 4};
    plan.m_list = {1, 2, 3};
    plan.mode = ProtocolMode::Analytic;
    const std::vector<AnalyticCurve> curves =
        analytic_curve(plan, NoiseNone{});
    bool ok = true;
    for (const AnalyticCurve& curve : curves) {
      for (double value : curve.values) {
        ok = ok && std::abs(value - 1.0) <= 1e-8;
      }
    }
    check("noise-free sequence-averaged signal is 1", ok);
  }

  {
    const MomentPair one = moment_closed_form(1, 2);
    const MomentPair two = moment_closed_form(2, 2);
    const bool ok = one.vacuum == 1.0 &&
                    std::abs(two.vacuum - 1.0 / 3.0) <= 1e-12 &&
                    std::abs(one.plus - 0.375) <= 1e-12;
    check("moment closed forms match known values", ok);
  }

  {
    const std::vector<double> table = {1.0, 0.78, 0.85, 0.87, 0.83};
    std::vector<DecayEstimate> estimates;
    for (int k = 0; k <= 4; ++k) {
      DecayEstimate e;
      e.k = k;
      e.lambda = table[static_cast<std::size_t>(k)];
      estimates.push_back(e);
    }
    const FidelityReport report = extract_fidelity(estimates, 2);
    const bool ok = std::abs(report.f_avg - 0.8765) <= 1e-12 &&
                    std::abs(report.f_gate - std::pow(0.8765, 0.25)) <= 1e-12;
    check("fidelity extraction matches hand-computed table", ok);
  }

  if (failures == 0) {
    std::cout << "selftest: all checks passed\n";
    return 0;
  }
  std::cout << "selftest: " << failures << " check(s) failed\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matchgate benchmarking toolkit"};
  app.require_subcommand(1);

  auto* sample = app.add_subcommand(
      "sample", "draw Haar-random elements and their compiled circuits");
  int sample_n = 2;
  int sample_count = 1;
  std::uint64_t sample_seed = 0;
  bool sample_xy = false;
  std::string sample_out;
  sample->add_option("--n", sample_n, "qubit count");
  sample->add_option("--count", sample_count, "number of samples");
  sample->add_option("--seed", sample_seed, "master seed");
  sample->add_flag("--xy", sample_xy,
                   "compile two-qubit rotations into XY form");
  sample->add_option("--circuit-out", sample_out,
                     "write JSON lines here instead of stdout");

  auto* run = app.add_subcommand(
      "run", "execute a benchmarking run described by a JSON config");
  std::string run_config;
  std::string run_dir;
  run->add_option("--config", run_config, "config file path")->required();
  run->add_option("--output-dir", run_dir,
                  "artifact directory (default: config, then "
                  "MGBENCH_OUTPUT_DIR, then '.')");

  auto* fit = app.add_subcommand(
      "fit", "fit decay curves from an f_hat table and report fidelity");
  std::string fit_fhat;
  std::string fit_sequences;
  int fit_bootstrap = 0;
  int fit_n = 0;
  int fit_two_qubit = -1;
  std::uint64_t fit_seed = 0;
  std::string fit_dir;
  fit->add_option("--fhat", fit_fhat, "fhat.csv path")->required();
  fit->add_option("--sequences", fit_sequences,
                  "sequences.csv path (enables the bootstrap interval)");
  fit->add_option("--bootstrap", fit_bootstrap, "bootstrap resample count");
  fit->add_option("--n", fit_n, "qubit count (default: inferred from max k)");
  fit->add_option("--two-qubit-gates", fit_two_qubit,
                  "two-qubit gate count for the per-gate estimate");
  fit->add_option("--seed", fit_seed, "bootstrap seed");
  fit->add_option("--output-dir", fit_dir,
                  "artifact directory (default: MGBENCH_OUTPUT_DIR, then '.')");

  auto* report = app.add_subcommand(
      "report", "fidelity report from an already-fitted decay-rate table");
  std::vector<double> report_lambdas;
  int report_n = 0;
  int report_two_qubit = -1;
  std::string report_out;
  report->add_option("--lambdas", report_lambdas, "rates for k = 0..2n")
      ->required()
      ->delimiter(',');
  report->add_option("--n", report_n, "qubit count (default: from list size)");
  report->add_option("--two-qubit-gates", report_two_qubit,
                     "two-qubit gate count for the per-gate estimate");
  report->add_option("--output", report_out,
                     "write the report here instead of stdout");

  app.add_subcommand("selftest", "run built-in consistency checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  const auto guarded = [](const std::function<int()>& body) {
    try {
      return body();
    } catch (const ConfigError& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return 2;
    } catch (const BackendError& e) {
      std::cerr << "backend error: " << e.what() << "\n";
      return 3;
    } catch (const FitError& e) {
      std::cerr << "fit error: " << e.what() << "\n";
      return 4;
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  };

  if (sample->parsed()) {
    return guarded([&] {
      return sample_command(sample_n, sample_count, sample_seed, sample_xy,
                            sample_out);
    });
  }
  if (run->parsed()) {
    return guarded([&] { return run_command(run_config, run_dir); });
  }
  if (fit->parsed()) {
    return guarded([&] {
      return fit_command(fit_fhat, fit_sequences, fit_bootstrap, fit_n,
                         fit_two_qubit, fit_seed, fit_dir);
    });
  }
  if (report->parsed()) {
    return guarded([&] {
      return report_command(report_lambdas, report_n, report_two_qubit,
                            report_out);
    });
  }
  return guarded([&] { return selftest_command(); });
}
