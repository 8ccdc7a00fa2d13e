#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mgbench/compiler.hpp"
#include "mgbench/fitting.hpp"
#include "mgbench/noise.hpp"
#include "mgbench/protocol.hpp"

namespace mgbench {

// Shortest decimal string that parses back to the same double; nan and
// infinities print as "nan", "inf", "-inf".
std::string format_double(double value);

// One full protocol run as read from a config file.
struct ExperimentConfig {
  int n = 1;
  std::vector<int> k_list;
  std::vector<int> m_list;
  int sequences = 1;
  long shots = 1;
  bool exact = false;  // exact per-sequence probabilities instead of shots
  NoiseModel noise = NoiseNone{};
  BackendChoice backend = BackendChoice::Auto;
  std::uint64_t seed = 0;
  std::string output_dir;
};

// Parses and validates a JSON config; error messages name the offending
// field.  Unknown fields are rejected.
ExperimentConfig parse_config(const std::string& text);
std::string config_json(const ExperimentConfig& config);

RoundPlan plan_from_config(const ExperimentConfig& config);

// Noise specs are tagged objects: {"kind": "none"}, {"kind": "depolarizing",
// "p", "granularity"}, {"kind": "amplitude_damping", "qubit", "strength",
// "granularity"}, {"kind": "kraus", "operators", "granularity"} with entries
// as [re, im] pairs, {"kind": "mixture", "weights", "rotations"},
// {"kind": "sign_mixture", "frame", "b"}, and {"kind": "gate_dependent",
// "base", "delta"}.
NoiseModel noise_from_json_text(const std::string& text, int n);
std::string noise_json_text(const NoiseModel& noise);

std::string circuit_json(const GateCircuit& circuit);
GateCircuit circuit_from_json(const std::string& text);

// One sampled element with its compiled circuit as a JSON line.
std::string sample_jsonl_line(int index, const OrthogonalElement& element,
                              const GateCircuit& circuit);

// One batch as a single JSON line: k, m, sequence, spam_basis, factor_seeds,
// composite (nested rows), frequencies, shots, exact.
std::string batch_jsonl_line(const ShotBatch& batch);

struct FhatRow {
  int k = 0;
  int m = 0;
  double f_hat = 0.0;
  int sequences = 0;
  double shots = 0.0;  // infinity marks exact probabilities
};

// Columns k,m,f_hat,K,L with a header row.
std::string fhat_csv(const std::vector<FhatRow>& rows);
std::vector<FhatRow> parse_fhat_csv(const std::string& text);

struct SequenceRow {
  int k = 0;
  int m = 0;
  int sequence = 0;
  double value = 0.0;
};

// Per-sequence estimates backing the bootstrap, columns k,m,sequence,f.
std::string sequences_csv(const std::vector<SequenceRow>& rows);
std::vector<SequenceRow> parse_sequences_csv(const std::string& text);

// Measured points next to the fitted overlay, columns k,m,f_hat,fit.
std::string plot_csv(const std::vector<FhatRow>& rows,
                     const std::vector<DecayEstimate>& estimates);

// Fit report; subspaces without estimates are listed under "absent_k" and
// f_avg/f_gate are null unless every k = 0..2n is present.
std::string report_json(int n, const std::vector<DecayEstimate>& estimates,
                        const std::optional<FidelityReport>& report);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace mgbench
