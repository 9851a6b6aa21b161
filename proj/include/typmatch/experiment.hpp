#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "typmatch/distribution.hpp"

namespace typmatch {

inline constexpr const char* kLibraryVersion = "0.1.0";

// Parsed experiment description. Raw JSON text is kept so the manifest
// can echo and hash the exact configuration.
struct ExperimentConfig {
  std::string kind;  // bound-verify | match-sweep | seeded-sweep |
                     // erasure-scan | counting-verify
  std::string name;
  std::string json_text;

  static ExperimentConfig from_json_text(const std::string& text);
  static ExperimentConfig from_file(const std::string& path);
};

struct ExperimentOutcome {
  std::string csv_path;
  std::string manifest_path;
  std::size_t rows = 0;
  // Set when the experiment itself checks inequalities (bound-verify,
  // counting-verify) and found a violation.
  bool verification_failed = false;
};

// Runs the configured experiment and writes <name>.csv plus
// <name>.manifest.json under out_dir. The CSV is a flat long-format
// table (experiment,n,trial,seed,metric,value) and depends only on
// the config and master seed; wall times go to the manifest.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg,
                                 const std::string& out_dir);

// Exhaustive cross-checks of the counting formulas and bounds against
// direct enumeration: fixed-point counts over all of S_n (n <= 7),
// derangement recurrence, coincidence-pattern histograms over all
// (id, pi2, pi3) tuples (n <= 5) against their bracketing bounds.
struct CountingReport {
  bool ok = true;
  int checks = 0;
  std::vector<std::string> failures;
  std::vector<std::string> rows;  // "name,value" summaries for CSV use
};

CountingReport verify_counting(int n_max);

// Distribution from config JSON: either explicit
// {"alphabets": [...], "pmf": [...]} or {"erasure": {"p":, "s":}}.
JointDistribution dist_from_json_text(const std::string& text);
std::string dist_to_json_text(const JointDistribution& dist);

// Worker count: TYPMATCH_THREADS if set, hardware concurrency otherwise.
int worker_count();

}  // namespace typmatch
