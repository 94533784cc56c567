#pragma once

#include "agfti/dataset.hpp"
#include "agfti/masks.hpp"
#include "agfti/metrics.hpp"
#include "agfti/ssl.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace agfti {

enum class Method {
  AgfTi,
  /// One label propagation on the fused graph whose row i averages row i of
  /// the views that contain sample i. No fusion or imputation iterations.
  PlainPropagation,
};

struct ExperimentConfig {
  AdmmConfig solver;
  Method method = Method::AgfTi;
  Index anchors = 0;  ///< 0 picks the largest power of two <= min(256, existing samples per view)
  Index neighbors = kDefaultNeighbors;
  double vmr = 0.5;
  double lar = 0.05;
  std::uint64_t seed = 0;
  int repetitions = 10;
};

/// Seed of repetition r: CounterRng::derive(base, r). Masks use it directly;
/// the anchors of view v use derive(seed_r, 1000 + v).
std::uint64_t repetition_seed(std::uint64_t base, int repetition);

/// Builds per-view anchors (BKHK on the samples present in that view), the
/// bipartite graphs and the one-hot label matrix.
SslProblem build_problem(const DatasetContainer& data, const MaskSet& masks, Index anchors,
                         Index neighbors, std::uint64_t seed);

/// Largest power of two not above min(cap, samples present in every view).
Index default_anchor_count(const MaskSet& masks, Index cap = 256);

/// Soft labels for Method::PlainPropagation.
SoftLabels plain_propagation(const SslProblem& problem, const AdmmConfig& config);

struct RepetitionRecord {
  int repetition = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  ClassificationMetrics metrics;
  bool converged = false;
  int iterations = 0;
  double primal_residual = 0.0;
  double seconds = 0.0;
  std::vector<std::string> warnings;
};

struct MeanStd {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation, 0 for fewer than two values
};

struct ExperimentSummary {
  std::vector<RepetitionRecord> records;
  int completed = 0;
  bool partial = false;  ///< some repetition failed
  MeanStd acc, precision_macro, f1_macro, precision_micro, f1_micro;
};

/// One mask -> solve -> metrics pass. Solver errors are caught and reported
/// in the record. Metrics cover the unlabeled samples with a known label.
RepetitionRecord run_repetition(const DatasetContainer& data, const ExperimentConfig& config,
                                int repetition, const DiagnosticsSink& sink = {});

ExperimentSummary run_experiment(const DatasetContainer& data, const ExperimentConfig& config,
                                 const std::function<void(const RepetitionRecord&)>& on_record = {});

nlohmann::json to_json(const RepetitionRecord& record);
nlohmann::json to_json(const ExperimentSummary& summary, const ExperimentConfig& config);
nlohmann::json to_json(const IterationDiagnostics& d);

}  // namespace agfti
