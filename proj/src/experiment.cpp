#include "agfti/experiment.hpp"

#include "agfti/graphs.hpp"
#include "agfti/rng.hpp"

#include <chrono>
#include <cmath>

namespace agfti {
namespace {

MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd out;
  if (xs.empty()) return out;
  for (double x : xs) out.mean += x;
  out.mean /= static_cast<double>(xs.size());
  if (xs.size() > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - out.mean) * (x - out.mean);
    out.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return out;
}

nlohmann::json to_json(const MeanStd& m) { return {{"mean", m.mean}, {"std", m.std}}; }

const char* method_name(Method m) {
  return m == Method::PlainPropagation ? "plain_propagation" : "agf_ti";
}

}  // namespace

std::uint64_t repetition_seed(std::uint64_t base, int repetition) {
  return CounterRng::derive(base, static_cast<std::uint64_t>(repetition));
}

Index default_anchor_count(const MaskSet& masks, Index cap) {
  Index limit = cap;
  for (int v = 0; v < masks.views; ++v) {
    limit = std::min(limit, static_cast<Index>(masks.existing_in(v).size()));
  }
  if (limit < 2) throw InvalidArgument("too few samples present per view to pick anchors");
  Index m = 1;
  while (m * 2 <= limit) m *= 2;
  return m;
}

SslProblem build_problem(const DatasetContainer& data, const MaskSet& masks, Index anchors,
                         Index neighbors, std::uint64_t seed) {
  validate_dataset(data);
  const Index n = data.samples();
  if (masks.samples() != n || masks.views != data.view_count()) {
    throw InvalidArgument("masks do not match the dataset shape");
  }
  SslProblem problem;
  for (int v = 0; v < data.view_count(); ++v) {
    const std::vector<Index> present = masks.existing_in(v);
    const Matrix& full = data.views[static_cast<std::size_t>(v)];
    Matrix x(static_cast<Index>(present.size()), full.cols());
    for (std::size_t r = 0; r < present.size(); ++r) x.row(static_cast<Index>(r)) = full.row(present[r]);

    const AnchorSet a = bkhk_anchors(x, anchors, CounterRng::derive(seed, 1000 + static_cast<std::uint64_t>(v)), v);
    problem.graphs.push_back(assemble_graph(n, build_bipartite(x, a, neighbors), present, v));
  }

  problem.Y = Matrix::Zero(n, data.classes);
  problem.labeled = masks.labeled_mask();
  for (Index i : masks.labeled) {
    const int y = data.labels[static_cast<std::size_t>(i)];
    if (y < 0) throw InvalidArgument("sample " + std::to_string(i) + " is marked labeled but has no label");
    problem.Y(i, y) = 1.0;
  }
  return problem;
}

SoftLabels plain_propagation(const SslProblem& problem, const AdmmConfig& config) {
  if (problem.graphs.empty()) throw InvalidArgument("plain_propagation: no views");
  const Index n = problem.graphs[0].Z.rows();
  const Index m = problem.graphs[0].Z.cols();
  RowMatrix p = RowMatrix::Zero(n, m);
  Vector present = Vector::Zero(n);
  for (const auto& g : problem.graphs) {
    for (Index i : g.existing) {
      p.row(i) += g.Z.row(i);
      present(i) += 1.0;
    }
  }
  for (Index i = 0; i < n; ++i) {
    if (present(i) == 0.0) throw InvalidArgument("plain_propagation: sample absent from every view");
    p.row(i) /= present(i);
  }
  return update_labels(p, regularizer_diagonal(config.b, problem.labeled, m), problem.Y);
}

RepetitionRecord run_repetition(const DatasetContainer& data, const ExperimentConfig& config,
                                int repetition, const DiagnosticsSink& sink) {
  RepetitionRecord rec;
  rec.repetition = repetition;
  rec.seed = repetition_seed(config.seed, repetition);
  const auto start = std::chrono::steady_clock::now();
  try {
    const MaskSet masks = generate_masks(data, {config.vmr, config.lar, rec.seed});
    const Index m = config.anchors > 0 ? config.anchors : default_anchor_count(masks);
    const SslProblem problem = build_problem(data, masks, m, config.neighbors, rec.seed);

    SoftLabels labels;
    if (config.method == Method::PlainPropagation) {
      labels = plain_propagation(problem, config.solver);
      rec.converged = true;
    } else {
      AdmmResult r = admm_solve(problem, config.solver, sink);
      rec.converged = r.converged;
      rec.iterations = r.iterations;
      if (!r.diagnostics.empty()) rec.primal_residual = r.diagnostics.back().primal_residual;
      rec.warnings = std::move(r.warnings);
      labels = std::move(r.labels);
    }

    std::vector<Index> rows;
    std::vector<int> truth;
    for (Index i : masks.unlabeled()) {
      const int y = data.labels[static_cast<std::size_t>(i)];
      if (y >= 0) {
        rows.push_back(i);
        truth.push_back(y);
      }
    }
    const std::vector<int> pred = predict(labels.F, rows);
    rec.metrics = compute_metrics(pred, truth, data.classes);
    rec.warnings.insert(rec.warnings.end(), rec.metrics.warnings.begin(), rec.metrics.warnings.end());
    rec.ok = true;
  } catch (const Error& e) {
    rec.error = e.what();
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

ExperimentSummary run_experiment(const DatasetContainer& data, const ExperimentConfig& config,
                                 const std::function<void(const RepetitionRecord&)>& on_record) {
  if (config.repetitions < 1) throw InvalidArgument("run_experiment: need at least one repetition");
  ExperimentSummary out;
  std::vector<double> acc, prec, f1, prec_micro, f1_micro;
  for (int r = 0; r < config.repetitions; ++r) {
    RepetitionRecord rec = run_repetition(data, config, r);
    if (on_record) on_record(rec);
    if (rec.ok) {
      ++out.completed;
      acc.push_back(rec.metrics.acc);
      prec.push_back(rec.metrics.precision_macro);
      f1.push_back(rec.metrics.f1_macro);
      prec_micro.push_back(rec.metrics.precision_micro);
      f1_micro.push_back(rec.metrics.f1_micro);
    }
    out.records.push_back(std::move(rec));
  }
  out.partial = out.completed < config.repetitions;
  out.acc = mean_std(acc);
  out.precision_macro = mean_std(prec);
  out.f1_macro = mean_std(f1);
  out.precision_micro = mean_std(prec_micro);
  out.f1_micro = mean_std(f1_micro);
  return out;
}

nlohmann::json to_json(const RepetitionRecord& r) {
  nlohmann::json j = {{"type", "repetition"},
                      {"repetition", r.repetition},
                      {"seed", r.seed},
                      {"ok", r.ok}};
  if (!r.ok) {
    j["error"] = r.error;
  } else {
    j["acc"] = r.metrics.acc;
    j["precision_macro"] = r.metrics.precision_macro;
    j["recall_macro"] = r.metrics.recall_macro;
    j["f1_macro"] = r.metrics.f1_macro;
    j["precision_micro"] = r.metrics.precision_micro;
    j["f1_micro"] = r.metrics.f1_micro;
    j["converged"] = r.converged;
    j["iterations"] = r.iterations;
    j["primal_residual"] = r.primal_residual;
  }
  j["seconds"] = r.seconds;
  j["warnings"] = r.warnings;
  return j;
}

nlohmann::json to_json(const ExperimentSummary& s, const ExperimentConfig& c) {
  const auto& a = c.solver.ablation;
  nlohmann::json j = {
      {"type", "aggregate"},
      {"method", method_name(c.method)},
      {"vmr", c.vmr},
      {"lar", c.lar},
      {"seed", c.seed},
      {"anchors", c.anchors},
      {"neighbors", c.neighbors},
      {"ablation",
       {{"freeze_alignment", a.freeze_alignment},
        {"freeze_weights", a.freeze_weights},
        {"disable_imputation", a.disable_imputation}}},
      {"repetitions", c.repetitions},
      {"completed", s.completed},
      {"partial", s.partial},
      {"acc", to_json(s.acc)},
      {"precision_macro", to_json(s.precision_macro)},
      {"f1_macro", to_json(s.f1_macro)},
      {"precision_micro", to_json(s.precision_micro)},
      {"f1_micro", to_json(s.f1_micro)},
  };
  return j;
}

nlohmann::json to_json(const IterationDiagnostics& d) {
  return {{"iteration", d.iteration},
          {"h", d.h},
          {"primal_residual", d.primal_residual},
          {"primal_residual_max", d.primal_residual_max},
          {"label_change", d.label_change},
          {"eta", d.eta},
          {"inner_iterations", d.inner_iterations},
          {"inner_converged", d.inner_converged},
          {"alpha", std::vector<double>(d.alpha.data(), d.alpha.data() + d.alpha.size())}};
}

}  // namespace agfti
