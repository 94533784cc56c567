#include "agfti/dataset.hpp"
#include "agfti/experiment.hpp"
#include "agfti/masks.hpp"
#include "agfti/metrics.hpp"
#include "agfti/parallel.hpp"
#include "agfti/ssl.hpp"
#include "agfti/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct SolverFlags {
  std::optional<double> lambda;
  double beta_lambda = 4.0;
  double rho = 100.0;
  Eigen::Index anchors = 0;
  Eigen::Index neighbors = agfti::kDefaultNeighbors;
  double b_labeled = 100.0;
  double tol = 1e-5;
  int max_iters = 50;
  std::uint64_t seed = 0;
  int threads = 0;
  std::string stop_norm = "fro";

  void attach(CLI::App* app) {
    app->add_option("--lambda", lambda, "fusion weight (default V^2)");
    app->add_option("--beta-lambda", beta_lambda, "fused-graph ridge weight")->capture_default_str();
    app->add_option("--rho", rho, "tensor nuclear norm weight")->capture_default_str();
    app->add_option("--anchors", anchors, "anchors per view, a power of two (0 = auto)");
    app->add_option("--neighbors", neighbors, "nearest anchors per sample")->capture_default_str();
    app->add_option("--b-labeled", b_labeled, "fitting weight of labeled samples")->capture_default_str();
    app->add_option("--tol", tol, "outer stopping tolerance")->capture_default_str();
    app->add_option("--max-iters", max_iters, "outer iteration cap")->capture_default_str();
    app->add_option("--seed", seed, "base seed")->capture_default_str();
    app->add_option("--threads", threads, "worker threads (overrides AGFTI_THREADS)");
    app->add_option("--stop-norm", stop_norm, "norm of Z - G in the stopping rule")
        ->check(CLI::IsMember({"fro", "max"}))
        ->capture_default_str();
  }

  agfti::AdmmConfig solver() const {
    agfti::AdmmConfig c;
    c.lambda = lambda;
    c.beta_lambda = beta_lambda;
    c.rho = rho;
    c.b.labeled = b_labeled;
    c.tol = tol;
    c.max_outer_iters = max_iters;
    c.stop_norm = stop_norm == "max" ? agfti::ResidualNorm::Max : agfti::ResidualNorm::Frobenius;
    return c;
  }

  void apply_threads() const {
    const int n = threads > 0 ? threads : agfti::threads_from_env();
    if (n > 0) agfti::set_num_threads(n);
  }
};

struct AblationFlags {
  bool no_t = false, no_alpha = false, no_ti = false;
  void attach(CLI::App* app) {
    app->add_flag("--no-alignment", no_t, "freeze T_v = I");
    app->add_flag("--no-weights", no_alpha, "freeze alpha_v = 1/V");
    app->add_flag("--no-imputation", no_ti, "never update missing graph rows");
  }
  agfti::Ablation get() const { return {no_t, no_alpha, no_ti}; }
};

agfti::DatasetContainer read_data(const std::string& path) {
  return fs::is_directory(path) ? agfti::load_dataset_csv(path) : agfti::load_dataset(path);
}

agfti::MaskSet masks_for(const agfti::DatasetContainer& data, const std::string& mask_path,
                         double vmr, double lar, std::uint64_t seed) {
  if (!mask_path.empty()) return agfti::load_masks(mask_path, data.view_count());
  return agfti::generate_masks(data, {vmr, lar, seed});
}

void emit(std::ostream& out, const json& j) { out << j.dump() << '\n'; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Incomplete multi-view semi-supervised classification (AGF-TI)"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic sub-cluster dataset");
  agfti::SynthConfig sc;
  std::string synth_out, synth_csv;
  synth->add_option("--out", synth_out, "binary container path");
  synth->add_option("--csv", synth_csv, "also write a CSV directory");
  synth->add_option("--seed", sc.seed)->capture_default_str();
  synth->add_option("--n-per-class", sc.n_per_class)->capture_default_str();
  synth->add_option("--total", sc.total, "total samples, overrides --n-per-class");
  synth->add_option("--views", sc.views)->capture_default_str();
  synth->add_option("--classes", sc.classes)->capture_default_str();
  synth->add_option("--vacuum-width", sc.vacuum_width)->capture_default_str();
  synth->add_option("--length", sc.length)->capture_default_str();
  synth->add_option("--separation", sc.separation)->capture_default_str();
  synth->add_option("--noise", sc.noise)->capture_default_str();
  synth->add_option("--noise-growth", sc.noise_growth)->capture_default_str();

  // mask
  auto* mask = app.add_subcommand("mask", "draw view-missing and label masks");
  std::string mask_data, mask_out;
  agfti::MaskSpec ms;
  mask->add_option("--data", mask_data, "container file or CSV directory")->required();
  mask->add_option("--out", mask_out, "mask JSON path (stdout if omitted)");
  mask->add_option("--vmr", ms.vmr)->capture_default_str();
  mask->add_option("--lar", ms.lar)->capture_default_str();
  mask->add_option("--seed", ms.seed)->capture_default_str();

  // train
  auto* train = app.add_subcommand("train", "solve once and write predictions");
  SolverFlags train_flags;
  AblationFlags train_ablation;
  std::string train_data, train_masks, train_out;
  double train_vmr = 0.5, train_lar = 0.05;
  train->add_option("--data", train_data)->required();
  train->add_option("--masks", train_masks, "mask JSON (drawn from --seed if omitted)");
  train->add_option("--vmr", train_vmr)->capture_default_str();
  train->add_option("--lar", train_lar)->capture_default_str();
  train->add_option("--out", train_out, "prediction JSON path (stdout if omitted)");
  train_flags.attach(train);
  train_ablation.attach(train);

  // eval
  auto* eval = app.add_subcommand(
      "eval", "score a prediction file, or run the seeded repetition protocol");
  SolverFlags eval_flags;
  AblationFlags eval_ablation;
  std::string eval_data, eval_predictions, eval_method = "agf_ti";
  double eval_vmr = 0.5, eval_lar = 0.05;
  int eval_reps = 10;
  eval->add_option("--data", eval_data)->required();
  eval->add_option("--predictions", eval_predictions, "prediction JSON from `train`");
  eval->add_option("--vmr", eval_vmr)->capture_default_str();
  eval->add_option("--lar", eval_lar)->capture_default_str();
  eval->add_option("--repetitions,-K", eval_reps)->capture_default_str();
  eval->add_option("--method", eval_method)
      ->check(CLI::IsMember({"agf_ti", "plain_propagation"}))
      ->capture_default_str();
  eval_flags.attach(eval);
  eval_ablation.attach(eval);

  // ablate
  auto* ablate = app.add_subcommand("ablate", "full model against each ablation");
  SolverFlags ablate_flags;
  std::string ablate_data;
  double ablate_vmr = 0.5, ablate_lar = 0.05;
  int ablate_reps = 10;
  ablate->add_option("--data", ablate_data)->required();
  ablate->add_option("--vmr", ablate_vmr)->capture_default_str();
  ablate->add_option("--lar", ablate_lar)->capture_default_str();
  ablate->add_option("--repetitions,-K", ablate_reps)->capture_default_str();
  ablate_flags.attach(ablate);

  // diag
  auto* diag = app.add_subcommand("diag", "per-iteration diagnostics as JSON lines");
  SolverFlags diag_flags;
  AblationFlags diag_ablation;
  std::string diag_data, diag_masks;
  double diag_vmr = 0.5, diag_lar = 0.05;
  diag->add_option("--data", diag_data)->required();
  diag->add_option("--masks", diag_masks);
  diag->add_option("--vmr", diag_vmr)->capture_default_str();
  diag->add_option("--lar", diag_lar)->capture_default_str();
  diag_flags.attach(diag);
  diag_ablation.attach(diag);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      if (synth_out.empty() && synth_csv.empty()) throw CLI::RequiredError("--out or --csv");
      const auto data = agfti::synth_scp(sc);
      if (!synth_out.empty()) agfti::save_dataset(data, synth_out);
      if (!synth_csv.empty()) agfti::save_dataset_csv(data, synth_csv);
      emit(std::cout, {{"samples", data.samples()}, {"views", data.view_count()},
                       {"classes", data.classes}});
    } else if (*mask) {
      const auto data = read_data(mask_data);
      const auto masks = agfti::generate_masks(data, ms);
      if (mask_out.empty()) {
        std::cout << agfti::masks_to_json(masks) << '\n';
      } else {
        agfti::save_masks(masks, mask_out);
      }
    } else if (*train || *diag) {
      const bool is_train = train->parsed();
      const SolverFlags& flags = is_train ? train_flags : diag_flags;
      flags.apply_threads();
      const auto data = read_data(is_train ? train_data : diag_data);
      const auto masks = masks_for(data, is_train ? train_masks : diag_masks,
                                   is_train ? train_vmr : diag_vmr,
                                   is_train ? train_lar : diag_lar, flags.seed);
      const Eigen::Index m = flags.anchors > 0 ? flags.anchors : agfti::default_anchor_count(masks);
      const auto problem = agfti::build_problem(data, masks, m, flags.neighbors, flags.seed);
      auto config = flags.solver();
      config.ablation = (is_train ? train_ablation : diag_ablation).get();

      agfti::DiagnosticsSink sink;
      if (!is_train) sink = [](const agfti::IterationDiagnostics& d) { emit(std::cout, agfti::to_json(d)); };
      const auto result = agfti::admm_solve(problem, config, sink);
      for (const auto& w : result.warnings) std::cerr << "warning: " << w << '\n';

      if (is_train) {
        const auto rows = masks.unlabeled();
        const auto pred = agfti::predict(result.labels.F, rows);
        json out = {{"samples", rows}, {"predictions", pred}, {"converged", result.converged},
                    {"iterations", result.iterations}};
        if (train_out.empty()) {
          emit(std::cout, out);
        } else {
          std::ofstream(train_out) << out.dump() << '\n';
        }
      } else {
        emit(std::cout, {{"type", "summary"}, {"converged", result.converged},
                         {"iterations", result.iterations}});
      }
    } else if (*eval) {
      const auto data = read_data(eval_data);
      if (!eval_predictions.empty()) {
        std::ifstream in(eval_predictions);
        if (!in) throw agfti::Error("cannot open " + eval_predictions);
        const json j = json::parse(in);
        const auto rows = j.at("samples").get<std::vector<Eigen::Index>>();
        const auto pred = j.at("predictions").get<std::vector<int>>();
        std::vector<int> p, truth;
        for (std::size_t r = 0; r < rows.size(); ++r) {
          const int y = data.labels.at(static_cast<std::size_t>(rows[r]));
          if (y < 0) continue;
          p.push_back(pred.at(r));
          truth.push_back(y);
        }
        const auto m = agfti::compute_metrics(p, truth, data.classes);
        for (const auto& w : m.warnings) std::cerr << "warning: " << w << '\n';
        emit(std::cout, {{"acc", m.acc}, {"precision_macro", m.precision_macro},
                         {"f1_macro", m.f1_macro}, {"precision_micro", m.precision_micro},
                         {"f1_micro", m.f1_micro}});
      } else {
        eval_flags.apply_threads();
        agfti::ExperimentConfig config;
        config.solver = eval_flags.solver();
        config.solver.ablation = eval_ablation.get();
        config.method = eval_method == "plain_propagation" ? agfti::Method::PlainPropagation
                                                          : agfti::Method::AgfTi;
        config.anchors = eval_flags.anchors;
        config.neighbors = eval_flags.neighbors;
        config.vmr = eval_vmr;
        config.lar = eval_lar;
        config.seed = eval_flags.seed;
        config.repetitions = eval_reps;
        const auto summary = agfti::run_experiment(
            data, config, [](const agfti::RepetitionRecord& r) { emit(std::cout, agfti::to_json(r)); });
        emit(std::cout, agfti::to_json(summary, config));
        if (summary.partial) return 3;
      }
    } else if (*ablate) {
      ablate_flags.apply_threads();
      const auto data = read_data(ablate_data);
      const std::pair<const char*, agfti::Ablation> variants[] = {
          {"full", {}},
          {"no_alignment", {true, false, false}},
          {"no_weights", {false, true, false}},
          {"no_imputation", {false, false, true}},
      };
      for (const auto& [name, ablation] : variants) {
        agfti::ExperimentConfig config;
        config.solver = ablate_flags.solver();
        config.solver.ablation = ablation;
        config.anchors = ablate_flags.anchors;
        config.neighbors = ablate_flags.neighbors;
        config.vmr = ablate_vmr;
        config.lar = ablate_lar;
        config.seed = ablate_flags.seed;
        config.repetitions = ablate_reps;
        json j = agfti::to_json(agfti::run_experiment(data, config), config);
        j["variant"] = name;
        emit(std::cout, j);
      }
    }
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
