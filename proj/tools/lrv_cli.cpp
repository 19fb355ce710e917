// Config-driven experiment runner: train LRV models, evaluate MC/QMC
// baselines, re-evaluate stored parameter vectors and export learned-variable
// histograms.

#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"

#include "lrv/experiment.hpp"
#include "lrv/parallel.hpp"

namespace {

struct CommonOpts {
  std::string config;
  std::string out = "out";
  int workers = 1;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool allow_paper_scale = false;
};

lrv::ExperimentConfig load(const CommonOpts& o) {
  lrv::ExperimentConfig cfg = lrv::load_experiment_config(o.config);
  if (o.seed_set) cfg.seed = o.seed;
  if (cfg.paper_scale && !o.allow_paper_scale) {
    throw std::runtime_error(
        "config is marked paper_scale; pass --allow-paper-scale to run it (expect long runtimes)");
  }
  return cfg;
}

void add_common(CLI::App* app, CommonOpts& o, bool needs_config = true) {
  auto* c = app->add_option("--config", o.config, "experiment config (JSON, comments allowed)");
  if (needs_config) c->required();
  app->add_option("--out", o.out, "output directory");
  app->add_option("--workers", o.workers, "worker threads (results do not depend on this)");
  app->add_option("--seed", o.seed, "override the config seed")->each([&](const std::string&) {
    o.seed_set = true;
  });
  app->add_flag("--allow-paper-scale", o.allow_paper_scale, "run paper-scale configs");
}

void print_report(const char* what, const lrv::RunResult& r) {
  std::printf("%s: l1=%.6g l2=%.6g linf=%.6g (n=%lld, se_l2=%.2g)\n", what, r.errors.l1,
              r.errors.l2, r.errors.linf, static_cast<long long>(r.errors.n_eval),
              r.errors.se_l2);
  for (const auto& a : r.artifacts) std::printf("wrote %s\n", a.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"learned-random-variable Monte Carlo experiments"};
  app.require_subcommand(1);

  CommonOpts train_o, base_o, eval_o;
  bool dry_run = false;
  std::string method = "mc";
  std::string theta_path;

  CLI::App* train_cmd = app.add_subcommand("train", "train an LRV model");
  add_common(train_cmd, train_o);
  train_cmd->add_flag("--dry-run", dry_run, "validate config and print the resolved layout");

  CLI::App* base_cmd = app.add_subcommand("baseline", "evaluate a baseline estimator");
  add_common(base_cmd, base_o);
  base_cmd->add_option("--method", method, "mc | mc_anti | qmc | qmc_anti")->required();

  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a stored theta artifact");
  add_common(eval_cmd, eval_o);
  eval_cmd->add_option("--theta", theta_path, "theta file")->required();

  CLI::App* export_cmd = app.add_subcommand("export", "histogram + moments of a theta artifact");
  std::string export_theta, export_out = "out";
  int bins = 60;
  double range_lo = -5.0, range_hi = 5.0;
  export_cmd->add_option("--theta", export_theta, "theta file")->required();
  export_cmd->add_option("--out", export_out, "output directory");
  export_cmd->add_option("--bins", bins, "number of histogram bins");
  export_cmd->add_option("--range-lo", range_lo, "histogram lower edge");
  export_cmd->add_option("--range-hi", range_hi, "histogram upper edge");

  CLI11_PARSE(app, argc, argv);

  try {
    if (train_cmd->parsed()) {
      auto cfg = load(train_o);
      auto r = lrv::run_train(cfg, train_o.out, train_o.workers, dry_run);
      if (!dry_run) {
        print_report("train", r);
        std::printf("train time: %.1fs\n", r.train_seconds);
      }
    } else if (base_cmd->parsed()) {
      auto cfg = load(base_o);
      auto r = lrv::run_baseline(cfg, method, base_o.out, base_o.workers);
      print_report(method.c_str(), r);
    } else if (eval_cmd->parsed()) {
      auto cfg = load(eval_o);
      auto r = lrv::run_eval(cfg, theta_path, eval_o.out, eval_o.workers);
      print_report("eval", r);
    } else if (export_cmd->parsed()) {
      auto r = lrv::export_learned(export_theta, export_out, bins, range_lo, range_hi);
      std::printf("moments: mean=%.6g var=%.6g skew=%.6g kurt=%.6g\n", r.mean, r.variance,
                  r.skewness, r.kurtosis);
      for (const auto& a : r.artifacts) std::printf("wrote %s\n", a.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
