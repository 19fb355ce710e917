#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lrv/bindings.hpp"
#include "lrv/eval.hpp"
#include "lrv/trainer.hpp"

namespace lrv {

enum class ModelId { BsCall, WorstOfPut, BarrierAvgPut, Lorentz, HeatMlp };

std::string to_string(ModelId m);
ModelId model_id_from_string(const std::string& s);

struct EvalConfig {
  std::int64_t n_points = 10000;
  std::int64_t oracle_budget = 0;  // MC samples per oracle value; 0 = exact only
};

// One experiment: a model, a proposal network over it, a reference
// generator, the training recipe and the evaluation grid.
struct ExperimentConfig {
  std::string name = "experiment";
  ModelId model = ModelId::BsCall;
  ProposalSpec proposal;
  ReferenceSpec reference;
  TrainConfig train;
  EvalConfig eval;
  std::uint64_t seed = 0;
  bool paper_scale = false;

  // model options
  bool antithetic_kernel = false;     // Lorentz Phi_1
  int model_steps = 0;                // override path steps (barrier 10, lorentz 25)
  int heat_dim = 1;
  double heat_terminal_time = 1.0;
  std::string heat_f = "zero";  // zero | relu
  double heat_f_scale = 1.0;
  int heat_reference_level = 2;
  std::optional<std::vector<Interval>> domain_override;

  std::string config_hash;  // filled at parse time
};

ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig parse_experiment_config(const std::string& json_text);

struct RunResult {
  ErrorReport errors;
  double train_seconds = 0.0;
  std::vector<std::string> artifacts;  // files written
  std::int64_t theta_dim = 0;
};

// Train an LRV model: writes <out>/theta.bin, <out>/loss.csv and appends an
// error row to <out>/errors.csv. dry_run only validates and reports the
// resolved parameter count.
RunResult run_train(const ExperimentConfig& cfg, const std::string& out_dir, int workers,
                    bool dry_run = false);

// Evaluate one baseline estimator (mc, mc_anti, qmc, qmc_anti) on the
// experiment's grid and append an error row.
RunResult run_baseline(const ExperimentConfig& cfg, const std::string& method,
                       const std::string& out_dir, int workers);

// Re-evaluate a stored theta artifact on the experiment grid.
RunResult run_eval(const ExperimentConfig& cfg, const std::string& theta_path,
                   const std::string& out_dir, int workers);

struct LearnedExport {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  std::vector<std::string> artifacts;
};

// Histogram CSV and sample moments of a stored theta vector.
LearnedExport export_learned(const std::string& theta_path, const std::string& out_dir, int bins,
                             double range_lo, double range_hi);

}  // namespace lrv
