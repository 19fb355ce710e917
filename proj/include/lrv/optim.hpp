#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace lrv {

enum class OptimizerKind { Sgd, Momentum, Adagrad, RmsProp, Adadelta, Adamax, Adam };

std::string to_string(OptimizerKind k);
OptimizerKind optimizer_kind_from_string(const std::string& s);

struct OptimizerHyper {
  double alpha = 0.9;     // first-moment decay
  double beta = 0.999;    // second-moment decay
  double delta = 0.9;     // Adadelta update-average decay
  double epsilon = 1e-8;
};

// Piecewise-constant learning rate: rate of the first segment whose upper
// bound covers the step; clamped to the last rate beyond the final bound.
struct LrSchedule {
  struct Segment {
    std::int64_t upto = 0;  // inclusive upper step bound
    double rate = 0.0;
  };
  std::vector<Segment> segments;

  static LrSchedule constant(double rate);
  void validate() const;
  double at(std::int64_t m) const;
};

// Per-coordinate accumulators for the recursive update forms. All
// accumulators start at zero; the step counter m advances by one per call.
struct OptimizerState {
  OptimizerKind kind = OptimizerKind::Adam;
  OptimizerHyper hyper;
  LrSchedule schedule;
  std::int64_t step = 0;
  double alpha_pow = 1.0;  // alpha^m
  double beta_pow = 1.0;   // beta^m
  std::vector<double> m1;    // first moment
  std::vector<double> m2;    // second moment / squared-gradient sum / max
  std::vector<double> dacc;  // Adadelta squared-update average

  void init(std::size_t dim);
};

// One recursive update; mutates state and theta in place. Throws on
// non-finite gradient entries, reporting the offending step index.
void optimizer_step(OptimizerState& state, std::span<double> theta, std::span<const double> g);

// Direct (non-recursive) evaluation of the update vector psi_m from the full
// gradient history; test oracle for optimizer_step. history holds m stacked
// gradients of length dim.
std::vector<double> psi_closed_form(OptimizerKind kind, const OptimizerHyper& hyper,
                                    const LrSchedule& schedule,
                                    std::span<const std::vector<double>> history);

}  // namespace lrv
