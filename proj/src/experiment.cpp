#include "lrv/experiment.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <variant>

#include "json.hpp"

#include "lrv/theta_io.hpp"

namespace lrv {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::string fmt_double(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const std::string& s) {
  char buf[20];
  std::snprintf(buf, sizeof(buf), "%016" PRIx64, fnv1a64(s));
  return buf;
}

}  // namespace

std::string to_string(ModelId m) {
  switch (m) {
    case ModelId::BsCall: return "bs_call";
    case ModelId::WorstOfPut: return "worst_of_put";
    case ModelId::BarrierAvgPut: return "barrier_avg_put";
    case ModelId::Lorentz: return "lorentz";
    case ModelId::HeatMlp: return "heat_mlp";
  }
  return "?";
}

ModelId model_id_from_string(const std::string& s) {
  if (s == "bs_call") return ModelId::BsCall;
  if (s == "worst_of_put") return ModelId::WorstOfPut;
  if (s == "barrier_avg_put") return ModelId::BarrierAvgPut;
  if (s == "lorentz") return ModelId::Lorentz;
  if (s == "heat_mlp") return ModelId::HeatMlp;
  throw std::invalid_argument("unknown model: " + s);
}

ParameterDomain bs_call_domain() {
  return ParameterDomain({{90.0, 110.0}, {0.01, 1.0}, {-0.1, 0.1}, {0.01, 0.5}, {90.0, 110.0}});
}

ParameterDomain worst_of_put_domain() {
  std::vector<Interval> iv;
  for (int i = 0; i < 3; ++i) iv.push_back({90.0, 110.0});
  iv.push_back({0.01, 1.0});
  iv.push_back({-0.05, 0.05});
  for (int i = 0; i < 3; ++i) iv.push_back({0.0, 0.1});
  for (int i = 0; i < 3; ++i) iv.push_back({0.01, 0.5});
  for (int i = 0; i < 3; ++i) iv.push_back({-0.95, 0.95});
  iv.push_back({90.0, 110.0});
  return ParameterDomain(std::move(iv), std::array<int, 3>{11, 12, 13});
}

ParameterDomain barrier_avg_put_domain() {
  std::vector<Interval> iv;
  for (int i = 0; i < 3; ++i) iv.push_back({90.0, 110.0});
  iv.push_back({0.5, 1.0});
  iv.push_back({-0.05, 0.05});
  for (int i = 0; i < 3; ++i) iv.push_back({0.0, 0.1});
  for (int i = 0; i < 3; ++i) iv.push_back({0.01, 0.5});
  for (int i = 0; i < 3; ++i) iv.push_back({-0.95, 0.95});
  iv.push_back({90.0, 110.0});
  iv.push_back({70.0, 80.0});
  return ParameterDomain(std::move(iv), std::array<int, 3>{11, 12, 13});
}

ParameterDomain lorentz_domain() {
  return ParameterDomain({{0.01, 1.0},
                          {9.0, 11.0},
                          {13.0, 15.0},
                          {1.0, 2.0},
                          {0.05, 0.25},
                          {0.05, 0.25},
                          {0.05, 0.25},
                          {0.5, 2.5},
                          {8.0, 10.0},
                          {10.0, 12.0}});
}

namespace {

LrSchedule schedule_from_json(const json& j) {
  LrSchedule s;
  for (const auto& seg : j) {
    s.segments.push_back({seg.at(0).get<std::int64_t>(), seg.at(1).get<double>()});
  }
  s.validate();
  return s;
}

json schedule_to_json(const LrSchedule& s) {
  json j = json::array();
  for (const auto& seg : s.segments) j.push_back({seg.upto, seg.rate});
  return j;
}

using Binding =
    std::variant<BsCallBinding, WorstOfPutBinding, BarrierAvgPutBinding, LorentzBinding,
                 HeatMlpBinding>;

template <class B>
B with_domain(const ExperimentConfig& cfg, B b) {
  if (cfg.domain_override) {
    b.dom = ParameterDomain(*cfg.domain_override, b.dom.correlation_slot());
  }
  return b;
}

Binding make_binding(const ExperimentConfig& cfg) {
  switch (cfg.model) {
    case ModelId::BsCall:
      return with_domain(cfg, BsCallBinding{});
    case ModelId::WorstOfPut:
      return with_domain(cfg, WorstOfPutBinding{});
    case ModelId::BarrierAvgPut: {
      BarrierAvgPutBinding b;
      if (cfg.model_steps > 0) b.steps = cfg.model_steps;
      return with_domain(cfg, b);
    }
    case ModelId::Lorentz: {
      LorentzBinding b;
      if (cfg.model_steps > 0) b.steps = cfg.model_steps;
      b.antithetic_kernel = cfg.antithetic_kernel;
      return with_domain(cfg, b);
    }
    case ModelId::HeatMlp: {
      HeatMlpBinding b;
      b.model.dim = cfg.heat_dim;
      b.model.terminal_time = cfg.heat_terminal_time;
      b.model.f_kind = cfg.heat_f == "relu" ? models::HeatMlpModel::Nonlinearity::ReluScaled
                                            : models::HeatMlpModel::Nonlinearity::Zero;
      b.model.f_scale = cfg.heat_f_scale;
      b.reference_picard_level = cfg.heat_reference_level;
      b.reference_mlp_base = cfg.proposal.samples;
      if (!cfg.domain_override) {
        throw std::invalid_argument("heat_mlp requires an explicit domain (t and x intervals)");
      }
      b.dom = ParameterDomain(*cfg.domain_override);
      return b;
    }
  }
  throw std::logic_error("make_binding: unreachable");
}

void ensure_dir(const std::string& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

constexpr const char* kErrorCsvHeader =
    "method;num-params;num-samples;l1-error;l-2-error;l-inf-error;train-time;eval-time;"
    "seed;config-hash;optimizer;epsilon;alpha;beta;schedule\n";

void append_error_row(const std::string& path, const ExperimentConfig& cfg,
                      const std::string& method, std::int64_t num_params,
                      std::int64_t num_samples, const ErrorReport& r, double train_time) {
  const bool fresh = !fs::exists(path);
  std::ofstream os(path, std::ios::app);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (fresh) os << kErrorCsvHeader;
  std::ostringstream sched;
  for (std::size_t i = 0; i < cfg.train.schedule.segments.size(); ++i) {
    const auto& seg = cfg.train.schedule.segments[i];
    if (i) sched << "|";
    sched << seg.upto << ":" << fmt_double(seg.rate);
  }
  os << method << ";" << num_params << ";" << num_samples << ";" << fmt_double(r.l1) << ";"
     << fmt_double(r.l2) << ";" << fmt_double(r.linf) << ";" << fmt_double(train_time) << ";"
     << fmt_double(r.wall_clock) << ";" << cfg.seed << ";" << cfg.config_hash << ";"
     << to_string(cfg.train.optimizer) << ";" << fmt_double(cfg.train.hyper.epsilon) << ";"
     << fmt_double(cfg.train.hyper.alpha) << ";" << fmt_double(cfg.train.hyper.beta) << ";"
     << sched.str() << "\n";
}

void write_loss_csv(const std::string& path, const std::vector<LossTracePoint>& trace) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw std::runtime_error("cannot open " + path);
  os << "step,loss,lr,elapsed_s\n";
  for (const auto& t : trace) {
    os << t.step << "," << fmt_double(t.loss) << "," << fmt_double(t.lr) << ","
       << fmt_double(t.elapsed_s) << "\n";
  }
}

// Oracle values for an evaluation grid: the exact solution where available,
// otherwise per-point antithetic MC with the configured budget on an
// index-keyed child stream (parallel-safe and worker-count independent).
template <class B>
std::vector<double> oracle_on_points(const B& binding, const ExperimentConfig& cfg,
                                     const std::vector<double>& points, int p_dim, int workers) {
  const std::int64_t n = static_cast<std::int64_t>(points.size()) / p_dim;
  std::vector<double> values(n);
  if (binding.has_exact()) {
    for (std::int64_t i = 0; i < n; ++i) values[i] = binding.exact(points.data() + i * p_dim);
    return values;
  }
  if (cfg.eval.oracle_budget < 1) {
    throw std::invalid_argument("eval.oracle_budget must be positive for models without a "
                                "closed-form solution");
  }
  RngStream base(cfg.seed, "oracle");
  parallel_for_chunks(n, workers, [&](std::int64_t i) {
    RngStream s = base.split(std::to_string(i));
    values[i] = reference_oracle(binding, points.data() + i * p_dim, cfg.eval.oracle_budget, s);
  });
  return values;
}

template <class A>
ErrorReport errors_against_oracle(const A& approx, const std::vector<double>& points,
                                  const std::vector<double>& oracle, int p_dim, int workers) {
  const std::int64_t n = static_cast<std::int64_t>(oracle.size());
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::int64_t kChunk = 64;
  const std::int64_t n_chunks = (n + kChunk - 1) / kChunk;
  struct Partial {
    double abs_sum = 0.0, sq_sum = 0.0, quad_sum = 0.0, max_abs = 0.0;
  };
  std::vector<Partial> parts(n_chunks);
  parallel_for_chunks(n_chunks, workers, [&](std::int64_t c) {
    Partial acc;
    const std::int64_t hi = std::min(n, (c + 1) * kChunk);
    for (std::int64_t i = c * kChunk; i < hi; ++i) {
      const double e = approx(i, points.data() + i * p_dim) - oracle[i];
      const double a = std::fabs(e);
      acc.abs_sum += a;
      acc.sq_sum += e * e;
      acc.quad_sum += e * e * e * e;
      if (a > acc.max_abs) acc.max_abs = a;
    }
    parts[c] = acc;
  });
  Partial tot;
  for (const Partial& p : parts) {
    tot.abs_sum += p.abs_sum;
    tot.sq_sum += p.sq_sum;
    tot.quad_sum += p.quad_sum;
    if (p.max_abs > tot.max_abs) tot.max_abs = p.max_abs;
  }
  ErrorReport r;
  r.n_eval = n;
  const double nn = static_cast<double>(n);
  r.l1 = tot.abs_sum / nn;
  const double mean_sq = tot.sq_sum / nn;
  r.l2 = std::sqrt(mean_sq);
  r.linf = tot.max_abs;
  r.se_l1 = std::sqrt(std::max(0.0, mean_sq - r.l1 * r.l1) / nn);
  const double var_sq = std::max(0.0, tot.quad_sum / nn - mean_sq * mean_sq);
  r.se_l2 = r.l2 > 0.0 ? std::sqrt(var_sq / nn) / (2.0 * r.l2) : 0.0;
  r.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return r;
}

std::vector<double> draw_eval_points(const ParameterDomain& domain, std::int64_t n,
                                     std::uint64_t seed) {
  RngStream s(seed, "eval-grid");
  std::vector<double> points(n * domain.dim());
  for (std::int64_t i = 0; i < n; ++i) {
    domain.sample(s, std::span<double>(points.data() + i * domain.dim(), domain.dim()));
  }
  return points;
}

template <class B>
RunResult run_train_impl(const ExperimentConfig& cfg, B binding, const std::string& out_dir,
                         int workers, bool dry_run) {
  RunResult out;
  TrainConfig tc = cfg.train;
  tc.proposal = cfg.proposal;
  tc.reference = cfg.reference;
  tc.seed = cfg.seed;
  tc.workers = workers;
  tc.validate();
  out.theta_dim = cfg.proposal.theta_dim();
  if (dry_run) {
    std::printf("dry-run: model=%s proposal=%s theta_dim=%lld batch=%lld steps=%lld\n",
                to_string(cfg.model).c_str(), to_string(cfg.proposal.kind).c_str(),
                static_cast<long long>(out.theta_dim), static_cast<long long>(tc.batch),
                static_cast<long long>(tc.steps));
    return out;
  }
  ensure_dir(out_dir);

  TrainResult res = train(tc, binding);
  out.train_seconds = res.train_seconds;

  const std::string theta_path = out_dir + "/theta.bin";
  save_theta(theta_path, res.theta, cfg.seed);
  out.artifacts.push_back(theta_path);

  const std::string loss_path = out_dir + "/loss.csv";
  write_loss_csv(loss_path, res.trace);
  out.artifacts.push_back(loss_path);

  for (std::size_t c = 0; c < res.checkpoints.size(); ++c) {
    const std::string ck_path =
        out_dir + "/checkpoint_" + std::to_string(res.checkpoints[c].step) + ".bin";
    save_checkpoint(ck_path, res.checkpoints[c], cfg.seed);
    out.artifacts.push_back(ck_path);
  }

  const ParameterDomain& dom = binding.domain();
  const int p_dim = dom.dim();
  const auto points = draw_eval_points(dom, cfg.eval.n_points, cfg.seed);
  const auto oracle = oracle_on_points(binding, cfg, points, p_dim, workers);
  auto approx = [&](std::int64_t, const double* p) {
    return binding.template network<double>(cfg.proposal, p,
                                            std::span<const double>(res.theta.values));
  };
  out.errors = errors_against_oracle(approx, points, oracle, p_dim, workers);

  const std::string err_path = out_dir + "/errors.csv";
  append_error_row(err_path, cfg, "lrv_" + to_string(cfg.proposal.kind), out.theta_dim,
                   cfg.proposal.kind == ProposalKind::MLMC ? cfg.proposal.level_samples[0]
                                                           : cfg.proposal.samples,
                   out.errors, out.train_seconds);
  out.artifacts.push_back(err_path);
  return out;
}

template <class B>
RunResult run_baseline_impl(const ExperimentConfig& cfg, B binding, const std::string& method,
                            const std::string& out_dir, int workers) {
  const bool qmc = method == "qmc" || method == "qmc_anti";
  const bool anti = method == "mc_anti" || method == "qmc_anti";
  if (!qmc && method != "mc" && method != "mc_anti") {
    throw std::invalid_argument("run_baseline: method must be mc, mc_anti, qmc or qmc_anti");
  }
  ensure_dir(out_dir);
  const ParameterDomain& dom = binding.domain();
  const int p_dim = dom.dim();
  const std::int64_t M = cfg.proposal.kind == ProposalKind::MLMC ? cfg.proposal.level_samples[0]
                                                                 : cfg.proposal.samples;
  const int sample_dim = static_cast<int>(binding.reference_dim());

  const auto points = draw_eval_points(dom, cfg.eval.n_points, cfg.seed);
  const auto oracle = oracle_on_points(binding, cfg, points, p_dim, workers);

  RngStream base(cfg.seed, "baseline/" + method);
  auto kernel = [&](const double* p, const double* w) { return binding.reference_payoff(p, w); };
  auto approx = [&](std::int64_t i, const double* p) {
    if (qmc) {
      SobolSequence seq(sample_dim);
      return qmc_baseline(kernel, sample_dim, p, M, seq, anti);
    }
    RngStream s = base.split(std::to_string(i));
    return mc_baseline(kernel, sample_dim, p, M, s, anti);
  };

  RunResult out;
  out.theta_dim = 0;
  out.errors = errors_against_oracle(approx, points, oracle, p_dim, workers);
  const std::string err_path = out_dir + "/errors.csv";
  append_error_row(err_path, cfg, method, M * sample_dim, M, out.errors, 0.0);
  out.artifacts.push_back(err_path);
  return out;
}

template <class B>
RunResult run_eval_impl(const ExperimentConfig& cfg, B binding, const std::string& theta_path,
                        const std::string& out_dir, int workers) {
  ensure_dir(out_dir);
  ThetaVector theta = load_theta(theta_path);
  const ParameterDomain& dom = binding.domain();
  const int p_dim = dom.dim();
  const auto points = draw_eval_points(dom, cfg.eval.n_points, cfg.seed);
  const auto oracle = oracle_on_points(binding, cfg, points, p_dim, workers);
  auto approx = [&](std::int64_t, const double* p) {
    return binding.template network<double>(theta.layout, p,
                                            std::span<const double>(theta.values));
  };
  RunResult out;
  out.theta_dim = theta.dim();
  out.errors = errors_against_oracle(approx, points, oracle, p_dim, workers);
  const std::string err_path = out_dir + "/errors.csv";
  append_error_row(err_path, cfg, "lrv_eval", theta.dim(),
                   theta.layout.kind == ProposalKind::MLMC ? theta.layout.level_samples[0]
                                                           : theta.layout.samples,
                   out.errors, 0.0);
  out.artifacts.push_back(err_path);
  return out;
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& text) {
  json j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
  ExperimentConfig cfg;
  cfg.name = j.value("name", std::string("experiment"));
  cfg.model = model_id_from_string(j.at("model").get<std::string>());
  cfg.seed = j.value("seed", std::uint64_t{0});
  cfg.paper_scale = j.value("paper_scale", false);

  const json& p = j.at("proposal");
  cfg.proposal.kind = proposal_kind_from_string(p.at("kind").get<std::string>());
  cfg.proposal.samples = p.value("samples", std::int64_t{1});
  if (p.contains("level_samples")) {
    cfg.proposal.level_samples = p.at("level_samples").get<std::vector<std::int64_t>>();
  }
  cfg.proposal.steps = p.value("steps", 1);
  cfg.proposal.state_dim = p.value("state_dim", 1);
  cfg.proposal.picard_level = p.value("picard_level", 1);
  cfg.proposal.mlp_uniform_coord = p.value("mlp_uniform_coord", -1);

  if (j.contains("reference")) {
    const json& r = j.at("reference");
    const std::string mode = r.value("mode", std::string("exact"));
    cfg.reference.mode = mode == "stochastic_mc" ? ReferenceSpec::Mode::StochasticMc
                                                 : ReferenceSpec::Mode::Exact;
    cfg.reference.samples = r.value("samples", std::int64_t{1});
    cfg.reference.antithetic = r.value("antithetic", false);
  }

  if (j.contains("train")) {
    const json& t = j.at("train");
    cfg.train.batch = t.value("batch", std::int64_t{1});
    cfg.train.steps = t.value("steps", std::int64_t{1});
    cfg.train.optimizer = optimizer_kind_from_string(t.value("optimizer", std::string("adam")));
    if (t.contains("hyper")) {
      const json& h = t.at("hyper");
      cfg.train.hyper.alpha = h.value("alpha", 0.9);
      cfg.train.hyper.beta = h.value("beta", 0.999);
      cfg.train.hyper.delta = h.value("delta", 0.9);
      cfg.train.hyper.epsilon = h.value("epsilon", 1e-8);
    }
    if (t.contains("schedule")) cfg.train.schedule = schedule_from_json(t.at("schedule"));
    cfg.train.checkpoint_every = t.value("checkpoint_every", std::int64_t{0});
  }

  if (j.contains("eval")) {
    cfg.eval.n_points = j.at("eval").value("n_points", std::int64_t{10000});
    cfg.eval.oracle_budget = j.at("eval").value("oracle_budget", std::int64_t{0});
  }

  if (j.contains("model_options")) {
    const json& m = j.at("model_options");
    cfg.antithetic_kernel = m.value("antithetic_kernel", false);
    cfg.model_steps = m.value("steps", 0);
    cfg.heat_dim = m.value("heat_dim", 1);
    cfg.heat_terminal_time = m.value("heat_terminal_time", 1.0);
    cfg.heat_f = m.value("f", std::string("zero"));
    cfg.heat_f_scale = m.value("f_scale", 1.0);
    cfg.heat_reference_level = m.value("heat_reference_level", 2);
    if (m.contains("domain")) {
      std::vector<Interval> iv;
      for (const auto& pair : m.at("domain")) {
        iv.push_back({pair.at(0).get<double>(), pair.at(1).get<double>()});
      }
      cfg.domain_override = std::move(iv);
    }
  }

  cfg.config_hash = hash_hex(j.dump());
  cfg.proposal.validate();
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_experiment_config(ss.str());
}

RunResult run_train(const ExperimentConfig& cfg, const std::string& out_dir, int workers,
                    bool dry_run) {
  Binding b = make_binding(cfg);
  return std::visit(
      [&](auto& binding) { return run_train_impl(cfg, binding, out_dir, workers, dry_run); }, b);
}

RunResult run_baseline(const ExperimentConfig& cfg, const std::string& method,
                       const std::string& out_dir, int workers) {
  Binding b = make_binding(cfg);
  return std::visit(
      [&](auto& binding) { return run_baseline_impl(cfg, binding, method, out_dir, workers); },
      b);
}

RunResult run_eval(const ExperimentConfig& cfg, const std::string& theta_path,
                   const std::string& out_dir, int workers) {
  Binding b = make_binding(cfg);
  return std::visit(
      [&](auto& binding) { return run_eval_impl(cfg, binding, theta_path, out_dir, workers); },
      b);
}

LearnedExport export_learned(const std::string& theta_path, const std::string& out_dir, int bins,
                             double range_lo, double range_hi) {
  if (bins < 1) throw std::invalid_argument("export_learned: bins must be >= 1");
  if (!(range_lo < range_hi)) throw std::invalid_argument("export_learned: empty range");
  ThetaVector theta = load_theta(theta_path);
  const std::int64_t n = theta.dim();
  if (n == 0) throw std::invalid_argument("export_learned: empty theta vector");
  ensure_dir(out_dir);

  LearnedExport out;
  double mean = 0.0;
  for (double x : theta.values) mean += x;
  mean /= static_cast<double>(n);
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double x : theta.values) {
    const double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
    m4 += d * d * d * d;
  }
  m2 /= n;
  m3 /= n;
  m4 /= n;
  out.mean = mean;
  out.variance = m2;
  out.skewness = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  out.kurtosis = m2 > 0.0 ? m4 / (m2 * m2) : 0.0;

  std::vector<std::int64_t> counts(bins, 0);
  std::int64_t underflow = 0, overflow = 0;
  const double width = (range_hi - range_lo) / bins;
  for (double x : theta.values) {
    if (x < range_lo) {
      ++underflow;
    } else if (x >= range_hi) {
      ++overflow;
    } else {
      ++counts[static_cast<std::int64_t>((x - range_lo) / width)];
    }
  }

  const std::string hist_path = out_dir + "/theta_hist.csv";
  {
    std::ofstream os(hist_path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + hist_path);
    os << "bin_lo,bin_hi,count\n";
    os << "-inf," << fmt_double(range_lo) << "," << underflow << "\n";
    for (int b = 0; b < bins; ++b) {
      os << fmt_double(range_lo + b * width) << "," << fmt_double(range_lo + (b + 1) * width)
         << "," << counts[b] << "\n";
    }
    os << fmt_double(range_hi) << ",inf," << overflow << "\n";
  }
  out.artifacts.push_back(hist_path);

  const std::string mom_path = out_dir + "/theta_moments.csv";
  {
    std::ofstream os(mom_path, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot open " + mom_path);
    os << "n,mean,variance,skewness,kurtosis\n";
    os << n << "," << fmt_double(out.mean) << "," << fmt_double(out.variance) << ","
       << fmt_double(out.skewness) << "," << fmt_double(out.kurtosis) << "\n";
  }
  out.artifacts.push_back(mom_path);
  return out;
}

}  // namespace lrv
