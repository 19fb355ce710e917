#include "lrv/theta_io.hpp"

#include <fstream>
#include <stdexcept>

#include "json.hpp"

namespace lrv {

namespace {

using nlohmann::json;

constexpr char kThetaMagic[] = "LRVTHETA1\n";
constexpr char kCheckpointMagic[] = "LRVCKPT1\n";

json spec_to_json_obj(const ProposalSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  j["samples"] = spec.samples;
  if (!spec.level_samples.empty()) j["level_samples"] = spec.level_samples;
  j["steps"] = spec.steps;
  j["state_dim"] = spec.state_dim;
  j["picard_level"] = spec.picard_level;
  if (spec.mlp_uniform_coord >= 0) j["mlp_uniform_coord"] = spec.mlp_uniform_coord;
  return j;
}

ProposalSpec spec_from_json_obj(const json& j) {
  ProposalSpec spec;
  spec.kind = proposal_kind_from_string(j.at("kind").get<std::string>());
  spec.samples = j.value("samples", std::int64_t{1});
  if (j.contains("level_samples")) {
    spec.level_samples = j.at("level_samples").get<std::vector<std::int64_t>>();
  }
  spec.steps = j.value("steps", 1);
  spec.state_dim = j.value("state_dim", 1);
  spec.picard_level = j.value("picard_level", 1);
  spec.mlp_uniform_coord = j.value("mlp_uniform_coord", -1);
  spec.validate();
  return spec;
}

void write_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t read_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

void write_doubles(std::ostream& os, const std::vector<double>& xs) {
  os.write(reinterpret_cast<const char*>(xs.data()),
           static_cast<std::streamsize>(xs.size() * sizeof(double)));
}

void read_doubles(std::istream& is, std::vector<double>& xs) {
  is.read(reinterpret_cast<char*>(xs.data()),
          static_cast<std::streamsize>(xs.size() * sizeof(double)));
}

void expect_magic(std::istream& is, const char* magic) {
  std::string line;
  if (!std::getline(is, line) || line + "\n" != magic) {
    throw std::runtime_error("unrecognized file format");
  }
}

}  // namespace

std::string proposal_spec_to_json(const ProposalSpec& spec) { return spec_to_json_obj(spec).dump(); }

ProposalSpec proposal_spec_from_json_text(const std::string& text) {
  return spec_from_json_obj(json::parse(text));
}

void save_theta(const std::string& path, const ThetaVector& theta, std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_theta: cannot open " + path);
  json header;
  header["spec"] = spec_to_json_obj(theta.layout);
  header["dim"] = theta.dim();
  header["seed"] = seed;
  const std::string text = header.dump();
  os << kThetaMagic;
  write_u64(os, text.size());
  os << text;
  write_doubles(os, theta.values);
  if (!os) throw std::runtime_error("save_theta: write failed for " + path);
}

ThetaVector load_theta(const std::string& path, std::uint64_t* seed_out) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_theta: cannot open " + path);
  expect_magic(is, kThetaMagic);
  const std::uint64_t len = read_u64(is);
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  json header = json::parse(text);
  ThetaVector theta;
  theta.layout = spec_from_json_obj(header.at("spec"));
  theta.values.resize(header.at("dim").get<std::int64_t>());
  read_doubles(is, theta.values);
  if (!is) throw std::runtime_error("load_theta: truncated file " + path);
  if (seed_out) *seed_out = header.value("seed", std::uint64_t{0});
  return theta;
}

ThetaVector load_theta(const std::string& path) { return load_theta(path, nullptr); }

void save_checkpoint(const std::string& path, const Checkpoint& ck, std::uint64_t seed) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw std::runtime_error("save_checkpoint: cannot open " + path);
  json header;
  header["spec"] = spec_to_json_obj(ck.theta.layout);
  header["dim"] = ck.theta.dim();
  header["seed"] = seed;
  header["step"] = ck.step;
  header["optimizer"] = to_string(ck.opt.kind);
  header["hyper"] = {{"alpha", ck.opt.hyper.alpha},
                     {"beta", ck.opt.hyper.beta},
                     {"delta", ck.opt.hyper.delta},
                     {"epsilon", ck.opt.hyper.epsilon}};
  json sched = json::array();
  for (const auto& seg : ck.opt.schedule.segments) sched.push_back({seg.upto, seg.rate});
  header["schedule"] = sched;
  header["alpha_pow"] = ck.opt.alpha_pow;
  header["beta_pow"] = ck.opt.beta_pow;
  header["points_state"] = ck.points_state;
  header["refs_state"] = ck.refs_state;
  const std::string text = header.dump();
  os << kCheckpointMagic;
  write_u64(os, text.size());
  os << text;
  write_doubles(os, ck.theta.values);
  write_doubles(os, ck.opt.m1);
  write_doubles(os, ck.opt.m2);
  write_doubles(os, ck.opt.dacc);
  if (!os) throw std::runtime_error("save_checkpoint: write failed for " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("load_checkpoint: cannot open " + path);
  expect_magic(is, kCheckpointMagic);
  const std::uint64_t len = read_u64(is);
  std::string text(len, '\0');
  is.read(text.data(), static_cast<std::streamsize>(len));
  json header = json::parse(text);

  Checkpoint ck;
  ck.theta.layout = spec_from_json_obj(header.at("spec"));
  const std::int64_t dim = header.at("dim").get<std::int64_t>();
  ck.theta.values.resize(dim);
  ck.step = header.at("step").get<std::int64_t>();
  ck.opt.kind = optimizer_kind_from_string(header.at("optimizer").get<std::string>());
  ck.opt.hyper.alpha = header.at("hyper").at("alpha").get<double>();
  ck.opt.hyper.beta = header.at("hyper").at("beta").get<double>();
  ck.opt.hyper.delta = header.at("hyper").at("delta").get<double>();
  ck.opt.hyper.epsilon = header.at("hyper").at("epsilon").get<double>();
  for (const auto& seg : header.at("schedule")) {
    ck.opt.schedule.segments.push_back({seg.at(0).get<std::int64_t>(), seg.at(1).get<double>()});
  }
  ck.opt.step = ck.step;
  ck.opt.alpha_pow = header.at("alpha_pow").get<double>();
  ck.opt.beta_pow = header.at("beta_pow").get<double>();
  ck.opt.m1.resize(dim);
  ck.opt.m2.resize(dim);
  ck.opt.dacc.resize(dim);
  read_doubles(is, ck.theta.values);
  read_doubles(is, ck.opt.m1);
  read_doubles(is, ck.opt.m2);
  read_doubles(is, ck.opt.dacc);
  if (!is) throw std::runtime_error("load_checkpoint: truncated file " + path);
  ck.points_state = header.at("points_state").get<std::uint64_t>();
  ck.refs_state = header.at("refs_state").get<std::uint64_t>();
  return ck;
}

}  // namespace lrv
