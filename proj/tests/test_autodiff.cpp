#include <cmath>
#include <span>
#include <vector>

#include "doctest.h"

#include "lrv/autodiff.hpp"
#include "lrv/models/black_scholes.hpp"

namespace ad = lrv::ad;
using ad::Var;

TEST_CASE("square function: value and gradient") {
  std::vector<double> x{3.0};
  auto r = ad::grad([](std::span<const Var> v) { return v[0] * v[0]; },
                    std::span<const double>(x));
  CHECK(r.value == doctest::Approx(9.0));
  CHECK(r.gradient[0] == doctest::Approx(6.0));
}

TEST_CASE("kink convention: d max(x,0)/dx = 0 at x = 0") {
  std::vector<double> x{0.0};
  auto r = ad::grad([](std::span<const Var> v) { return ad::max0(v[0]); },
                    std::span<const double>(x));
  CHECK(r.value == 0.0);
  CHECK(r.gradient[0] == 0.0);
}

TEST_CASE("elementary derivatives against finite differences") {
  auto f_d = [](std::span<const double> v) {
    return lrv::ad::exp(v[0]) * lrv::ad::log(v[1]) + lrv::ad::sqrt(v[2]) / v[1] - v[0] * v[2];
  };
  auto f_v = [](std::span<const Var> v) {
    return lrv::ad::exp(v[0]) * lrv::ad::log(v[1]) + lrv::ad::sqrt(v[2]) / v[1] - v[0] * v[2];
  };
  std::vector<double> x{0.3, 2.0, 1.7};
  CHECK(ad::finite_diff_check(f_d, f_v, x, 1e-6) < 1e-7);
}

TEST_CASE("linearity of the gradient") {
  auto f = [](std::span<const Var> v) { return v[0] * v[1] + ad::exp(v[0]); };
  auto g = [](std::span<const Var> v) { return v[1] / (1.0 + v[0] * v[0]); };
  const double a = 2.5, b = -1.25;
  auto fg = [&](std::span<const Var> v) { return a * f(v) + b * g(v); };
  std::vector<double> x{0.7, 1.3};
  auto rf = ad::grad(f, std::span<const double>(x));
  auto rg = ad::grad(g, std::span<const double>(x));
  auto rfg = ad::grad(fg, std::span<const double>(x));
  for (int i = 0; i < 2; ++i) {
    CHECK(std::fabs(rfg.gradient[i] - (a * rf.gradient[i] + b * rg.gradient[i])) < 1e-12);
  }
}

TEST_CASE("finite_diff_check on a quadratic and a constant") {
  auto q_d = [](std::span<const double> v) { return 3.0 * v[0] * v[0] + v[0] * v[1] - v[1]; };
  auto q_v = [](std::span<const Var> v) { return 3.0 * v[0] * v[0] + v[0] * v[1] - v[1]; };
  std::vector<double> x{1.25, -0.5};
  CHECK(ad::finite_diff_check(q_d, q_v, x, 1e-5) < 1e-9);

  auto c_d = [](std::span<const double>) { return 4.2; };
  auto c_v = [](std::span<const Var>) { return Var(4.2); };
  CHECK(ad::finite_diff_check(c_d, c_v, x, 1e-5) == 0.0);
  auto r = ad::grad(c_v, std::span<const double>(x));
  CHECK(r.gradient[0] == 0.0);
  CHECK(r.gradient[1] == 0.0);
}

TEST_CASE("mean node distributes its adjoint") {
  std::vector<double> x{1.0, 2.0, 3.0, 4.0};
  auto f = [](std::span<const Var> v) { return ad::mean(v); };
  auto r = ad::grad(f, std::span<const double>(x));
  CHECK(r.value == doctest::Approx(2.5));
  for (double g : r.gradient) CHECK(g == doctest::Approx(0.25));
}

TEST_CASE("min/max select the active branch") {
  std::vector<double> x{1.0, 2.0};
  auto r = ad::grad([](std::span<const Var> v) { return ad::vmin(v[0], v[1]) + 2.0 * ad::vmax(v[0], v[1]); },
                    std::span<const double>(x));
  CHECK(r.gradient[0] == doctest::Approx(1.0));
  CHECK(r.gradient[1] == doctest::Approx(2.0));
}

TEST_CASE("taped values are bit-identical to the plain path") {
  lrv::models::BsCallParams p{104.3, 0.67, 0.03, 0.24, 97.0};
  ad::Tape tape;
  for (double w : {-1.7, -0.2, 0.0, 0.4, 2.2}) {
    const double direct = lrv::models::bs_call_payoff(p, w);
    Var wv = ad::make_leaf(tape, w);
    Var out = lrv::models::bs_call_payoff(p, wv);
    CHECK(out.v == direct);  // exact equality required
  }
}

TEST_CASE("gradient of the antithetic network is odd") {
  lrv::models::BsCallParams p{100.0, 1.0, 0.02, 0.3, 101.0};
  auto psi = [&](std::span<const Var> th) {
    std::vector<Var> terms;
    for (const Var& t : th) terms.push_back(lrv::models::bs_call_payoff_antithetic(p, t));
    return ad::mean(std::span<const Var>(terms));
  };
  std::vector<double> theta{0.3, -1.2, 0.9};
  std::vector<double> neg{-0.3, 1.2, -0.9};
  auto r1 = ad::grad(psi, std::span<const double>(theta));
  auto r2 = ad::grad(psi, std::span<const double>(neg));
  CHECK(r1.value == doctest::Approx(r2.value).epsilon(1e-14));
  for (int i = 0; i < 3; ++i) CHECK(r1.gradient[i] == doctest::Approx(-r2.gradient[i]).epsilon(1e-12));
}
