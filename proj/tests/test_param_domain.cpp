#include <array>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "lrv/experiment.hpp"
#include "lrv/param_domain.hpp"
#include "lrv/rng.hpp"

using lrv::Interval;
using lrv::ParameterDomain;
using lrv::region_check;
using lrv::RngStream;

TEST_CASE("contains: interior, closed boundary, dimension mismatch") {
  ParameterDomain d({{0.0, 1.0}});
  const double mid = 0.5, edge = 1.0, out = 1.5;
  CHECK(d.contains(std::span<const double>(&mid, 1)));
  CHECK(d.contains(std::span<const double>(&edge, 1)));
  CHECK_FALSE(d.contains(std::span<const double>(&out, 1)));
  std::vector<double> wrong{0.5, 0.5};
  CHECK_THROWS(d.contains(wrong));
}

TEST_CASE("the Black-Scholes call box accepts its lower corner") {
  ParameterDomain d = lrv::bs_call_domain();
  std::vector<double> p{90.0, 0.01, -0.1, 0.01, 90.0};
  CHECK(d.contains(p));
}

TEST_CASE("interval validation") {
  CHECK_THROWS(ParameterDomain({{1.0, 0.0}}));
  // correlation intervals must fit in [-0.95, 0.95]
  CHECK_THROWS(ParameterDomain({{-1.0, 1.0}, {0.0, 0.1}, {0.0, 0.1}},
                               std::array<int, 3>{0, 1, 2}));
}

TEST_CASE("region_check reference evaluations") {
  CHECK(region_check(0.0, 0.0, 0.0));
  CHECK(region_check(0.5, 0.0, 0.0));
  CHECK_FALSE(region_check(0.95, 0.95, 0.0));
  CHECK_FALSE(region_check(0.96, 0.0, 0.0));  // outside the cube
  // Just inside and just outside the pivot boundary at rho1 = 0.
  CHECK(region_check(0.0, 0.6, 0.79));
  CHECK_FALSE(region_check(0.0, 0.6, 0.81));
}

TEST_CASE("sampling is deterministic and respects membership") {
  ParameterDomain d = lrv::worst_of_put_domain();
  RngStream a(77, "s"), b(77, "s");
  for (int i = 0; i < 50; ++i) CHECK(d.sample(a) == d.sample(b));

  RngStream s(123, "many");
  for (int i = 0; i < 5000; ++i) {
    auto p = d.sample(s);
    CHECK(d.contains(p));
  }
}

TEST_CASE("uniform marginals: mean of 1e5 draws on [0,1] within 0.01") {
  ParameterDomain d({{0.0, 1.0}});
  RngStream s(5, "mean");
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) sum += d.sample(s)[0];
  CHECK(std::fabs(sum / n - 0.5) < 0.01);
}

TEST_CASE("per-coordinate means of the BS box approach interval midpoints") {
  ParameterDomain d = lrv::bs_call_domain();
  RngStream s(6, "bsmean");
  const int n = 100000;
  std::vector<double> sums(d.dim(), 0.0);
  std::vector<double> p(d.dim());
  for (int i = 0; i < n; ++i) {
    d.sample(s, p);
    for (int k = 0; k < d.dim(); ++k) sums[k] += p[k];
  }
  for (int k = 0; k < d.dim(); ++k) {
    const double width = d.intervals()[k].hi - d.intervals()[k].lo;
    const double se = width / std::sqrt(12.0) / std::sqrt(static_cast<double>(n));
    CHECK(std::fabs(sums[k] / n - d.midpoint(k)) < 4.0 * se);
  }
}

TEST_CASE("unsatisfiable correlation region hits the rejection cap") {
  ParameterDomain d({{0.95, 0.95}, {0.95, 0.95}, {0.0, 0.0}}, std::array<int, 3>{0, 1, 2});
  RngStream s(1, "cap");
  CHECK_THROWS(d.sample(s));
}
