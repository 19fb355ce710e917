#include <cmath>
#include <vector>

#include "doctest.h"

#include "lrv/normal.hpp"
#include "lrv/rng.hpp"

using lrv::RngStream;

TEST_CASE("same seed and label reproduce the sequence") {
  RngStream a(42, "exp");
  RngStream b(42, "exp");
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());
}

TEST_CASE("distinct labels give distinct sequences") {
  RngStream a(42, "exp/w0");
  RngStream b(42, "exp/w1");
  int equal = 0;
  for (int i = 0; i < 100; ++i) equal += a.next_u64() == b.next_u64();
  CHECK(equal == 0);
}

TEST_CASE("split is deterministic and path-concatenating") {
  RngStream parent(7, "exp");
  RngStream c1 = parent.split("worker");
  RngStream c2 = parent.split("worker");
  CHECK(c1.label() == "exp/worker");
  for (int i = 0; i < 100; ++i) CHECK(c1.next_u64() == c2.next_u64());

  RngStream gc = parent.split("worker").split("refs");
  RngStream direct(7, "exp/worker/refs");
  for (int i = 0; i < 100; ++i) CHECK(gc.next_u64() == direct.next_u64());
}

TEST_CASE("normals: empty request, determinism, moments") {
  RngStream s(11, "n");
  CHECK(s.normals(0).empty());

  RngStream a(11, "n2"), b(11, "n2");
  auto va = a.normals(256), vb = b.normals(256);
  CHECK(va == vb);

  const std::size_t n = 1000000;
  RngStream m(123, "moments");
  double sum = 0.0, sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = m.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / n;
  const double var = sq / n - mean * mean;
  CHECK(std::fabs(mean) < 0.004);        // 4 sigma of 1/sqrt(n)
  CHECK(std::fabs(var - 1.0) < 0.006);   // 4 sigma of sqrt(2/n)
}

TEST_CASE("label independence: cross-correlation below 0.01 at 1e5") {
  RngStream a(5, "exp/a"), b(5, "exp/b");
  const std::size_t n = 100000;
  double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = a.normal(), y = b.normal();
    sa += x;
    sb += y;
    sab += x * y;
    saa += x * x;
    sbb += y * y;
  }
  const double ma = sa / n, mb = sb / n;
  const double cov = sab / n - ma * mb;
  const double r = cov / std::sqrt((saa / n - ma * ma) * (sbb / n - mb * mb));
  CHECK(std::fabs(r) < 0.01);
}

TEST_CASE("uniform01 stays inside the open interval") {
  RngStream s(99, "u");
  for (int i = 0; i < 100000; ++i) {
    const double u = s.uniform01();
    CHECK(u > 0.0);
    CHECK(u < 1.0);
  }
}

TEST_CASE("inverse normal cdf: symmetry and reference values") {
  CHECK(lrv::inverse_normal_cdf(0.5) == doctest::Approx(0.0).epsilon(1e-12));
  for (double u : {0.1, 0.01, 0.3}) {
    CHECK(lrv::inverse_normal_cdf(1.0 - u) ==
          doctest::Approx(-lrv::inverse_normal_cdf(u)).epsilon(1e-12));
  }
  // High-precision erf-inverse oracle values.
  CHECK(std::fabs(lrv::inverse_normal_cdf(0.975) - 1.9599639845400542) < 1e-6);
  CHECK(std::fabs(lrv::inverse_normal_cdf(0.9) - 1.2815515655446004) < 1e-9);
  CHECK(std::fabs(lrv::inverse_normal_cdf(0.01) - (-2.3263478740408411)) < 1e-9);
  CHECK(std::fabs(lrv::inverse_normal_cdf(1e-10) - (-6.3613409024040562)) < 1e-8);
  CHECK_THROWS(lrv::inverse_normal_cdf(0.0));
  CHECK_THROWS(lrv::inverse_normal_cdf(1.0));
  CHECK_THROWS(lrv::inverse_normal_cdf(-0.2));
}

TEST_CASE("inverse normal cdf round-trips through the cdf") {
  for (int i = 1; i < 10000; ++i) {
    const double u = i / 10000.0;
    const double x = lrv::inverse_normal_cdf(u);
    CHECK(std::fabs(lrv::normal_cdf(x) - u) <= 1e-9);
  }
}

TEST_CASE("state save/restore resumes the sequence") {
  RngStream s(3, "ck");
  for (int i = 0; i < 10; ++i) s.normal();
  const std::uint64_t st = s.state();
  std::vector<double> ahead = s.normals(16);
  RngStream t(3, "ck");
  t.set_state(st);
  CHECK(t.normals(16) == ahead);
}
