#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace lrv::ad {

// Reverse-mode tape over scalar operations. Nodes carry at most two parents
// with constant local weights; linear reductions over many terms use a
// dedicated accumulation node so a sample mean costs one node instead of a
// chain of adds. The tape holds no values; values travel with Var.
class Tape {
 public:
  static constexpr std::uint32_t kNone = 0xffffffffu;
  static constexpr std::uint32_t kSumTag = 0x80000000u;

  struct Node {
    double w0;
    double w1;
    std::uint32_t p0;
    std::uint32_t p1;
  };

  std::uint32_t add_leaf() {
    nodes_.push_back({0.0, 0.0, kNone, kNone});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t add1(std::uint32_t p, double w) {
    nodes_.push_back({w, 0.0, p, kNone});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::uint32_t add2(std::uint32_t p0, double w0, std::uint32_t p1, double w1) {
    nodes_.push_back({w0, w1, p0, p1});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  // Weighted accumulation node: adjoint `scale` flows to every parent.
  std::uint32_t add_sum(std::span<const std::uint32_t> parents, double scale) {
    const std::uint32_t off = static_cast<std::uint32_t>(sum_parents_.size());
    sum_parents_.insert(sum_parents_.end(), parents.begin(), parents.end());
    nodes_.push_back({scale, 0.0, off, kSumTag | static_cast<std::uint32_t>(parents.size())});
    return static_cast<std::uint32_t>(nodes_.size() - 1);
  }

  std::size_t size() const { return nodes_.size(); }

  void clear() {
    nodes_.clear();
    sum_parents_.clear();
  }

  // Reverse sweep seeding the root adjoint with `seed`; afterwards adj[i]
  // holds d(root)/d(node i) * seed for every node. adj must have size().
  void backward(std::uint32_t root, std::span<double> adj, double seed = 1.0) const {
    for (double& a : adj) a = 0.0;
    adj[root] = seed;
    for (std::uint32_t i = static_cast<std::uint32_t>(nodes_.size()); i-- > 0;) {
      const double a = adj[i];
      if (a == 0.0) continue;
      const Node& n = nodes_[i];
      if (n.p1 == kNone) {  // leaf or unary
        if (n.p0 != kNone) adj[n.p0] += n.w0 * a;
      } else if (n.p1 & kSumTag) {
        const std::uint32_t count = n.p1 & ~kSumTag;
        const double s = a * n.w0;
        const std::uint32_t* par = sum_parents_.data() + n.p0;
        for (std::uint32_t k = 0; k < count; ++k) adj[par[k]] += s;
      } else {
        adj[n.p0] += n.w0 * a;
        adj[n.p1] += n.w1 * a;
      }
    }
  }

 private:
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> sum_parents_;
};

// A taped scalar. Vars constructed from plain doubles are constants and
// allocate no node; operations between constants stay constant, so a kernel
// evaluated on constant inputs records nothing.
struct Var {
  double v = 0.0;
  std::uint32_t i = Tape::kNone;
  Tape* t = nullptr;

  Var() = default;
  Var(double value) : v(value) {}
  Var(double value, std::uint32_t idx, Tape* tape) : v(value), i(idx), t(tape) {}

  bool is_const() const { return i == Tape::kNone; }
};

inline Var make_leaf(Tape& tape, double value) { return Var(value, tape.add_leaf(), &tape); }

// value(x) lets templated kernels branch on magnitudes for both scalar types.
inline double value(double x) { return x; }
inline double value(const Var& x) { return x.v; }

inline Var operator+(const Var& a, const Var& b) {
  const double v = a.v + b.v;
  if (a.is_const() && b.is_const()) return Var(v);
  if (a.is_const()) return Var(v, b.t->add1(b.i, 1.0), b.t);
  if (b.is_const()) return Var(v, a.t->add1(a.i, 1.0), a.t);
  return Var(v, a.t->add2(a.i, 1.0, b.i, 1.0), a.t);
}
inline Var operator+(const Var& a, double c) { return a + Var(c); }
inline Var operator+(double c, const Var& a) { return Var(c) + a; }

inline Var operator-(const Var& a) {
  if (a.is_const()) return Var(-a.v);
  return Var(-a.v, a.t->add1(a.i, -1.0), a.t);
}

inline Var operator-(const Var& a, const Var& b) {
  const double v = a.v - b.v;
  if (a.is_const() && b.is_const()) return Var(v);
  if (a.is_const()) return Var(v, b.t->add1(b.i, -1.0), b.t);
  if (b.is_const()) return Var(v, a.t->add1(a.i, 1.0), a.t);
  return Var(v, a.t->add2(a.i, 1.0, b.i, -1.0), a.t);
}
inline Var operator-(const Var& a, double c) { return a - Var(c); }
inline Var operator-(double c, const Var& a) { return Var(c) - a; }

inline Var operator*(const Var& a, const Var& b) {
  const double v = a.v * b.v;
  if (a.is_const() && b.is_const()) return Var(v);
  if (a.is_const()) return Var(v, b.t->add1(b.i, a.v), b.t);
  if (b.is_const()) return Var(v, a.t->add1(a.i, b.v), a.t);
  return Var(v, a.t->add2(a.i, b.v, b.i, a.v), a.t);
}
inline Var operator*(const Var& a, double c) { return a * Var(c); }
inline Var operator*(double c, const Var& a) { return Var(c) * a; }

inline Var operator/(const Var& a, const Var& b) {
  const double v = a.v / b.v;
  if (a.is_const() && b.is_const()) return Var(v);
  const double inv = 1.0 / b.v;
  if (a.is_const()) return Var(v, b.t->add1(b.i, -v * inv), b.t);
  if (b.is_const()) return Var(v, a.t->add1(a.i, inv), a.t);
  return Var(v, a.t->add2(a.i, inv, b.i, -v * inv), a.t);
}
inline Var operator/(const Var& a, double c) { return a / Var(c); }
inline Var operator/(double c, const Var& a) { return Var(c) / a; }

inline Var& operator+=(Var& a, const Var& b) { return a = a + b; }
inline Var& operator-=(Var& a, const Var& b) { return a = a - b; }
inline Var& operator*=(Var& a, const Var& b) { return a = a * b; }

// a*x + b as a single node.
inline double affine(double x, double a, double b) { return a * x + b; }
inline Var affine(const Var& x, double a, double b) {
  const double v = a * x.v + b;
  if (x.is_const()) return Var(v);
  return Var(v, x.t->add1(x.i, a), x.t);
}

inline double exp(double x) { return std::exp(x); }
inline Var exp(const Var& x) {
  const double v = std::exp(x.v);
  if (x.is_const()) return Var(v);
  return Var(v, x.t->add1(x.i, v), x.t);
}

inline double log(double x) { return std::log(x); }
inline Var log(const Var& x) {
  const double v = std::log(x.v);
  if (x.is_const()) return Var(v);
  return Var(v, x.t->add1(x.i, 1.0 / x.v), x.t);
}

inline double sqrt(double x) { return std::sqrt(x); }
inline Var sqrt(const Var& x) {
  const double v = std::sqrt(x.v);
  if (x.is_const()) return Var(v);
  return Var(v, x.t->add1(x.i, 0.5 / v), x.t);
}

// max{x, 0} with subgradient 0 at the kink.
inline double max0(double x) { return x > 0.0 ? x : 0.0; }
inline Var max0(const Var& x) {
  if (x.is_const()) return Var(max0(x.v));
  if (x.v > 0.0) return Var(x.v, x.t->add1(x.i, 1.0), x.t);
  return Var(0.0, x.t->add1(x.i, 0.0), x.t);
}

// Value-selecting min/max; ties route the derivative to the first argument.
inline double vmin(double a, double b) { return b < a ? b : a; }
inline Var vmin(const Var& a, const Var& b) { return b.v < a.v ? b : a; }
inline double vmax(double a, double b) { return b > a ? b : a; }
inline Var vmax(const Var& a, const Var& b) { return b.v > a.v ? b : a; }

// Mean of a span computed as a left fold; the Var overload records a single
// accumulation node so double and Var paths produce identical values.
inline double mean(std::span<const double> xs) {
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}
inline Var mean(std::span<const Var> xs) {
  double s = 0.0;
  Tape* tape = nullptr;
  for (const Var& x : xs) {
    s += x.v;
    if (!tape && !x.is_const()) tape = x.t;
  }
  const double scale = 1.0 / static_cast<double>(xs.size());
  if (!tape) return Var(s * scale);
  thread_local std::vector<std::uint32_t> idx;
  idx.clear();
  for (const Var& x : xs) {
    if (!x.is_const()) idx.push_back(x.i);
  }
  return Var(s * scale, tape->add_sum(idx, scale), tape);
}

struct GradResult {
  double value = 0.0;
  std::vector<double> gradient;
};

// Gradient of a scalar function of a real vector. F is callable with a
// std::span<const Var> and returns Var.
template <class F>
GradResult grad(F&& f, std::span<const double> x) {
  Tape tape;
  std::vector<Var> vars;
  vars.reserve(x.size());
  for (double xi : x) vars.push_back(make_leaf(tape, xi));
  Var out = f(std::span<const Var>(vars));
  GradResult r;
  r.value = out.v;
  r.gradient.assign(x.size(), 0.0);
  if (out.is_const()) return r;  // constant function: zero gradient
  std::vector<double> adj(tape.size());
  tape.backward(out.i, adj);
  for (std::size_t i = 0; i < x.size(); ++i) r.gradient[i] = adj[i];
  return r;
}

// Max relative discrepancy between the reverse-mode gradient and central
// finite differences with step h. Fd and Fv evaluate the same function on
// double and Var spans.
template <class Fd, class Fv>
double finite_diff_check(Fd&& fd, Fv&& fv, std::span<const double> x, double h) {
  GradResult g = grad(fv, x);
  std::vector<double> xp(x.begin(), x.end());
  double worst = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double xi = xp[i];
    xp[i] = xi + h;
    const double up = fd(std::span<const double>(xp));
    xp[i] = xi - h;
    const double dn = fd(std::span<const double>(xp));
    xp[i] = xi;
    const double fdi = (up - dn) / (2.0 * h);
    const double denom = std::max({1.0, std::fabs(g.gradient[i]), std::fabs(fdi)});
    worst = std::max(worst, std::fabs(g.gradient[i] - fdi) / denom);
  }
  return worst;
}

}  // namespace lrv::ad
