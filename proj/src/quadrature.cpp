#include "demon/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <queue>
#include <sstream>

namespace demon::quad {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1], computed once by Newton iteration
// on the Legendre recurrence (converges to machine precision in < 10 steps).
struct GLRule {
  std::vector<double> x;
  std::vector<double> w;
};

GLRule make_gl_rule(int n) {
  GLRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 60; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.x[i] = -x;
    rule.x[n - 1 - i] = x;
    rule.w[i] = 2.0 / ((1.0 - x * x) * pp * pp);
    rule.w[n - 1 - i] = rule.w[i];
  }
  return rule;
}

const GLRule& gl12() {
  static const GLRule rule = make_gl_rule(12);
  return rule;
}

const GLRule& gl24() {
  static const GLRule rule = make_gl_rule(24);
  return rule;
}

std::complex<double> apply_rule(const GLRule& rule, const Integrand& f, double a,
                                double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  std::complex<double> acc{0.0, 0.0};
  for (size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(c + h * rule.x[i]);
  return h * acc;
}

struct Panel {
  double a;
  double b;
  std::complex<double> value;  // GL24 estimate
  double error;                // |GL24 - GL12|
};

Panel make_panel(const Integrand& f, double a, double b) {
  Panel p;
  p.a = a;
  p.b = b;
  p.value = apply_rule(gl24(), f, a, b);
  const std::complex<double> coarse = apply_rule(gl12(), f, a, b);
  p.error = std::abs(p.value - coarse);
  if (!std::isfinite(p.value.real()) || !std::isfinite(p.value.imag()) ||
      !std::isfinite(p.error))
    throw QuadratureFailure("non-finite integrand value in panel");
  return p;
}

struct PanelWorse {
  bool operator()(const Panel& lhs, const Panel& rhs) const {
    return lhs.error < rhs.error;
  }
};

}  // namespace

std::vector<double> clip_breakpoints(double lo, double hi,
                                     const std::vector<double>& interior) {
  std::vector<double> pts;
  pts.reserve(interior.size() + 2);
  pts.push_back(lo);
  for (double x : interior)
    if (x > lo && x < hi) pts.push_back(x);
  pts.push_back(hi);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](double a, double b) {
                          return std::abs(a - b) <=
                                 1e-15 * (std::abs(a) + std::abs(b) + 1.0);
                        }),
            pts.end());
  return pts;
}

FamilyResult integrate_family(const std::vector<Integrand>& fs,
                              const std::vector<double>& breakpoints,
                              const Options& opts) {
  if (fs.empty()) throw std::invalid_argument("integrate_family: no integrands");
  if (breakpoints.size() < 2)
    throw std::invalid_argument("integrate_family: need at least two breakpoints");

  const Integrand& driver = fs.front();

  if (static_cast<int>(breakpoints.size()) - 1 > opts.max_intervals) {
    std::ostringstream msg;
    msg << "initial breakpoint count " << breakpoints.size() - 1
        << " exceeds subdivision budget " << opts.max_intervals;
    throw QuadratureFailure(msg.str());
  }

  std::vector<Panel> heap;
  heap.reserve(breakpoints.size() + 64);
  for (size_t i = 0; i + 1 < breakpoints.size(); ++i)
    heap.push_back(make_panel(driver, breakpoints[i], breakpoints[i + 1]));
  std::make_heap(heap.begin(), heap.end(), PanelWorse{});

  auto total_error = [&heap]() {
    double e = 0.0;
    for (const Panel& p : heap) e += p.error;
    return e;
  };

  double err = total_error();
  while (err > opts.abs_tol) {
    if (static_cast<int>(heap.size()) >= opts.max_intervals) {
      std::ostringstream msg;
      msg << "quadrature budget of " << opts.max_intervals
          << " intervals exhausted at error " << err << " (tol " << opts.abs_tol
          << ")";
      throw QuadratureFailure(msg.str());
    }
    std::pop_heap(heap.begin(), heap.end(), PanelWorse{});
    const Panel worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // width at roundoff floor; keep the panel and accept its error
      heap.push_back(worst);
      std::push_heap(heap.begin(), heap.end(), PanelWorse{});
      break;
    }
    err -= worst.error;
    Panel left = make_panel(driver, worst.a, mid);
    Panel right = make_panel(driver, mid, worst.b);
    err += left.error + right.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), PanelWorse{});
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), PanelWorse{});
  }

  err = total_error();
  if (err > opts.abs_tol) {
    std::ostringstream msg;
    msg << "quadrature stalled at error " << err << " (tol " << opts.abs_tol << ")";
    throw QuadratureFailure(msg.str());
  }

  FamilyResult out;
  out.error = err;
  out.intervals = static_cast<int>(heap.size());
  out.values.assign(fs.size(), std::complex<double>{0.0, 0.0});
  for (const Panel& p : heap) out.values[0] += p.value;
  for (size_t j = 1; j < fs.size(); ++j)
    for (const Panel& p : heap) out.values[j] += apply_rule(gl24(), fs[j], p.a, p.b);
  return out;
}

Result integrate(const Integrand& f, const std::vector<double>& breakpoints,
                 const Options& opts) {
  const FamilyResult fam = integrate_family({f}, breakpoints, opts);
  return Result{fam.values[0], fam.error, fam.intervals};
}

}  // namespace demon::quad
