#pragma once

// Double-exponential (tanh-sinh) quadrature on (0,1), with a rational map
// for (0, inf).  Handles the algebraic endpoint singularities of the beta
// kernels (a, b < 1) without interval splitting; the level doubles until
// two refinements agree.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace genbeta {

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int levels = 0;
};

// integral of f over (0,1)
inline QuadratureResult integrate_01(const std::function<double(double)>& f,
                                     double tol = 1e-10, int max_level = 12) {
  const double tmax = 4.0;  // |t| beyond this underflows the weights
  auto node = [](double t, double& x, double& w) {
    double s = std::sinh(t);
    double c = std::cosh(t);
    double u = std::tanh(0.5 * M_PI * s);
    x = 0.5 * (1.0 + u);
    double sech = 1.0 / std::cosh(0.5 * M_PI * s);
    w = 0.25 * M_PI * c * sech * sech;
  };

  double h = 1.0;
  double x, w;
  node(0.0, x, w);
  double sum = f(x) * w;
  for (double t = 1.0; t <= tmax; t += 1.0) {
    node(t, x, w);
    if (w > 1e-300 && x > 0.0 && x < 1.0) sum += f(x) * w;
    node(-t, x, w);
    if (w > 1e-300 && x > 0.0 && x < 1.0) sum += f(x) * w;
  }
  double prev = sum * h;
  QuadratureResult out;
  for (int level = 1; level <= max_level; ++level) {
    h *= 0.5;
    // add the new midpoints of this refinement
    double add = 0.0;
    for (double t = h; t <= tmax; t += 2.0 * h) {
      node(t, x, w);
      if (w > 1e-300 && x > 0.0 && x < 1.0) add += f(x) * w;
      node(-t, x, w);
      if (w > 1e-300 && x > 0.0 && x < 1.0) add += f(x) * w;
    }
    sum += add;
    double cur = sum * h;
    out.value = cur;
    out.error_estimate = std::abs(cur - prev);
    out.levels = level;
    if (level >= 4 && out.error_estimate <= tol * std::max(1.0, std::abs(cur))) return out;
    prev = cur;
  }
  return out;
}

// integral of f over (0, inf) via x = u/(1-u)
inline QuadratureResult integrate_0inf(const std::function<double(double)>& f,
                                       double tol = 1e-10, int max_level = 12) {
  return integrate_01(
      [&](double u) {
        double om = 1.0 - u;
        double x = u / om;
        return f(x) / (om * om);
      },
      tol, max_level);
}

// tensor tanh-sinh on (0,1)^2 at a fixed level (deterministic work bound)
inline double integrate_unit_square(const std::function<double(double, double)>& f,
                                    int level = 7) {
  const double tmax = 4.0;
  double h = std::pow(0.5, level);
  std::vector<double> xs, ws;
  for (double t = -tmax; t <= tmax; t += h) {
    double s = std::sinh(t);
    double u = std::tanh(0.5 * M_PI * s);
    double x = 0.5 * (1.0 + u);
    double sech = 1.0 / std::cosh(0.5 * M_PI * s);
    double w = 0.25 * M_PI * std::cosh(t) * sech * sech * h;
    if (w > 1e-300 && x > 0.0 && x < 1.0) {
      xs.push_back(x);
      ws.push_back(w);
    }
  }
  double total = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i)
    for (std::size_t j = 0; j < xs.size(); ++j)
      total += ws[i] * ws[j] * f(xs[i], xs[j]);
  return total;
}

}  // namespace genbeta
