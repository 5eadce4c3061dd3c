#include "kbc/verify/decomposition.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "kbc/types.hpp"

namespace kbc::verify {

double SmallTensor::frobenius() const {
  double s = 0.0;
  for (double v : data) s += v * v;
  return std::sqrt(s);
}

std::array<std::size_t, 3> SmallDecomposition::dims() const {
  if (components.empty()) return {0, 0, 0};
  std::array<std::size_t, 3> d{};
  for (int m = 0; m < 3; ++m) d[m] = components.front().modes[m].size();
  for (const auto& c : components) {
    for (int m = 0; m < 3; ++m) {
      if (c.modes[m].size() != d[m]) throw DimensionError("decomposition components disagree on mode " + std::to_string(m + 1));
    }
  }
  return d;
}

SmallTensor SmallDecomposition::reconstruct() const {
  const auto d = dims();
  SmallTensor t(d[0], d[1], d[2]);
  for (const auto& c : components) {
    for (std::size_t a = 0; a < d[0]; ++a) {
      for (std::size_t b = 0; b < d[1]; ++b) {
        const double ab = c.modes[0][a] * c.modes[1][b];
        for (std::size_t k = 0; k < d[2]; ++k) t(a, b, k) += ab * c.modes[2][k];
      }
    }
  }
  return t;
}

double pnorm(std::span<const double> v, double p) {
  if (!(p >= 1.0)) throw ConfigError("p-norm needs p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
  }
  if (p == 2.0) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
  }
  if (p == 1.0) {
    double s = 0.0;
    for (double x : v) s += std::abs(x);
    return s;
  }
  double s = 0.0;
  for (double x : v) s += std::pow(std::abs(x), p);
  return std::pow(s, 1.0 / p);
}

double omega(const SmallDecomposition& u, double p, double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("alpha must be positive");
  double s = 0.0;
  for (const auto& c : u.components) {
    for (const auto& m : c.modes) s += std::pow(pnorm(m, p), alpha);
  }
  return s / 3.0;
}

BalanceResult balance(const SmallDecomposition& u, double p) {
  u.dims();
  BalanceResult out;
  for (std::size_t r = 0; r < u.components.size(); ++r) {
    const Component& c = u.components[r];
    std::array<double, 3> a{};
    for (int m = 0; m < 3; ++m) a[m] = pnorm(c.modes[m], p);
    if (a[0] == 0.0 || a[1] == 0.0 || a[2] == 0.0) {
      out.dropped.push_back(r);
      continue;
    }
    Component b = c;
    if (!(a[0] == a[1] && a[1] == a[2])) {
      const double g = std::cbrt(a[0] * a[1] * a[2]);
      for (int m = 0; m < 3; ++m) {
        const double s = g / a[m];
        for (double& x : b.modes[m]) x *= s;
      }
    }
    out.decomposition.components.push_back(std::move(b));
  }
  return out;
}

NormalizedDecomposition normalize(const SmallDecomposition& u, double p) {
  u.dims();
  NormalizedDecomposition out;
  out.p = p;
  for (const auto& c : u.components) {
    std::array<double, 3> a{};
    for (int m = 0; m < 3; ++m) a[m] = pnorm(c.modes[m], p);
    if (a[0] == 0.0 || a[1] == 0.0 || a[2] == 0.0) continue;
    Component f = c;
    for (int m = 0; m < 3; ++m) {
      for (double& x : f.modes[m]) x /= a[m];
    }
    out.sigma.push_back(a[0] * a[1] * a[2]);
    out.factors.push_back(std::move(f));
  }
  return out;
}

double spectrum_qnorm(std::span<const double> sigma, double q) {
  if (!(q > 0.0)) throw ConfigError("spectrum norm needs q > 0");
  if (q == 1.0) {
    double s = 0.0;
    for (double x : sigma) s += std::abs(x);
    return s;
  }
  double s = 0.0;
  for (double x : sigma) s += std::pow(std::abs(x), q);
  return std::pow(s, 1.0 / q);
}

}  // namespace kbc::verify
