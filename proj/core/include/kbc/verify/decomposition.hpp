#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace kbc::verify {

/// Dense n1 x n2 x n3 tensor, entry (a, b, c) at (a * n2 + b) * n3 + c.
struct SmallTensor {
  std::array<std::size_t, 3> dims{};
  std::vector<double> data;

  SmallTensor() = default;
  SmallTensor(std::size_t n1, std::size_t n2, std::size_t n3) : dims{n1, n2, n3}, data(n1 * n2 * n3, 0.0) {}

  double& operator()(std::size_t a, std::size_t b, std::size_t c) { return data[(a * dims[1] + b) * dims[2] + c]; }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return data[(a * dims[1] + b) * dims[2] + c];
  }
  double frobenius() const;
};

/// One rank-one term u1 (x) u2 (x) u3.
struct Component {
  std::array<std::vector<double>, 3> modes;
};

struct SmallDecomposition {
  std::vector<Component> components;

  std::size_t rank() const noexcept { return components.size(); }
  /// Throws DimensionError if components disagree on a mode size.
  std::array<std::size_t, 3> dims() const;
  SmallTensor reconstruct() const;
};

/// Spectrum and unit-norm factors: component r is sigma[r] * f1 (x) f2 (x) f3.
struct NormalizedDecomposition {
  double p = 2;
  std::vector<double> sigma;
  std::vector<Component> factors;
};

/// Vector p-norm for p >= 1 (p = infinity allowed).
double pnorm(std::span<const double> v, double p);

/// (1/3) * sum over components and modes of ||u||_p^alpha.
double omega(const SmallDecomposition& u, double p, double alpha);

struct BalanceResult {
  SmallDecomposition decomposition;
  /// Input positions of components dropped for having a zero mode vector.
  std::vector<std::size_t> dropped;
};

/// Rescales each component so its three mode p-norms all equal their geometric mean.
BalanceResult balance(const SmallDecomposition& u, double p);

/// sigma_r = product of the mode p-norms; components with a zero mode vector are dropped.
NormalizedDecomposition normalize(const SmallDecomposition& u, double p);

/// (sum_r sigma_r^q)^(1/q) for q > 0.
double spectrum_qnorm(std::span<const double> sigma, double q);
inline double spectrum_qnorm(const NormalizedDecomposition& d, double q) { return spectrum_qnorm(d.sigma, q); }

}  // namespace kbc::verify
