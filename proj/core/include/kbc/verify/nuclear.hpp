#pragma once

#include <cstdint>

#include "kbc/verify/decomposition.hpp"

namespace kbc::verify {

struct SpectrumSearch {
  /// Number of components searched over.
  std::size_t rank = 2;
  double p = 2;
  /// Exponent of the factor penalty. The search minimizes sum_r sigma_r^(alpha/3) over
  /// exact fits: alpha = 3 gives the nuclear p-norm, alpha = 2 the 2/3 spectrum norm.
  double alpha = 3;
  std::size_t restarts = 20;
  std::uint64_t seed = 0;
  /// Largest Frobenius residual accepted as an exact fit.
  double fit_tolerance = 1e-8;
};

struct SpectrumEstimate {
  /// Best (sum_r sigma_r^q)^(1/q) found, q = alpha / 3.
  double value = 0;
  double residual = 0;
  /// Restart that produced the witness.
  std::uint64_t restart = 0;
  NormalizedDecomposition witness;
};

/// Multi-start local search for the smallest spectrum norm among exact rank-`rank`
/// decompositions. Each restart fits the tensor, then minimizes
///   (1/2) ||X - [[U]]||^2 + mu * Omega_p^alpha(U)
/// for a decreasing sequence of mu, polishes the fit by least squares and balances.
/// Upper bound on the true minimum. Throws SearchError when no restart fits.
SpectrumEstimate estimate_spectrum_norm(const SmallTensor& tensor, const SpectrumSearch& search);

/// Nuclear p-norm upper bound (alpha = 3).
SpectrumEstimate nuclear_pnorm_estimate(const SmallTensor& tensor, std::size_t rank, double p, std::size_t restarts,
                                        std::uint64_t seed);

struct CertificateReport {
  /// 2/3 spectrum norm of diag(1, 0) and diag(0, 1) as 2 x 2 x 1 tensors.
  double endpoint_a = 0;
  double endpoint_b = 0;
  /// Best value found for their midpoint I/2, and the rank it came from.
  double midpoint = 0;
  std::size_t midpoint_rank = 0;
  /// Analytic lower bound on the nuclear 2-norm of the midpoint (its trace).
  double trace_lower_bound = 1.0;
  /// midpoint > (endpoint_a + endpoint_b) / 2.
  bool violation = false;
};

/// Searches the midpoint over ranks 2..4 with `restarts` restarts per rank.
CertificateReport nonconvexity_certificate(std::size_t restarts, std::uint64_t seed);

}  // namespace kbc::verify
