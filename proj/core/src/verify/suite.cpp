#include "kbc/verify/suite.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "kbc/verify/decomposition.hpp"
#include "kbc/verify/hierarchy.hpp"
#include "kbc/verify/nuclear.hpp"

namespace kbc::verify {

namespace {

OracleCheck near(std::string name, double value, double expected, double tol, std::string detail = {}) {
  OracleCheck c{std::move(name), std::abs(value - expected) <= tol, value, expected, tol, std::move(detail)};
  return c;
}

SmallDecomposition random_decomposition(std::mt19937_64& rng, std::array<std::size_t, 3> dims, std::size_t rank) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> scale(0.2, 3.0);
  SmallDecomposition d;
  for (std::size_t r = 0; r < rank; ++r) {
    Component c;
    for (int m = 0; m < 3; ++m) {
      const double s = scale(rng);
      c.modes[m].resize(dims[m]);
      for (auto& v : c.modes[m]) v = s * g(rng);
    }
    d.components.push_back(std::move(c));
  }
  return d;
}

Component with_norms(double a, double b, double c) {
  Component k;
  k.modes[0] = {a};
  k.modes[1] = {0.0, b};
  k.modes[2] = {c, 0.0, 0.0};
  return k;
}

}  // namespace

std::vector<OracleCheck> run_oracle_suite(const SuiteOptions& options) {
  std::vector<OracleCheck> out;

  {
    SmallDecomposition d;
    d.components.push_back(with_norms(2.0, 4.0, 0.5));
    out.push_back(near("omega: norms (2, 4, 0.5), alpha 3", omega(d, 2.0, 3.0), 24.041666666666668, 1e-12));
    const auto b = balance(d, 2.0).decomposition;
    double worst = 0.0;
    for (const auto& m : b.components[0].modes) worst = std::max(worst, std::abs(pnorm(m, 2.0) - std::cbrt(4.0)));
    out.push_back(near("balance: norms (2, 4, 0.5) -> cbrt(4)", worst, 0.0, 1e-12, "max deviation from cbrt 4"));
  }

  {
    std::mt19937_64 rng(options.seed);
    double norm_dev = 0.0, tensor_dev = 0.0, omega_dev = 0.0;
    for (std::size_t s = 0; s < options.random_cases; ++s) {
      const auto d = random_decomposition(rng, {4, 3, 5}, 3);
      const SmallTensor before = d.reconstruct();
      for (double p : {2.0, 3.0}) {
        const auto b = balance(d, p).decomposition;
        const SmallTensor after = b.reconstruct();
        for (std::size_t i = 0; i < before.data.size(); ++i) {
          tensor_dev = std::max(tensor_dev, std::abs(before.data[i] - after.data[i]));
        }
        double rhs = 0.0;
        for (std::size_t r = 0; r < d.rank(); ++r) {
          std::array<double, 3> a{};
          for (int m = 0; m < 3; ++m) a[m] = pnorm(d.components[r].modes[m], p);
          const double g = std::cbrt(a[0] * a[1] * a[2]);
          for (int m = 0; m < 3; ++m) norm_dev = std::max(norm_dev, std::abs(pnorm(b.components[r].modes[m], p) - g));
          rhs += a[0] * a[1] * a[2];  // prod of norms^(alpha/3) with alpha = 3
        }
        omega_dev = std::max(omega_dev, std::abs(omega(b, p, 3.0) - rhs) / std::max(1.0, rhs));
      }
    }
    out.push_back(near("balance: mode norms equal their geometric mean", norm_dev, 0.0, 1e-10));
    out.push_back(near("balance: reconstruction unchanged", tensor_dev, 0.0, 1e-12));
    out.push_back(near("balance: Omega equals sum of norm products", omega_dev, 0.0, 1e-10, "relative"));
  }

  {
    SmallTensor half(2, 2, 1);
    half(0, 0, 0) = 0.5;
    half(1, 1, 0) = 0.5;
    const auto est = nuclear_pnorm_estimate(half, 2, 2.0, 10, options.seed);
    out.push_back(near("nuclear 2-norm of I/2 (2x2x1)", est.value, 1.0, 1e-6));

    SmallTensor rank1(3, 2, 2);
    const double a[] = {1.0, -2.0, 0.5}, b[] = {0.3, 1.1}, c[] = {2.0, -1.0};
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) rank1(i, j, k) = a[i] * b[j] * c[k];
    const double expected = pnorm(a, 2.0) * pnorm(b, 2.0) * pnorm(c, 2.0);
    out.push_back(near("nuclear 2-norm of a rank-one tensor", nuclear_pnorm_estimate(rank1, 2, 2.0, 10, options.seed).value,
                       expected, 1e-6));
  }

  {
    const auto rep = nonconvexity_certificate(options.restarts, options.seed);
    out.push_back(near("certificate: endpoint diag(1,0)", rep.endpoint_a, 1.0, 0.0));
    out.push_back(near("certificate: endpoint diag(0,1)", rep.endpoint_b, 1.0, 0.0));
    std::ostringstream detail;
    detail << "rank " << rep.midpoint_rank << ", bounds [1.2, 1.4143]";
    auto mid = near("certificate: midpoint I/2 spectrum 2/3-norm", rep.midpoint, std::sqrt(2.0), 1e-4, detail.str());
    mid.passed = mid.passed && rep.midpoint >= 1.2 && rep.midpoint <= 1.4143;
    out.push_back(mid);
    OracleCheck flag{"certificate: convexity violated", rep.violation, rep.midpoint, 1.0, 0.0,
                     "midpoint must exceed the endpoint average"};
    out.push_back(flag);
  }

  {
    double worst = 0.0;
    for (std::size_t n : {3, 4, 5}) {
      for (std::size_t d : {1, 2, 3}) {
        const HierarchyParams h{n, d};
        worst = std::max(worst, std::abs(hierarchy_mrr_simulated(h) - hierarchy_mrr_closed_form(h)));
      }
    }
    out.push_back(near("hierarchy: simulation equals closed form, n 3..5, d 1..3", worst, 0.0, 1e-12));
    out.push_back(near("hierarchy: n 3, d 2", hierarchy_mrr_closed_form({3, 2}), 0.90625, 1e-15));
    const double gap = 1.0 - hierarchy_mrr_closed_form({10, 4});
    out.push_back(near("hierarchy: n 10, d 4, 1 - mrr vs 1/(2n)", gap, 0.05, 0.2 * 0.05));
  }
  return out;
}

}  // namespace kbc::verify
