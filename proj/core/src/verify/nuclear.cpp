#include "kbc/verify/nuclear.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>
#include <random>
#include <string>

#include <Eigen/Dense>
#include <ceres/ceres.h>

#include "kbc/types.hpp"

namespace kbc::verify {

namespace {

// Flat parameter layout: component r holds u1 (n1), u2 (n2), u3 (n3) back to back.
struct Layout {
  std::array<std::size_t, 3> dims;
  std::size_t rank;
  std::size_t stride() const { return dims[0] + dims[1] + dims[2]; }
  std::size_t offset(std::size_t r, int m) const {
    std::size_t o = r * stride();
    for (int k = 0; k < m; ++k) o += dims[k];
    return o;
  }
  std::size_t size() const { return rank * stride(); }
};

class PenalizedFit final : public ceres::FirstOrderFunction {
 public:
  PenalizedFit(const SmallTensor& x, Layout layout, double p, double alpha)
      : x_(x), layout_(layout), p_(p), alpha_(alpha) {}

  void set_mu(double mu) { mu_ = mu; }
  int NumParameters() const override { return static_cast<int>(layout_.size()); }

  bool Evaluate(const double* u, double* cost, double* gradient) const override {
    const auto& d = layout_.dims;
    std::vector<double> err(x_.data);
    for (std::size_t r = 0; r < layout_.rank; ++r) {
      const double* u1 = u + layout_.offset(r, 0);
      const double* u2 = u + layout_.offset(r, 1);
      const double* u3 = u + layout_.offset(r, 2);
      for (std::size_t a = 0; a < d[0]; ++a)
        for (std::size_t b = 0; b < d[1]; ++b)
          for (std::size_t c = 0; c < d[2]; ++c) err[(a * d[1] + b) * d[2] + c] -= u1[a] * u2[b] * u3[c];
    }
    double fit = 0.0;
    for (double e : err) fit += e * e;
    double pen = 0.0;
    for (std::size_t r = 0; r < layout_.rank; ++r) {
      for (int m = 0; m < 3; ++m) {
        pen += std::pow(pnorm({u + layout_.offset(r, m), d[m]}, p_), alpha_);
      }
    }
    *cost = 0.5 * fit + mu_ * pen / 3.0;
    if (!gradient) return true;

    std::fill(gradient, gradient + layout_.size(), 0.0);
    for (std::size_t r = 0; r < layout_.rank; ++r) {
      const double* u1 = u + layout_.offset(r, 0);
      const double* u2 = u + layout_.offset(r, 1);
      const double* u3 = u + layout_.offset(r, 2);
      double* g1 = gradient + layout_.offset(r, 0);
      double* g2 = gradient + layout_.offset(r, 1);
      double* g3 = gradient + layout_.offset(r, 2);
      for (std::size_t a = 0; a < d[0]; ++a)
        for (std::size_t b = 0; b < d[1]; ++b)
          for (std::size_t c = 0; c < d[2]; ++c) {
            const double e = err[(a * d[1] + b) * d[2] + c];
            g1[a] -= e * u2[b] * u3[c];
            g2[b] -= e * u1[a] * u3[c];
            g3[c] -= e * u1[a] * u2[b];
          }
      if (mu_ == 0.0) continue;
      for (int m = 0; m < 3; ++m) {
        const double* v = u + layout_.offset(r, m);
        double* g = gradient + layout_.offset(r, m);
        const double nrm = pnorm({v, d[m]}, p_);
        if (nrm == 0.0) continue;
        // d/dv ||v||_p^alpha = alpha ||v||_p^(alpha - p) |v|^(p - 1) sign(v)
        const double scale = mu_ / 3.0 * alpha_ * std::pow(nrm, alpha_ - p_);
        for (std::size_t i = 0; i < d[m]; ++i) {
          const double av = std::abs(v[i]);
          g[i] += scale * (p_ == 2.0 ? v[i] : std::pow(av, p_ - 1.0) * (v[i] < 0 ? -1.0 : 1.0));
        }
      }
    }
    return true;
  }

 private:
  const SmallTensor& x_;
  Layout layout_;
  double p_;
  double alpha_;
  double mu_ = 0.0;
};

void minimize(const ceres::GradientProblem& problem, std::vector<double>& params) {
  ceres::GradientProblemSolver::Options opts;
  opts.line_search_direction_type = ceres::LBFGS;
  opts.logging_type = ceres::SILENT;
  opts.minimizer_progress_to_stdout = false;
  opts.max_num_iterations = 5000;
  opts.function_tolerance = 1e-16;
  opts.gradient_tolerance = 1e-14;
  opts.parameter_tolerance = 1e-16;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(opts, problem, params.data(), &summary);
}

SmallDecomposition unpack(const std::vector<double>& u, const Layout& layout) {
  SmallDecomposition dec;
  for (std::size_t r = 0; r < layout.rank; ++r) {
    Component c;
    for (int m = 0; m < 3; ++m) {
      const double* v = u.data() + layout.offset(r, m);
      c.modes[m].assign(v, v + layout.dims[m]);
    }
    dec.components.push_back(std::move(c));
  }
  return dec;
}

double residual(const SmallTensor& x, const SmallDecomposition& dec) {
  if (dec.components.empty()) return x.frobenius();
  const SmallTensor y = dec.reconstruct();
  double s = 0.0;
  for (std::size_t i = 0; i < x.data.size(); ++i) s += (x.data[i] - y.data[i]) * (x.data[i] - y.data[i]);
  return std::sqrt(s);
}

// Alternating minimum-norm least squares on each mode in turn.
double polish(const SmallTensor& x, SmallDecomposition& dec, double tol) {
  const auto& d = x.dims;
  const std::size_t rank = dec.rank();
  double res = residual(x, dec);
  for (int sweep = 0; sweep < 200 && res > tol && rank > 0; ++sweep) {
    for (int m = 0; m < 3; ++m) {
      const int m1 = (m + 1) % 3, m2 = (m + 2) % 3;
      const std::size_t rows = d[m1] * d[m2];
      Eigen::MatrixXd k(rows, rank), t(rows, d[m]);
      std::array<std::size_t, 3> idx{};
      for (std::size_t i1 = 0; i1 < d[m1]; ++i1) {
        for (std::size_t i2 = 0; i2 < d[m2]; ++i2) {
          const std::size_t row = i1 * d[m2] + i2;
          for (std::size_t r = 0; r < rank; ++r) {
            k(row, r) = dec.components[r].modes[m1][i1] * dec.components[r].modes[m2][i2];
          }
          idx[m1] = i1;
          idx[m2] = i2;
          for (std::size_t i = 0; i < d[m]; ++i) {
            idx[m] = i;
            t(row, i) = x(idx[0], idx[1], idx[2]);
          }
        }
      }
      const Eigen::MatrixXd sol = k.completeOrthogonalDecomposition().solve(t);  // rank x d[m]
      for (std::size_t r = 0; r < rank; ++r) {
        for (std::size_t i = 0; i < d[m]; ++i) dec.components[r].modes[m][i] = sol(r, i);
      }
    }
    res = residual(x, dec);
  }
  return res;
}

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

// Residuals [[U]] - X with all 3R mode vectors as parameter blocks.
class ExactFitResidual final : public ceres::CostFunction {
 public:
  ExactFitResidual(const SmallTensor& x, std::size_t rank) : x_(x), rank_(rank) {
    set_num_residuals(static_cast<int>(x.data.size()));
    for (std::size_t r = 0; r < rank; ++r)
      for (int m = 0; m < 3; ++m) mutable_parameter_block_sizes()->push_back(static_cast<int>(x.dims[m]));
  }

  bool Evaluate(double const* const* u, double* res, double** jac) const override {
    const auto& d = x_.dims;
    for (std::size_t i = 0; i < x_.data.size(); ++i) res[i] = -x_.data[i];
    for (std::size_t r = 0; r < rank_; ++r) {
      const double *u1 = u[3 * r], *u2 = u[3 * r + 1], *u3 = u[3 * r + 2];
      for (std::size_t a = 0; a < d[0]; ++a)
        for (std::size_t b = 0; b < d[1]; ++b)
          for (std::size_t c = 0; c < d[2]; ++c) res[(a * d[1] + b) * d[2] + c] += u1[a] * u2[b] * u3[c];
    }
    if (!jac) return true;
    const std::size_t n = x_.data.size();
    for (std::size_t r = 0; r < rank_; ++r) {
      const double* v[3] = {u[3 * r], u[3 * r + 1], u[3 * r + 2]};
      for (int m = 0; m < 3; ++m) {
        double* j = jac[3 * r + static_cast<std::size_t>(m)];
        if (!j) continue;
        const std::size_t w = d[m];
        std::fill(j, j + n * w, 0.0);
        for (std::size_t a = 0; a < d[0]; ++a)
          for (std::size_t b = 0; b < d[1]; ++b)
            for (std::size_t c = 0; c < d[2]; ++c) {
              const std::size_t row = (a * d[1] + b) * d[2] + c;
              const std::size_t idx[3] = {a, b, c};
              j[row * w + idx[m]] = v[(m + 1) % 3][idx[(m + 1) % 3]] * v[(m + 2) % 3][idx[(m + 2) % 3]];
            }
      }
    }
    return true;
  }

 private:
  const SmallTensor& x_;
  std::size_t rank_;
};

// Levenberg-Marquardt on the unpenalized fit; quadratic convergence for exact fits.
double refine(const SmallTensor& x, SmallDecomposition& dec) {
  const std::size_t rank = dec.rank();
  if (rank == 0) return x.frobenius();
  ceres::Problem::Options popts;
  popts.cost_function_ownership = ceres::TAKE_OWNERSHIP;
  ceres::Problem problem(popts);
  std::vector<double*> blocks;
  for (auto& c : dec.components)
    for (auto& m : c.modes) blocks.push_back(m.data());
  problem.AddResidualBlock(new ExactFitResidual(x, rank), nullptr, blocks);
  ceres::Solver::Options opts;
  opts.linear_solver_type = ceres::DENSE_QR;
  opts.logging_type = ceres::SILENT;
  opts.max_num_iterations = 500;
  opts.function_tolerance = 1e-30;
  opts.gradient_tolerance = 1e-30;
  opts.parameter_tolerance = 1e-20;
  ceres::Solver::Summary summary;
  ceres::Solve(opts, &problem, &summary);
  return residual(x, dec);
}

std::optional<SpectrumEstimate> one_restart(const SmallTensor& x, const SpectrumSearch& s, std::uint64_t restart) {
  const Layout layout{x.dims, s.rank};
  std::seed_seq seq{static_cast<std::uint32_t>(s.seed), static_cast<std::uint32_t>(s.seed >> 32),
                    static_cast<std::uint32_t>(restart), static_cast<std::uint32_t>(s.rank)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::vector<double> u(layout.size());
  const double scale = std::cbrt(1.0 / static_cast<double>(s.rank));
  for (std::size_t r = 0; r < s.rank; ++r) {
    for (int m = 0; m < 3; ++m) {
      const double sd = scale / std::sqrt(static_cast<double>(x.dims[m]));
      for (std::size_t i = 0; i < x.dims[m]; ++i) u[layout.offset(r, m) + i] = sd * gauss(rng);
    }
  }

  auto* fn = new PenalizedFit(x, layout, s.p, s.alpha);
  const ceres::GradientProblem problem(fn);  // takes ownership
  fn->set_mu(0.0);
  minimize(problem, u);
  for (double mu = 1e-1; mu > 1e-9; mu *= 0.1) {
    fn->set_mu(mu);
    minimize(problem, u);
  }

  SmallDecomposition dec = unpack(u, layout);
  const NormalizedDecomposition rough = normalize(dec, s.p);
  double largest = 0.0;
  for (double v : rough.sigma) largest = std::max(largest, v);
  SmallDecomposition pruned;
  for (const auto& c : dec.components) {
    const double sig = pnorm(c.modes[0], s.p) * pnorm(c.modes[1], s.p) * pnorm(c.modes[2], s.p);
    if (sig > 1e-7 * largest) pruned.components.push_back(c);
  }
  double res = polish(x, pruned, s.fit_tolerance);
  if (res > s.fit_tolerance) res = refine(x, pruned);
  if (res > s.fit_tolerance) {
    pruned = dec;
    res = polish(x, pruned, s.fit_tolerance);
    if (res > s.fit_tolerance) res = refine(x, pruned);
  }
  if (res > s.fit_tolerance) {
    // Collapsed components carry no gradient; reseed them and refit.
    pruned = dec;
    const double reseed = std::cbrt(std::max(res, 1e-6));
    for (auto& c : pruned.components) {
      const double sig = pnorm(c.modes[0], s.p) * pnorm(c.modes[1], s.p) * pnorm(c.modes[2], s.p);
      if (sig > 1e-3 * largest) continue;
      for (int m = 0; m < 3; ++m)
        for (double& v : c.modes[m]) v = reseed * gauss(rng);
    }
    res = refine(x, pruned);
  }
  if (!(res <= s.fit_tolerance)) return std::nullopt;

  SpectrumEstimate est;
  est.witness = normalize(balance(pruned, s.p).decomposition, s.p);
  est.value = spectrum_qnorm(est.witness, s.alpha / 3.0);
  est.residual = res;
  est.restart = restart;
  return est;
}

}  // namespace

SpectrumEstimate estimate_spectrum_norm(const SmallTensor& tensor, const SpectrumSearch& search) {
  const auto& d = tensor.dims;
  if (tensor.data.size() != d[0] * d[1] * d[2] || d[0] == 0 || d[1] == 0 || d[2] == 0) {
    throw DimensionError("malformed tensor");
  }
  if (d[0] > 8 || d[1] > 8 || d[2] > 8) throw DimensionError("spectrum search is limited to tensors up to 8x8x8");
  if (search.rank < 1) throw ConfigError("search rank must be at least 1");
  if (search.restarts < 1) throw ConfigError("at least one restart is required");
  if (!(search.p >= 1.0) || !(search.alpha > 0.0)) throw ConfigError("need p >= 1 and alpha > 0");

  const double norm = tensor.frobenius();
  SpectrumEstimate best;
  best.witness.p = search.p;
  if (norm == 0.0) return best;

  // Search on the unit-norm tensor; every spectrum norm is 1-homogeneous in the tensor.
  SmallTensor unit = tensor;
  for (double& v : unit.data) v /= norm;
  SpectrumSearch s = search;
  s.fit_tolerance = search.fit_tolerance / norm;

  bool found = false;
  for (std::uint64_t r = 0; r < search.restarts; ++r) {
    auto est = one_restart(unit, s, r);
    if (!est) continue;
    if (!found || est->value < best.value) {
      best = std::move(*est);
      found = true;
    }
  }
  if (!found) {
    throw SearchError("rank too small: no rank-" + std::to_string(search.rank) + " decomposition fits within " +
                      fmt_g(search.fit_tolerance) + " after " + std::to_string(search.restarts) +
                      " restarts");
  }
  best.value *= norm;
  best.residual *= norm;
  for (double& sg : best.witness.sigma) sg *= norm;
  return best;
}

SpectrumEstimate nuclear_pnorm_estimate(const SmallTensor& tensor, std::size_t rank, double p, std::size_t restarts,
                                        std::uint64_t seed) {
  SpectrumSearch s;
  s.rank = rank;
  s.p = p;
  s.alpha = 3.0;
  s.restarts = restarts;
  s.seed = seed;
  return estimate_spectrum_norm(tensor, s);
}

CertificateReport nonconvexity_certificate(std::size_t restarts, std::uint64_t seed) {
  auto unit_tensor = [](std::size_t i) {
    SmallDecomposition d;
    Component c;
    c.modes[0] = {0.0, 0.0};
    c.modes[1] = {0.0, 0.0};
    c.modes[2] = {1.0};
    c.modes[0][i] = 1.0;
    c.modes[1][i] = 1.0;
    d.components.push_back(c);
    return d;
  };
  CertificateReport rep;
  rep.endpoint_a = spectrum_qnorm(normalize(unit_tensor(0), 2.0), 2.0 / 3.0);
  rep.endpoint_b = spectrum_qnorm(normalize(unit_tensor(1), 2.0), 2.0 / 3.0);

  SmallTensor mid(2, 2, 1);
  mid(0, 0, 0) = 0.5;
  mid(1, 1, 0) = 0.5;
  bool found = false;
  for (std::size_t rank = 2; rank <= 4; ++rank) {
    SpectrumSearch s;
    s.rank = rank;
    s.p = 2.0;
    s.alpha = 2.0;
    s.restarts = restarts;
    s.seed = seed;
    try {
      const auto est = estimate_spectrum_norm(mid, s);
      if (!found || est.value < rep.midpoint) {
        rep.midpoint = est.value;
        rep.midpoint_rank = rank;
        found = true;
      }
    } catch (const SearchError&) {
    }
  }
  if (!found) throw SearchError("retry budget exhausted: no exact decomposition of the midpoint was found");
  rep.violation = rep.midpoint > 0.5 * (rep.endpoint_a + rep.endpoint_b);
  return rep;
}

}  // namespace kbc::verify
