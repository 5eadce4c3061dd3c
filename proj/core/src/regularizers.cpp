#include "kbc/regularizers.hpp"

#include <array>
#include <cmath>
#include <string>

namespace kbc {

namespace {

// One penalized mode: a real factor, or a (real, imaginary) pair of factors.
struct ModeFactors {
  std::size_t re;
  int im;  // -1 for real-valued factors
};

std::array<ModeFactors, 3> mode_factors(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::cp: return {{{0, -1}, {1, -1}, {2, -1}}};
    case ModelVariant::distmult: return {{{0, -1}, {1, -1}, {0, -1}}};
    case ModelVariant::complex: return {{{0, 1}, {2, 3}, {0, 1}}};
  }
  throw Error("unknown model variant");
}

std::array<Index, 3> example_rows(const Triple& t) { return {t.subject, t.predicate, t.object}; }

void check_rows(const ModelParams& m, const Triple& t) {
  if (t.subject >= m.num_entities() || t.object >= m.num_entities() || t.predicate >= m.num_predicates()) {
    throw DimensionError("penalty example out of range of the model");
  }
}

}  // namespace

std::string_view to_string(RegularizerVariant variant) {
  switch (variant) {
    case RegularizerVariant::none: return "NONE";
    case RegularizerVariant::fro_sampled: return "FRO_SAMPLED";
    case RegularizerVariant::n3_sampled: return "N3_SAMPLED";
    case RegularizerVariant::n2_weighted: return "N2_WEIGHTED";
  }
  return "?";
}

RegularizerVariant regularizer_from_string(std::string_view name) {
  if (name == "NONE" || name == "none") return RegularizerVariant::none;
  if (name == "FRO_SAMPLED" || name == "FRO" || name == "fro") return RegularizerVariant::fro_sampled;
  if (name == "N3_SAMPLED" || name == "N3" || name == "n3") return RegularizerVariant::n3_sampled;
  if (name == "N2_WEIGHTED" || name == "N2" || name == "n2") return RegularizerVariant::n2_weighted;
  throw ConfigError("unknown regularizer '" + std::string(name) +
                    "' (expected NONE, FRO_SAMPLED, N3_SAMPLED or N2_WEIGHTED)");
}

double fro_penalty_sampled(const ModelParams& model, std::span<const Triple> batch, double lambda, Gradients* grad) {
  const auto modes = mode_factors(model.variant());
  const std::size_t rank = model.rank();
  double sum = 0.0;
  for (const auto& t : batch) {
    check_rows(model, t);
    const auto rows = example_rows(t);
    for (std::size_t d = 0; d < 3; ++d) {
      const auto& mf = modes[d];
      const auto re = model.factor(mf.re).row(rows[d]);
      for (std::size_t r = 0; r < rank; ++r) sum += static_cast<double>(re[r]) * re[r];
      if (mf.im >= 0) {
        const auto im = model.factor(static_cast<std::size_t>(mf.im)).row(rows[d]);
        for (std::size_t r = 0; r < rank; ++r) sum += static_cast<double>(im[r]) * im[r];
      }
      if (grad && lambda != 0.0) {
        auto g = grad->row(mf.re, rows[d]);
        for (std::size_t r = 0; r < rank; ++r) g[r] += static_cast<Real>(2.0 * lambda * re[r]);
        if (mf.im >= 0) {
          const auto im = model.factor(static_cast<std::size_t>(mf.im)).row(rows[d]);
          auto gi = grad->row(static_cast<std::size_t>(mf.im), rows[d]);
          for (std::size_t r = 0; r < rank; ++r) gi[r] += static_cast<Real>(2.0 * lambda * im[r]);
        }
      }
    }
  }
  return lambda * sum;
}

double n3_penalty_sampled(const ModelParams& model, std::span<const Triple> batch, double lambda, Gradients* grad) {
  const auto modes = mode_factors(model.variant());
  const std::size_t rank = model.rank();
  double sum = 0.0;
  for (const auto& t : batch) {
    check_rows(model, t);
    const auto rows = example_rows(t);
    for (std::size_t d = 0; d < 3; ++d) {
      const auto& mf = modes[d];
      const auto re = model.factor(mf.re).row(rows[d]);
      if (mf.im < 0) {
        for (std::size_t r = 0; r < rank; ++r) {
          const double a = std::abs(static_cast<double>(re[r]));
          sum += a * a * a;
        }
        if (grad && lambda != 0.0) {
          auto g = grad->row(mf.re, rows[d]);
          for (std::size_t r = 0; r < rank; ++r) g[r] += static_cast<Real>(lambda * std::abs(static_cast<double>(re[r])) * re[r]);
        }
        continue;
      }
      const std::size_t imf = static_cast<std::size_t>(mf.im);
      const auto im = model.factor(imf).row(rows[d]);
      for (std::size_t r = 0; r < rank; ++r) {
        const double a = std::hypot(static_cast<double>(re[r]), static_cast<double>(im[r]));
        sum += a * a * a;
      }
      if (grad && lambda != 0.0) {
        auto g = grad->row(mf.re, rows[d]);
        auto gi = grad->row(imf, rows[d]);
        for (std::size_t r = 0; r < rank; ++r) {
          const double a = std::hypot(static_cast<double>(re[r]), static_cast<double>(im[r]));
          g[r] += static_cast<Real>(lambda * a * re[r]);
          gi[r] += static_cast<Real>(lambda * a * im[r]);
        }
      }
    }
  }
  return lambda / 3.0 * sum;
}

double n2_weighted_penalty(const ModelParams& model, const ModeMarginals& marginals, double lambda, Gradients* grad) {
  if (marginals.subject.size() != model.num_entities() || marginals.object.size() != model.num_entities() ||
      marginals.predicate.size() != model.num_predicates()) {
    throw DimensionError("marginals do not match the model dimensions");
  }
  const auto modes = mode_factors(model.variant());
  const std::size_t rank = model.rank();
  double total = 0.0;
  std::vector<double> col(rank);
  for (int d = 0; d < 3; ++d) {
    const auto& mf = modes[static_cast<std::size_t>(d)];
    const auto& q = marginals.mode(d);
    const Matrix& re = model.factor(mf.re);
    const Matrix* im = mf.im >= 0 ? &model.factor(static_cast<std::size_t>(mf.im)) : nullptr;

    std::fill(col.begin(), col.end(), 0.0);
    for (std::size_t i = 0; i < re.rows(); ++i) {
      const auto ur = re.row(i);
      for (std::size_t r = 0; r < rank; ++r) col[r] += q[i] * ur[r] * ur[r];
      if (im) {
        const auto ui = im->row(i);
        for (std::size_t r = 0; r < rank; ++r) col[r] += q[i] * ui[r] * ui[r];
      }
    }
    for (std::size_t r = 0; r < rank; ++r) total += col[r] * std::sqrt(col[r]);

    if (grad && lambda != 0.0) {
      for (auto& c : col) c = lambda * std::sqrt(c);
      Matrix& g = grad->dense(mf.re);
      for (std::size_t i = 0; i < re.rows(); ++i) {
        const auto ur = re.row(i);
        auto gr = g.row(i);
        for (std::size_t r = 0; r < rank; ++r) gr[r] += static_cast<Real>(col[r] * q[i] * ur[r]);
      }
      if (im) {
        Matrix& gi = grad->dense(static_cast<std::size_t>(mf.im));
        for (std::size_t i = 0; i < im->rows(); ++i) {
          const auto ui = im->row(i);
          auto gr = gi.row(i);
          for (std::size_t r = 0; r < rank; ++r) gr[r] += static_cast<Real>(col[r] * q[i] * ui[r]);
        }
      }
    }
  }
  return lambda / 3.0 * total;
}

double regularizer_penalty(const RegularizerConfig& config, const ModelParams& model, std::span<const Triple> batch,
                           const ModeMarginals* marginals, Gradients* grad) {
  switch (config.variant) {
    case RegularizerVariant::none: return 0.0;
    case RegularizerVariant::fro_sampled: return fro_penalty_sampled(model, batch, config.lambda, grad);
    case RegularizerVariant::n3_sampled: return n3_penalty_sampled(model, batch, config.lambda, grad);
    case RegularizerVariant::n2_weighted:
      if (!marginals) throw ConfigError("N2_WEIGHTED needs mode marginals");
      return n2_weighted_penalty(model, *marginals, config.lambda, grad);
  }
  return 0.0;
}

}  // namespace kbc
