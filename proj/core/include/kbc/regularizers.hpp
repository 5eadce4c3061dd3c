#pragma once

#include <span>
#include <string_view>

#include "kbc/gradients.hpp"
#include "kbc/model.hpp"
#include "kbc/statistics.hpp"
#include "kbc/triple_store.hpp"

namespace kbc {

enum class RegularizerVariant { none, fro_sampled, n3_sampled, n2_weighted };

std::string_view to_string(RegularizerVariant variant);
RegularizerVariant regularizer_from_string(std::string_view name);

struct RegularizerConfig {
  RegularizerVariant variant = RegularizerVariant::none;
  double lambda = 0.0;
};

// Sampled penalties visit, per example (i, j, k), the subject row i, the predicate row j
// and the object row k, in that order. For DistMult and ComplEx the subject and object
// rows both come from the shared entity matrix and are penalized separately. Complex
// entries contribute through their modulus.

/// lambda * sum over examples and modes of ||row||_2^2.
double fro_penalty_sampled(const ModelParams& model, std::span<const Triple> batch, double lambda, Gradients* grad);

/// (lambda / 3) * sum over examples, modes and ranks of |entry|^3.
double n3_penalty_sampled(const ModelParams& model, std::span<const Triple> batch, double lambda, Gradients* grad);

/// (lambda / 3) * sum_r sum_d (sum_i q^(d)_i |u^(d)_{i,r}|^2)^{3/2}, dense in every factor.
double n2_weighted_penalty(const ModelParams& model, const ModeMarginals& marginals, double lambda, Gradients* grad);

/// Dispatches on the configured variant. `marginals` is required for n2_weighted only.
double regularizer_penalty(const RegularizerConfig& config, const ModelParams& model, std::span<const Triple> batch,
                           const ModeMarginals* marginals, Gradients* grad);

}  // namespace kbc
