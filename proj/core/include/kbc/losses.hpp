#pragma once

#include <span>

#include "kbc/gradients.hpp"
#include "kbc/model.hpp"
#include "kbc/triple_store.hpp"

namespace kbc {

// Full-softmax fiber losses. Each returns the SUM over the batch of the per-example
// loss and, when `grad` is non-null, accumulates the gradient of that sum into it.
// Log-sum-exp is computed with max subtraction.

/// Sum over (i,j,k) of  -X[i,j,k] + log sum_k' exp X[i,j,k'].
double rhs_fiber_loss_and_grad(const ModelParams& model, std::span<const Triple> batch, Gradients* grad);

/// Sum over (i,j,k) of  -X[i,j,k] + log sum_i' exp X[i',j,k].
double lhs_fiber_loss_and_grad(const ModelParams& model, std::span<const Triple> batch, Gradients* grad);

/// rhs + lhs terms for every triple of a raw store.
double standard_loss(const ModelParams& model, std::span<const Triple> batch, Gradients* grad);

/// Object-fiber term only, for examples drawn from a reciprocal-augmented store. Summing
/// over the two images (i,j,k) and (k,j+P,i) of a triple gives the reciprocal objective.
double reciprocal_loss(const ModelParams& model, const TripleStore& augmented, std::span<const Triple> batch,
                       Gradients* grad);

}  // namespace kbc
