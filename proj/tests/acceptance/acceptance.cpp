// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.
// The WN18RR comparison lives in wn18rr_check.cpp because it needs the dataset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kbc/eval.hpp"
#include "kbc/trainer.hpp"
#include "kbc/verify/decomposition.hpp"
#include "kbc/verify/hierarchy.hpp"
#include "kbc/verify/nuclear.hpp"
#include "kbc_test_support.hpp"

using namespace kbc;
namespace kt = kbc::testing;

namespace {

struct Outcome {
  bool passed;
  std::string detail;
};

int failures = 0;

void report(int id, const char* title, const std::function<Outcome()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.passed) ++failures;
  std::printf("%s criterion %d: %s  [%s; %.1fs]\n", o.passed ? "PASS" : "FAIL", id, title, o.detail.c_str(), secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, double v) {
  char buf[96];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

constexpr ModelVariant kVariants[] = {ModelVariant::cp, ModelVariant::complex, ModelVariant::distmult};

Outcome gradients() {
  double worst = 0;
  std::string where;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto raw = kt::random_store(8, 7, 3, 1000 + seed);
    auto aug = augment_reciprocal(raw);
    for (auto v : kVariants) {
      for (auto f : {Formulation::standard, Formulation::reciprocal}) {
        const TripleStore& train = f == Formulation::reciprocal ? aug : raw;
        const auto marginals = compute_marginals(train);
        auto m = kt::random_model(v, 7, train.num_predicates(), 5, seed);
        for (auto rv : {RegularizerVariant::fro_sampled, RegularizerVariant::n3_sampled,
                        RegularizerVariant::n2_weighted}) {
          TrainConfig c;
          c.model.variant = v;
          c.formulation = f;
          c.regularizer = {rv, 0.1};
          Gradients g(m);
          compute_batch_objective(c, m, train, train.triples(), &marginals, &g);
          const double err = kt::max_fd_error(
              m,
              [&](const ModelParams& x) {
                return compute_batch_objective(c, x, train, train.triples(), &marginals, nullptr);
              },
              g, 1e-5);
          if (err > worst) {
            worst = err;
            where = std::string(to_string(v)) + "/" + std::string(to_string(f)) + "/" +
                    std::string(to_string(rv)) + " seed " + std::to_string(seed);
          }
        }
      }
    }
  }
  return {worst < 1e-4, "max relative error " + fmt("%.2e", worst) + " at " + where + ", 360 instances"};
}

Outcome ranking() {
  auto d = kt::random_splits(50, 5, 500, 60, 60, 7);
  std::vector<const TripleStore*> stores{&d.train, &d.valid, &d.test};
  std::size_t mismatches = 0, total = 0;
  std::mt19937_64 rng(8);
  for (auto f : {Formulation::standard, Formulation::reciprocal}) {
    const bool rec = f == Formulation::reciprocal;
    auto filter = build_filter_index(stores, rec);
    auto m = kt::random_model(ModelVariant::complex, 50, rec ? 10 : 5, 8, 9);
    for (int n = 0; n < 1000; ++n, ++total) {
      const bool rhs = rng() & 1;
      const Index a = static_cast<Index>(rng() % 50), j = static_cast<Index>(rng() % 5),
                  target = static_cast<Index>(rng() % 50);
      auto score = [&](Index c) {
        if (rhs) return score_triple(m, a, j, c);
        return rec ? score_triple(m, a, static_cast<Index>(j + 5), c) : score_triple(m, c, j, a);
      };
      auto known = [&](Index c) {
        for (auto* s : stores)
          for (const Triple& t : s->triples())
            if (t.predicate == j && (rhs ? t.subject == a && t.object == c : t.object == a && t.subject == c))
              return true;
        return false;
      };
      std::size_t naive = 1;
      for (Index c = 0; c < 50; ++c)
        if (c != target && !known(c) && score(c) > score(target)) ++naive;
      const Query q{rhs ? QueryDirection::rhs : QueryDirection::lhs, a, j, target};
      if (filtered_rank(m, q, filter, f) != naive) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(total - mismatches) + "/" + std::to_string(total) +
                               " queries equal to the naive scan (both formulations)"};
}

Outcome lemma() {
  using namespace kbc::verify;
  double worst_norm = 0, worst_recon = 0, worst_value = 0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    SmallTensor x(4, 3, 5);
    SmallDecomposition u;
    for (int r = 0; r < 6; ++r) {
      Component c;
      for (int mode = 0; mode < 3; ++mode) {
        const double s = std::exp(2 * g(rng));
        for (std::size_t i = 0; i < x.dims[mode]; ++i) c.modes[mode].push_back(s * g(rng));
      }
      u.components.push_back(c);
    }
    const auto before = u.reconstruct();
    for (double p : {2.0, 3.0}) {
      auto b = balance(u, p).decomposition;
      double rhs = 0;
      for (std::size_t r = 0; r < u.rank(); ++r) {
        double prod = 1;
        for (const auto& m : u.components[r].modes) prod *= pnorm(m, p);
        rhs += prod;
        const double gmean = std::cbrt(prod);
        for (const auto& m : b.components[r].modes)
          worst_norm = std::max(worst_norm, std::abs(pnorm(m, p) - gmean) / std::max(1.0, gmean));
      }
      const auto after = b.reconstruct();
      for (std::size_t i = 0; i < before.data.size(); ++i)
        worst_recon = std::max(worst_recon, std::abs(after.data[i] - before.data[i]) / std::max(1.0, before.frobenius()));
      worst_value = std::max(worst_value, std::abs(omega(b, p, 3) - rhs) / std::max(1.0, rhs));
    }
  }
  return {worst_norm <= 1e-10 && worst_recon <= 1e-12 && worst_value <= 1e-10,
          "norm spread " + fmt("%.1e", worst_norm) + ", reconstruction " + fmt("%.1e", worst_recon) +
              ", Omega vs product sum " + fmt("%.1e", worst_value) + " (relative to max(1, scale))"};
}

Outcome certificate() {
  auto r = verify::nonconvexity_certificate(50, 0);
  const bool ok = r.endpoint_a == 1.0 && r.endpoint_b == 1.0 && r.midpoint >= 1.2 && r.midpoint <= 1.4143 &&
                  std::abs(r.midpoint - std::sqrt(2.0)) <= 1e-4 && r.violation;
  return {ok, "endpoints " + fmt("%.17g", r.endpoint_a) + ", " + fmt("%.17g", r.endpoint_b) + "; midpoint " +
                  fmt("%.10f", r.midpoint) + " at rank " + std::to_string(r.midpoint_rank) +
                  (r.violation ? "; violation flagged" : "; no violation")};
}

Outcome hierarchy() {
  double worst = 0;
  for (std::size_t n : {3, 4, 5})
    for (std::size_t d : {1, 2, 3})
      worst = std::max(worst, std::abs(verify::hierarchy_mrr_simulated({n, d}) - verify::hierarchy_mrr_closed_form({n, d})));
  const double gap = 1 - verify::hierarchy_mrr_closed_form({10, 4});
  const double rel = std::abs(gap - 0.05) / 0.05;
  return {worst <= 1e-12 && rel <= 0.2,
          "max |sim - closed| " + fmt("%.1e", worst) + "; n=10 d=4: 1-mrr " + fmt("%.5f", gap) + " (" +
              fmt("%.1f", 100 * rel) + "% from 1/2n)"};
}

Outcome invariance() {
  const std::size_t n = 40, p = 4;
  std::mt19937_64 rng(61);
  std::vector<Triple> triples;
  for (const Triple& t : kt::random_triples(700, n, p, rng))
    if (t.subject != t.object && triples.size() < 600) triples.push_back(t);
  TripleStore train(std::vector<Triple>(triples.begin(), triples.begin() + 500), n, p);
  TripleStore valid(std::vector<Triple>(triples.begin() + 500, triples.end()), n, p, Split::valid);
  const Index j = 2;
  auto train_f = flip_predicate(train, j);
  auto valid_f = flip_predicate(valid, j);

  TrainConfig c;
  c.model = {ModelVariant::complex, 8, 0.1, 5};
  c.regularizer = {RegularizerVariant::n3_sampled, 0.01};
  c.batch_size = 64;
  c.epochs = 5;
  c.eval_every = 5;
  c.seed = 3;
  auto init = init_model(c.model, n, 2 * p);
  auto init_f = init;
  init_f.swap_predicate_rows(j, j + p);
  FitOptions o, of;
  o.initial = &init;
  of.initial = &init_f;
  auto filter = build_filter_index({&train, &valid}, true);
  auto filter_f = build_filter_index({&train_f, &valid_f}, true);
  auto a = fit(c, augment_reciprocal(train), &valid, &filter, o);
  auto b = fit(c, augment_reciprocal(train_f), &valid_f, &filter_f, of);
  double worst = 0;
  for (std::size_t e = 0; e < c.epochs; ++e)
    worst = std::max(worst, std::abs(a.history.epochs[e].loss - b.history.epochs[e].loss));
  auto ra = rank_queries(a.model, valid, filter, Formulation::reciprocal);
  auto rb = rank_queries(b.model, valid_f, filter_f, Formulation::reciprocal);
  std::sort(ra.begin(), ra.end());
  std::sort(rb.begin(), rb.end());
  const double mrr_a = a.history.best_valid_mrr, mrr_b = b.history.best_valid_mrr;
  return {worst < 1e-9 && ra == rb,
          "max per-epoch loss difference " + fmt("%.1e", worst) + "; valid MRR " + fmt("%.6f", mrr_a) + " vs " +
              fmt("%.6f", mrr_b) + (ra == rb ? ", identical rank multisets" : ", rank multisets differ")};
}

Outcome planted() {
  const std::size_t n = 50, p = 4, planted_rank = 5, top = 5;
  auto truth = kt::random_model(ModelVariant::cp, n, p, planted_rank, 71, 1.0);
  std::vector<Triple> positives;
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < p; ++j) {
      auto s = score_rhs_fiber(truth, i, j);
      std::vector<Index> order(n);
      for (Index k = 0; k < n; ++k) order[k] = k;
      std::partial_sort(order.begin(), order.begin() + top, order.end(), [&](Index x, Index y) {
        return s[x] != s[y] ? s[x] > s[y] : x < y;
      });
      for (std::size_t t = 0; t < top; ++t) positives.push_back({i, j, order[t]});
    }
  TripleStore train(positives, n, p);
  auto filter = build_filter_index({&train}, true);

  TrainConfig c;
  c.model = {ModelVariant::cp, 25, 0.1, 1};
  c.regularizer = {RegularizerVariant::n3_sampled, 1e-3};
  c.batch_size = 100;
  c.epochs = 200;
  c.eval_every = 10;
  c.learning_rate = 0.1;
  std::size_t reached = 0;
  double at = 0;
  FitOptions o;
  o.on_epoch = [&](const EpochRecord& r) {
    if (!reached && r.valid_mrr && *r.valid_mrr >= 0.95) reached = r.epoch, at = *r.valid_mrr;
  };
  auto r = fit(c, augment_reciprocal(train), &train, &filter, o);
  const double best = r.history.best_valid_mrr;
  return {best >= 0.95, std::to_string(train.size()) + " positives; best train filtered MRR " + fmt("%.4f", best) +
                            (reached ? " (>= 0.95 first at epoch " + std::to_string(reached) + ", " + fmt("%.4f", at) + ")"
                                     : " (threshold not reached)")};
}

Outcome epoch_sum() {
  auto store = kt::random_store(400, 30, 5, 91);
  bool exact = true;
  double worst_minibatch = 0;
  for (auto v : kVariants) {
    auto m = kt::random_model(v, 30, 5, 6, 92);
    const double lambda = 0.02;
    const bool complex = v == ModelVariant::complex;
    const std::size_t pf = complex ? 2 : 1, of = v == ModelVariant::cp ? 2 : 0;
    double sum = 0;
    for (const Triple& t : store.triples()) {
      const std::pair<std::size_t, Index> modes[3] = {{0, t.subject}, {pf, t.predicate}, {of, t.object}};
      for (const auto& [f, row] : modes)
        for (std::size_t r = 0; r < 6; ++r) {
          const double re = m.factor(f)(row, r);
          const double a = complex ? std::hypot(re, double(m.factor(f + 1)(row, r))) : std::abs(re);
          sum += a * a * a;
        }
    }
    const double closed = lambda / 3.0 * sum;
    exact = exact && n3_penalty_sampled(m, store.triples(), lambda, nullptr) == closed;
    double acc = 0;
    for (std::size_t b0 = 0; b0 < store.size(); b0 += 32)
      acc += n3_penalty_sampled(m, store.triples().subspan(b0, std::min<std::size_t>(32, store.size() - b0)), lambda,
                                nullptr);
    worst_minibatch = std::max(worst_minibatch, std::abs(acc - closed) / closed);
  }
  return {exact, std::string(exact ? "full-pass value bit-identical to the triple sum" : "full-pass value differs") +
                     " for CP, ComplEx and DistMult; minibatch accumulation relative gap " +
                     fmt("%.1e", worst_minibatch)};
}

}  // namespace

int main() {
  std::printf("kbc acceptance (%s precision)\n", kRealIsDouble ? "double" : "single");
  report(1, "gradients match central finite differences", gradients);
  report(2, "filtered ranks equal the naive scan on 1000 queries", ranking);
  report(3, "balancing equalizes norms and attains the product bound", lemma);
  report(4, "non-convexity certificate", certificate);
  report(5, "hierarchy MRR closed form vs simulation", hierarchy);
  report(6, "orientation flip leaves training unchanged", invariance);
  report(7, "planted rank-5 model recovered to train MRR >= 0.95", planted);
  report(9, "sampled N3 epoch sum equals the closed-form triple sum", epoch_sum);
  std::printf("criterion 8 (WN18RR) runs as the acceptance_wn18rr test when KBC_WN18RR_DIR is set\n");
  std::printf("%s\n", failures == 0 ? "ALL PASS" : (std::to_string(failures) + " FAILED").c_str());
  return failures == 0 ? 0 : 1;
}
