#pragma once

// Random instances, brute-force references and finite differences shared by the suites.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "kbc/gradients.hpp"
#include "kbc/model.hpp"
#include "kbc/triple_store.hpp"

namespace kbc::testing {

inline constexpr double kFdTol = kRealIsDouble ? 1e-4 : 5e-2;
inline constexpr double kFdStep = kRealIsDouble ? 1e-5 : 1e-2;
inline constexpr double kLooseTol = kRealIsDouble ? 1e-9 : 1e-3;

inline ModelParams random_model(ModelVariant v, std::size_t n, std::size_t p, std::size_t r, std::uint64_t seed,
                                double scale = 0.5) {
  ModelParams m(v, n, p, r);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, scale);
  for (auto& f : m.factors())
    for (auto& x : f.values()) x = static_cast<Real>(g(rng));
  return m;
}

inline std::vector<Triple> random_triples(std::size_t count, std::size_t n, std::size_t p, std::mt19937_64& rng) {
  std::uniform_int_distribution<Index> e(0, static_cast<Index>(n - 1));
  std::uniform_int_distribution<Index> r(0, static_cast<Index>(p - 1));
  std::set<Triple> seen;
  std::vector<Triple> out;
  while (out.size() < count) {
    Triple t{e(rng), r(rng), e(rng)};
    if (seen.insert(t).second) out.push_back(t);
  }
  return out;
}

inline TripleStore random_store(std::size_t count, std::size_t n, std::size_t p, std::uint64_t seed,
                                Split split = Split::train) {
  std::mt19937_64 rng(seed);
  return TripleStore(random_triples(count, n, p, rng), n, p, split);
}

/// Splits one random triple set into disjoint train/valid/test stores.
struct SplitStores {
  TripleStore train, valid, test;
};

inline SplitStores random_splits(std::size_t n, std::size_t p, std::size_t train, std::size_t valid,
                                 std::size_t test, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto all = random_triples(train + valid + test, n, p, rng);
  auto part = [&](std::size_t a, std::size_t b, Split s) {
    return TripleStore(std::vector<Triple>(all.begin() + a, all.begin() + b), n, p, s);
  };
  return {part(0, train, Split::train), part(train, train + valid, Split::valid),
          part(train + valid, train + valid + test, Split::test)};
}

/// Max over all parameters of |analytic - numeric| / max(|analytic|, |numeric|, 1e-6).
template <typename Objective>
double max_fd_error(ModelParams& m, Objective objective, const Gradients& analytic, double step = kFdStep) {
  double worst = 0.0;
  for (std::size_t f = 0; f < m.factors().size(); ++f) {
    auto values = m.factor(f).values();
    const auto& g = analytic.values(f);
    for (std::size_t i = 0; i < values.size(); ++i) {
      const Real saved = values[i];
      values[i] = static_cast<Real>(saved + step);
      const double up = objective(m);
      values[i] = static_cast<Real>(saved - step);
      const double down = objective(m);
      values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double a = g.values()[i];
      const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-6});
      worst = std::max(worst, err);
    }
  }
  return worst;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("kbc_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::create_directories(path.parent_path());
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  std::fwrite(text.data(), 1, text.size(), f);
  std::fclose(f);
}

}  // namespace kbc::testing
