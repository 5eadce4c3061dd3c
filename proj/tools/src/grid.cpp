#include "grid.hpp"

#include <set>

namespace kbc::cli {

namespace {

template <typename T, typename Parse>
void read_list(const Json& grid, const char* key, std::vector<T>& out, std::vector<std::string>& errors, Parse parse) {
  if (!grid.contains(key)) return;
  const Json& v = grid.at(key);
  if (!v.is_array() || v.empty()) {
    errors.push_back(std::string("grid.") + key + ": expected a nonempty list");
    return;
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    try {
      out.push_back(parse(v[i]));
    } catch (const ConfigError& e) {
      errors.push_back(std::string("grid.") + key + "[" + std::to_string(i) + "]: " + e.what());
    }
  }
}

double as_number(const Json& v) {
  if (!v.is_number()) throw ConfigError("expected a number");
  return v.get<double>();
}

std::size_t as_count(const Json& v) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("expected a nonnegative integer");
  return v.get<std::size_t>();
}

std::string as_string(const Json& v) {
  if (!v.is_string()) throw ConfigError("expected a string");
  return v.get<std::string>();
}

}  // namespace

std::size_t GridSpec::size() const {
  auto n = [](std::size_t k) { return k == 0 ? std::size_t{1} : k; };
  return n(learning_rate.size()) * n(batch_size.size()) * n(lambda.size()) * n(regularizer.size()) *
         n(formulation.size()) * n(rank.size()) * n(model.size());
}

std::vector<TrainConfig> GridSpec::expand() const {
  auto or_base = [](const auto& list, auto base) {
    using V = std::decay_t<decltype(base)>;
    return list.empty() ? std::vector<V>{base} : std::vector<V>(list.begin(), list.end());
  };
  std::vector<TrainConfig> out;
  for (auto m : or_base(model, base.model.variant))
    for (auto f : or_base(formulation, base.formulation))
      for (auto reg : or_base(regularizer, base.regularizer.variant))
        for (auto r : or_base(rank, base.model.rank))
          for (auto lam : or_base(lambda, base.regularizer.lambda))
            for (auto lr : or_base(learning_rate, base.learning_rate))
              for (auto bs : or_base(batch_size, base.batch_size)) {
                TrainConfig c = base;
                c.model.variant = m;
                c.formulation = f;
                c.regularizer.variant = reg;
                c.model.rank = r;
                c.regularizer.lambda = lam;
                c.learning_rate = lr;
                c.batch_size = bs;
                out.push_back(c);
              }
  return out;
}

GridSpec parse_grid_spec(const Json& j, const std::filesystem::path& origin) {
  std::vector<std::string> errors;
  GridSpec spec;
  if (!j.is_object()) throw ConfigError("grid spec must be an object");
  static const std::set<std::string> kTop = {"data", "output", "base", "grid"};
  for (const auto& [k, _] : j.items()) {
    if (!kTop.count(k)) errors.push_back(k + ": unknown key");
  }
  for (const char* key : {"data", "output"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_string()) {
      errors.push_back(std::string(key) + ": expected a path string");
      continue;
    }
    (std::string(key) == "data" ? spec.data : spec.output) = origin / j[key].get<std::string>();
  }
  if (j.contains("base")) {
    std::vector<std::string> base_errors;
    spec.base = train_config_from_json(j["base"], base_errors);
    for (auto& e : base_errors) errors.push_back("base." + e);
  }
  if (!j.contains("grid") || !j["grid"].is_object()) {
    errors.emplace_back("grid: expected a table of candidate lists");
  } else {
    const Json& g = j["grid"];
    static const std::set<std::string> kAxes = {"learning_rate", "batch_size", "lambda", "regularizer",
                                                "formulation", "rank", "model"};
    for (const auto& [k, _] : g.items()) {
      if (!kAxes.count(k)) errors.push_back("grid." + k + ": unknown axis");
    }
    read_list(g, "learning_rate", spec.learning_rate, errors, [](const Json& v) {
      const double x = as_number(v);
      if (!(x > 0)) throw ConfigError("learning rate must be positive");
      return x;
    });
    read_list(g, "batch_size", spec.batch_size, errors, [](const Json& v) {
      const auto x = as_count(v);
      if (x < 1) throw ConfigError("batch size must be at least 1");
      return x;
    });
    read_list(g, "lambda", spec.lambda, errors, [](const Json& v) {
      const double x = as_number(v);
      if (!(x >= 0)) throw ConfigError("lambda must be nonnegative");
      return x;
    });
    read_list(g, "regularizer", spec.regularizer, errors,
              [](const Json& v) { return regularizer_from_string(as_string(v)); });
    read_list(g, "formulation", spec.formulation, errors,
              [](const Json& v) { return formulation_from_string(as_string(v)); });
    read_list(g, "rank", spec.rank, errors, [](const Json& v) {
      const auto x = as_count(v);
      if (x < 1) throw ConfigError("rank must be at least 1");
      return x;
    });
    read_list(g, "model", spec.model, errors, [](const Json& v) { return model_variant_from_string(as_string(v)); });
  }
  if (!errors.empty()) {
    std::string msg = "invalid grid spec:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return spec;
}

}  // namespace kbc::cli
