#include "kbc/serialization.hpp"

#include <cstdio>
#include <set>
#include <sstream>

namespace kbc {

namespace {

class Reader {
 public:
  Reader(const Json& obj, std::string prefix, std::vector<std::string>& errors)
      : obj_(obj), prefix_(std::move(prefix)), errors_(errors) {
    if (!obj_.is_object()) errors_.push_back(where("") + " must be an object");
  }

  template <typename Fn>
  void field(const char* key, Fn&& parse) {
    known_.insert(key);
    if (!obj_.is_object() || !obj_.contains(key)) return;
    try {
      parse(obj_.at(key));
    } catch (const ConfigError& e) {
      errors_.push_back(where(key) + ": " + e.what());
    }
  }

  void unsigned_field(const char* key, auto& out) {
    field(key, [&](const Json& v) {
      if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError("expected a nonnegative integer");
      out = static_cast<std::remove_reference_t<decltype(out)>>(v.get<std::uint64_t>());
    });
  }

  void number_field(const char* key, double& out) {
    field(key, [&](const Json& v) {
      if (!v.is_number()) throw ConfigError("expected a number");
      out = v.get<double>();
    });
  }

  template <typename Fn>
  void string_field(const char* key, Fn&& parse) {
    field(key, [&](const Json& v) {
      if (!v.is_string()) throw ConfigError("expected a string");
      parse(v.get<std::string>());
    });
  }

  void reject_unknown() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!known_.count(key)) errors_.push_back(where(key) + ": unknown key");
    }
  }

 private:
  std::string where(const std::string& key) const {
    if (key.empty()) return prefix_.empty() ? "config" : prefix_;
    return prefix_.empty() ? key : prefix_ + "." + key;
  }

  const Json& obj_;
  std::string prefix_;
  std::vector<std::string>& errors_;
  std::set<std::string, std::less<>> known_;
};

std::string fmt_double(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

Json to_json(const TrainConfig& c) {
  Json j;
  j["model"] = {{"variant", std::string(to_string(c.model.variant))},
                {"rank", c.model.rank},
                {"init_scale", c.model.init_scale},
                {"seed", c.model.seed}};
  j["formulation"] = std::string(to_string(c.formulation));
  j["regularizer"] = {{"variant", std::string(to_string(c.regularizer.variant))}, {"lambda", c.regularizer.lambda}};
  j["batch_size"] = c.batch_size;
  j["epochs"] = c.epochs;
  j["eval_every"] = c.eval_every;
  j["learning_rate"] = c.learning_rate;
  j["seed"] = c.seed;
  j["valid_cap"] = c.valid_cap;
  return j;
}

TrainConfig train_config_from_json(const Json& j, std::vector<std::string>& errors) {
  TrainConfig c;
  Reader top(j, "", errors);
  top.field("model", [&](const Json& m) {
    Reader r(m, "model", errors);
    r.string_field("variant", [&](const std::string& s) { c.model.variant = model_variant_from_string(s); });
    r.unsigned_field("rank", c.model.rank);
    r.number_field("init_scale", c.model.init_scale);
    r.unsigned_field("seed", c.model.seed);
    r.reject_unknown();
  });
  top.string_field("formulation", [&](const std::string& s) { c.formulation = formulation_from_string(s); });
  top.field("regularizer", [&](const Json& m) {
    Reader r(m, "regularizer", errors);
    r.string_field("variant", [&](const std::string& s) { c.regularizer.variant = regularizer_from_string(s); });
    r.number_field("lambda", c.regularizer.lambda);
    r.reject_unknown();
  });
  top.unsigned_field("batch_size", c.batch_size);
  top.unsigned_field("epochs", c.epochs);
  top.unsigned_field("eval_every", c.eval_every);
  top.number_field("learning_rate", c.learning_rate);
  top.unsigned_field("seed", c.seed);
  top.unsigned_field("valid_cap", c.valid_cap);
  top.reject_unknown();
  for (auto& e : validation_errors(c)) errors.push_back(std::move(e));
  return c;
}

TrainConfig train_config_from_json(const Json& j) {
  std::vector<std::string> errors;
  TrainConfig c = train_config_from_json(j, errors);
  if (!errors.empty()) {
    std::string msg = "invalid training configuration:";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return c;
}

Json to_json(const EvalResult& r) {
  Json j;
  j["mrr"] = r.mrr;
  j["hits1"] = r.hits1;
  j["hits3"] = r.hits3;
  j["hits10"] = r.hits10;
  j["n_queries"] = r.n_queries;
  if (r.breakdown) {
    Json b = Json::object();
    for (auto cat : kRelationCategories) {
      auto it = r.breakdown->find(cat);
      if (it == r.breakdown->end()) continue;
      b[std::string(to_string(cat))] = {{"mrr", it->second.mrr}, {"n_queries", it->second.n_queries}};
    }
    j["breakdown"] = b;
    j["uncategorized"] = r.uncategorized;
  } else {
    j["breakdown"] = nullptr;
  }
  return j;
}

Json to_json(const TrainHistory& h) {
  Json epochs = Json::array();
  for (const auto& e : h.epochs) {
    Json row = {{"epoch", e.epoch}, {"loss", e.loss}, {"seconds", e.seconds}};
    row["valid_mrr"] = e.valid_mrr ? Json(*e.valid_mrr) : Json(nullptr);
    epochs.push_back(row);
  }
  Json j;
  j["epochs"] = epochs;
  j["best_epoch"] = h.best_epoch ? Json(*h.best_epoch) : Json(nullptr);
  j["best_valid_mrr"] = h.best_epoch ? Json(h.best_valid_mrr) : Json(nullptr);
  return j;
}

std::string history_csv(const TrainHistory& h) {
  std::ostringstream out;
  out.precision(17);
  out << "epoch,loss,valid_mrr\n";
  for (const auto& e : h.epochs) {
    out << e.epoch << ',' << e.loss << ',';
    if (e.valid_mrr) out << *e.valid_mrr;
    out << '\n';
  }
  return out.str();
}

std::string format_eval_table(const EvalResult& r) {
  std::ostringstream out;
  auto line = [&](const std::string& k, const std::string& v) {
    out << k << std::string(k.size() < 12 ? 12 - k.size() : 1, ' ') << v << '\n';
  };
  line("MRR", fmt_double(r.mrr));
  line("Hits@1", fmt_double(r.hits1));
  line("Hits@3", fmt_double(r.hits3));
  line("Hits@10", fmt_double(r.hits10));
  line("queries", std::to_string(r.n_queries));
  if (r.breakdown) {
    out << "\ncategory    MRR     queries\n";
    for (auto cat : kRelationCategories) {
      auto it = r.breakdown->find(cat);
      if (it == r.breakdown->end()) continue;
      std::string name(to_string(cat));
      std::string mrr = fmt_double(it->second.mrr);
      out << name << std::string(12 - name.size(), ' ') << mrr << std::string(8 - mrr.size(), ' ')
          << it->second.n_queries << '\n';
    }
    if (r.uncategorized) out << "uncategorized queries: " << r.uncategorized << '\n';
  }
  return out.str();
}

}  // namespace kbc
