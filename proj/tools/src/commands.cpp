#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "config_io.hpp"
#include "dataset.hpp"
#include "grid.hpp"
#include "kbc/checkpoint.hpp"
#include "kbc/verify/suite.hpp"
#include "runner.hpp"

namespace kbc::cli {

namespace fs = std::filesystem;

namespace {

struct RunConfig {
  TrainConfig train;
  std::optional<fs::path> data;
  std::optional<fs::path> output;
};

RunConfig read_run_config(const fs::path& path) {
  Json j = read_config_file(path);
  if (!j.is_object()) throw ConfigError(path.string() + ": expected a table of settings");
  RunConfig rc;
  std::vector<std::string> errors;
  const fs::path origin = path.parent_path();
  for (const char* key : {"data", "output"}) {
    if (!j.contains(key)) continue;
    if (!j[key].is_string()) {
      errors.push_back(std::string(key) + ": expected a path string");
    } else {
      (std::string(key) == "data" ? rc.data : rc.output) = origin / j[key].get<std::string>();
    }
    j.erase(key);
  }
  rc.train = train_config_from_json(j, errors);
  if (!errors.empty()) {
    std::string msg = "invalid training configuration in " + path.string() + ":";
    for (const auto& e : errors) msg += "\n  - " + e;
    throw ConfigError(msg);
  }
  return rc;
}

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// ---- prepare-data ------------------------------------------------------------

int cmd_prepare(const PrepareOptions& opts, std::ostream& out) {
  const auto outcome = prepare_data(opts);
  const Json& m = outcome.manifest;
  out << (outcome.reused ? "up to date: " : "prepared: ") << opts.output.string() << "\n";
  out << "entities " << m["num_entities"].get<std::size_t>() << ", predicates "
      << m["num_predicates"].get<std::size_t>() << "\n";
  for (const char* s : {"train", "valid", "test"}) {
    out << s << " " << m["splits"][s]["triples"].get<std::size_t>() << " triples";
    const auto dup = m["splits"][s]["duplicates_dropped"].get<std::size_t>();
    if (dup) out << " (" << dup << " duplicates dropped)";
    out << "\n";
  }
  return kOk;
}

// ---- train ----------------------------------------------------------------

struct TrainArgs {
  std::string config;
  std::string data;
  std::string out;
  bool quiet = false;
};

int cmd_train(const TrainArgs& a, std::ostream& out, std::ostream& err) {
  RunConfig rc = read_run_config(a.config);
  if (!a.data.empty()) rc.data = a.data;
  if (!a.out.empty()) rc.output = a.out;
  if (!rc.data) throw ConfigError("no dataset: set 'data' in the config or pass --data");
  const PreparedData data = load_prepared(*rc.data);
  const fs::path out_dir = rc.output ? *rc.output : fs::path("runs") / config_hash(rc.train, data);
  const Json record = run_training(rc.train, data, out_dir, a.quiet ? nullptr : &err);
  out << "run directory: " << out_dir.string() << "\n";
  const auto& h = record["history"];
  if (!h["best_epoch"].is_null()) {
    out << "best epoch " << h["best_epoch"].get<std::size_t>() << ", valid MRR "
        << fmt("%.4f", h["best_valid_mrr"].get<double>()) << "\n";
  }
  out << "test MRR " << fmt("%.4f", record["test"]["mrr"].get<double>()) << ", Hits@10 "
      << fmt("%.4f", record["test"]["hits10"].get<double>()) << "\n";
  return kOk;
}

// ---- eval -----------------------------------------------------------------

struct EvalArgs {
  std::string checkpoint;
  std::string data;
  std::string split = "test";
  std::string formulation;
  std::string output;
  bool by_type = false;
  bool raw = false;
  bool json = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
  const Split split = split_from_string(a.split);
  const PreparedData data = load_prepared(a.data);
  const ModelParams model = load_checkpoint(a.checkpoint);

  const std::size_t p = data.train.num_predicates();
  Formulation formulation;
  if (!a.formulation.empty()) {
    formulation = formulation_from_string(a.formulation);
  } else {
    fs::path sidecar = fs::path(a.checkpoint).replace_extension(".json");
    if (fs::exists(sidecar)) {
      formulation = formulation_from_string(read_config_file(sidecar).value("formulation", "reciprocal"));
    } else {
      formulation = model.num_predicates() == 2 * p ? Formulation::reciprocal : Formulation::standard;
    }
  }
  const std::size_t want_p = formulation == Formulation::reciprocal ? 2 * p : p;
  if (model.num_entities() != data.train.num_entities() || model.num_predicates() != want_p) {
    throw DimensionError("checkpoint has N=" + std::to_string(model.num_entities()) +
                         ", P=" + std::to_string(model.num_predicates()) + " but the dataset needs N=" +
                         std::to_string(data.train.num_entities()) + ", P=" + std::to_string(want_p) + " (" +
                         std::string(to_string(formulation)) + ")");
  }

  const bool reciprocal = formulation == Formulation::reciprocal;
  const FilterIndex filter = build_filter_index({&data.train, &data.valid, &data.test}, reciprocal);
  std::optional<RelationTypeTable> table;
  EvalOptions opts;
  opts.filtered = !a.raw;
  if (a.by_type) {
    table = relation_type_table(augment_reciprocal(data.train));
    opts.relation_types = &*table;
  }
  const EvalResult res = evaluate(model, data.split(split), filter, formulation, opts);
  Json j = to_json(res);
  j["split"] = a.split;
  j["filtered"] = !a.raw;
  j["formulation"] = std::string(to_string(formulation));
  if (!a.output.empty()) write_json(a.output, j);
  if (a.json) {
    out << j.dump(2) << "\n";
  } else {
    out << a.split << " (" << (a.raw ? "raw" : "filtered") << ", " << to_string(formulation) << ")\n";
    out << format_eval_table(res);
  }
  return kOk;
}

// ---- grid -----------------------------------------------------------------

struct GridArgs {
  std::string spec;
  std::string data;
  std::string out;
  bool quiet = false;
};

int cmd_grid(const GridArgs& a, std::ostream& out, std::ostream& err) {
  const fs::path spec_path = a.spec;
  GridSpec spec = parse_grid_spec(read_config_file(spec_path), spec_path.parent_path());
  if (!a.data.empty()) spec.data = a.data;
  if (!a.out.empty()) spec.output = a.out;
  if (!spec.data) throw ConfigError("no dataset: set 'data' in the grid spec or pass --data");
  if (!spec.output) throw ConfigError("no output directory: set 'output' in the grid spec or pass --out");
  const auto configs = spec.expand();
  for (const auto& c : configs) validate(c);
  out << "grid: " << configs.size() << " configurations\n";

  const PreparedData data = load_prepared(*spec.data);
  fs::create_directories(*spec.output);
  std::vector<Json> rows;
  std::size_t ran = 0, skipped = 0, failed = 0;
  for (std::size_t i = 0; i < configs.size(); ++i) {
    const TrainConfig& c = configs[i];
    const std::string hash = config_hash(c, data);
    const fs::path dir = *spec.output / hash;
    Json record;
    const fs::path record_path = dir / "run_record.json";
    bool done = false;
    if (fs::exists(record_path)) {
      try {
        record = read_config_file(record_path);
        done = record.value("status", "") == "completed";
      } catch (const Error&) {
      }
    }
    out << "[" << (i + 1) << "/" << configs.size() << "] " << hash << " ";
    if (done) {
      out << "already completed\n";
      ++skipped;
    } else {
      out << "running\n" << std::flush;
      try {
        record = run_training(c, data, dir, a.quiet ? nullptr : &err);
        ++ran;
      } catch (const std::exception& e) {
        ++failed;
        record = {{"status", "failed"}, {"config_hash", hash}, {"config", to_json(c)}, {"error", e.what()}};
        fs::create_directories(dir);
        write_json(record_path, record);
        err << "run " << hash << " failed: " << e.what() << "\n";
      }
    }
    rows.push_back(record);
  }

  auto valid_mrr = [](const Json& r) {
    return r.value("status", "") == "completed" ? r["valid"]["mrr"].get<double>() : -1.0;
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const Json& x, const Json& y) { return valid_mrr(x) > valid_mrr(y); });

  std::ostringstream csv;
  csv.precision(10);
  csv << "config_hash,status,model,formulation,regularizer,lambda,rank,learning_rate,batch_size,best_epoch,valid_mrr,"
         "test_mrr,test_hits1,test_hits3,test_hits10\n";
  Json summary = Json::array();
  for (const auto& r : rows) {
    const Json& c = r["config"];
    const bool ok = r.value("status", "") == "completed";
    csv << r.value("config_hash", "") << ',' << r.value("status", "") << ',' << c["model"]["variant"].get<std::string>()
        << ',' << c["formulation"].get<std::string>() << ',' << c["regularizer"]["variant"].get<std::string>() << ','
        << c["regularizer"]["lambda"].get<double>() << ',' << c["model"]["rank"].get<std::size_t>() << ','
        << c["learning_rate"].get<double>() << ',' << c["batch_size"].get<std::size_t>() << ',';
    if (ok) {
      const Json& be = r["history"]["best_epoch"];
      csv << (be.is_null() ? std::string() : std::to_string(be.get<std::size_t>())) << ','
          << r["valid"]["mrr"].get<double>() << ',' << r["test"]["mrr"].get<double>() << ','
          << r["test"]["hits1"].get<double>() << ',' << r["test"]["hits3"].get<double>() << ','
          << r["test"]["hits10"].get<double>();
    } else {
      csv << ",,,,,";
    }
    csv << '\n';
    Json row = {{"config_hash", r.value("config_hash", "")}, {"status", r.value("status", "")}, {"config", c}};
    if (ok) {
      row["valid"] = r["valid"];
      row["test"] = r["test"];
      row["best_epoch"] = r["history"]["best_epoch"];
    } else {
      row["error"] = r.value("error", "");
    }
    summary.push_back(row);
  }
  write_text_atomic(*spec.output / "summary.csv", csv.str());
  write_json(*spec.output / "summary.json", summary);

  out << "ran " << ran << ", reused " << skipped << ", failed " << failed << "\n";
  if (!rows.empty() && valid_mrr(rows.front()) >= 0) {
    const Json& best = rows.front();
    out << "best: " << best["config_hash"].get<std::string>() << " valid MRR "
        << fmt("%.4f", best["valid"]["mrr"].get<double>()) << ", test MRR "
        << fmt("%.4f", best["test"]["mrr"].get<double>()) << "\n"
        << best["config"].dump(2) << "\n";
  }
  return failed == 0 ? kOk : kRuntime;
}

// ---- verify ---------------------------------------------------------------

int cmd_verify(const verify::SuiteOptions& opts, bool json, std::ostream& out) {
  const auto checks = verify::run_oracle_suite(opts);
  bool all = true;
  for (const auto& c : checks) all = all && c.passed;
  if (json) {
    Json arr = Json::array();
    for (const auto& c : checks) {
      arr.push_back({{"name", c.name},
                     {"passed", c.passed},
                     {"value", c.value},
                     {"expected", c.expected},
                     {"tolerance", c.tolerance},
                     {"margin", c.tolerance - std::abs(c.value - c.expected)},
                     {"detail", c.detail}});
    }
    out << Json{{"seed", opts.seed}, {"restarts", opts.restarts}, {"passed", all}, {"checks", arr}}.dump(2) << "\n";
  } else {
    for (const auto& c : checks) {
      char line[256];
      std::snprintf(line, sizeof line, "%s  %-58s value %.12g  expected %.12g  tol %.1e", c.passed ? "PASS" : "FAIL",
                    c.name.c_str(), c.value, c.expected, c.tolerance);
      out << line;
      if (!c.detail.empty()) out << "  (" << c.detail << ")";
      out << "\n";
    }
    out << (all ? "all oracles passed" : "ORACLE FAILURE") << "\n";
  }
  return all ? kOk : kOracle;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const ParseError*>(&e) ||
      dynamic_cast<const LookupError*>(&e) || dynamic_cast<const DimensionError*>(&e)) {
    return kValidation;
  }
  return kRuntime;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Knowledge-base completion by tensor factorization", "kbc"};
  app.require_subcommand(1);

  PrepareOptions prep;
  std::string prep_in, prep_out;
  auto* sc_prep = app.add_subcommand("prepare-data", "Parse train/valid/test files into binary caches");
  sc_prep->add_option("-i,--input", prep_in, "Directory with train.txt, valid.txt and test.txt")->required();
  sc_prep->add_option("-o,--output", prep_out, "Output directory")->required();
  sc_prep->add_flag("--extend-vocab", prep.extend_vocab, "Accept names first seen in valid/test");

  TrainArgs train;
  auto* sc_train = app.add_subcommand("train", "Train a model from a JSON or TOML config");
  sc_train->add_option("-c,--config", train.config, "Config file")->required();
  sc_train->add_option("--data", train.data, "Prepared dataset directory (overrides the config)");
  sc_train->add_option("-o,--out", train.out, "Run directory (overrides the config)");
  sc_train->add_flag("-q,--quiet", train.quiet, "No per-epoch progress");

  EvalArgs ev;
  auto* sc_eval = app.add_subcommand("eval", "Evaluate a checkpoint");
  sc_eval->add_option("--checkpoint", ev.checkpoint, "Checkpoint file")->required();
  sc_eval->add_option("--data", ev.data, "Prepared dataset directory")->required();
  sc_eval->add_option("--split", ev.split, "train, valid or test")->capture_default_str();
  sc_eval->add_option("--formulation", ev.formulation, "standard or reciprocal (default: from the sidecar)");
  sc_eval->add_option("--output", ev.output, "Also write the JSON result here");
  sc_eval->add_flag("--by-type", ev.by_type, "MRR per relation category");
  sc_eval->add_flag("--raw", ev.raw, "Unfiltered ranks");
  sc_eval->add_flag("--json", ev.json, "Print JSON instead of a table");

  GridArgs grid;
  auto* sc_grid = app.add_subcommand("grid", "Run a resumable hyperparameter grid");
  sc_grid->add_option("-s,--spec", grid.spec, "Grid spec file")->required();
  sc_grid->add_option("--data", grid.data, "Prepared dataset directory (overrides the spec)");
  sc_grid->add_option("-o,--out", grid.out, "Grid directory (overrides the spec)");
  sc_grid->add_flag("-q,--quiet", grid.quiet, "No per-epoch progress");

  verify::SuiteOptions vopts;
  bool vjson = false;
  auto* sc_verify = app.add_subcommand("verify", "Run the mathematical oracles");
  sc_verify->add_flag("--json", vjson, "Machine-readable report");
  sc_verify->add_option("--seed", vopts.seed, "Seed for random cases and restarts")->capture_default_str();
  sc_verify->add_option("--restarts", vopts.restarts, "Restarts per rank in the certificate search")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);

  std::vector<std::string> rev(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kValidation;
  }

  try {
    if (sc_prep->parsed()) {
      prep.input = prep_in;
      prep.output = prep_out;
      return cmd_prepare(prep, out);
    }
    if (sc_train->parsed()) return cmd_train(train, out, err);
    if (sc_eval->parsed()) return cmd_eval(ev, out);
    if (sc_grid->parsed()) return cmd_grid(grid, out, err);
    if (sc_verify->parsed()) return cmd_verify(vopts, vjson, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kValidation;
}

}  // namespace kbc::cli
