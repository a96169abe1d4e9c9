// Copyright 2026 The predbench Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "predbench/bench_store.hpp"
#include "predbench/config.hpp"
#include "predbench/error.hpp"
#include "predbench/experiment.hpp"
#include "predbench/nas.hpp"
#include "predbench/registry.hpp"
#include "predbench/text.hpp"

#ifndef PREDBENCH_VERSION
#define PREDBENCH_VERSION "unknown"
#endif

namespace predbench::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

struct Globals {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  fs::path out_dir = ".";
  std::size_t threads = 0;
  std::vector<std::string> sets;
};

// Reads keys from the merged section and records every resolved value,
// defaults included, in `effective` so the config hash covers them.
class Settings {
 public:
  Settings(IniDocument::Section section, IniDocument& effective)
      : s_(std::move(section)), eff_(effective) {
    eff_.add_section(s_.name);
  }

  std::string text(std::string_view key, const std::string& fallback) {
    auto v = s_.text(key);
    std::string r = v ? *v : fallback;
    record(key, r);
    return r;
  }
  double number(std::string_view key, double fallback) {
    const double v = s_.number(key, fallback);
    record(key, format_double(v));
    return v;
  }
  std::size_t count(std::string_view key, std::size_t fallback) {
    const std::size_t v = s_.count(key, fallback);
    record(key, std::to_string(v));
    return v;
  }
  bool flag(std::string_view key, bool fallback) {
    const bool v = s_.flag(key, fallback);
    record(key, v ? "true" : "false");
    return v;
  }
  std::vector<std::string> list(std::string_view key, const std::string& fallback) {
    std::vector<std::string> out;
    const std::string value = text(key, fallback);
    for (auto part : split(value, ',')) {
      if (!trim(part).empty()) out.emplace_back(trim(part));
    }
    return out;
  }
  // Applies `fn` to the text value; library errors become ConfigErrors
  // naming the key and its line.
  template <class Fn>
  auto parse(std::string_view key, const std::string& fallback, Fn fn) {
    const std::string v = text(key, fallback);
    try {
      return fn(std::string_view(v));
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(line(key), std::string(key), e.what());
    }
  }
  std::vector<double> numbers(std::string_view key, const std::vector<double>& fallback) {
    std::string joined;
    for (double v : fallback) joined += (joined.empty() ? "" : ",") + format_double(v);
    return parse(key, joined, [](std::string_view s) {
      std::vector<double> out;
      for (auto part : split(s, ',')) {
        if (!trim(part).empty()) out.push_back(parse_double(trim(part)));
      }
      return out;
    });
  }
  std::size_t line(std::string_view key) const {
    const auto* e = s_.find(key);
    return e ? e->line : 0;
  }
  const IniDocument::Section& section() const { return s_; }
  void record(std::string_view key, std::string value) {
    eff_.add_section(s_.name).set(std::string(key), std::move(value));
  }

 private:
  IniDocument::Section s_;
  IniDocument& eff_;
};

struct Invocation {
  std::string sub;
  Globals globals;
  IniDocument doc;
  IniDocument effective;
  std::ostream& err;

  IniDocument::Section& section_of(const std::string& name) { return doc.add_section(name); }
};

fs::path out_path(const Invocation& inv, const std::string& file) {
  return inv.globals.out_dir / file;
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw NotFound("cannot write " + path.string());
  f << content;
  if (!f) throw NotFound("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw NotFound("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

// Writes `content` and its <file>.meta.json sidecar.
void emit(const Invocation& inv, const std::string& file, const std::string& content,
          std::optional<std::uint64_t> seed) {
  const std::string canonical = inv.effective.serialize();
  Json meta;
  meta["schema_version"] = kSchemaVersion;
  meta["tool"] = "predbench";
  meta["tool_version"] = PREDBENCH_VERSION;
  meta["subcommand"] = inv.sub;
  meta["file"] = file;
  meta["seed"] = seed ? Json(*seed) : Json(nullptr);
  meta["config_hash"] = hex64(fnv1a(canonical));
  Json config = Json::object();
  for (const auto& s : inv.effective.sections()) {
    if (s.entries.empty()) continue;
    Json& sec = config[s.name.empty() ? "global" : s.name];
    for (const auto& e : s.entries) sec[e.key] = e.value;
  }
  meta["config"] = config;
  write_file(out_path(inv, file), content);
  write_file(out_path(inv, file + ".meta.json"), meta.dump(2) + "\n");
}

std::uint64_t require_seed(Invocation& inv, Settings& s) {
  std::optional<std::uint64_t> seed = inv.globals.seed;
  if (!seed && s.section().find("seed")) seed = s.section().u64("seed", 0);
  if (!seed) {
    if (const auto* g = inv.doc.section(""); g && g->find("seed")) seed = g->u64("seed", 0);
  }
  if (!seed) {
    if (const char* env = std::getenv("PREDBENCH_SEED")) {
      try {
        seed = parse_u64(env);
      } catch (const Error& e) {
        throw ConfigError(0, "PREDBENCH_SEED", e.what());
      }
    }
  }
  if (!seed) {
    throw ConfigError(0, "seed",
                      "the " + inv.sub + " subcommand needs a seed (--seed, config or PREDBENCH_SEED)");
  }
  s.record("seed", std::to_string(*seed));
  return *seed;
}

fs::path input_path(Settings& s, std::string_view key, const fs::path& fallback) {
  const fs::path p = s.text(key, fallback.string());
  if (!fs::exists(p)) throw ConfigError(s.line(key), std::string(key), "no such file: " + p.string());
  return p;
}

void check_predictor_names(Settings& s, std::string_view key,
                           const std::vector<std::string>& names) {
  const auto& valid = predictor_names();
  for (const auto& n : names) {
    if (std::find(valid.begin(), valid.end(), n) == valid.end()) {
      std::string list;
      for (const auto& v : valid) list += (list.empty() ? "" : ", ") + v;
      throw ConfigError(s.line(key), std::string(key),
                        "unknown predictor '" + n + "'; valid names: " + list);
    }
  }
}

// [predictors] and every [hpo.<kind>] section.
PredictorOptions predictor_options(Invocation& inv) {
  PredictorOptions po;
  Settings s(inv.section_of("predictors"), inv.effective);
  s.section().check_keys({"hpo_iterations", "retune_every", "omni_base"});
  po.hpo_iterations = s.count("hpo_iterations", 0);
  po.retune_every = s.count("retune_every", 5);
  po.omni_base = s.parse("omni_base", "gbt", [](std::string_view v) { return parse_model_kind(v); });
  for (const auto& sec : inv.doc.sections()) {
    if (sec.name.rfind("hpo.", 0) != 0) continue;
    ModelKind kind;
    HpoSpec spec;
    try {
      kind = parse_model_kind(sec.name.substr(4));
      spec = HpoSpec::read(kind, sec);
      spec.validate();
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(sec.line, sec.name, e.what());
    }
    po.hpo[kind] = spec;
    spec.write(inv.effective.add_section(sec.name));
  }
  po.zero_cost_cache = std::make_shared<ZeroCostCache>();
  po.lce_cache = std::make_shared<LceCache>();
  return po;
}

int cmd_build(Invocation& inv) {
  Settings s(inv.section_of("build"), inv.effective);
  s.section().check_keys({"seed", "archs", "epochs", "batch_size", "learning_rate", "momentum",
                          "schedule", "width", "cells", "init", "init_gain", "layout", "classes",
                          "train_per_class", "val_per_class", "turns", "noise", "dataset_seed",
                          "epoch_cost", "zero_cost_query", "model_query"});
  StoreHeader h;
  h.seed = require_seed(inv, s);
  const std::size_t archs = s.count("archs", 2000);
  h.train.epochs = s.count("epochs", h.train.epochs);
  h.train.batch_size = s.count("batch_size", h.train.batch_size);
  h.train.learning_rate = s.number("learning_rate", h.train.learning_rate);
  h.train.momentum = s.number("momentum", h.train.momentum);
  h.train.schedule = s.parse("schedule", to_string(h.train.schedule),
                             [](std::string_view v) { return parse_lr_schedule(v); });
  h.net.width = s.count("width", h.net.width);
  h.net.cells = s.count("cells", h.net.cells);
  h.net.init = s.parse("init", "lecun_normal", [](std::string_view v) {
    return NetConfig::parse("init=" + std::string(v)).init;
  });
  h.net.init_gain = s.number("init_gain", h.net.init_gain);
  h.dataset.layout = s.parse("layout", "spiral", [](std::string_view v) {
    return parse_dataset_layout(v);
  });
  h.dataset.num_classes = s.count("classes", h.dataset.num_classes);
  h.dataset.train_per_class = s.count("train_per_class", h.dataset.train_per_class);
  h.dataset.val_per_class = s.count("val_per_class", h.dataset.val_per_class);
  h.dataset.turns = s.number("turns", h.dataset.turns);
  h.dataset.noise = s.number("noise", h.dataset.noise);
  h.dataset.seed = s.count("dataset_seed", 0);
  h.cost.epoch_cost = s.number("epoch_cost", h.cost.epoch_cost);
  h.cost.zero_cost_query = s.number("zero_cost_query", h.cost.zero_cost_query);
  h.cost.model_query = s.number("model_query", h.cost.model_query);
  try {
    h.train.validate();
    h.cost.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(0, "", std::string("[build] ") + e.what());
  }

  BuildOptions opt;
  opt.n_archs = archs;
  opt.threads = inv.globals.threads;
  opt.log = [&](const std::string& line) { inv.err << line << '\n'; };
  const auto store = BenchmarkStore::build(h, opt);
  emit(inv, "store.nbstore", store.serialize(), h.seed);
  return kExitOk;
}

int cmd_score(Invocation& inv) {
  Settings s(inv.section_of("score"), inv.effective);
  s.section().check_keys(
      {"seed", "store", "predictors", "count", "archs", "init_budget", "query_budget"});
  const std::uint64_t seed = require_seed(inv, s);
  const auto store = BenchmarkStore::load(input_path(s, "store", out_path(inv, "store.nbstore")));
  const auto names = s.list("predictors", "oracle");
  check_predictor_names(s, "predictors", names);
  const std::size_t count = s.count("count", std::min<std::size_t>(100, store.size()));
  const auto explicit_archs = s.parse("archs", "", [&](std::string_view v) {
    std::vector<Architecture> out;
    for (auto part : split(v, ',')) {
      if (trim(part).empty()) continue;
      Architecture a = Architecture::parse(trim(part));
      a.validate(store.space());
      out.push_back(a);
    }
    return out;
  });
  const double init_budget = s.number("init_budget", 0.0);
  const double query_budget = s.number("query_budget", store.header().cost.zero_cost_query);
  PredictorOptions po = predictor_options(inv);

  const Benchmark bench(store, !explicit_archs.empty());
  std::vector<Architecture> order;
  for (const auto& r : store.records()) order.push_back(r.arch);
  Rng rng(derive_seed(seed, {fnv1a("score")}));
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<Architecture> queries = explicit_archs;
  if (queries.empty()) {
    if (count > order.size()) {
      throw ConfigError(s.line("count"), "count", "store holds only " + std::to_string(order.size()) +
                                                      " architectures");
    }
    queries.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
  }
  std::vector<Architecture> train;
  for (const auto& a : order) {
    if (std::find(queries.begin(), queries.end(), a) == queries.end()) train.push_back(a);
  }

  std::ostringstream csv;
  csv << "arch,predictor,score,cost_charged,fallback,degraded\n";
  for (const auto& name : names) {
    auto predictor = make_predictor(name, po);
    BudgetAccount init(init_budget);
    ListSource source(train);
    InitContext ctx;
    ctx.bench = &bench;
    ctx.account = &init;
    ctx.query_budget = query_budget;
    ctx.source = &source;
    ctx.seed = derive_seed(seed, {fnv1a(name)});
    predictor->initialize(ctx);
    for (const auto& arch : queries) {
      BudgetAccount account(query_budget);
      const Prediction p = predictor->query(arch, account);
      csv << arch.str() << ',' << name << ',' << format_double(p.score) << ','
          << format_double(p.cost_charged) << ',' << (p.fallback ? 1 : 0) << ','
          << (p.degraded ? 1 : 0) << '\n';
    }
  }
  emit(inv, "scores.csv", csv.str(), seed);
  return kExitOk;
}

std::vector<NamedFactory> factories(const std::vector<std::string>& names, PredictorOptions& po) {
  std::vector<NamedFactory> out;
  for (const auto& n : names) out.push_back({n, [n, &po] { return make_predictor(n, po); }});
  return out;
}

int cmd_grid(Invocation& inv) {
  Settings s(inv.section_of("grid"), inv.effective);
  s.section().check_keys({"seed", "store", "predictors", "init_levels", "query_levels", "trials",
                          "test_size", "protocol", "sparse_resolution", "metric",
                          "mutation_pool", "mutation_seeds", "mutation_max_attrs"});
  const std::uint64_t seed = require_seed(inv, s);
  const auto store = BenchmarkStore::load(input_path(s, "store", out_path(inv, "store.nbstore")));
  const auto names = s.list("predictors", "oracle,random");
  check_predictor_names(s, "predictors", names);
  const auto& cost = store.header().cost;
  const BudgetGrid def = BudgetGrid::default_for(store.epochs(), cost.epoch_cost, cost.zero_cost_query);
  BudgetGrid bg{s.numbers("init_levels", def.init_levels), s.numbers("query_levels", def.query_levels)};
  try {
    bg.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(s.line("init_levels"), "init_levels/query_levels", e.what());
  }
  GridOptions opt;
  opt.seed = seed;
  opt.threads = inv.globals.threads;
  opt.trials = s.count("trials", 100);
  opt.test_size = s.count("test_size", 200);
  opt.protocol = s.parse("protocol", "uniform", [](std::string_view v) { return parse_protocol(v); });
  opt.sparse_resolution = s.number("sparse_resolution", 0.001);
  opt.mutation.pool = s.count("mutation_pool", opt.mutation.pool);
  opt.mutation.seeds = s.count("mutation_seeds", opt.mutation.seeds);
  opt.mutation.max_attrs = s.count("mutation_max_attrs", opt.mutation.max_attrs);
  const MetricKind metric =
      s.parse("metric", "kendall_tau", [](std::string_view v) { return parse_metric_kind(v); });

  Settings sv(inv.section_of("seed_variance"), inv.effective);
  sv.section().check_keys({"predictors", "fixed_trials", "redraws", "init_budget",
                           "query_budget", "test_size"});
  const auto sv_names = sv.list("predictors", "");
  check_predictor_names(sv, "predictors", sv_names);
  SeedVarianceOptions svo;
  svo.fixed_trials = sv.count("fixed_trials", svo.fixed_trials);
  svo.redraws = sv.count("redraws", svo.redraws);
  svo.init_budget = sv.number("init_budget", 0.0);
  svo.query_budget = sv.number("query_budget", cost.zero_cost_query);
  svo.test_size = sv.count("test_size", svo.test_size);
  svo.seed = derive_seed(seed, {fnv1a("seed_variance")});
  svo.threads = inv.globals.threads;

  PredictorOptions po = predictor_options(inv);
  const Benchmark bench(store);
  const ResultGrid grid = run_grid(bench, factories(names, po), bg, opt);
  emit(inv, "grid.csv", grid.to_csv(), seed);
  emit(inv, "pareto.csv", pareto_best(grid, metric).to_csv(grid, metric), seed);

  if (!sv_names.empty()) {
    std::ostringstream csv;
    csv << "predictor,init_budget,query_budget,fixed_trials,redraws,overall_std,fixed_std\n";
    for (const auto& n : sv_names) {
      const SeedVariance v = seed_variance(bench, [&] { return make_predictor(n, po); }, svo);
      csv << n << ',' << format_double(svo.init_budget) << ',' << format_double(svo.query_budget)
          << ',' << svo.fixed_trials << ',' << svo.redraws << ',' << format_double(v.overall_std)
          << ',' << format_double(v.fixed_std) << '\n';
    }
    emit(inv, "seed_variance.csv", csv.str(), seed);
  }
  return kExitOk;
}

int cmd_nas(Invocation& inv) {
  Settings s(inv.section_of("nas"), inv.effective);
  s.section().check_keys({"seed", "store", "framework", "predictor", "model", "encoding", "runs",
                          "on_demand", "initial_population", "iterations", "elite",
                          "mutations_per_elite", "k", "pool", "select", "members",
                          "retune_every", "query_budget"});
  const std::uint64_t seed = require_seed(inv, s);
  const auto store = BenchmarkStore::load(input_path(s, "store", out_path(inv, "store.nbstore")));
  NasRunConfig c;
  c.framework = s.parse("framework", "evolution",
                        [](std::string_view v) { return parse_nas_framework(v); });
  const std::string predictor = s.text("predictor", "gbt");
  check_predictor_names(s, "predictor", {predictor});
  const ModelKind model = s.parse("model", "gbt", [](std::string_view v) { return parse_model_kind(v); });
  const EncodingKind encoding = s.parse("encoding", "adjacency_one_hot",
                                        [](std::string_view v) { return parse_encoding_kind(v); });
  const std::size_t runs = s.count("runs", 1);
  const bool on_demand = s.flag("on_demand", true);
  c.initial_population = s.count("initial_population", c.initial_population);
  c.iterations = s.count("iterations", c.iterations);
  c.elite = s.count("elite", c.elite);
  c.mutations_per_elite = s.count("mutations_per_elite", c.mutations_per_elite);
  c.k = s.count("k", c.k);
  c.pool = s.count("pool", c.pool);
  c.select = s.count("select", c.select);
  c.members = s.count("members", c.members);
  c.retune_every = s.count("retune_every", c.retune_every);
  c.query_budget = s.number("query_budget", store.header().cost.zero_cost_query);
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(0, "", std::string("[nas] ") + e.what());
  }
  PredictorOptions po = predictor_options(inv);

  const Benchmark bench(store, on_demand);
  const NasLog log = [&](const std::string& line) { inv.err << line << '\n'; };
  std::string csv;
  for (std::size_t r = 0; r < runs; ++r) {
    NasRunConfig rc = c;
    rc.seed = seed + r;
    NasTrace trace;
    if (c.framework == NasFramework::kEvolution) {
      trace = run_evolution(bench, [&] { return make_predictor(predictor, po); }, rc, log);
    } else {
      trace = run_bo_its(bench, make_ensemble_surrogate(bench.space(), po.hpo_for(model), encoding, rc),
                         rc, log);
    }
    csv += trace.to_csv(rc.seed, r == 0);
  }
  emit(inv, "nas.csv", csv, seed);
  return kExitOk;
}

Json seed_variance_rows(const std::string& text) {
  Json rows = Json::array();
  auto lines = split(text, '\n');
  if (lines.empty() ||
      lines[0] != "predictor,init_budget,query_budget,fixed_trials,redraws,overall_std,fixed_std") {
    throw FormatError("seed variance CSV: unexpected header");
  }
  for (std::size_t l = 1; l < lines.size(); ++l) {
    if (lines[l].empty()) continue;
    const auto f = split(lines[l], ',');
    if (f.size() != 7) throw FormatError("seed variance CSV line " + std::to_string(l + 1));
    Json row;
    row["predictor"] = std::string(f[0]);
    row["init_budget"] = parse_double(f[1]);
    row["query_budget"] = parse_double(f[2]);
    row["fixed_trials"] = parse_size(f[3]);
    row["redraws"] = parse_size(f[4]);
    row["overall_std"] = parse_double(f[5]);
    row["fixed_std"] = parse_double(f[6]);
    rows.push_back(row);
  }
  return rows;
}

int cmd_report(Invocation& inv) {
  Settings s(inv.section_of("report"), inv.effective);
  s.section().check_keys({"seed", "grid", "seed_variance", "metric"});
  const fs::path grid_path = input_path(s, "grid", out_path(inv, "grid.csv"));
  const fs::path default_sv = out_path(inv, "seed_variance.csv");
  const std::string sv_path = s.text("seed_variance", fs::exists(default_sv) ? default_sv.string() : "");
  const MetricKind metric =
      s.parse("metric", "kendall_tau", [](std::string_view v) { return parse_metric_kind(v); });
  std::optional<std::uint64_t> seed = inv.globals.seed;

  const ResultGrid grid = ResultGrid::from_csv(read_file(grid_path));
  const ParetoResult pareto = pareto_best(grid, metric);
  Json report;
  report["schema_version"] = kSchemaVersion;
  report["metric"] = to_string(metric);
  report["predictors"] = grid.predictors();
  Json winners = Json::array();
  for (std::size_t i = 0; i < grid.grid().init_levels.size(); ++i) {
    for (std::size_t q = 0; q < grid.grid().query_levels.size(); ++q) {
      const std::size_t p = pareto.winner[i][q];
      Json cell;
      cell["init_budget"] = grid.grid().init_levels[i];
      cell["query_budget"] = grid.grid().query_levels[q];
      cell["predictor"] = grid.predictors()[p];
      cell["mean"] = grid.at(p, i, q, metric).mean;
      winners.push_back(cell);
    }
  }
  report["winners"] = winners;
  report["pareto_set"] = pareto.pareto_set;
  if (!sv_path.empty()) {
    if (!fs::exists(sv_path)) {
      throw ConfigError(s.line("seed_variance"), "seed_variance", "no such file: " + sv_path);
    }
    report["seed_variance"] = seed_variance_rows(read_file(sv_path));
  } else {
    report["seed_variance"] = Json::array();
  }
  emit(inv, "report.json", report.dump(2) + "\n", seed);
  return kExitOk;
}

void print_error(std::ostream& err, const std::string& code, const std::string& message) {
  Json e;
  e["error"]["code"] = code;
  e["error"]["message"] = message;
  err << e.dump(-1, ' ', false, Json::error_handler_t::replace) << '\n';
}

// Applies "section.key=value" (or "key=value" for the subcommand's own
// section) overrides on top of the file.
void apply_override(Invocation& inv, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError(0, assignment, "--set expects KEY=VALUE");
  }
  std::string key = std::string(trim(assignment.substr(0, eq)));
  std::string section = inv.sub;
  if (const auto dot = key.rfind('.'); dot != std::string::npos) {
    section = key.substr(0, dot);
    key = key.substr(dot + 1);
  }
  inv.section_of(section).set(key, std::string(trim(assignment.substr(eq + 1))));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Benchmark suite for neural-architecture performance predictors", "predbench"};
  app.set_version_flag("--version", PREDBENCH_VERSION);
  Globals g;
  app.add_option("-c,--config", g.config_path, "INI configuration file");
  app.add_option("--seed", g.seed, "experiment seed (overrides the file and PREDBENCH_SEED)");
  app.add_option("-o,--out", g.out_dir, "output directory (created if absent)");
  app.add_option("-j,--threads", g.threads, "worker threads (0 = all cores)");
  app.add_option("--set", g.sets, "override a config value: [section.]key=value (repeatable)");
  app.require_subcommand(1, 1);
  app.fallthrough();

  // Per-subcommand shortcuts for common keys; each maps onto its section.
  std::map<std::string, std::map<std::string, std::string>> shortcuts;
  auto shortcut = [&](CLI::App* sub, const std::string& flag, const std::string& key,
                      const std::string& help) {
    sub->add_option(flag, shortcuts[sub->get_name()][key], help);
  };
  auto* build = app.add_subcommand("build", "train architectures into a benchmark store");
  shortcut(build, "--archs", "archs", "number of architectures");
  shortcut(build, "--epochs", "epochs", "training epochs per architecture");
  auto* score = app.add_subcommand("score", "score architectures with predictors");
  shortcut(score, "--store", "store", "benchmark store");
  shortcut(score, "--predictors", "predictors", "comma-separated predictor names");
  shortcut(score, "--count", "count", "number of stored architectures to score");
  auto* grid = app.add_subcommand("grid", "evaluate predictors over the budget grid");
  shortcut(grid, "--store", "store", "benchmark store");
  shortcut(grid, "--predictors", "predictors", "comma-separated predictor names");
  shortcut(grid, "--trials", "trials", "trials per cell");
  auto* nas = app.add_subcommand("nas", "run predictor-guided search");
  shortcut(nas, "--store", "store", "benchmark store");
  shortcut(nas, "--framework", "framework", "evolution or bo_its");
  shortcut(nas, "--predictor", "predictor", "predictor guiding evolution");
  shortcut(nas, "--runs", "runs", "number of seeds");
  auto* report = app.add_subcommand("report", "summarize grid results as JSON");
  shortcut(report, "--grid", "grid", "grid CSV");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    print_error(err, "usage", e.what());
    return kExitConfig;
  }

  const std::string sub = app.get_subcommands().front()->get_name();
  Invocation inv{sub, g, {}, {}, err};
  try {
    inv.doc = g.config_path.empty() ? IniDocument::parse("") : IniDocument::load(g.config_path);
    for (const auto& sec : inv.doc.sections()) {
      static const std::vector<std::string> known = {"",     "build",  "score", "grid", "nas",
                                                     "report", "seed_variance", "predictors"};
      if (std::find(known.begin(), known.end(), sec.name) == known.end() &&
          sec.name.rfind("hpo.", 0) != 0) {
        throw ConfigError(sec.line, "", "unknown section [" + sec.name + "]");
      }
    }
    if (const auto* top = inv.doc.section("")) top->check_keys({"seed"});
    for (const auto& a : g.sets) apply_override(inv, a);
    for (const auto& [key, value] : shortcuts[sub]) {
      if (!value.empty()) inv.section_of(sub).set(key, value);
    }
    std::error_code ec;
    fs::create_directories(g.out_dir, ec);
    if (ec) throw NotFound("cannot create output directory " + g.out_dir.string());

    if (sub == "build") return cmd_build(inv);
    if (sub == "score") return cmd_score(inv);
    if (sub == "grid") return cmd_grid(inv);
    if (sub == "nas") return cmd_nas(inv);
    return cmd_report(inv);
  } catch (const ConfigError& e) {
    print_error(err, e.code(), e.what());
    return kExitConfig;
  } catch (const Error& e) {
    print_error(err, e.code(), e.what());
    return kExitRuntime;
  } catch (const std::exception& e) {
    print_error(err, "internal", e.what());
    return kExitRuntime;
  }
}

}  // namespace predbench::cli
