#include "opineq/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "opineq/error.hpp"
#include "opineq/rng.hpp"

namespace opineq {

using json = nlohmann::ordered_json;

namespace {

constexpr const char* kQuantifierNote =
    "vector-quantified forms are probed by seeded random unit vectors and a sup_search ascent; "
    "both can falsify an inequality, neither proves it";

// --- JSON helpers ----------------------------------------------------------------

json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json optional_number(const std::optional<double>& v) { return v ? number(*v) : json(nullptr); }

double read_number(const json& j) {
  if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
  return j.get<double>();
}

std::optional<double> read_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

json parse_json(const std::string& text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

// Converts nlohmann type and key errors into ParseError.
template <class Fn>
auto guarded(const char* what, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string(what) + ": " + e.what());
  }
}

json params_json(const Params& p) {
  json values = json::object();
  for (const auto& [k, v] : p.values) values[k] = number(v);
  return json{{"values", values}, {"pair", p.pair}, {"form", p.form}};
}

Params params_from(const json& j) {
  Params p;
  for (const auto& [k, v] : j.at("values").items()) p.values[k] = read_number(v);
  p.pair = j.at("pair").get<std::string>();
  p.form = j.at("form").get<std::string>();
  return p;
}

json fingerprint_json(const Fingerprint& f) {
  return json{{"format_version", f.format_version},
              {"id", f.id},
              {"form", f.form},
              {"campaign_seed", f.campaign_seed},
              {"dim", f.dim},
              {"index", f.index},
              {"recipe", f.recipe},
              {"params", params_json(f.params)},
              {"tol", number(f.tol)},
              {"vector_samples", f.vector_samples},
              {"restarts", f.restarts},
              {"check_hypotheses", f.check_hypotheses}};
}

Fingerprint fingerprint_from(const json& j) {
  Fingerprint f;
  f.format_version = j.at("format_version").get<std::string>();
  f.id = j.at("id").get<std::string>();
  f.form = j.at("form").get<std::string>();
  f.campaign_seed = j.at("campaign_seed").get<std::uint64_t>();
  f.dim = j.at("dim").get<std::size_t>();
  f.index = j.at("index").get<std::size_t>();
  f.recipe = j.at("recipe").get<std::string>();
  f.params = params_from(j.at("params"));
  f.tol = read_number(j.at("tol"));
  f.vector_samples = j.at("vector_samples").get<std::size_t>();
  f.restarts = j.at("restarts").get<int>();
  f.check_hypotheses = j.at("check_hypotheses").get<bool>();
  return f;
}

json optional_fingerprint(const std::optional<Fingerprint>& f) { return f ? fingerprint_json(*f) : json(nullptr); }

std::optional<Fingerprint> read_optional_fingerprint(const json& j) {
  if (j.is_null()) return std::nullopt;
  return fingerprint_from(j);
}

json result_json(const InequalityResult& r) {
  json rhs = json::array();
  for (double v : r.rhs) rhs.push_back(number(v));
  return json{{"id", r.id},
              {"form", r.form},
              {"lhs", number(r.lhs)},
              {"rhs", rhs},
              {"slack", number(r.slack)},
              {"relative_slack", number(r.relative_slack)},
              {"sharpness", optional_number(r.sharpness)},
              {"satisfied", r.satisfied},
              {"chain_monotone", r.chain_monotone},
              {"asserted", r.asserted},
              {"tol", number(r.tol)},
              {"flags", r.flags},
              {"recipe", r.recipe},
              {"seed", r.seed},
              {"n", r.n},
              {"params", params_json(r.params)}};
}

InequalityResult result_from(const json& j) {
  InequalityResult r;
  r.id = j.at("id").get<std::string>();
  r.form = j.at("form").get<std::string>();
  r.lhs = read_number(j.at("lhs"));
  for (const auto& v : j.at("rhs")) r.rhs.push_back(read_number(v));
  r.slack = read_number(j.at("slack"));
  r.relative_slack = read_number(j.at("relative_slack"));
  r.sharpness = read_optional(j.at("sharpness"));
  r.satisfied = j.at("satisfied").get<bool>();
  r.chain_monotone = j.at("chain_monotone").get<bool>();
  r.asserted = j.at("asserted").get<bool>();
  r.tol = read_number(j.at("tol"));
  r.flags = j.at("flags").get<std::vector<std::string>>();
  r.recipe = j.at("recipe").get<std::string>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.n = j.at("n").get<std::size_t>();
  r.params = params_from(j.at("params"));
  return r;
}

json config_json(const CampaignConfig& c) {
  json grids = json::object();
  for (const auto& [k, v] : c.grids) grids[k] = v;
  return json{{"dims", c.dims},
              {"trials", c.trials},
              {"seed", c.seed},
              {"specs", c.specs},
              {"grids", grids},
              {"tol", number(c.tol)},
              {"vector_samples", c.vector_samples},
              {"restarts", c.restarts},
              {"recipe", c.recipe},
              {"check_hypotheses", c.check_hypotheses}};
}

// Every key is optional so a hand-written config file can set only what it needs.
CampaignConfig config_from(const json& j) {
  if (!j.is_object()) throw Error(ErrorKind::ConfigInvalid, "config must be a JSON object");
  static const std::set<std::string> known = {"dims",     "trials", "seed",   "specs",          "grids",
                                              "tol",      "vector_samples",   "restarts",       "recipe",
                                              "check_hypotheses", "json", "csv", "jsonl"};
  for (const auto& [k, v] : j.items())
    if (!known.count(k)) throw Error(ErrorKind::ConfigInvalid, "unknown config key '" + k + "'");
  CampaignConfig c;
  try {
    if (j.contains("dims")) c.dims = j["dims"].get<std::vector<std::size_t>>();
    if (j.contains("trials")) c.trials = j["trials"].get<std::size_t>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("specs")) {
      c.specs = j["specs"].is_string() ? std::vector<std::string>{j["specs"].get<std::string>()}
                                       : j["specs"].get<std::vector<std::string>>();
    }
    if (j.contains("grids"))
      for (const auto& [k, v] : j["grids"].items()) c.grids[k] = v.get<std::vector<double>>();
    if (j.contains("tol")) c.tol = j["tol"].get<double>();
    if (j.contains("vector_samples")) c.vector_samples = j["vector_samples"].get<std::size_t>();
    if (j.contains("restarts")) c.restarts = j["restarts"].get<int>();
    if (j.contains("recipe")) c.recipe = j["recipe"].get<std::string>();
    if (j.contains("check_hypotheses")) c.check_hypotheses = j["check_hypotheses"].get<bool>();
    if (j.contains("json")) c.json_path = j["json"].get<std::string>();
    if (j.contains("csv")) c.csv_path = j["csv"].get<std::string>();
    if (j.contains("jsonl")) c.jsonl_path = j["jsonl"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ConfigInvalid, e.what());
  }
  return c;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.dim(); ++j) row.push_back(json::array({number(m(i, j).real()), number(m(i, j).imag())}));
    rows.push_back(std::move(row));
  }
  return json{{"n", m.dim()}, {"entries", rows}};
}

ComplexMatrix matrix_from(const json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("entries"))
    throw Error(ErrorKind::ParseError, "matrix needs keys 'n' and 'entries'");
  if (!j["n"].is_number_integer() || j["n"].get<long long>() < 1)
    throw Error(ErrorKind::ParseError, "'n' must be a positive integer");
  const auto n = j["n"].get<std::size_t>();
  const json& rows = j["entries"];
  if (!rows.is_array() || rows.size() != n) throw Error(ErrorKind::ParseError, "'entries' must have n rows");
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r) {
    if (!rows[r].is_array() || rows[r].size() != n) throw Error(ErrorKind::ParseError, "matrix is not square");
    for (std::size_t c = 0; c < n; ++c) {
      const json& z = rows[r][c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        throw Error(ErrorKind::ParseError, "entry must be [re, im]");
      const double re = z[0].get<double>(), im = z[1].get<double>();
      if (!std::isfinite(re) || !std::isfinite(im)) throw Error(ErrorKind::ParseError, "non-finite entry");
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text) || !out.flush()) throw Error(ErrorKind::IoFailure, "cannot write " + path);
}

std::string csv_number(const std::optional<double>& v) {
  if (!v || !std::isfinite(*v)) return "";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", *v);
  return buf;
}

// --- Trials ----------------------------------------------------------------------

// Spec grid with the configured overrides applied, duplicates dropped.
std::vector<Params> effective_grid(const SpecInfo& spec, const CampaignConfig& config) {
  std::vector<Params> grid = spec.grid;
  for (const auto& [key, values] : config.grids) {
    std::vector<Params> next;
    for (const auto& p : grid) {
      if (!p.values.count(key)) {
        next.push_back(p);
        continue;
      }
      for (double v : values) {
        Params q = p;
        q.values[key] = v;
        next.push_back(std::move(q));
      }
    }
    grid = std::move(next);
  }
  std::vector<Params> unique;
  for (auto& p : grid)
    if (std::find(unique.begin(), unique.end(), p) == unique.end()) unique.push_back(std::move(p));
  return unique;
}

int badness(const InequalityResult& r) { return !r.satisfied ? 2 : (!r.chain_monotone ? 1 : 0); }

double score(const InequalityResult& r) {
  if (r.sharpness) return *r.sharpness;
  return r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

// Violation first (most negative relative slack), then chain failure, then sharpness.
bool worse(const InequalityResult& a, const InequalityResult& b) {
  if (badness(a) != badness(b)) return badness(a) > badness(b);
  if (badness(a) == 2) return a.relative_slack < b.relative_slack;
  return score(a) > score(b);
}

InequalityResult probe(const PreparedForm& form, std::size_t dim, const CampaignConfig& config, Rng& rng) {
  if (form.vector_free()) return form.evaluate({});
  std::optional<InequalityResult> worst;
  for (std::size_t s = 0; s < config.vector_samples; ++s) {
    InequalityResult r = form.evaluate(random_vectors(form, dim, rng));
    if (!worst || worse(r, *worst)) worst = std::move(r);
  }
  if (config.restarts > 0) {
    InequalityResult r = sup_search(form, config.restarts, rng);
    if (!worst || worse(r, *worst)) worst = std::move(r);
  }
  return *worst;
}

CampaignConfig config_of(const Fingerprint& f) {
  CampaignConfig c;
  c.seed = f.campaign_seed;
  c.tol = f.tol;
  c.vector_samples = f.vector_samples;
  c.restarts = f.restarts;
  c.check_hypotheses = f.check_hypotheses;
  return c;
}

std::vector<Row> trial_rows(const SpecInfo& spec, std::size_t dim, std::size_t index, const std::string& recipe,
                            const Params& params, const CampaignConfig& config) {
  Fingerprint base;
  base.id = spec.id;
  base.campaign_seed = config.seed;
  base.dim = dim;
  base.index = index;
  base.recipe = recipe;
  base.params = params;
  base.tol = config.tol;
  base.vector_samples = config.vector_samples;
  base.restarts = config.restarts;
  base.check_hypotheses = config.check_hypotheses;

  std::vector<Row> rows;
  auto fail_all = [&](const std::string& message) {
    rows.clear();
    for (const auto& f : spec.forms) {
      Row row{base, std::nullopt, message};
      row.fingerprint.form = f.name;
      rows.push_back(std::move(row));
    }
  };
  try {
    Rng rng(Rng::split(config.seed, spec.id, dim, index));
    const InstanceBundle bundle = make_instance(recipe, dim, rng);
    const PreparedSpec prepared = prepare(spec.id, bundle, params, config.tol, config.check_hypotheses);
    for (const auto& form : prepared.forms) {
      Row row{base, std::nullopt, ""};
      row.fingerprint.form = form.info.name;
      try {
        row.result = probe(form, dim, config, rng);
      } catch (const std::exception& e) {
        row.error = e.what();
      }
      rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
  }
  return rows;
}

std::size_t thread_count() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OPINEQ_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1) n = static_cast<std::size_t>(v);
  }
  return n;
}

}  // namespace

// --- Matrix files ----------------------------------------------------------------

ComplexMatrix parse_matrix(const std::string& text) { return matrix_from(parse_json(text, "matrix")); }

std::string format_matrix(const ComplexMatrix& m) { return matrix_json(m).dump(); }

ComplexMatrix read_matrix_file(const std::string& path) { return parse_matrix(read_file(path)); }

// --- Config ------------------------------------------------------------------------

void CampaignConfig::validate() const {
  if (dims.empty()) throw Error(ErrorKind::ConfigInvalid, "dims is empty");
  for (std::size_t d : dims)
    if (d < 1 || d > 64) throw Error(ErrorKind::ConfigInvalid, "dim " + std::to_string(d) + " outside [1, 64]");
  if (trials < 1) throw Error(ErrorKind::ConfigInvalid, "trials must be >= 1");
  if (!(tol >= 1e-12) || !std::isfinite(tol)) throw Error(ErrorKind::ConfigInvalid, "tol must be finite and >= 1e-12");
  if (restarts < 0) throw Error(ErrorKind::ConfigInvalid, "restarts must be >= 0");
  if (vector_samples == 0 && restarts == 0)
    throw Error(ErrorKind::ConfigInvalid, "vector_samples and restarts cannot both be zero");
  for (const auto& [key, values] : grids) {
    if (values.empty()) throw Error(ErrorKind::ConfigInvalid, "grid '" + key + "' is empty");
    for (double v : values)
      if (!std::isfinite(v)) throw Error(ErrorKind::ConfigInvalid, "grid '" + key + "' has a non-finite value");
  }
  if (!recipe.empty()) {
    try {
      Rng rng(0);
      make_instance(recipe, 2, rng);
    } catch (const Error& e) {
      throw Error(ErrorKind::ConfigInvalid, e.what());
    }
  }
  resolved_specs();
}

std::vector<std::string> CampaignConfig::resolved_specs() const {
  if (specs.empty()) throw Error(ErrorKind::ConfigInvalid, "no specs selected");
  std::vector<std::string> out;
  for (const auto& s : specs) {
    if (s == "all") {
      for (const auto& info : list_specs()) out.push_back(info.id);
    } else {
      try {
        find_spec(s);
      } catch (const Error& e) {
        throw Error(ErrorKind::ConfigInvalid, e.what());
      }
      out.push_back(s);
    }
  }
  std::vector<std::string> unique;
  for (auto& s : out)
    if (std::find(unique.begin(), unique.end(), s) == unique.end()) unique.push_back(std::move(s));
  return unique;
}

// --- Trials and campaigns ----------------------------------------------------------

std::vector<Row> run_trial(const std::string& id, std::size_t dim, std::size_t index, const CampaignConfig& config) {
  const SpecInfo& spec = find_spec(id);
  const std::size_t r = spec.recipes.size();
  const std::string recipe = config.recipe.empty() ? spec.recipes[index % r] : config.recipe;
  const std::vector<Params> grid = effective_grid(spec, config);
  const Params params = grid.empty() ? Params{} : grid[(index / r) % grid.size()];
  return trial_rows(spec, dim, index, recipe, params, config);
}

InequalityResult replay(const Fingerprint& f) {
  if (f.format_version != kFormatVersion)
    throw Error(ErrorKind::VersionMismatch, "fingerprint format " + f.format_version + ", expected " + kFormatVersion);
  const SpecInfo& spec = find_spec(f.id);
  for (const auto& row : trial_rows(spec, f.dim, f.index, f.recipe, f.params, config_of(f))) {
    if (row.fingerprint.form != f.form) continue;
    if (!row.result) throw Error(ErrorKind::ConfigInvalid, "replayed trial failed: " + row.error);
    return *row.result;
  }
  throw Error(ErrorKind::ParamOutOfRange, f.id + " has no form '" + f.form + "'");
}

Aggregator::Aggregator(const std::vector<std::string>& spec_ids) {
  for (const auto& id : spec_ids) {
    for (const auto& f : find_spec(id).forms) {
      slot_[{id, f.name}] = aggregates_.size();
      FormAggregate a;
      a.id = id;
      a.form = f.name;
      aggregates_.push_back(std::move(a));
    }
  }
  sharpness_sum_.assign(aggregates_.size(), 0.0);
  sharpness_count_.assign(aggregates_.size(), 0);
  violation_slack_.assign(aggregates_.size(), 0.0);
}

void Aggregator::add(const Row& row) {
  const auto it = slot_.find({row.fingerprint.id, row.fingerprint.form});
  if (it == slot_.end()) throw Error(ErrorKind::UnknownSpec, row.fingerprint.id + "/" + row.fingerprint.form);
  const std::size_t k = it->second;
  FormAggregate& a = aggregates_[k];
  ++a.rows;
  if (!row.result) {
    if (a.errors++ == 0) a.first_error = row.error;
    return;
  }
  const InequalityResult& r = *row.result;
  if (r.asserted) {
    ++a.asserted_rows;
    if (!r.satisfied) {
      if (a.violations++ == 0 || r.relative_slack < violation_slack_[k]) {
        violation_slack_[k] = r.relative_slack;
        a.violation_fingerprint = row.fingerprint;
      }
    }
    if (!r.chain_monotone) ++a.chain_failures;
  } else {
    if (!r.satisfied) ++a.measured_failures;
    if (!r.chain_monotone) ++a.measured_chain_failures;
  }
  if (!a.worst_relative_slack || r.relative_slack < *a.worst_relative_slack) {
    a.worst_relative_slack = r.relative_slack;
    a.worst_fingerprint = row.fingerprint;
  }
  if (r.sharpness && std::isfinite(*r.sharpness)) {
    a.sharpness_min = a.sharpness_min ? std::min(*a.sharpness_min, *r.sharpness) : *r.sharpness;
    a.sharpness_max = a.sharpness_max ? std::max(*a.sharpness_max, *r.sharpness) : *r.sharpness;
    sharpness_sum_[k] += *r.sharpness;
    ++sharpness_count_[k];
  }
}

std::vector<FormAggregate> Aggregator::finish() const {
  std::vector<FormAggregate> out = aggregates_;
  for (std::size_t k = 0; k < out.size(); ++k)
    if (sharpness_count_[k] > 0) out[k].sharpness_mean = sharpness_sum_[k] / static_cast<double>(sharpness_count_[k]);
  return out;
}

std::size_t CampaignReport::violations() const {
  std::size_t n = 0;
  for (const auto& a : aggregates) n += a.violations + a.chain_failures;
  return n;
}

std::size_t CampaignReport::measured_failures() const {
  std::size_t n = 0;
  for (const auto& a : aggregates) n += a.measured_failures + a.measured_chain_failures;
  return n;
}

std::size_t CampaignReport::errors() const {
  std::size_t n = 0;
  for (const auto& a : aggregates) n += a.errors;
  return n;
}

CampaignReport run_campaign(const CampaignConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> ids = config.resolved_specs();

  struct Task {
    const std::string* id;
    std::size_t dim;
    std::size_t index;
  };
  std::vector<Task> tasks;
  tasks.reserve(ids.size() * config.dims.size() * config.trials);
  for (const auto& id : ids)
    for (std::size_t d : config.dims)
      for (std::size_t i = 0; i < config.trials; ++i) tasks.push_back({&id, d, i});

  std::ofstream jsonl;
  if (!config.jsonl_path.empty()) {
    jsonl.open(config.jsonl_path, std::ios::binary);
    if (!jsonl) throw Error(ErrorKind::IoFailure, "cannot write " + config.jsonl_path);
  }

  Aggregator agg(ids);
  const std::size_t workers = std::min(thread_count(), std::max<std::size_t>(1, tasks.size()));
  constexpr std::size_t kChunk = 2048;
  std::vector<std::vector<Row>> results;
  for (std::size_t begin = 0; begin < tasks.size(); begin += kChunk) {
    const std::size_t end = std::min(tasks.size(), begin + kChunk);
    results.assign(end - begin, {});
    std::atomic<std::size_t> next{begin};
    auto work = [&] {
      for (std::size_t t; (t = next.fetch_add(1)) < end;)
        results[t - begin] = run_trial(*tasks[t].id, tasks[t].dim, tasks[t].index, config);
    };
    if (workers == 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    // Merge in task order regardless of completion order.
    for (const auto& rows : results) {
      for (const auto& row : rows) {
        agg.add(row);
        if (jsonl.is_open()) jsonl << row_to_jsonl(row) << '\n';
      }
    }
  }
  if (jsonl.is_open() && !jsonl.flush()) throw Error(ErrorKind::IoFailure, "cannot write " + config.jsonl_path);

  CampaignReport report;
  report.rng_algorithm = std::string(Rng::kAlgorithm);
  report.config = config;
  report.aggregates = agg.finish();
  report.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!config.json_path.empty()) write_file(config.json_path, report_to_json(report));
  if (!config.csv_path.empty()) write_file(config.csv_path, report_to_csv(report));
  return report;
}

// --- Serialisation -------------------------------------------------------------------

std::string report_to_json(const CampaignReport& r) {
  json aggs = json::array();
  for (const auto& a : r.aggregates) {
    aggs.push_back(json{{"id", a.id},
                        {"form", a.form},
                        {"rows", a.rows},
                        {"asserted_rows", a.asserted_rows},
                        {"violations", a.violations},
                        {"chain_failures", a.chain_failures},
                        {"measured_failures", a.measured_failures},
                        {"measured_chain_failures", a.measured_chain_failures},
                        {"errors", a.errors},
                        {"worst_relative_slack", optional_number(a.worst_relative_slack)},
                        {"worst_fingerprint", optional_fingerprint(a.worst_fingerprint)},
                        {"violation_fingerprint", optional_fingerprint(a.violation_fingerprint)},
                        {"sharpness", json{{"min", optional_number(a.sharpness_min)},
                                           {"mean", optional_number(a.sharpness_mean)},
                                           {"max", optional_number(a.sharpness_max)}}},
                        {"first_error", a.first_error}});
  }
  const json j{{"format_version", r.format_version},
               {"rng_algorithm", r.rng_algorithm},
               {"quantifier_note", kQuantifierNote},
               {"config", config_json(r.config)},
               {"totals", json{{"violations", r.violations()},
                               {"measured_failures", r.measured_failures()},
                               {"errors", r.errors()}}},
               {"aggregates", aggs}};
  return j.dump(2) + "\n";
}

CampaignReport report_from_json(const std::string& text) {
  const json j = parse_json(text, "report");
  return guarded("report", [&] {
    CampaignReport r;
    r.format_version = j.at("format_version").get<std::string>();
    if (r.format_version != kFormatVersion)
      throw Error(ErrorKind::VersionMismatch, "report format " + r.format_version + ", expected " + kFormatVersion);
    r.rng_algorithm = j.at("rng_algorithm").get<std::string>();
    r.config = config_from(j.at("config"));
    for (const auto& a : j.at("aggregates")) {
      FormAggregate f;
      f.id = a.at("id").get<std::string>();
      f.form = a.at("form").get<std::string>();
      f.rows = a.at("rows").get<std::size_t>();
      f.asserted_rows = a.at("asserted_rows").get<std::size_t>();
      f.violations = a.at("violations").get<std::size_t>();
      f.chain_failures = a.at("chain_failures").get<std::size_t>();
      f.measured_failures = a.at("measured_failures").get<std::size_t>();
      f.measured_chain_failures = a.at("measured_chain_failures").get<std::size_t>();
      f.errors = a.at("errors").get<std::size_t>();
      f.worst_relative_slack = read_optional(a.at("worst_relative_slack"));
      f.worst_fingerprint = read_optional_fingerprint(a.at("worst_fingerprint"));
      f.violation_fingerprint = read_optional_fingerprint(a.at("violation_fingerprint"));
      f.sharpness_min = read_optional(a.at("sharpness").at("min"));
      f.sharpness_mean = read_optional(a.at("sharpness").at("mean"));
      f.sharpness_max = read_optional(a.at("sharpness").at("max"));
      f.first_error = a.at("first_error").get<std::string>();
      r.aggregates.push_back(std::move(f));
    }
    return r;
  });
}

std::string report_to_csv(const CampaignReport& r) {
  std::ostringstream os;
  os << "id,form,trials,asserted,violations,chain_failures,measured_failures,errors,"
        "min_sharpness,mean_sharpness,max_sharpness,worst_relative_slack\n";
  for (const auto& a : r.aggregates) {
    os << a.id << ',' << a.form << ',' << a.rows << ',' << a.asserted_rows << ',' << a.violations << ','
       << a.chain_failures << ',' << a.measured_failures << ',' << a.errors << ',' << csv_number(a.sharpness_min)
       << ',' << csv_number(a.sharpness_mean) << ',' << csv_number(a.sharpness_max) << ','
       << csv_number(a.worst_relative_slack) << '\n';
  }
  return os.str();
}

std::string row_to_jsonl(const Row& row) {
  return json{{"fingerprint", fingerprint_json(row.fingerprint)},
              {"result", row.result ? result_json(*row.result) : json(nullptr)},
              {"error", row.error}}
      .dump();
}

Row row_from_jsonl(const std::string& line) {
  const json j = parse_json(line, "row");
  return guarded("row", [&] {
    Row row;
    row.fingerprint = fingerprint_from(j.at("fingerprint"));
    if (!j.at("result").is_null()) row.result = result_from(j.at("result"));
    row.error = j.at("error").get<std::string>();
    return row;
  });
}

std::string fingerprint_to_json(const Fingerprint& f) { return fingerprint_json(f).dump(); }

Fingerprint fingerprint_from_json(const std::string& text) {
  const json j = parse_json(text, "fingerprint");
  return guarded("fingerprint", [&] { return fingerprint_from(j); });
}

std::string config_to_json(const CampaignConfig& c) { return config_json(c).dump(2) + "\n"; }

CampaignConfig config_from_json(const std::string& text) { return config_from(parse_json(text, "config")); }

std::string bundle_to_json(const InstanceBundle& b) {
  json ops = json::object();
  for (const auto& [role, m] : b.operators) ops[role] = matrix_json(m);
  json scalars = json::object();
  for (const auto& [k, v] : b.scalars) scalars[k] = number(v);
  json certs = json::object();
  for (const auto& [label, c] : b.certificates)
    certs[label] = json{{"residual", number(c.residual)}, {"scale", number(c.scale)}, {"passes", c.passes()}};
  return json{{"recipe", b.recipe},
              {"seed", b.seed},
              {"n", b.n},
              {"operators", ops},
              {"scalars", scalars},
              {"certificates", certs}}
             .dump(2) +
         "\n";
}

std::string result_to_json(const InequalityResult& r) { return result_json(r).dump(); }

}  // namespace opineq
