#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <fstream>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "opineq/error.hpp"
#include "opineq/harness.hpp"
#include "opineq/radii.hpp"

namespace opineq {

namespace {

using json = nlohmann::ordered_json;

std::pair<std::string, std::string> split_assignment(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw Error(ErrorKind::ConfigInvalid, "expected KEY=VALUE, got '" + text + "'");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

double parse_double(const std::string& key, const std::string& text) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size() && std::isfinite(v)) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorKind::ConfigInvalid, "value for '" + key + "' is not a finite number: " + text);
}

// "A", "B", "C" plus optional positive index: role letter and index (0 = none).
std::pair<char, std::size_t> role_parts(const std::string& role) {
  if (role.empty()) return {'\0', 0};
  std::size_t idx = 0;
  for (std::size_t i = 1; i < role.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(role[i]))) return {'\0', 0};
    idx = idx * 10 + static_cast<std::size_t>(role[i] - '0');
  }
  return {role[0], idx};
}

// Binds the user matrix to A (or A1, or the first role), defaults B and C
// roles to the identity, and rejects any other missing role.
InstanceBundle user_bundle(const SpecInfo& spec, const std::optional<ComplexMatrix>& matrix,
                           const std::vector<std::string>& op_args, const std::vector<std::string>& scalar_args) {
  InstanceBundle b;
  b.recipe = "user";
  for (const auto& arg : op_args) {
    const auto [role, path] = split_assignment(arg);
    b.operators[role] = read_matrix_file(path);
  }
  for (const auto& arg : scalar_args) {
    const auto [key, value] = split_assignment(arg);
    b.scalars[key] = parse_double(key, value);
  }
  if (!spec.roles.empty()) {
    const bool has_a = std::find(spec.roles.begin(), spec.roles.end(), "A") != spec.roles.end();
    const bool has_a1 = std::find(spec.roles.begin(), spec.roles.end(), "A1") != spec.roles.end();
    const std::string primary = has_a ? "A" : (has_a1 ? "A1" : spec.roles.front());
    if (!b.operators.count(primary)) {
      if (!matrix) throw Error(ErrorKind::ConfigInvalid, spec.id + " needs a matrix for role " + primary);
      b.operators[primary] = *matrix;
    }
  }
  std::size_t n = 0;
  for (const auto& [role, m] : b.operators) n = std::max(n, m.dim());
  for (const auto& role : spec.roles) {
    if (b.operators.count(role)) continue;
    const auto [letter, idx] = role_parts(role);
    const bool identity_role = letter == 'B' || letter == 'C';
    // Indexed triples beyond the first are optional; they exist once A_i is given.
    const bool triple_present = idx == 0 || idx == 1 || b.operators.count("A" + std::to_string(idx));
    if (identity_role && triple_present) {
      b.operators[role] = ComplexMatrix::identity(n);
    } else if (idx <= 1) {
      throw Error(ErrorKind::ConfigInvalid, spec.id + " needs operator role " + role + " (pass --op " + role + "=FILE)");
    }
  }
  b.n = n;
  return b;
}

bool failed(const InequalityResult& r) { return !r.satisfied || !r.chain_monotone; }

json interval(double value, double lo, double hi) { return json{{"value", value}, {"lo", lo}, {"hi", hi}}; }

int run_command(const std::vector<std::string>& specs, const std::vector<std::size_t>& dims, CLI::App& sub,
                CampaignConfig config, std::ostream& out, std::ostream& err) {
  if (sub.count("--spec")) config.specs = specs;
  if (sub.count("--dims")) config.dims = dims;
  const CampaignReport report = run_campaign(config);
  out << report_to_csv(report);
  err << "violations " << report.violations() << ", measured failures " << report.measured_failures() << ", errors "
      << report.errors() << ", wall " << report.wall_seconds << " s\n";
  if (report.violations() > 0) return 2;
  return report.errors() > 0 ? 1 : 0;
}

}  // namespace

int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Mixed Schwarz inequality workbench"};
  app.require_subcommand(1);

  // run
  CampaignConfig config;
  std::string config_path;
  std::vector<std::string> run_specs;
  std::vector<std::size_t> run_dims;
  std::vector<double> alphas, ps, young;
  auto* run = app.add_subcommand("run", "Seeded verification campaign over the registry");
  run->add_option("--config", config_path, "JSON file mirroring the campaign config; flags override it");
  run->add_option("--spec", run_specs, "Spec ids or 'all'")->delimiter(',');
  run->add_option("--dims", run_dims, "Matrix dimensions in [1, 64]")->delimiter(',');
  run->add_option("--trials", config.trials, "Trials per (spec, dim)");
  run->add_option("--seed", config.seed, "Campaign seed");
  run->add_option("--tol", config.tol, "Satisfaction tolerance (>= 1e-12)");
  run->add_option("--samples", config.vector_samples, "Random unit-vector tuples per trial");
  run->add_option("--restarts", config.restarts, "sup_search restarts per trial (0 disables)");
  run->add_option("--recipe", config.recipe, "Generator recipe used for every spec");
  run->add_option("--alpha", alphas, "Override alpha in every grid")->delimiter(',');
  run->add_option("--p", ps, "Override p in every grid")->delimiter(',');
  run->add_option("--young-alpha", young, "Override young_alpha in every grid")->delimiter(',');
  bool unchecked = false;
  run->add_flag("--no-hypotheses", unchecked, "Skip certificate validation; rows are flagged");
  run->add_option("--json", config.json_path, "Full JSON report path");
  run->add_option("--csv", config.csv_path, "CSV summary path");
  run->add_option("--jsonl", config.jsonl_path, "Per-row JSONL path");

  // check
  std::string matrix_path, ineq, form, pair = "power";
  std::vector<std::string> param_args, op_args, scalar_args;
  std::uint64_t check_seed = 0;
  std::size_t check_samples = 8;
  int check_restarts = 4;
  double check_tol = 1e-8;
  auto* check = app.add_subcommand("check", "Evaluate one spec on user matrices (B = C = I by default)");
  check->add_option("matrix", matrix_path, "Matrix JSON file bound to A");
  check->add_option("--ineq", ineq, "Spec id")->required();
  check->add_option("--form", form, "Evaluate only this form; its failure sets exit code 2");
  check->add_option("--param", param_args, "KEY=VALUE; without any, the spec's default grid is swept");
  check->add_option("--pair", pair, "Function pair: power or log");
  check->add_option("--op", op_args, "ROLE=FILE for further operator roles");
  check->add_option("--scalar", scalar_args, "KEY=VALUE for scalar entries");
  check->add_option("--seed", check_seed, "Seed for vector probes");
  check->add_option("--samples", check_samples, "Random unit-vector tuples");
  check->add_option("--restarts", check_restarts, "sup_search restarts");
  check->add_option("--tol", check_tol, "Satisfaction tolerance");

  // radius / decompose
  std::string radius_path, decompose_path;
  auto* radius = app.add_subcommand("radius", "Numerical radius, spectral radius and norm with intervals");
  radius->add_option("matrix", radius_path)->required();
  auto* decompose = app.add_subcommand("decompose", "Polar and Cartesian parts as JSON");
  decompose->add_option("matrix", decompose_path)->required();

  // gen
  std::string recipe;
  std::size_t gen_n = 0;
  std::uint64_t gen_seed = 0;
  auto* gen = app.add_subcommand("gen", "Emit a generated instance bundle");
  gen->add_option("--recipe", recipe)->required();
  gen->add_option("--n", gen_n)->required();
  gen->add_option("--seed", gen_seed);

  // list / replay
  auto* list = app.add_subcommand("list", "Registry entries and their forms");
  std::string fingerprint_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run the trial named by a fingerprint JSON file");
  replay_cmd->add_option("fingerprint", fingerprint_path)->required();

  std::vector<std::string> argv_store = {"opineq"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (*run) {
      CampaignConfig base = config;
      if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + config_path);
        std::stringstream ss;
        ss << in.rdbuf();
        base = config_from_json(ss.str());
        // Explicit flags win over the file.
        if (run->count("--trials")) base.trials = config.trials;
        if (run->count("--seed")) base.seed = config.seed;
        if (run->count("--tol")) base.tol = config.tol;
        if (run->count("--samples")) base.vector_samples = config.vector_samples;
        if (run->count("--restarts")) base.restarts = config.restarts;
        if (run->count("--recipe")) base.recipe = config.recipe;
        if (run->count("--json")) base.json_path = config.json_path;
        if (run->count("--csv")) base.csv_path = config.csv_path;
        if (run->count("--jsonl")) base.jsonl_path = config.jsonl_path;
      }
      if (!alphas.empty()) base.grids["alpha"] = alphas;
      if (!ps.empty()) base.grids["p"] = ps;
      if (!young.empty()) base.grids["young_alpha"] = young;
      if (unchecked) base.check_hypotheses = false;
      return run_command(run_specs, run_dims, *run, base, out, err);
    }

    if (*check) {
      const SpecInfo& spec = find_spec(ineq);
      std::optional<ComplexMatrix> matrix;
      if (!matrix_path.empty()) matrix = read_matrix_file(matrix_path);
      const InstanceBundle bundle = user_bundle(spec, matrix, op_args, scalar_args);
      std::vector<Params> grid;
      if (!param_args.empty() || pair != "power") {
        Params p;
        p.pair = pair;
        for (const auto& arg : param_args) {
          const auto [key, value] = split_assignment(arg);
          p.values[key] = parse_double(key, value);
        }
        grid.push_back(std::move(p));
      } else {
        grid = spec.grid.empty() ? std::vector<Params>{Params{}} : spec.grid;
      }
      Rng rng(check_seed);
      bool violation = false;
      json rows = json::array();
      for (const auto& params : grid) {
        const PreparedSpec prepared = prepare(spec.id, bundle, params, check_tol);
        for (const auto& f : prepared.forms) {
          if (!form.empty() && f.info.name != form) continue;
          InequalityResult worst = f.vector_free() ? f.evaluate({}) : sup_search(f, std::max(1, check_restarts), rng);
          for (std::size_t s = 0; s < check_samples && !f.vector_free(); ++s) {
            InequalityResult r = f.evaluate(random_vectors(f, bundle.n, rng));
            if (!r.satisfied && (worst.satisfied || r.relative_slack < worst.relative_slack)) worst = std::move(r);
          }
          if (failed(worst) && (worst.asserted || !form.empty())) violation = true;
          rows.push_back(json::parse(result_to_json(worst)));
        }
      }
      if (!form.empty() && rows.empty()) prepare(spec.id, bundle, grid.front(), check_tol).form(form);
      out << rows.dump(2) << "\n";
      return violation ? 2 : 0;
    }

    if (*radius) {
      const ComplexMatrix a = read_matrix_file(radius_path);
      const RadiusEstimate w = numerical_radius(a);
      const double norm = operator_norm(a);
      const double r = spectral_radius(a);
      const double eps = std::numeric_limits<double>::epsilon();
      const double n = static_cast<double>(a.dim());
      // Rounding envelope of the singular value solver.
      const double norm_err = 64.0 * n * eps * norm;
      // Worst-case eigenvalue sensitivity (one Jordan block of size n) to a
      // backward error of 64 n eps ||A||; r <= w bounds it from above.
      const double r_err = norm * std::pow(64.0 * n * eps, 1.0 / n);
      json j{{"numerical_radius", json{{"value", w.value}, {"lo", w.lo}, {"hi", w.hi}, {"method", w.method}}},
             {"spectral_radius", interval(r, std::max(0.0, r - r_err), std::min(w.hi, r + r_err))},
             {"operator_norm", interval(norm, std::max(0.0, norm - norm_err), norm + norm_err)}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*decompose) {
      const ComplexMatrix a = read_matrix_file(decompose_path);
      const PolarParts p = polar(a);
      const CartesianParts c = cartesian(a);
      json j{{"polar", json{{"unitary", json::parse(format_matrix(p.unitary))},
                            {"modulus", json::parse(format_matrix(p.modulus))}}},
             {"cartesian", json{{"real_part", json::parse(format_matrix(c.real_part))},
                                {"imag_part", json::parse(format_matrix(c.imag_part))}}}};
      out << j.dump(2) << "\n";
      return 0;
    }

    if (*gen) {
      Rng rng(gen_seed);
      out << bundle_to_json(make_instance(recipe, gen_n, rng));
      return 0;
    }

    if (*list) {
      for (const auto& s : list_specs()) {
        out << s.id << "\t";
        for (std::size_t i = 0; i < s.forms.size(); ++i)
          out << (i ? "," : "") << s.forms[i].name << (s.forms[i].asserted ? "" : "(measured)");
        out << "\t" << s.anchor << "\n";
      }
      return 0;
    }

    if (*replay_cmd) {
      std::ifstream in(fingerprint_path);
      if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + fingerprint_path);
      std::stringstream ss;
      ss << in.rdbuf();
      const InequalityResult r = replay(fingerprint_from_json(ss.str()));
      out << result_to_json(r) << "\n";
      return failed(r) && r.asserted ? 2 : 0;
    }
  } catch (const Error& e) {
    err << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace opineq
