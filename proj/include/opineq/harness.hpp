#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opineq/catalog.hpp"
#include "opineq/generators.hpp"
#include "opineq/linalg.hpp"

namespace opineq {

inline constexpr const char* kFormatVersion = "1";

// --- Matrix files: {"n": int, "entries": [[[re, im], ...], ...]} row-major. ----

// Throws ParseError on malformed, non-square or non-finite input.
ComplexMatrix parse_matrix(const std::string& text);
std::string format_matrix(const ComplexMatrix& m);
// Throws IoFailure when the file cannot be read, ParseError as above.
ComplexMatrix read_matrix_file(const std::string& path);

// --- Campaigns ---------------------------------------------------------------

struct CampaignConfig {
  std::vector<std::size_t> dims = {2, 3, 4};
  std::size_t trials = 100;  // per (spec, dim)
  std::uint64_t seed = 0;
  std::vector<std::string> specs = {"all"};
  // Replaces the values of a grid key in every spec grid that uses it, e.g.
  // {"alpha": {0.5}} keeps each entry's other keys and sets alpha = 0.5.
  std::map<std::string, std::vector<double>> grids;
  double tol = 1e-8;
  std::size_t vector_samples = 8;
  int restarts = 4;
  std::string recipe;  // empty: each spec cycles its own recipes
  bool check_hypotheses = true;
  // Output paths; empty paths are skipped. Not echoed into the report.
  std::string json_path;
  std::string csv_path;
  std::string jsonl_path;

  // Throws ConfigInvalid.
  void validate() const;
  std::vector<std::string> resolved_specs() const;
};

// Everything needed to re-run one (trial, form) exactly.
struct Fingerprint {
  std::string format_version = kFormatVersion;
  std::string id;
  std::string form;
  std::uint64_t campaign_seed = 0;
  std::size_t dim = 0;
  std::size_t index = 0;
  std::string recipe;
  Params params;
  double tol = 1e-8;
  std::size_t vector_samples = 8;
  int restarts = 4;
  bool check_hypotheses = true;

  bool operator==(const Fingerprint&) const = default;
};

// One (trial, form) outcome: the worst probe over random samples and the
// sup_search pass, ordered violation > chain failure > sharpness.
struct Row {
  Fingerprint fingerprint;
  std::optional<InequalityResult> result;
  std::string error;  // set instead of result when the trial threw
};

struct FormAggregate {
  std::string id;
  std::string form;
  std::size_t rows = 0;
  std::size_t asserted_rows = 0;
  std::size_t violations = 0;               // asserted and unsatisfied
  std::size_t chain_failures = 0;           // asserted and non-monotone
  std::size_t measured_failures = 0;        // measured and unsatisfied
  std::size_t measured_chain_failures = 0;  // measured and non-monotone
  std::size_t errors = 0;
  std::optional<double> worst_relative_slack;
  std::optional<Fingerprint> worst_fingerprint;      // row attaining worst_relative_slack
  std::optional<Fingerprint> violation_fingerprint;  // worst asserted violation
  std::optional<double> sharpness_min;
  std::optional<double> sharpness_mean;
  std::optional<double> sharpness_max;
  std::string first_error;

  bool operator==(const FormAggregate&) const = default;
};

struct CampaignReport {
  std::string format_version = kFormatVersion;
  std::string rng_algorithm;
  CampaignConfig config;
  std::vector<FormAggregate> aggregates;  // registry order, then form order
  double wall_seconds = 0.0;              // kept out of the JSON so reports compare byte-for-byte

  std::size_t violations() const;      // asserted violations plus asserted chain failures
  std::size_t measured_failures() const;
  std::size_t errors() const;
};

// Folds rows into the per-(id, form) aggregates. Rows must arrive in
// (spec, dim, index) order for the sharpness mean to be reproducible.
class Aggregator {
 public:
  explicit Aggregator(const std::vector<std::string>& spec_ids);
  void add(const Row& row);
  std::vector<FormAggregate> finish() const;

 private:
  std::vector<FormAggregate> aggregates_;
  std::map<std::pair<std::string, std::string>, std::size_t> slot_;
  std::vector<double> sharpness_sum_;
  std::vector<std::size_t> sharpness_count_;
  std::vector<double> violation_slack_;
};

// Runs every (trial, form) of one trial. Errors become rows.
std::vector<Row> run_trial(const std::string& id, std::size_t dim, std::size_t index, const CampaignConfig& config);

// Concurrency is capped by OPINEQ_THREADS (default: hardware concurrency).
// Writes the configured outputs; throws ConfigInvalid or IoFailure.
CampaignReport run_campaign(const CampaignConfig& config);

// Re-runs the trial named by the fingerprint. Throws VersionMismatch,
// UnknownSpec, or the error the trial raises.
InequalityResult replay(const Fingerprint& fingerprint);

// --- Serialisation (JSON via nlohmann, CSV summary, JSONL rows) -------------

std::string report_to_json(const CampaignReport& report);
// Throws ParseError or VersionMismatch.
CampaignReport report_from_json(const std::string& text);
std::string report_to_csv(const CampaignReport& report);
std::string row_to_jsonl(const Row& row);
Row row_from_jsonl(const std::string& line);
std::string fingerprint_to_json(const Fingerprint& f);
Fingerprint fingerprint_from_json(const std::string& text);
std::string config_to_json(const CampaignConfig& config);
CampaignConfig config_from_json(const std::string& text);
std::string bundle_to_json(const InstanceBundle& bundle);
std::string result_to_json(const InequalityResult& result);

// --- Command line ------------------------------------------------------------

// Subcommands run, check, radius, decompose, gen, list, replay.
// Exit codes: 0 clean, 2 violations, 1 usage or runtime error.
int cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace opineq
