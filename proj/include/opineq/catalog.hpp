#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "opineq/generators.hpp"
#include "opineq/linalg.hpp"
#include "opineq/rng.hpp"

namespace opineq {

using VectorMap = std::map<std::string, ComplexVector>;

// Numeric parameters plus the function pair selection. Power pairs read
// values["alpha"]; the log pair takes no parameter.
struct Params {
  std::map<std::string, double> values;
  std::string pair = "power";
  std::string form;  // empty selects the first form of the spec

  // Throws ParamOutOfRange when the key is absent.
  double get(const std::string& key) const;
  FunctionPair function_pair() const;
  bool operator==(const Params&) const = default;
};

// One way of reading an inequality. Asserted forms are held to the tolerance;
// measured forms are evaluated and reported but never fail a campaign.
struct FormInfo {
  std::string name;
  bool asserted = true;
  std::string note;
};

struct SpecInfo {
  std::string id;
  std::string anchor;
  std::vector<std::string> roles;    // operator roles read from the bundle
  std::vector<std::string> vectors;  // unit-vector roles; empty for norm/radius entries
  std::vector<std::string> scalars;  // keys read from Params::values
  std::vector<FormInfo> forms;
  std::vector<std::string> recipes;  // generator recipes, cycled by trial index
  std::size_t chain_length = 1;
  bool uses_pair = false;
  // Asserted only when f^2(|A|) and g^2(|A*|) intertwine B and C as well;
  // |A|B = B*|A| alone does not carry over to other functions of |A|.
  bool calculus_gated = false;
  std::vector<Params> grid;  // default parameter sweep, cycled by trial index
};

struct InequalityResult {
  std::string id;
  std::string form;
  double lhs = 0.0;
  std::vector<double> rhs;  // chain order
  double slack = 0.0;        // rhs[0] - lhs
  double relative_slack = 0.0;
  std::optional<double> sharpness;  // lhs / rhs[0] when rhs[0] > 0
  bool satisfied = true;
  bool chain_monotone = true;
  bool asserted = true;
  double tol = 1e-8;
  std::vector<std::string> flags;
  // Fingerprint of the inputs.
  std::string recipe;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  Params params;
};

// Fills slack, relative_slack, sharpness, satisfied and chain_monotone from
// lhs, rhs and tol. These fields are pure functions of the numeric ones.
void finalize(InequalityResult& result);

struct Values {
  double lhs = 0.0;
  std::vector<double> rhs;
};

// A form with every vector-independent quantity already computed.
struct PreparedForm {
  FormInfo info;
  bool asserted = true;
  std::vector<std::string> flags;
  std::vector<std::string> vectors;
  std::function<Values(const VectorMap&)> values;

  InequalityResult evaluate(const VectorMap& vectors) const;
  bool vector_free() const { return vectors.empty(); }

  // Fingerprint and tolerance stamped into every result.
  std::string id;
  std::string recipe;
  std::uint64_t seed = 0;
  std::size_t n = 0;
  Params params;
  double tol = 1e-8;
};

struct PreparedSpec {
  const SpecInfo* spec = nullptr;
  std::vector<PreparedForm> forms;

  // Throws ParamOutOfRange for an unknown form name.
  const PreparedForm& form(const std::string& name) const;
};

// Every registry entry exactly once, in a stable order.
const std::vector<SpecInfo>& list_specs();
// Throws UnknownSpec.
const SpecInfo& find_spec(const std::string& id);

// Hypothesis certificates the spec requires, recomputed from the bundle.
std::map<std::string, Certificate> validate(const std::string& id, const InstanceBundle& bundle);

// Validates (unless check_hypotheses is false, which flags every row and
// keeps calculus-gated forms asserted even when their gate fails),
// checks parameter ranges and precomputes every form. Numerical radii are
// computed with tol / 10.
PreparedSpec prepare(const std::string& id, const InstanceBundle& bundle, const Params& params, double tol = 1e-8,
                     bool check_hypotheses = true);

// One form (params.form, or the first) at the given vectors.
InequalityResult evaluate(const std::string& id, const InstanceBundle& bundle, const VectorMap& vectors,
                          const Params& params, double tol = 1e-8, bool check_hypotheses = true);

// Maximises lhs / rhs[0] over unit vectors: restart 0 starts from one shared
// vector for every role, later restarts from independent draws, each followed
// by a randomised hill climb. Returns the worst result seen: an unsatisfied
// one if any, otherwise the highest sharpness.
InequalityResult sup_search(const PreparedForm& form, int restarts, Rng& rng);
InequalityResult sup_search(const std::string& id, const InstanceBundle& bundle, const Params& params, int restarts,
                            Rng& rng, double tol = 1e-8);

// Draws one independent unit vector per role of the form.
VectorMap random_vectors(const PreparedForm& form, std::size_t n, Rng& rng);

}  // namespace opineq
