#include "opineq/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "opineq/error.hpp"
#include "opineq/radii.hpp"

namespace opineq {

namespace {

using Fn = std::function<double(double)>;
using Certificates = std::map<std::string, Certificate>;
using Evaluator = std::function<Values(const VectorMap&)>;

// ---------------------------------------------------------------------------
// Shared numeric pieces.

double norm(const ComplexMatrix& m) { return operator_norm(m); }

// ||M|| + ||M^2||^{1/2}, twice the upper estimate of r(M).
double half_bound(const ComplexMatrix& m) { return norm(m) + std::sqrt(norm(m * m)); }

// (1/2)(a + b + sqrt((a - b)^2 + 4c)), the two-operator norm estimate.
double pair_estimate(double a, double b, double c) { return 0.5 * (a + b + std::sqrt((a - b) * (a - b) + 4.0 * c)); }

double quad(const ComplexMatrix& m, const ComplexVector& x) { return inner(m * x, x).real(); }

double image_norm(const ComplexMatrix& m, const ComplexVector& x) { return vector_norm(m * x); }

ComplexMatrix psd_power(const ComplexMatrix& a, double p) {
  return spectral_function(hermitian_eigen(a), [p](double t) { return std::pow(std::max(t, 0.0), p); });
}

// Functions of |M| built from its singular vectors.
class Modulus {
 public:
  explicit Modulus(const ComplexMatrix& m) : eig_(modulus_eigen(m)) {}

  // fn(|M|)^exponent. pow(0, 0) = 1 keeps t^0 equal to the identity.
  ComplexMatrix apply(const Fn& fn, double exponent = 1.0) const {
    return spectral_function(eig_, [&](double s) { return std::pow(fn(std::max(s, 0.0)), exponent); });
  }
  ComplexMatrix power(double exponent) const {
    return apply([](double t) { return t; }, exponent);
  }

 private:
  HermitianEigen eig_;
};

const ComplexVector& vec(const VectorMap& v, const char* role) {
  const auto it = v.find(role);
  if (it == v.end()) throw Error(ErrorKind::ParamOutOfRange, std::string("missing vector '") + role + "'");
  return it->second;
}

std::size_t multi_count(const InstanceBundle& b) {
  std::size_t k = 0;
  while (b.has(multi_role("A", k + 1))) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Evaluation context handed to each entry.

struct FormEval {
  Evaluator values;
  std::vector<std::string> vectors;
};

class Context {
 public:
  Context(const SpecInfo& info, const InstanceBundle& b, const Params& p, double tol)
      : info_(info), bundle_(b), params_(p), tol_(tol) {}

  const InstanceBundle& bundle() const { return bundle_; }
  const ComplexMatrix& op(const std::string& role) const { return bundle_.at(role); }

  double param(const std::string& key, double lo, double hi, bool open_lo = false) const {
    const double v = params_.get(key);
    if (!(open_lo ? v > lo : v >= lo) || !(v <= hi)) {
      std::ostringstream os;
      os << info_.id << ": " << key << " = " << v << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
      throw Error(ErrorKind::ParamOutOfRange, os.str());
    }
    return v;
  }

  // Hoelder pair (p, q) with p > 1.
  std::pair<double, double> holder() const {
    const double p = param("p", 1.0, 1e6, true);
    return {p, p / (p - 1.0)};
  }

  // The declared pair, or t^alpha / t^(1-alpha) for power presets.
  const FunctionPair& pair() {
    if (!pair_) {
      if (info_.uses_pair) {
        pair_ = params_.function_pair();
      } else {
        pair_ = FunctionPair::power(param("alpha", 0.0, 1.0));
      }
    }
    return *pair_;
  }

  double radius(const ComplexMatrix& m) const { return numerical_radius(m, std::max(tol_ / 10.0, 1e-12)).value; }

  void gate(const std::string& label, const Certificate& c) { gates_[label] = c; }
  const Certificates& gates() const { return gates_; }

 private:
  const SpecInfo& info_;
  const InstanceBundle& bundle_;
  const Params& params_;
  double tol_;
  std::optional<FunctionPair> pair_;
  Certificates gates_;
};

// A with its intertwined factors and the pair applied to both moduli.
struct Triple {
  ComplexMatrix a, b, c;  // b or c is the identity when the role is absent
  ComplexMatrix f, g;     // f(|A|), g(|A*|)
  ComplexMatrix f2, g2;   // f^2(|A|), g^2(|A*|)
  double rb = 1.0, rc = 1.0;
};

Triple make_triple(Context& ctx, const std::string& a_role, const std::string& b_role, const std::string& c_role) {
  Triple t;
  t.a = ctx.op(a_role);
  const std::size_t n = t.a.dim();
  t.b = b_role.empty() ? ComplexMatrix::identity(n) : ctx.op(b_role);
  t.c = c_role.empty() ? ComplexMatrix::identity(n) : ctx.op(c_role);
  const FunctionPair& pr = ctx.pair();
  const Modulus mod_a(t.a), mod_a_star(adjoint(t.a));
  t.f = mod_a.apply(pr.f);
  t.g = mod_a_star.apply(pr.g);
  t.f2 = mod_a.apply(pr.f, 2.0);
  t.g2 = mod_a_star.apply(pr.g, 2.0);
  if (!b_role.empty()) {
    t.rb = spectral_radius(t.b);
    ctx.gate("f2_" + a_role + "_" + b_role, intertwining_certificate(t.f2, t.b));
  }
  if (!c_role.empty()) {
    t.rc = spectral_radius(t.c);
    ctx.gate("g2_" + a_role + "star_" + c_role, intertwining_certificate(t.g2, t.c));
  }
  return t;
}

std::vector<Triple> make_triples(Context& ctx, std::size_t min_count, std::size_t max_count) {
  const std::size_t k = multi_count(ctx.bundle());
  if (k < min_count || k > max_count) {
    throw Error(ErrorKind::HypothesisViolated, "bundle has " + std::to_string(k) + " operator triples, need [" +
                                                   std::to_string(min_count) + ", " + std::to_string(max_count) + "]");
  }
  std::vector<Triple> out;
  for (std::size_t i = 1; i <= k; ++i) out.push_back(make_triple(ctx, multi_role("A", i), multi_role("B", i), multi_role("C", i)));
  return out;
}

ComplexMatrix weighted_sum(const std::vector<Triple>& ts) {
  ComplexMatrix s(ts.front().a.dim());
  for (const auto& t : ts) s += adjoint(t.c) * t.a * t.b;
  return s;
}

double max_rr(const std::vector<Triple>& ts) {
  double m = 0.0;
  for (const auto& t : ts) m = std::max(m, t.rb * t.rc);
  return m;
}

double lp(const std::vector<double>& v, double p) {
  double s = 0.0;
  for (double x : v) s += std::pow(x, p);
  return std::pow(s, 1.0 / p);
}

// Sum-of-products bound and its Hoelder relaxation for sum C_i* A_i B_i.
Values multi_vector_chain(const std::vector<Triple>& ts, const ComplexMatrix& sum, double p, double q,
                          const ComplexVector& x, const ComplexVector& u) {
  double first = 0.0;
  std::vector<double> fx, gu;
  for (const auto& t : ts) {
    fx.push_back(image_norm(t.f, x));
    gu.push_back(image_norm(t.g, u));
    first += t.rb * t.rc * fx.back() * gu.back();
  }
  return {std::abs(inner(sum * x, u)), {first, max_rr(ts) * lp(fx, p) * lp(gu, q)}};
}

// ---------------------------------------------------------------------------
// Validators.

using Validator = std::function<Certificates(const InstanceBundle&)>;

Certificates no_hypotheses(const InstanceBundle&) { return {}; }

Validator psd_roles(std::vector<std::string> roles) {
  return [roles](const InstanceBundle& b) {
    Certificates out;
    for (const auto& r : roles) out["psd_" + r] = psd_certificate(b.at(r));
    return out;
  };
}

Validator selfadjoint_roles(std::vector<std::string> roles) {
  return [roles](const InstanceBundle& b) {
    Certificates out;
    for (const auto& r : roles) out["selfadjoint_" + r] = selfadjoint_certificate(b.at(r));
    return out;
  };
}

void add_intertwining(Certificates& out, const InstanceBundle& b, const std::string& a, const std::string& bb,
                      const std::string& c) {
  const ComplexMatrix& am = b.at(a);
  if (!bb.empty()) out["intertwine_" + a + "_" + bb] = intertwining_certificate(absolute_value(am), b.at(bb));
  if (!c.empty()) out["intertwine_" + a + "star_" + c] = intertwining_certificate(absolute_value(adjoint(am)), b.at(c));
}

Validator intertwined(std::string a, std::string bb, std::string c) {
  return [a, bb, c](const InstanceBundle& b) {
    Certificates out;
    add_intertwining(out, b, a, bb, c);
    return out;
  };
}

Certificates cor9_validator(const InstanceBundle& b) {
  Certificates out;
  add_intertwining(out, b, "A", "C", "C");
  return out;
}

Certificates multi_validator(const InstanceBundle& b) {
  Certificates out;
  const std::size_t k = multi_count(b);
  if (k == 0) b.at("A1");  // throws with the missing role
  for (std::size_t i = 1; i <= k; ++i) add_intertwining(out, b, multi_role("A", i), multi_role("B", i), multi_role("C", i));
  return out;
}

Certificates reid_validator(const InstanceBundle& b) {
  return {{"psd_A", psd_certificate(b.at("A"))}, {"selfadjoint_AB", selfadjoint_certificate(b.at("A") * b.at("B"))}};
}

Certificates ld_validator(const InstanceBundle& b) {
  const ComplexMatrix& t = b.at("T");
  return {{"psd_T", psd_certificate(t)},
          {"selfadjoint_TS", selfadjoint_certificate(t * b.at("S"))},
          {"selfadjoint_TC", selfadjoint_certificate(t * b.at("C"))}};
}

// ---------------------------------------------------------------------------
// Registry.

using Preparer = std::function<std::vector<FormEval>(Context&)>;

struct Entry {
  SpecInfo info;
  Validator validator;
  Preparer prepare;
};

const std::vector<std::string> kXY = {"x", "y"};
const std::vector<std::string> kXU = {"x", "u"};
const std::vector<std::string> kX = {"x"};
const std::vector<std::string> kNone = {};

FormInfo asserted(std::string name = "default") { return {std::move(name), true, ""}; }
FormInfo measured(std::string name, std::string note) { return {std::move(name), false, std::move(note)}; }

std::vector<Params> alpha_grid() {
  std::vector<Params> g;
  for (double a : {0.0, 0.25, 0.5, 0.75, 1.0}) g.push_back({{{"alpha", a}}, "power", ""});
  return g;
}

std::vector<Params> pair_grid() {
  std::vector<Params> g = alpha_grid();
  g.push_back({{}, "log", ""});
  return g;
}

// Cartesian product of a grid with one extra scalar.
std::vector<Params> with_values(const std::vector<Params>& base, const std::string& key, std::vector<double> values) {
  std::vector<Params> out;
  for (double v : values) {
    for (Params p : base) {
      p.values[key] = v;
      out.push_back(p);
    }
  }
  return out;
}

std::vector<Params> holder_grid() { return with_values(pair_grid(), "p", {1.5, 2.0, 3.0}); }

// (p, alpha) in {1, 1.5, 2} x {2, 3} with beta = alpha / (alpha - 1) and beta p >= 2.
std::vector<Params> higher_power_grid() {
  std::vector<Params> out;
  for (double p : {1.0, 1.5, 2.0}) {
    for (double ya : {2.0, 3.0}) {
      const double yb = ya / (ya - 1.0);
      if (yb * p < 2.0) continue;
      for (Params g : pair_grid()) {
        g.values["p"] = p;
        g.values["young_alpha"] = ya;
        out.push_back(g);
      }
    }
  }
  return out;
}

std::vector<FormEval> one(Evaluator e, std::vector<std::string> vectors) { return {{std::move(e), std::move(vectors)}}; }

// Young exponents (alpha, beta) for the higher-power bound.
std::pair<double, double> young(Context& ctx, double p) {
  const double ya = ctx.param("young_alpha", 2.0, 1e6);  // alpha >= beta forces alpha >= 2
  const double yb = ya / (ya - 1.0);
  if (yb * p < 2.0) {
    throw Error(ErrorKind::ParamOutOfRange, "beta p = " + std::to_string(yb * p) + " < 2");
  }
  return {ya, yb};
}

std::vector<Entry> build_registry() {
  std::vector<Entry> r;
  auto add = [&r](SpecInfo info, Validator v, Preparer p) { r.push_back({std::move(info), std::move(v), std::move(p)}); };

  // --- Classical inequalities -----------------------------------------------

  add({"SCHWARZ_POS", "Schwarz inequality for positive operators", {"A"}, kXY, {}, {asserted()}, {"psd"}},
      psd_roles({"A"}), [](Context& c) {
        const ComplexMatrix a = c.op("A");
        return one([a](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          const double s = std::abs(inner(a * x, y));
          return Values{s * s, {quad(a, x) * quad(a, y)}};
        }, kXY);
      });

  auto reid = [](bool spectral) {
    return [spectral](Context& c) {
      const ComplexMatrix a = c.op("A");
      const ComplexMatrix ab = a * c.op("B");
      const double k = spectral ? spectral_radius(c.op("B")) : norm(c.op("B"));
      return one([ab, a, k](const VectorMap& v) {
        const auto& x = vec(v, "x");
        return Values{std::abs(inner(ab * x, x)), {k * quad(a, x)}};
      }, kX);
    };
  };
  add({"REID", "Reid's variant of the Schwarz inequality", {"A", "B"}, kX, {}, {asserted()}, {"reid"}}, reid_validator,
      reid(false));
  add({"HALMOS_REID", "Halmos' spectral-radius form of Reid's inequality", {"A", "B"}, kX, {}, {asserted()}, {"reid"}},
      reid_validator, reid(true));

  add({"KATO", "Kato's mixed Schwarz inequality", {"A"}, kXY, {"alpha"}, {asserted()}, {"general"}, 1, false, false,
       alpha_grid()},
      no_hypotheses, [](Context& c) {
        const double al = c.param("alpha", 0.0, 1.0);
        const ComplexMatrix a = c.op("A");
        const ComplexMatrix fa = Modulus(a).power(2.0 * al);
        const ComplexMatrix ga = Modulus(adjoint(a)).power(2.0 * (1.0 - al));
        return one([a, fa, ga](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          const double s = std::abs(inner(a * x, y));
          return Values{s * s, {quad(fa, x) * quad(ga, y)}};
        }, kXY);
      });

  add({"KITTANEH_MIXED", "Kittaneh's mixed Schwarz inequality with an intertwined factor", {"A", "B"}, kXY, {"alpha"},
       {asserted()}, {"thm1", "thm1c"}, 1, true, true, pair_grid()},
      intertwined("A", "B", ""), [](Context& c) {
        const Triple t = make_triple(c, "A", "B", "");
        const ComplexMatrix ab = t.a * t.b;
        return one([ab, t](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          return Values{std::abs(inner(ab * x, y)), {t.rb * image_norm(t.f, x) * image_norm(t.g, y)}};
        }, kXY);
      });

  // --- Halmos-Reid type inequalities for a positive weight T ------------------

  add({"LD1", "Halmos-Reid type bound |<Tx,y>|^2 <= r(T)<Tx,x>||y||^2", {"T"}, kXY, {}, {asserted()}, {"ld"}},
      psd_roles({"T"}), [](Context& c) {
        const ComplexMatrix t = c.op("T");
        const double rt = spectral_radius(t);
        return one([t, rt](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          const double s = std::abs(inner(t * x, y));
          const double ny = vector_norm(y);
          return Values{s * s, {rt * quad(t, x) * ny * ny}};
        }, kXY);
      });

  add({"LD2", "Halmos-Reid type bound with T-selfadjoint S and C", {"T", "S", "C"}, kXY, {}, {asserted()}, {"ld"}},
      ld_validator, [](Context& c) {
        const ComplexMatrix t = c.op("T");
        const ComplexMatrix ts = t * c.op("S");
        const ComplexMatrix cc = c.op("C");
        const double k = spectral_radius(c.op("S")) * spectral_radius(cc);
        return one([t, ts, cc, k](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          return Values{std::abs(inner(ts * x, cc * y)),
                        {k * std::sqrt(std::max(quad(t, x), 0.0)) * std::sqrt(std::max(quad(t, y), 0.0))}};
        }, kXY);
      });

  add({"LD3",
       "Halmos-Reid type bound with one vector",
       {"T", "S", "C"},
       kXY,
       {},
       {{"corrected", true, "|<TSx,Cx>| <= r(S)r(C)<Tx,x>: the y = x case of LD2"},
        measured("printed", "|<TSx,y>| <= r(S)r(C)<Tx,x>: C absent from the left side, y absent from the right")},
       {"ld"}},
      ld_validator, [](Context& c) {
        const ComplexMatrix t = c.op("T");
        const ComplexMatrix ts = t * c.op("S");
        const ComplexMatrix cc = c.op("C");
        const double k = spectral_radius(c.op("S")) * spectral_radius(cc);
        std::vector<FormEval> forms;
        forms.push_back({[t, ts, cc, k](const VectorMap& v) {
                           const auto& x = vec(v, "x");
                           return Values{std::abs(inner(ts * x, cc * x)), {k * quad(t, x)}};
                         },
                         kX});
        forms.push_back({[t, ts, k](const VectorMap& v) {
                           const auto& x = vec(v, "x");
                           const auto& y = vec(v, "y");
                           return Values{std::abs(inner(ts * x, y)), {k * quad(t, x)}};
                         },
                         kXY});
        return forms;
      });

  add({"LD4", "Halmos-Reid type bound for selfadjoint A and B", {"A", "B"}, kXY, {}, {asserted()}, {"ld"}},
      selfadjoint_roles({"A", "B"}), [](Context& c) {
        const ComplexMatrix a = c.op("A");
        const ComplexMatrix b = c.op("B");
        const double k = spectral_radius(a) * spectral_radius(b);
        return one([a, b, k](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          const ComplexVector ax = a * x;
          const ComplexVector by = b * y;
          const double s = std::abs(inner(ax, by));
          return Values{s * s, {k * vector_norm(ax) * vector_norm(by) * vector_norm(x) * vector_norm(y)}};
        }, kXY);
      });

  // --- Classical numerical radius bounds --------------------------------------

  add({"NORM_RADIUS_SANDWICH",
       "numerical radius is equivalent to the operator norm",
       {"A"},
       kNone,
       {},
       {{"lower", true, "||A||/2 <= w(A)"}, {"upper", true, "w(A) <= ||A||"}},
       {"general"}},
      no_hypotheses, [](Context& c) {
        const double w = c.radius(c.op("A"));
        const double nm = norm(c.op("A"));
        return std::vector<FormEval>{{[w, nm](const VectorMap&) { return Values{0.5 * nm, {w}}; }, kNone},
                                     {[w, nm](const VectorMap&) { return Values{w, {nm}}; }, kNone}};
      });

  add({"KITTANEH_2003", "w(A) <= (||A|| + ||A^2||^{1/2})/2", {"A"}, kNone, {}, {asserted()}, {"general"}}, no_hypotheses,
      [](Context& c) {
        const double w = c.radius(c.op("A"));
        const double k = 0.5 * half_bound(c.op("A"));
        return one([w, k](const VectorMap&) { return Values{w, {k}}; }, kNone);
      });

  add({"KITTANEH_2005",
       "||A*A + AA*||/4 <= w^2(A) <= ||A*A + AA*||/2",
       {"A"},
       kNone,
       {},
       {{"lower", true, "||A*A + AA*||/4 <= w^2(A)"}, {"upper", true, "w^2(A) <= ||A*A + AA*||/2"}},
       {"general"}},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const double w = c.radius(a);
        const double s = norm(adjoint(a) * a + a * adjoint(a));
        return std::vector<FormEval>{{[w, s](const VectorMap&) { return Values{0.25 * s, {w * w}}; }, kNone},
                                     {[w, s](const VectorMap&) { return Values{w * w, {0.5 * s}}; }, kNone}};
      });

  add({"YAMAZAKI", "w(A) <= (||A|| + w(Aluthge(A)))/2 <= (||A|| + ||A^2||^{1/2})/2", {"A"}, kNone, {}, {asserted()},
       {"general"}, 2},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const double w = c.radius(a);
        const double nm = norm(a);
        const double wt = c.radius(aluthge(a));
        const double k = 0.5 * half_bound(a);
        return one([=](const VectorMap&) { return Values{w, {0.5 * (nm + wt), k}}; }, kNone);
      });

  add({"DRAGOMIR_BUZANO",
       "Buzano-based bound on w^2(A)",
       {"A"},
       kNone,
       {},
       {{"corrected", true, "w^2(A) <= (||A||^2 + w(A^2))/2, homogeneous of degree 2"},
        measured("printed", "w^2(A) <= (||A|| + w(A^2))/2, not invariant under A -> tA")},
       {"general"}},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const double w = c.radius(a);
        const double w2 = c.radius(a * a);
        const double nm = norm(a);
        return std::vector<FormEval>{{[=](const VectorMap&) { return Values{w * w, {0.5 * (nm * nm + w2)}}; }, kNone},
                                     {[=](const VectorMap&) { return Values{w * w, {0.5 * (nm + w2)}}; }, kNone}};
      });

  // --- Generalised mixed Schwarz inequalities ---------------------------------

  add({"LEMMA_DCV", "|<ADu,Cv>|^2 <= <D*f^2(|A|)Du,u><C*g^2(|A*|)Cv,v>", {"A", "C", "D"}, {"u", "v"}, {"alpha"},
       {asserted()}, {"triple"}, 1, true, false, pair_grid()},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix a = c.op("A");
        const ComplexMatrix d = c.op("D");
        const ComplexMatrix cc = c.op("C");
        const FunctionPair& pr = c.pair();
        const ComplexMatrix fd = Modulus(a).apply(pr.f) * d;
        const ComplexMatrix gc = Modulus(adjoint(a)).apply(pr.g) * cc;
        const ComplexMatrix ad = a * d;
        return one([=](const VectorMap& v) {
          const auto& u = vec(v, "u");
          const auto& w = vec(v, "v");
          const double s = std::abs(inner(ad * u, cc * w));
          const double fu = image_norm(fd, u);
          const double gw = image_norm(gc, w);
          return Values{s * s, {fu * fu * gw * gw}};
        }, {"u", "v"});
      });

  auto mixed = [](bool with_b) {
    return [with_b](Context& c) {
      const Triple t = make_triple(c, "A", with_b ? "B" : "", "C");
      const ComplexMatrix ab = t.a * t.b;
      return one([ab, t](const VectorMap& v) {
        const auto& x = vec(v, "x");
        const auto& u = vec(v, "u");
        return Values{std::abs(inner(ab * x, t.c * u)), {t.rb * t.rc * image_norm(t.f, x) * image_norm(t.g, u)}};
      }, kXU);
    };
  };
  add({"GEN_MIXED_SCHWARZ", "|<ABx,Cu>| <= r(B)r(C)||f(|A|)x|| ||g(|A*|)u||", {"A", "B", "C"}, kXU, {"alpha"},
       {asserted()}, {"thm1", "thm1c"}, 1, true, true, pair_grid()},
      intertwined("A", "B", "C"), mixed(true));
  add({"COR1", "mixed Schwarz inequality with B = I", {"A", "C"}, kXU, {"alpha"}, {asserted()}, {"thm1", "thm1c"}, 1,
       true, true, pair_grid()},
      intertwined("A", "", "C"), mixed(false));

  add({"COR2", "squared power form |<ABx,Cu>|^2 <= r^2(B)r^2(C)<|A|^{2a}x,x><|A*|^{2(1-a)}u,u>", {"A", "B", "C"}, kXU,
       {"alpha"}, {asserted()}, {"thm1", "thm1c"}, 1, false, true, alpha_grid()},
      intertwined("A", "B", "C"), [](Context& c) {
        const double al = c.param("alpha", 0.0, 1.0);
        const Triple t = make_triple(c, "A", "B", "C");
        const ComplexMatrix fa = Modulus(t.a).power(2.0 * al);
        const ComplexMatrix ga = Modulus(adjoint(t.a)).power(2.0 * (1.0 - al));
        const ComplexMatrix ab = t.a * t.b;
        const double k = t.rb * t.rb * t.rc * t.rc;
        return one([=](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& u = vec(v, "u");
          const double s = std::abs(inner(ab * x, t.c * u));
          return Values{s * s, {k * quad(fa, x) * quad(ga, u)}};
        }, kXU);
      });

  add({"COR2_PARTICULAR", "|<Bx,Cu>| <= r(B)r(C) for selfadjoint B, C and unit x, u", {"B", "C"}, kXU, {},
       {asserted()}, {"thm1_identity"}},
      selfadjoint_roles({"B", "C"}), [](Context& c) {
        const ComplexMatrix b = c.op("B");
        const ComplexMatrix cc = c.op("C");
        const double k = spectral_radius(b) * spectral_radius(cc);
        return one([=](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& u = vec(v, "u");
          return Values{std::abs(inner(b * x, cc * u)), {k * vector_norm(x) * vector_norm(u)}};
        }, kXU);
      });

  add({"COR3", "two-operator mixed Schwarz inequality with a Hoelder step", {"A1", "B1", "C1", "A2", "B2", "C2"}, kXU,
       {"alpha", "p"}, {asserted()}, {"multi:2", "multic:2"}, 2, true, true, holder_grid()},
      multi_validator, [](Context& c) {
        const auto [p, q] = c.holder();
        const auto ts = make_triples(c, 2, 2);
        const ComplexMatrix sum = weighted_sum(ts);
        return one([=](const VectorMap& v) { return multi_vector_chain(ts, sum, p, q, vec(v, "x"), vec(v, "u")); },
                   kXU);
      });

  add({"COR4",
       "squared power form of the two-operator inequality",
       {"A1", "B1", "C1", "A2", "B2", "C2"},
       kXU,
       {"alpha"},
       {{"squared", true, "lhs^2 <= (sum of the two power-form products)^2"},
        measured("printed", "lhs^2 <= sum of the squared products; squaring drops the cross term")},
       {"multi:2", "multic:2"},
       1,
       false,
       true,
       alpha_grid()},
      multi_validator, [](Context& c) {
        const auto ts = make_triples(c, 2, 2);
        const ComplexMatrix sum = weighted_sum(ts);
        auto terms = [ts](const ComplexVector& x, const ComplexVector& u) {
          std::vector<double> out;
          for (const auto& t : ts) out.push_back(t.rb * t.rc * image_norm(t.f, x) * image_norm(t.g, u));
          return out;
        };
        std::vector<FormEval> forms;
        forms.push_back({[=](const VectorMap& v) {
                           const auto& x = vec(v, "x");
                           const auto& u = vec(v, "u");
                           const double s = std::abs(inner(sum * x, u));
                           const auto tm = terms(x, u);
                           const double tot = tm[0] + tm[1];
                           return Values{s * s, {tot * tot}};
                         },
                         kXU});
        forms.push_back({[=](const VectorMap& v) {
                           const auto& x = vec(v, "x");
                           const auto& u = vec(v, "u");
                           const double s = std::abs(inner(sum * x, u));
                           const auto tm = terms(x, u);
                           return Values{s * s, {tm[0] * tm[0] + tm[1] * tm[1]}};
                         },
                         kXU});
        return forms;
      });

  add({"MULTI_OP", "k-operator mixed Schwarz inequality with a Hoelder step", {"A1", "B1", "C1", "A2", "B2", "C2", "A3", "B3", "C3"},
       kXU, {"alpha", "p"}, {asserted()}, {"multi:3", "multic:3"}, 2, true, true, holder_grid()},
      multi_validator, [](Context& c) {
        const auto [p, q] = c.holder();
        const auto ts = make_triples(c, 1, 64);
        const ComplexMatrix sum = weighted_sum(ts);
        return one([=](const VectorMap& v) { return multi_vector_chain(ts, sum, p, q, vec(v, "x"), vec(v, "u")); },
                   kXU);
      });

  add({"MULTI_OP_NORM",
       "||sum C_i* A_i B_i|| <= max r(B_i)r(C_i) (sum ||f(|A_i|)||^p)^{1/p} (sum ||g(|A_i*|)||^q)^{1/q}",
       {"A1", "B1", "C1", "A2", "B2", "C2", "A3", "B3", "C3"},
       kNone,
       {"alpha", "p"},
       {{"general", true, ""}, {"identity", true, "B_i = C_i = I: ||sum A_i|| bound"}},
       {"multi:3", "multic:3"},
       1,
       true,
       true,
       holder_grid()},
      multi_validator, [](Context& c) {
        const auto [p, q] = c.holder();
        const auto ts = make_triples(c, 1, 64);
        std::vector<double> fn, gn;
        ComplexMatrix plain(ts.front().a.dim());
        for (const auto& t : ts) {
          fn.push_back(norm(t.f));
          gn.push_back(norm(t.g));
          plain += t.a;
        }
        const double holder_part = lp(fn, p) * lp(gn, q);
        const double general = norm(weighted_sum(ts));
        const double identity = norm(plain);
        const double k = max_rr(ts);
        return std::vector<FormEval>{
            {[=](const VectorMap&) { return Values{general, {k * holder_part}}; }, kNone},
            {[=](const VectorMap&) { return Values{identity, {holder_part}}; }, kNone}};
      });

  // --- Hybrid (Cartesian) inequalities ----------------------------------------

  struct CartesianModuli {
    Modulus p, q;
    explicit CartesianModuli(const ComplexMatrix& a) : p(cartesian(a).real_part), q(cartesian(a).imag_part) {}
  };

  add({"HYBRID", "|<Ax,y>| <= ||f(|P|)x|| ||g(|P|)y|| + ||f(|Q|)x|| ||g(|Q|)y||, A = P + iQ", {"A"}, kXY, {"alpha"},
       {asserted()}, {"general"}, 1, true, false, pair_grid()},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix a = c.op("A");
        const CartesianModuli m(a);
        const FunctionPair& pr = c.pair();
        const ComplexMatrix fp = m.p.apply(pr.f), gp = m.p.apply(pr.g), fq = m.q.apply(pr.f), gq = m.q.apply(pr.g);
        return one([=](const VectorMap& v) {
          const auto& x = vec(v, "x");
          const auto& y = vec(v, "y");
          return Values{std::abs(inner(a * x, y)),
                        {image_norm(fp, x) * image_norm(gp, y) + image_norm(fq, x) * image_norm(gq, y)}};
        }, kXY);
      });

  add({"HYBRID_POWER",
       "power form of the hybrid inequality",
       {"A"},
       kXY,
       {"alpha"},
       {{"corrected", true, "exponents alpha and 1 - alpha, the power pair in the hybrid inequality"},
        measured("printed", "exponents 2 alpha and 2(1 - alpha); not scale invariant")},
       {"general"},
       1,
       false,
       false,
       alpha_grid()},
      no_hypotheses, [](Context& c) {
        const double al = c.param("alpha", 0.0, 1.0);
        const ComplexMatrix a = c.op("A");
        const CartesianModuli m(a);
        auto form = [&](double ex, double ey) {
          const ComplexMatrix fp = m.p.power(ex), gp = m.p.power(ey), fq = m.q.power(ex), gq = m.q.power(ey);
          return FormEval{[=](const VectorMap& v) {
                            const auto& x = vec(v, "x");
                            const auto& y = vec(v, "y");
                            return Values{std::abs(inner(a * x, y)),
                                          {image_norm(fp, x) * image_norm(gp, y) + image_norm(fq, x) * image_norm(gq, y)}};
                          },
                          kXY};
        };
        return std::vector<FormEval>{form(al, 1.0 - al), form(2.0 * al, 2.0 * (1.0 - al))};
      });

  add({"HYBRID_KATO",
       "Cartesian companion of Kato's inequality",
       {"A"},
       kXY,
       {"alpha"},
       {{"diagonal", true, "y = x, where |<Ax,x>|^2 = <Px,x>^2 + <Qx,x>^2 holds"},
        measured("printed", "independent x, y; the square of a sum is bounded by a sum of squares")},
       {"general"},
       1,
       false,
       false,
       alpha_grid()},
      no_hypotheses, [](Context& c) {
        const double al = c.param("alpha", 0.0, 1.0);
        const ComplexMatrix a = c.op("A");
        const CartesianModuli m(a);
        const ComplexMatrix fp = m.p.power(2.0 * al), gp = m.p.power(2.0 * (1.0 - al));
        const ComplexMatrix fq = m.q.power(2.0 * al), gq = m.q.power(2.0 * (1.0 - al));
        auto eval = [=](const ComplexVector& x, const ComplexVector& y) {
          const double s = std::abs(inner(a * x, y));
          return Values{s * s, {quad(fp, x) * quad(gp, y) + quad(fq, x) * quad(gq, y)}};
        };
        return std::vector<FormEval>{{[=](const VectorMap& v) { return eval(vec(v, "x"), vec(v, "x")); }, kX},
                                     {[=](const VectorMap& v) { return eval(vec(v, "x"), vec(v, "y")); }, kXY}};
      });

  // --- Scalar and norm lemmas ---------------------------------------------------

  add({"POWER_YOUNG", "ab <= a^alpha/alpha + b^beta/beta <= (a^{p alpha}/alpha + b^{p beta}/beta)^{1/p}", {}, kNone,
       {"young_alpha", "p"}, {asserted()}, {"scalar"}, 2, false, false,
       [] {
         std::vector<Params> g;
         for (double p : {1.0, 2.0, 3.0})
           for (double ya : {1.5, 2.0, 3.0}) g.push_back({{{"young_alpha", ya}, {"p", p}}, "power", ""});
         return g;
       }()},
      no_hypotheses, [](Context& c) {
        const double ya = c.param("young_alpha", 1.0, 1e6, true);
        const double yb = ya / (ya - 1.0);
        const double p = c.param("p", 1.0, 1e6);
        const auto sc = c.bundle().scalars;
        if (!sc.count("a") || !sc.count("b")) throw Error(ErrorKind::HypothesisViolated, "POWER_YOUNG needs scalars a, b");
        const double a = sc.at("a"), b = sc.at("b");
        if (!(a >= 0.0 && b >= 0.0)) throw Error(ErrorKind::HypothesisViolated, "POWER_YOUNG needs a, b >= 0");
        const double first = std::pow(a, ya) / ya + std::pow(b, yb) / yb;
        const double second = std::pow(std::pow(a, p * ya) / ya + std::pow(b, p * yb) / yb, 1.0 / p);
        return one([=](const VectorMap&) { return Values{a * b, {first, second}}; }, kNone);
      });

  add({"MCCARTY", "<Ax,x>^p <= <A^p x,x> for positive A and unit x", {"A"}, kX, {"p"}, {asserted()}, {"psd"}, 1, false,
       false,
       [] {
         std::vector<Params> g;
         for (double p : {1.0, 1.5, 2.0, 3.0}) g.push_back({{{"p", p}}, "power", ""});
         return g;
       }()},
      psd_roles({"A"}), [](Context& c) {
        const double p = c.param("p", 1.0, 1e6);
        const ComplexMatrix a = c.op("A");
        const ComplexMatrix ap = psd_power(a, p);
        return one([=](const VectorMap& v) {
          const auto& x = vec(v, "x");
          return Values{std::pow(std::max(quad(a, x), 0.0), p), {quad(ap, x)}};
        }, kX);
      });

  add({"SPECTRAL_PRODUCT", "r(AB) <= (||AB|| + ||BA|| + sqrt((||AB|| - ||BA||)^2 + 4m(A,B)))/4", {"A", "B"}, kNone, {},
       {asserted()}, {"pair"}},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const ComplexMatrix& b = c.op("B");
        const double ab = norm(a * b), ba = norm(b * a);
        const double m = std::min(norm(a) * norm(b * a * b), norm(b) * norm(a * b * a));
        const double lhs = spectral_radius(a * b);
        const double rhs = 0.25 * (ab + ba + std::sqrt((ab - ba) * (ab - ba) + 4.0 * m));
        return one([=](const VectorMap&) { return Values{lhs, {rhs}}; }, kNone);
      });

  add({"NORM_SUM", "||A + B|| <= (||A|| + ||B|| + sqrt((||A|| - ||B||)^2 + 4||A^{1/2}B^{1/2}||^2))/2 <= ||A|| + ||B||",
       {"A", "B"}, kNone, {}, {asserted()}, {"psd_pair"}, 2},
      psd_roles({"A", "B"}), [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const ComplexMatrix& b = c.op("B");
        const double na = norm(a), nb = norm(b);
        const double cross = norm(psd_power(a, 0.5) * psd_power(b, 0.5));
        const double lhs = norm(a + b);
        const double first = pair_estimate(na, nb, cross * cross);
        return one([=](const VectorMap&) { return Values{lhs, {first, na + nb}}; }, kNone);
      });

  add({"SQRT_PRODUCT", "||A^{1/2}B^{1/2}|| <= ||AB||^{1/2}", {"A", "B"}, kNone, {}, {asserted()}, {"psd_pair"}},
      psd_roles({"A", "B"}), [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const ComplexMatrix& b = c.op("B");
        const double lhs = norm(psd_power(a, 0.5) * psd_power(b, 0.5));
        const double rhs = std::sqrt(norm(a * b));
        return one([=](const VectorMap&) { return Values{lhs, {rhs}}; }, kNone);
      });

  // --- Numerical radius bounds from the mixed Schwarz inequality ------------------

  // w(C*AB) <= r(B)r(C)||f^2 + g^2||/2 <= (1/16) hb(B) hb(C) {two-operator estimate}.
  auto radius_chain = [](Context& c, const Triple& t, const ComplexMatrix& target, double hb_b, double hb_c) {
    const double lhs = c.radius(target);
    const double first = 0.5 * t.rb * t.rc * norm(t.f2 + t.g2);
    const double cross = norm(t.f * t.g);
    // (1/16) {a + b + sqrt(...)} = (1/8) pair_estimate.
    const double second = hb_b * hb_c / 8.0 * pair_estimate(norm(t.f2), norm(t.g2), cross * cross);
    return Values{lhs, {first, second}};
  };

  auto thm3 = [radius_chain](Context& c) {
    const Triple t = make_triple(c, "A", "B", "C");
    const Values v = radius_chain(c, t, adjoint(t.c) * t.a * t.b, half_bound(t.b), half_bound(t.c));
    return one([v](const VectorMap&) { return v; }, kNone);
  };
  add({"THM3", "w(C*AB) <= r(B)r(C)||f^2(|A|) + g^2(|A*|)||/2 <= norm-based refinement", {"A", "B", "C"}, kNone,
       {"alpha"}, {asserted()}, {"thm1", "thm1c"}, 2, true, true, pair_grid()},
      intertwined("A", "B", "C"), thm3);

  add({"THM3_PARTICULAR", "w(C*C) <= r(C)||f^2(|C|) + g^2(|C*|)||/2 <= norm-based refinement", {"C"}, kNone,
       {"alpha"}, {asserted()}, {"selfadjoint_c"}, 2, true, true, pair_grid()},
      intertwined("C", "", "C"), [radius_chain](Context& c) {
        const Triple t = make_triple(c, "C", "", "C");
        // hb(I) = 2.
        const Values v = radius_chain(c, t, adjoint(t.c) * t.a, 2.0, half_bound(t.c));
        return one([v](const VectorMap&) { return v; }, kNone);
      });

  add({"COR8", "power form of the numerical radius chain", {"A", "B", "C"}, kNone, {"alpha"}, {asserted()},
       {"thm1", "thm1c"}, 2, false, true, alpha_grid()},
      intertwined("A", "B", "C"), thm3);

  add({"REMARK_HALF", "w(C*AB) <= (1/8) hb(B) hb(C) hb(A), hb(X) = ||X|| + ||X^2||^{1/2}", {"A", "B", "C"}, kNone, {},
       {asserted()}, {"thm1", "thm1c"}, 1, false, true},
      intertwined("A", "B", "C"), [](Context& c) {
        Params half;
        half.values["alpha"] = 0.5;
        Context fixed(find_spec("COR8"), c.bundle(), half, 1e-8);
        const Triple t = make_triple(fixed, "A", "B", "C");
        for (const auto& [label, cert] : fixed.gates()) c.gate(label, cert);
        const double lhs = c.radius(adjoint(t.c) * t.a * t.b);
        const double rhs = half_bound(t.b) * half_bound(t.c) * half_bound(t.a) / 8.0;
        return one([=](const VectorMap&) { return Values{lhs, {rhs}}; }, kNone);
      });

  add({"REMARK_CC", "w(C*C) <= (||C|| + ||C^2||^{1/2})^2 / 4", {"C"}, kNone, {}, {asserted()}, {"selfadjoint_c"}},
      intertwined("C", "", "C"), [](Context& c) {
        const ComplexMatrix& cc = c.op("C");
        const double lhs = c.radius(adjoint(cc) * cc);
        const double hb = half_bound(cc);
        return one([=](const VectorMap&) { return Values{lhs, {0.25 * hb * hb}}; }, kNone);
      });

  add({"COR9", "w(C*AC) <= r^2(C)||f^2(|A|) + g^2(|A*|)||/2 <= norm-based refinement", {"A", "C"}, kNone, {"alpha"},
       {asserted()}, {"cor9", "cor9c"}, 2, true, true, pair_grid()},
      cor9_validator, [radius_chain](Context& c) {
        Triple t = make_triple(c, "A", "C", "C");
        const double hb = half_bound(t.c);
        const Values v = radius_chain(c, t, adjoint(t.c) * t.a * t.c, hb, hb);
        return one([v](const VectorMap&) { return v; }, kNone);
      });

  auto thm4_parts = [](Context& c) {
    const double p = c.param("p", 1.0, 1e6);
    const auto [ya, yb] = young(c, p);
    const Triple t = make_triple(c, "A", "B", "C");
    const FunctionPair& pr = c.pair();
    const Modulus ma(t.a), mas(adjoint(t.a));
    struct Parts {
      double lhs, first, prefactor, nf, ng, x_corrected, x_printed;
    } parts;
    const ComplexMatrix fa = ma.apply(pr.f, ya * p), gb = mas.apply(pr.g, yb * p);
    parts.lhs = std::pow(c.radius(adjoint(t.c) * t.a * t.b), p);
    parts.first = std::pow(t.rb * t.rc, p) * norm(Complex(1.0 / ya) * fa + Complex(1.0 / yb) * gb);
    const double gamma = std::max(1.0 / ya, 1.0 / yb);
    parts.prefactor = gamma * std::pow(half_bound(t.b), p) * std::pow(half_bound(t.c), p) / std::pow(2.0, p + 2.0);
    parts.nf = norm(fa);
    parts.ng = norm(gb);
    const double half_cross = norm(ma.apply(pr.f, ya * p / 2.0) * mas.apply(pr.g, yb * p / 2.0));
    const double full_cross = norm(fa * gb);
    parts.x_corrected = half_cross * half_cross;
    parts.x_printed = full_cross * full_cross;
    return parts;
  };

  add({"THM4", "w^p(C*AB) <= r^p(B)r^p(C)||f^{ap}(|A|)/a + g^{bp}(|A*|)/b||", {"A", "B", "C"}, kNone,
       {"alpha", "p", "young_alpha"}, {asserted()}, {"thm1", "thm1c"}, 1, true, true, higher_power_grid()},
      intertwined("A", "B", "C"), [thm4_parts](Context& c) {
        const auto s = thm4_parts(c);
        return one([s](const VectorMap&) { return Values{s.lhs, {s.first}}; }, kNone);
      });

  add({"THM4_REFINED",
       "norm-based refinement of the higher-power bound",
       {"A", "B", "C"},
       kNone,
       {"alpha", "p", "young_alpha"},
       {{"corrected", true, "cross term ||f^{ap/2}(|A|) g^{bp/2}(|A*|)||^2 from the two-operator estimate"},
        measured("printed", "cross term ||f^{ap}(|A|) g^{bp}(|A*|)||^2")},
       {"thm1", "thm1c"},
       2,
       true,
       true,
       higher_power_grid()},
      intertwined("A", "B", "C"), [thm4_parts](Context& c) {
        const auto s = thm4_parts(c);
        auto chain = [s](double x) {
          return Values{s.lhs, {s.first, s.prefactor * 2.0 * pair_estimate(s.nf, s.ng, x)}};
        };
        return std::vector<FormEval>{{[=](const VectorMap&) { return chain(s.x_corrected); }, kNone},
                                     {[=](const VectorMap&) { return chain(s.x_printed); }, kNone}};
      });

  add({"MULTI_OP_W",
       "w(sum C_i* A_i B_i) <= sum r(B_i)r(C_i)||f(|A_i|)|| ||g(|A_i*|)|| <= max r r (Hoelder)",
       {"A1", "B1", "C1", "A2", "B2", "C2", "A3", "B3", "C3"},
       kNone,
       {"alpha", "p"},
       {asserted()},
       {"multi:3", "multic:3"},
       2,
       true,
       true,
       holder_grid()},
      multi_validator, [](Context& c) {
        const auto [p, q] = c.holder();
        const auto ts = make_triples(c, 1, 64);
        std::vector<double> fn, gn;
        double first = 0.0;
        for (const auto& t : ts) {
          fn.push_back(norm(t.f));
          gn.push_back(norm(t.g));
          first += t.rb * t.rc * fn.back() * gn.back();
        }
        const double lhs = c.radius(weighted_sum(ts));
        const double second = max_rr(ts) * lp(fn, p) * lp(gn, q);
        return one([=](const VectorMap&) { return Values{lhs, {first, second}}; }, kNone);
      });

  // --- Numerical radius bounds from the hybrid inequality ---------------------------

  struct HybridParts {
    double w, first, refined;
  };
  auto hybrid_parts = [](Context& c) {
    const ComplexMatrix& a = c.op("A");
    const CartesianModuli m(a);
    const FunctionPair& pr = c.pair();
    const ComplexMatrix fp = m.p.apply(pr.f), fq = m.q.apply(pr.f), gp = m.p.apply(pr.g), gq = m.q.apply(pr.g);
    const ComplexMatrix fp2 = m.p.apply(pr.f, 2.0), fq2 = m.q.apply(pr.f, 2.0);
    const ComplexMatrix gp2 = m.p.apply(pr.g, 2.0), gq2 = m.q.apply(pr.g, 2.0);
    HybridParts h;
    h.w = c.radius(a);
    h.first = std::sqrt(norm(fp2 + fq2)) * std::sqrt(norm(gp2 + gq2));
    const double cf = norm(fp * fq), cg = norm(gp * gq);
    h.refined = std::sqrt(pair_estimate(norm(fp2), norm(fq2), cf * cf)) *
                std::sqrt(pair_estimate(norm(gp2), norm(gq2), cg * cg));
    return h;
  };

  add({"THM5", "w(A) <= ||f^2(|P|) + f^2(|Q|)||^{1/2} ||g^2(|P|) + g^2(|Q|)||^{1/2}", {"A"}, kNone, {"alpha"},
       {asserted()}, {"general"}, 1, true, false, pair_grid()},
      no_hypotheses, [hybrid_parts](Context& c) {
        const auto h = hybrid_parts(c);
        return one([h](const VectorMap&) { return Values{h.w, {h.first}}; }, kNone);
      });

  add({"THM5_REFINED", "two-operator norm estimates applied to both factors of the hybrid radius bound", {"A"}, kNone,
       {"alpha"}, {asserted()}, {"general"}, 2, true, false, pair_grid()},
      no_hypotheses, [hybrid_parts](Context& c) {
        const auto h = hybrid_parts(c);
        return one([h](const VectorMap&) { return Values{h.w, {h.first, h.refined}}; }, kNone);
      });

  add({"REMARK_PQ", "w(A) <= (||P|| + ||Q|| + sqrt((||P|| - ||Q||)^2 + 4|| |P||Q| ||))/2 <= ||P|| + ||Q||", {"A"},
       kNone, {}, {asserted()}, {"general"}, 2},
      no_hypotheses, [](Context& c) {
        const ComplexMatrix& a = c.op("A");
        const CartesianParts pq = cartesian(a);
        const double np = norm(pq.real_part), nq = norm(pq.imag_part);
        const double cross = norm(absolute_value(pq.real_part) * absolute_value(pq.imag_part));
        const double w = c.radius(a);
        const double first = pair_estimate(np, nq, cross);
        return one([=](const VectorMap&) { return Values{w, {first, np + nq}}; }, kNone);
      });

  return r;
}

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r = build_registry();
  return r;
}

const Entry& find_entry(const std::string& id) {
  for (const auto& e : registry())
    if (e.info.id == id) return e;
  throw Error(ErrorKind::UnknownSpec, "'" + id + "'");
}

double score(const InequalityResult& r) {
  if (r.sharpness) return *r.sharpness;
  return r.lhs > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

bool worse(const InequalityResult& a, const InequalityResult& b) {
  if (a.satisfied != b.satisfied) return !a.satisfied;
  return score(a) > score(b);
}

}  // namespace

double Params::get(const std::string& key) const {
  const auto it = values.find(key);
  if (it == values.end()) throw Error(ErrorKind::ParamOutOfRange, "missing parameter '" + key + "'");
  return it->second;
}

FunctionPair Params::function_pair() const { return FunctionPair::named(pair, values); }

void finalize(InequalityResult& r) {
  if (r.rhs.empty()) throw Error(ErrorKind::DimensionMismatch, "result without a right-hand side");
  const double r0 = r.rhs.front();
  r.slack = r0 - r.lhs;
  r.relative_slack = r.slack / std::max(1.0, r0);
  r.sharpness.reset();
  if (r0 > 0.0) r.sharpness = r.lhs / r0;
  r.satisfied = r.slack >= -r.tol * std::max(1.0, std::abs(r0));
  r.chain_monotone = true;
  for (std::size_t i = 1; i < r.rhs.size(); ++i) {
    if (r.rhs[i] < r.rhs[i - 1] - r.tol * std::max(1.0, std::abs(r.rhs[i - 1]))) r.chain_monotone = false;
  }
}

InequalityResult PreparedForm::evaluate(const VectorMap& v) const {
  for (const auto& role : vectors) {
    if (vec(v, role.c_str()).size() != n) {
      throw Error(ErrorKind::DimensionMismatch, "vector '" + role + "' has the wrong length");
    }
  }
  const Values vals = values(v);
  InequalityResult r;
  r.id = id;
  r.form = info.name;
  r.lhs = vals.lhs;
  r.rhs = vals.rhs;
  r.asserted = asserted;
  r.tol = tol;
  r.flags = flags;
  r.recipe = recipe;
  r.seed = seed;
  r.n = n;
  r.params = params;
  r.params.form = info.name;
  finalize(r);
  return r;
}

const PreparedForm& PreparedSpec::form(const std::string& name) const {
  if (name.empty()) return forms.front();
  for (const auto& f : forms)
    if (f.info.name == name) return f;
  throw Error(ErrorKind::ParamOutOfRange, spec->id + " has no form '" + name + "'");
}

const std::vector<SpecInfo>& list_specs() {
  static const std::vector<SpecInfo> infos = [] {
    std::vector<SpecInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return infos;
}

const SpecInfo& find_spec(const std::string& id) {
  for (const auto& s : list_specs())
    if (s.id == id) return s;
  throw Error(ErrorKind::UnknownSpec, "'" + id + "'");
}

std::map<std::string, Certificate> validate(const std::string& id, const InstanceBundle& bundle) {
  return find_entry(id).validator(bundle);
}

PreparedSpec prepare(const std::string& id, const InstanceBundle& bundle, const Params& params, double tol,
                     bool check_hypotheses) {
  if (!(tol >= 1e-12)) throw Error(ErrorKind::BadRange, "tol must be >= 1e-12");
  const Entry& e = find_entry(id);
  for (const auto& role : e.info.roles)
    if (role.size() == 1) bundle.at(role);
  if (check_hypotheses) {
    for (const auto& [label, cert] : e.validator(bundle)) {
      if (!cert.passes()) {
        std::ostringstream os;
        os << id << ": certificate " << label << " residual " << cert.residual << " exceeds 1e-8 * " << cert.scale;
        throw Error(ErrorKind::HypothesisViolated, os.str());
      }
    }
  }
  Context ctx(e.info, bundle, params, tol);
  std::vector<FormEval> evals = e.prepare(ctx);

  bool gates_pass = true;
  std::vector<std::string> gate_flags;
  for (const auto& [label, cert] : ctx.gates()) {
    if (!cert.passes()) {
      gates_pass = false;
      gate_flags.push_back("calculus_certificate_failed:" + label);
    }
  }

  PreparedSpec out;
  out.spec = &e.info;
  std::size_t n = 0;
  for (const auto& [role, m] : bundle.operators) n = std::max(n, m.dim());
  for (std::size_t i = 0; i < evals.size(); ++i) {
    PreparedForm f;
    f.info = e.info.forms.at(i);
    // Unchecked runs assert every asserted form: the gate is a hypothesis too.
    const bool demoted = e.info.calculus_gated && !gates_pass && check_hypotheses;
    f.asserted = f.info.asserted && !demoted;
    if (!f.info.asserted) f.flags.push_back("measured_form");
    if (demoted) f.flags.push_back("measured_calculus");
    if (e.info.calculus_gated && !gates_pass) f.flags.insert(f.flags.end(), gate_flags.begin(), gate_flags.end());
    if (id == "LD3") f.flags.push_back("ld3_printed_ambiguity");
    if (!check_hypotheses) f.flags.push_back("hypotheses_unchecked");
    f.vectors = evals[i].vectors;
    f.values = std::move(evals[i].values);
    f.id = id;
    f.recipe = bundle.recipe;
    f.seed = bundle.seed;
    f.n = n;
    f.params = params;
    f.tol = tol;
    out.forms.push_back(std::move(f));
  }
  return out;
}

InequalityResult evaluate(const std::string& id, const InstanceBundle& bundle, const VectorMap& vectors,
                          const Params& params, double tol, bool check_hypotheses) {
  const PreparedSpec p = prepare(id, bundle, params, tol, check_hypotheses);
  return p.form(params.form).evaluate(vectors);
}

VectorMap random_vectors(const PreparedForm& form, std::size_t n, Rng& rng) {
  VectorMap v;
  for (const auto& role : form.vectors) v[role] = random_unit_vector(n, rng);
  return v;
}

InequalityResult sup_search(const PreparedForm& form, int restarts, Rng& rng) {
  if (restarts < 1) throw Error(ErrorKind::BadRange, "sup_search needs at least one restart");
  if (form.vector_free()) return form.evaluate({});
  constexpr int kSteps = 60;
  const std::size_t n = form.n;
  std::optional<InequalityResult> worst;
  for (int r = 0; r < restarts; ++r) {
    VectorMap v;
    if (r == 0) {
      const ComplexVector shared = random_unit_vector(n, rng);
      for (const auto& role : form.vectors) v[role] = shared;
    } else {
      v = random_vectors(form, n, rng);
    }
    InequalityResult current = form.evaluate(v);
    double sigma = 0.3;
    for (int step = 0; step < kSteps && sigma > 1e-6; ++step) {
      VectorMap trial = v;
      for (auto& [role, x] : trial) {
        for (auto& z : x) z += sigma * Complex(rng.normal(), rng.normal());
        const double nx = vector_norm(x);
        if (nx == 0.0) continue;
        for (auto& z : x) z /= nx;
      }
      InequalityResult candidate = form.evaluate(trial);
      if (worse(candidate, current)) {
        v = std::move(trial);
        current = std::move(candidate);
        sigma = std::min(1.0, sigma * 1.5);
      } else {
        sigma *= 0.7;
      }
    }
    if (!worst || worse(current, *worst)) worst = std::move(current);
  }
  worst->flags.push_back("sup_search");
  return *worst;
}

InequalityResult sup_search(const std::string& id, const InstanceBundle& bundle, const Params& params, int restarts,
                            Rng& rng, double tol) {
  const PreparedSpec p = prepare(id, bundle, params, tol);
  return sup_search(p.form(params.form), restarts, rng);
}

}  // namespace opineq
