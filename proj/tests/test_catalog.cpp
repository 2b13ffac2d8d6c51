#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "opineq/catalog.hpp"
#include "opineq/error.hpp"
#include "opineq/radii.hpp"

using namespace opineq;

namespace {

ComplexVector e(std::size_t n, std::size_t i) {
  ComplexVector v(n);
  v[i] = 1.0;
  return v;
}

ComplexMatrix diag(std::vector<double> d) { return ComplexMatrix::diagonal(std::span<const double>(d)); }

InstanceBundle user(std::map<std::string, ComplexMatrix> ops, std::string recipe = "user") {
  InstanceBundle b;
  b.recipe = std::move(recipe);
  b.n = ops.begin()->second.dim();
  b.operators = std::move(ops);
  return b;
}

Params alpha(double a, std::string form = "") { return {{{"alpha", a}}, "power", std::move(form)}; }

Params form(std::string name) { return {{}, "power", std::move(name)}; }

ComplexMatrix nilpotent(double s = 1.0) { return ComplexMatrix::from_rows({{0, s}, {0, 0}}); }

ErrorKind kind_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& err) {
    return err.kind();
  }
  ADD_FAILURE() << "no Error thrown";
  return ErrorKind::ParseError;
}

Params grid_params(const SpecInfo& s, std::size_t i) { return s.grid.empty() ? Params{} : s.grid[i % s.grid.size()]; }

}  // namespace

// --- Registry -------------------------------------------------------------------

TEST(Registry, StableUniqueAndComplete) {
  const auto& specs = list_specs();
  EXPECT_EQ(specs.size(), 43u);
  std::set<std::string> ids;
  for (const auto& s : specs) {
    EXPECT_TRUE(ids.insert(s.id).second) << s.id;
    EXPECT_FALSE(s.anchor.empty()) << s.id;
    EXPECT_FALSE(s.forms.empty()) << s.id;
    EXPECT_FALSE(s.recipes.empty()) << s.id;
  }
  EXPECT_TRUE(ids.count("GEN_MIXED_SCHWARZ"));
  EXPECT_EQ(&list_specs(), &specs);
  EXPECT_EQ(kind_of([] { find_spec("NOPE"); }), ErrorKind::UnknownSpec);
}

TEST(Registry, OnlyDocumentedFormsAreMeasured) {
  const std::set<std::pair<std::string, std::string>> expected = {
      {"LD3", "printed"},          {"DRAGOMIR_BUZANO", "printed"}, {"COR4", "printed"},
      {"HYBRID_POWER", "printed"}, {"HYBRID_KATO", "printed"},     {"THM4_REFINED", "printed"}};
  std::set<std::pair<std::string, std::string>> found;
  for (const auto& s : list_specs())
    for (const auto& f : s.forms)
      if (!f.asserted) found.insert({s.id, f.name});
  EXPECT_EQ(found, expected);
}

// --- Documented examples --------------------------------------------------------------

TEST(Evaluate, SchwarzEqualityAtIdentity) {
  const auto r = evaluate("SCHWARZ_POS", user({{"A", ComplexMatrix::identity(2)}}), {{"x", e(2, 0)}, {"y", e(2, 0)}}, {});
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs[0], 1.0);
  EXPECT_DOUBLE_EQ(r.slack, 0.0);
  EXPECT_TRUE(r.satisfied);
}

TEST(Evaluate, KatoDiagonalEquality) {
  const auto r = evaluate("KATO", user({{"A", diag({2, 3})}}), {{"x", e(2, 0)}, {"y", e(2, 0)}}, alpha(0.5));
  EXPECT_NEAR(r.lhs, 4.0, 1e-14);
  EXPECT_NEAR(r.rhs[0], 4.0, 1e-13);
  EXPECT_NEAR(r.slack, 0.0, 1e-13);
}

TEST(Evaluate, Kittaneh2005LowerBoundAttainedOnJordanBlock) {
  // A*A + AA* = I, w = 1/2.
  const auto r = evaluate("KITTANEH_2005", user({{"A", nilpotent()}}), {}, form("lower"));
  EXPECT_NEAR(r.lhs, 0.25, 1e-14);
  EXPECT_NEAR(r.rhs[0], 0.25, 1e-9);
  EXPECT_LE(std::abs(r.slack), 1e-8);
  const auto up = evaluate("KITTANEH_2005", user({{"A", nilpotent()}}), {}, form("upper"));
  EXPECT_NEAR(up.rhs[0], 0.5, 1e-14);
}

TEST(Evaluate, SpectralProductAtIdentity) {
  const auto i2 = ComplexMatrix::identity(2);
  const auto r = evaluate("SPECTRAL_PRODUCT", user({{"A", i2}, {"B", i2}}), {}, {});
  EXPECT_NEAR(r.lhs, 1.0, 1e-14);
  EXPECT_NEAR(r.rhs[0], 1.0, 1e-14);
}

TEST(Evaluate, PowerYoungUnitCase) {
  InstanceBundle b;
  b.recipe = "scalar";
  b.scalars = {{"a", 1.0}, {"b", 1.0}};
  const auto r = evaluate("POWER_YOUNG", b, {}, {{{"young_alpha", 2.0}, {"p", 1.0}}, "power", ""});
  EXPECT_DOUBLE_EQ(r.lhs, 1.0);
  EXPECT_DOUBLE_EQ(r.rhs[0], 1.0);
  EXPECT_DOUBLE_EQ(r.rhs[1], 1.0);
  EXPECT_TRUE(r.chain_monotone);
}

TEST(Evaluate, McCartyHandArithmetic) {
  // <Ax,x> = 5/2, so lhs = 25/4; <A^2 x,x> = (1 + 16)/2.
  const ComplexVector x = {1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0)};
  const auto r = evaluate("MCCARTY", user({{"A", diag({1, 4})}}), {{"x", x}}, {{{"p", 2.0}}, "power", ""});
  EXPECT_NEAR(r.lhs, 6.25, 1e-13);
  EXPECT_NEAR(r.rhs[0], 8.5, 1e-13);
}

TEST(Evaluate, YamazakiFirstBoundAttainedOnJordanBlock) {
  // The Aluthge transform of the Jordan block vanishes: w = ||A||/2.
  const auto r = evaluate("YAMAZAKI", user({{"A", nilpotent()}}), {}, {});
  EXPECT_NEAR(r.lhs, 0.5, 1e-9);
  EXPECT_LE(std::abs(r.slack), 1e-8);
  EXPECT_NEAR(r.rhs[1], 0.5, 1e-14);
}

TEST(Evaluate, SandwichSharpness) {
  const auto lower = evaluate("NORM_RADIUS_SANDWICH", user({{"A", nilpotent()}}), {}, form("lower"));
  EXPECT_GE(*lower.sharpness, 1.0 - 1e-6);
  const auto upper = evaluate("NORM_RADIUS_SANDWICH", user({{"A", diag({-3, 1})}}), {}, form("upper"));
  EXPECT_GE(*upper.sharpness, 1.0 - 1e-6);
}

// --- Errors ------------------------------------------------------------------------

TEST(Evaluate, RejectsViolatedHypothesis) {
  EXPECT_EQ(kind_of([] { evaluate("SCHWARZ_POS", user({{"A", diag({1, -1})}}), {{"x", e(2, 0)}, {"y", e(2, 1)}}, {}); }),
            ErrorKind::HypothesisViolated);
  EXPECT_EQ(kind_of([] { evaluate("GEN_MIXED_SCHWARZ", user({{"A", diag({1, 2})}}), {}, alpha(0.5)); }),
            ErrorKind::HypothesisViolated);
}

TEST(Evaluate, RejectsParametersOutOfRange) {
  const auto b = user({{"A", diag({1, 2})}});
  const VectorMap v = {{"x", e(2, 0)}, {"y", e(2, 1)}};
  EXPECT_EQ(kind_of([&] { evaluate("KATO", b, v, alpha(1.5)); }), ErrorKind::ParamOutOfRange);
  EXPECT_EQ(kind_of([&] { evaluate("KATO", b, v, {}); }), ErrorKind::ParamOutOfRange);
  EXPECT_EQ(kind_of([&] { evaluate("NORM_RADIUS_SANDWICH", b, {}, form("middle")); }), ErrorKind::ParamOutOfRange);
  EXPECT_EQ(kind_of([&] { evaluate("UNKNOWN", b, {}, {}); }), ErrorKind::UnknownSpec);
  Rng rng(1);
  const auto t = make_instance("thm1", 3, rng);
  Params bad = {{{"alpha", 0.5}, {"p", 1.0}, {"young_alpha", 1.5}}, "power", ""};
  EXPECT_EQ(kind_of([&] { evaluate("THM4", t, {}, bad); }), ErrorKind::ParamOutOfRange);
}

TEST(Finalize, DerivedFieldsArePure) {
  InequalityResult r;
  r.lhs = 2.0;
  r.rhs = {1.0, 0.5};
  r.tol = 1e-8;
  finalize(r);
  EXPECT_FALSE(r.satisfied);
  EXPECT_FALSE(r.chain_monotone);
  EXPECT_DOUBLE_EQ(r.slack, -1.0);
  EXPECT_DOUBLE_EQ(*r.sharpness, 2.0);
  r.lhs = 1.0 + 5e-9;
  r.rhs = {1.0, 1.0 - 5e-9};
  finalize(r);
  EXPECT_TRUE(r.satisfied);
  EXPECT_TRUE(r.chain_monotone);
  r.rhs = {0.0};
  r.lhs = 0.0;
  finalize(r);
  EXPECT_FALSE(r.sharpness.has_value());
}

// --- Counterexamples behind every measured form -----------------------------------------

TEST(Counterexample, IntertwiningDoesNotCarryToOtherFunctions) {
  // |A| = diag(1, 4) intertwines B; at alpha = 0, f^2(|A|) = I does not.
  const auto b = user({{"A", diag({1, 4})}, {"B", ComplexMatrix::from_rows({{0, 2}, {0.5, 0}})}});
  const auto r = evaluate("KITTANEH_MIXED", b, {{"x", e(2, 1)}, {"y", e(2, 0)}}, alpha(0.0));
  EXPECT_NEAR(r.lhs, 2.0, 1e-14);
  EXPECT_NEAR(r.rhs[0], 1.0, 1e-12);
  EXPECT_FALSE(r.satisfied);
  EXPECT_FALSE(r.asserted);
  // At alpha = 1/2 the certificate holds and the row is asserted.
  const auto half = evaluate("KITTANEH_MIXED", b, {{"x", e(2, 1)}, {"y", e(2, 0)}}, alpha(0.5));
  EXPECT_TRUE(half.asserted);
  EXPECT_TRUE(half.satisfied);
}

TEST(Counterexample, LD3PrintedFormIgnoresC) {
  const auto i2 = ComplexMatrix::identity(2);
  const auto b = user({{"T", i2}, {"S", i2}, {"C", Complex(0.1) * i2}});
  const VectorMap v = {{"x", e(2, 0)}, {"y", e(2, 0)}};
  const auto printed = evaluate("LD3", b, v, form("printed"));
  EXPECT_FALSE(printed.satisfied);
  EXPECT_FALSE(printed.asserted);
  const auto corrected = evaluate("LD3", b, v, form("corrected"));
  EXPECT_TRUE(corrected.satisfied);
  EXPECT_NEAR(corrected.slack, 0.0, 1e-14);
  for (const auto& r : {printed, corrected}) {
    EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "ld3_printed_ambiguity"), r.flags.end());
  }
}

TEST(Counterexample, DragomirBuzanoPrintedFormFailsOnScaledJordanBlock) {
  // w(10 J) = 5, (10 J)^2 = 0: printed bound 5 < 25, corrected bound 50.
  const auto b = user({{"A", nilpotent(10.0)}});
  const auto printed = evaluate("DRAGOMIR_BUZANO", b, {}, form("printed"));
  EXPECT_NEAR(printed.lhs, 25.0, 1e-7);
  EXPECT_NEAR(printed.rhs[0], 5.0, 1e-9);
  EXPECT_FALSE(printed.satisfied);
  const auto corrected = evaluate("DRAGOMIR_BUZANO", b, {}, form("corrected"));
  EXPECT_NEAR(corrected.rhs[0], 50.0, 1e-9);
  EXPECT_TRUE(corrected.satisfied);
}

TEST(Counterexample, Cor4PrintedFormDropsCrossTerm) {
  const auto i2 = ComplexMatrix::identity(2);
  const auto b = user({{"A1", i2}, {"B1", i2}, {"C1", i2}, {"A2", i2}, {"B2", i2}, {"C2", i2}});
  const VectorMap v = {{"x", e(2, 0)}, {"u", e(2, 0)}};
  const auto printed = evaluate("COR4", b, v, alpha(0.5, "printed"));
  EXPECT_NEAR(printed.lhs, 4.0, 1e-14);
  EXPECT_NEAR(printed.rhs[0], 2.0, 1e-14);
  EXPECT_FALSE(printed.satisfied);
  const auto squared = evaluate("COR4", b, v, alpha(0.5, "squared"));
  EXPECT_NEAR(squared.rhs[0], 4.0, 1e-14);
  EXPECT_TRUE(squared.satisfied);
}

TEST(Counterexample, HybridPowerPrintedExponentsAreNotScaleInvariant) {
  // A = I/2: P = I/2, Q = 0; printed rhs (1/2)^2 < |<Ax,x>| = 1/2.
  const auto b = user({{"A", Complex(0.5) * ComplexMatrix::identity(2)}});
  const VectorMap v = {{"x", e(2, 0)}, {"y", e(2, 0)}};
  const auto printed = evaluate("HYBRID_POWER", b, v, alpha(0.5, "printed"));
  EXPECT_NEAR(printed.rhs[0], 0.25, 1e-14);
  EXPECT_FALSE(printed.satisfied);
  const auto corrected = evaluate("HYBRID_POWER", b, v, alpha(0.5, "corrected"));
  EXPECT_NEAR(corrected.rhs[0], 0.5, 1e-14);
  EXPECT_TRUE(corrected.satisfied);
}

TEST(Counterexample, HybridKatoPrintedFormNeedsEqualVectors) {
  // A = [[0,2],[0,0]]: |P| = |Q| = I; |<Ae2,e1>|^2 = 4 > 2.
  const auto b = user({{"A", nilpotent(2.0)}});
  const auto printed = evaluate("HYBRID_KATO", b, {{"x", e(2, 1)}, {"y", e(2, 0)}}, alpha(0.3, "printed"));
  EXPECT_NEAR(printed.lhs, 4.0, 1e-14);
  EXPECT_NEAR(printed.rhs[0], 2.0, 1e-12);
  EXPECT_FALSE(printed.satisfied);
  const auto diagonal = evaluate("HYBRID_KATO", b, {{"x", e(2, 1)}}, alpha(0.3, "diagonal"));
  EXPECT_TRUE(diagonal.satisfied);
}

TEST(Counterexample, Thm4RefinedPrintedCrossTermBreaksChain) {
  // A = I/2, B = C = I, p = 1, alpha = beta = 2, f = g = t^{1/2}: corrected chain is
  // tight at 1/2; the printed cross term ||FG||^2 = 1/16 drops the bound to 3/8.
  const auto i2 = ComplexMatrix::identity(2);
  const auto b = user({{"A", Complex(0.5) * i2}, {"B", i2}, {"C", i2}});
  Params p = {{{"alpha", 0.5}, {"p", 1.0}, {"young_alpha", 2.0}}, "power", "printed"};
  const auto printed = evaluate("THM4_REFINED", b, {}, p);
  EXPECT_NEAR(printed.rhs[1], 0.375, 1e-12);
  EXPECT_FALSE(printed.chain_monotone);
  p.form = "corrected";
  const auto corrected = evaluate("THM4_REFINED", b, {}, p);
  EXPECT_NEAR(corrected.lhs, 0.5, 1e-9);
  EXPECT_NEAR(corrected.rhs[0], 0.5, 1e-12);
  EXPECT_NEAR(corrected.rhs[1], 0.5, 1e-12);
  EXPECT_TRUE(corrected.chain_monotone);
}

// --- Presets agree with their parents ----------------------------------------------------

TEST(Presets, AgreeWithParentEntries) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const double al = 0.25 * (trial % 5);
    const auto b = make_instance("thm1c", n, rng);
    const VectorMap v = {{"x", random_unit_vector(n, rng)}, {"u", random_unit_vector(n, rng)}};

    // COR1 = GEN_MIXED_SCHWARZ with B = I.
    auto b_id = b;
    b_id.operators["B"] = ComplexMatrix::identity(n);
    const auto c1 = evaluate("COR1", b, v, alpha(al));
    const auto g1 = evaluate("GEN_MIXED_SCHWARZ", b_id, v, alpha(al));
    EXPECT_NEAR(c1.lhs, g1.lhs, 1e-12);
    EXPECT_NEAR(c1.rhs[0], g1.rhs[0], 1e-12);

    // COR2 = square of the power form.
    const auto c2 = evaluate("COR2", b, v, alpha(al));
    const auto g2 = evaluate("GEN_MIXED_SCHWARZ", b, v, alpha(al));
    EXPECT_NEAR(c2.lhs, g2.lhs * g2.lhs, 1e-12);
    EXPECT_NEAR(c2.rhs[0], g2.rhs[0] * g2.rhs[0], 1e-11 * std::max(1.0, c2.rhs[0]));

    // COR8 = THM3 with the power pair.
    const auto c8 = evaluate("COR8", b, {}, alpha(al));
    const auto t3 = evaluate("THM3", b, {}, alpha(al));
    EXPECT_EQ(c8.lhs, t3.lhs);
    EXPECT_NEAR(c8.rhs[0], t3.rhs[0], 1e-12);
    EXPECT_NEAR(c8.rhs[1], t3.rhs[1], 1e-12);

    // HYBRID_POWER corrected = HYBRID with the power pair.
    const auto a = make_instance("general", n, rng);
    const VectorMap xy = {{"x", v.at("x")}, {"y", v.at("u")}};
    const auto hp = evaluate("HYBRID_POWER", a, xy, alpha(al, "corrected"));
    const auto hy = evaluate("HYBRID", a, xy, alpha(al));
    EXPECT_NEAR(hp.lhs, hy.lhs, 1e-12);
    EXPECT_NEAR(hp.rhs[0], hy.rhs[0], 1e-12);

    // HYBRID_KATO printed = HYBRID_POWER corrected, squared, when Q = 0.
    const auto h = make_instance("hermitian", n, rng);
    const auto hk = evaluate("HYBRID_KATO", h, xy, alpha(al, "printed"));
    const auto hpc = evaluate("HYBRID_POWER", h, xy, alpha(al, "corrected"));
    EXPECT_NEAR(hk.lhs, hpc.lhs * hpc.lhs, 1e-12);
    EXPECT_NEAR(hk.rhs[0], hpc.rhs[0] * hpc.rhs[0], 1e-11 * std::max(1.0, hk.rhs[0]));
  }
}

TEST(Presets, Cor4SquaredIsCor3FirstBoundSquared) {
  Rng rng(78);
  for (int trial = 0; trial < 20; ++trial) {
    const auto b = make_instance("multic:2", 3, rng);
    const VectorMap v = {{"x", random_unit_vector(3, rng)}, {"u", random_unit_vector(3, rng)}};
    const double al = 0.25 * (trial % 5);
    const auto c4 = evaluate("COR4", b, v, alpha(al, "squared"));
    Params p3 = alpha(al);
    p3.values["p"] = 2.0;
    const auto c3 = evaluate("COR3", b, v, p3);
    EXPECT_NEAR(c4.lhs, c3.lhs * c3.lhs, 1e-12);
    EXPECT_NEAR(c4.rhs[0], c3.rhs[0] * c3.rhs[0], 1e-11 * std::max(1.0, c4.rhs[0]));
  }
}

// --- Dominance claims --------------------------------------------------------------------

TEST(Dominance, NormSumAndRemarkPQBeatTheTriangleBound) {
  Rng rng(79);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = 2 + trial % 5;
    const auto ns = evaluate("NORM_SUM", make_instance("psd_pair", n, rng), {}, {});
    EXPECT_LE(ns.rhs[0], ns.rhs[1] + 1e-10);
    const auto pq = evaluate("REMARK_PQ", make_instance("general", n, rng), {}, {});
    EXPECT_LE(pq.rhs[0], pq.rhs[1] + 1e-10);
  }
}

// --- Soundness on generated instances ------------------------------------------------------

TEST(Soundness, AssertedFormsHoldOnGeneratedInstances) {
  for (const auto& spec : list_specs()) {
    for (std::size_t i = 0; i < 24; ++i) {
      const std::size_t n = 2 + i % 3;
      Rng rng(Rng::split(5, spec.id, n, i));
      const auto& recipe = spec.recipes[i % spec.recipes.size()];
      const auto bundle = make_instance(recipe, n, rng);
      const Params params = grid_params(spec, i / spec.recipes.size());
      const auto prepared = prepare(spec.id, bundle, params);
      for (const auto& f : prepared.forms) {
        for (int s = 0; s < 3; ++s) {
          const auto r = f.evaluate(random_vectors(f, n, rng));
          if (r.asserted) {
            EXPECT_TRUE(r.satisfied) << spec.id << "/" << f.info.name << " recipe " << recipe << " slack " << r.slack;
            EXPECT_TRUE(r.chain_monotone) << spec.id << "/" << f.info.name;
          }
        }
      }
    }
  }
}

TEST(Soundness, CommutingRecipesAssertEveryPair) {
  Rng rng(80);
  for (const auto& p : list_specs().front().grid.empty() ? find_spec("GEN_MIXED_SCHWARZ").grid : list_specs().front().grid) {
    const auto b = make_instance("thm1c", 4, rng);
    const auto r = evaluate("GEN_MIXED_SCHWARZ", b, {{"x", random_unit_vector(4, rng)}, {"u", random_unit_vector(4, rng)}}, p);
    EXPECT_TRUE(r.asserted);
    EXPECT_TRUE(r.satisfied);
  }
}

TEST(Soundness, SingularFixtures) {
  const std::vector<std::string> ids = {"GEN_MIXED_SCHWARZ", "COR1", "KITTANEH_MIXED", "THM3",
                                        "COR8",              "THM4", "THM4_REFINED",   "REMARK_HALF"};
  Rng rng(81);
  for (std::size_t n : {2u, 3u, 5u}) {
    for (const auto& b : singular_fixtures(n)) {
      for (const auto& id : ids) {
        const auto& spec = find_spec(id);
        for (std::size_t g = 0; g < std::max<std::size_t>(1, spec.grid.size()); ++g) {
          const auto prepared = prepare(id, b, grid_params(spec, g));
          for (const auto& f : prepared.forms) {
            const auto r = sup_search(f, 2, rng);
            EXPECT_EQ(r.asserted, f.info.asserted) << id;
            if (r.asserted) EXPECT_TRUE(r.satisfied) << id << " n=" << n << " slack " << r.slack;
          }
        }
      }
    }
  }
}

// --- Search ---------------------------------------------------------------------------------

TEST(SupSearch, SandwichUpperIsTightOnHermitian) {
  Rng rng(82);
  for (int trial = 0; trial < 20; ++trial) {
    const auto h = make_instance("hermitian", 4, rng);
    const auto r = sup_search("NORM_RADIUS_SANDWICH", h, form("upper"), 4, rng);
    EXPECT_GE(*r.sharpness, 1.0 - 1e-6);
  }
}

TEST(SupSearch, SchwarzAtIdentityReachesOne) {
  Rng rng(83);
  const auto r = sup_search("SCHWARZ_POS", user({{"A", ComplexMatrix::identity(3)}}), {}, 4, rng);
  EXPECT_NEAR(*r.sharpness, 1.0, 1e-12);
}

TEST(SupSearch, KatoEqualityCaseOfTheMixedInequality) {
  // B = C = I, A positive, alpha = 1/2: |<Ax,x>| = ||A^{1/2}x||^2.
  Rng rng(84);
  auto b = user({{"A", random_psd(4, 0.1, 2.0, rng)},
                 {"B", ComplexMatrix::identity(4)},
                 {"C", ComplexMatrix::identity(4)}});
  const auto r = sup_search("GEN_MIXED_SCHWARZ", b, alpha(0.5), 4, rng);
  EXPECT_NEAR(*r.sharpness, 1.0, 1e-9);
  EXPECT_TRUE(r.satisfied);
}

// --- Hypotheses are load-bearing ----------------------------------------------------------------

TEST(Mutation, BreakingIntertwiningProducesViolations) {
  int violations = 0;
  for (std::size_t trial = 0; trial < 300 && violations == 0; ++trial) {
    const std::size_t n = 2 + trial % 3;
    Rng rng(Rng::split(6, "mutation", n, trial));
    auto b = make_instance("thm1", n, rng);
    const ComplexMatrix noise = ginibre(n, rng);
    b.operators["B"] = b.at("B") + Complex(0.5 * frobenius_norm(b.at("B")) / frobenius_norm(noise)) * noise;
    EXPECT_FALSE(recompute_certificates(b).at("intertwine_A_B").passes());
    const auto prepared = prepare("GEN_MIXED_SCHWARZ", b, alpha(0.5), 1e-8, false);
    const auto r = sup_search(prepared.forms.front(), 4, rng);
    if (!r.satisfied) ++violations;
  }
  EXPECT_GE(violations, 1);
}

// --- Induction device ---------------------------------------------------------------------------

TEST(InductionDevice, HoldsForFirstTwoLevels) {
  // |<ABx,Cu>|^{2^k} <= <f^2 B^{2^k} x,x><f^2 x,x>^{2^{k-1}-1} <g^2 C^{2^k} u,u><g^2 u,u>^{2^{k-1}-1}.
  Rng rng(85);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto b = make_instance("thm1c", n, rng);
    const auto pair = FunctionPair::power(0.25 * (trial % 5));
    const auto& a = b.at("A");
    const ComplexMatrix fa = apply_function(pair, PairSide::F, absolute_value(a));
    const ComplexMatrix ga = apply_function(pair, PairSide::G, absolute_value(adjoint(a)));
    const ComplexMatrix F2 = fa * fa, G2 = ga * ga;
    const ComplexVector x = random_unit_vector(n, rng), u = random_unit_vector(n, rng);
    const double base = std::abs(inner(a * b.at("B") * x, b.at("C") * u));
    for (unsigned k : {1u, 2u}) {
      const unsigned m = 1u << k;
      const double ex = std::pow(2.0, k - 1.0) - 1.0;
      const double rhs = inner(F2 * power(b.at("B"), m) * x, x).real() * std::pow(inner(F2 * x, x).real(), ex) *
                         inner(G2 * power(b.at("C"), m) * u, u).real() * std::pow(inner(G2 * u, u).real(), ex);
      EXPECT_LE(std::pow(base, m), rhs * (1 + 1e-9) + 1e-12) << "k=" << k;
    }
  }
}
