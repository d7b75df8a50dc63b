#include <gtest/gtest.h>

#include <random>

#include "owf/embedder.hpp"
#include "owf/verifier.hpp"

using namespace owf;

namespace {

EmbeddingState with_edges(const Group& g, std::vector<std::pair<Element, Element>> edges) {
  EmbeddingState st;
  for (auto& [a, b] : edges) {
    auto d = g.sub(a, b);
    st.delta.insert(d);
    st.delta.insert(g.neg(d));
    st.delta_order.push_back(g.canonical_difference(d));
    st.gamma_edges.emplace_back(a, b);
  }
  return st;
}

Window integer_range(std::int64_t lo, std::int64_t hi) {
  Window w;
  for (auto v = lo; v <= hi; ++v) w.push_back(v);
  return w;
}

GraphPtr triangles() { return std::make_shared<CycleFamily>(CycleFamilySpec{{3}, 0}); }

}  // namespace

TEST(PartialDifference, Examples) {
  auto z = make_group("z");
  EXPECT_TRUE(check_partial_difference(*z, {}).pass);

  auto bad = check_partial_difference(*z, with_edges(*z, {{0, 1}, {0, -1}}));
  EXPECT_FALSE(bad.pass);
  EXPECT_FALSE(bad.witness.is_null());
  auto witnessed = bad.witness["difference"].get<std::int64_t>();
  EXPECT_TRUE(witnessed == 1 || witnessed == -1);

  EXPECT_TRUE(check_partial_difference(*z, with_edges(*z, {{0, 1}, {0, 3}})).pass);
}

TEST(PartialDifference, CorruptedDeltaListIsCaught) {
  auto z = make_group("z");
  auto st = with_edges(*z, {{0, 1}, {0, 3}});
  st.delta_order[1] = 7;
  auto v = check_partial_difference(*z, st);
  EXPECT_FALSE(v.pass);
  EXPECT_FALSE(v.witness.is_null());

  st = with_edges(*z, {{0, 1}, {0, 3}});
  st.delta_order.pop_back();
  EXPECT_FALSE(check_partial_difference(*z, st).pass);
}

TEST(PartialDifference, ZeroDifferenceFails) {
  auto z = make_group("z");
  EXPECT_FALSE(check_partial_difference(*z, with_edges(*z, {{2, 2}})).pass);
}

TEST(InducedIso, Examples) {
  EXPECT_TRUE(check_induced_iso({}, *triangles()).pass);

  auto z = make_group("z");
  Embedder e(z, triangles(), Mode::plain);
  e.run(30);
  auto st = e.state();
  ASSERT_TRUE(check_induced_iso(st, *triangles()).pass);
  st.gamma_edges.pop_back();
  auto v = check_induced_iso(st, *triangles());
  EXPECT_FALSE(v.pass);
  EXPECT_TRUE(v.witness.contains("vertices"));
}

TEST(WindowFactorization, SingleEdgeTranslates) {
  auto z = make_group("z");
  auto v = check_window_factorization(*z, with_edges(*z, {{0, 1}}), integer_range(-3, 3));
  EXPECT_TRUE(v.pass);
  EXPECT_EQ(v.stats["covered"], 6);  // {a, a+1} for a = -3 .. 2
  EXPECT_EQ(v.stats["pairs"], 21);
  EXPECT_EQ(v.stats["pending"], 15);
  EXPECT_EQ(v.stats["double_covered"], 0);
}

TEST(WindowFactorization, RepeatedDifferenceIsDoubleCovered) {
  auto z = make_group("z");
  auto v = check_window_factorization(*z, with_edges(*z, {{0, 1}, {5, 6}}), integer_range(-3, 3));
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.stats["double_covered"], 6);
  EXPECT_TRUE(v.witness.contains("example"));
}

TEST(WindowFactorization, NoDoubleCoverWhenPartialDifferenceHolds) {
  for (const char* name : {"z", "z2"}) {
    auto g = make_group(name);
    Embedder e(g, std::make_shared<CycleFamily>(CycleFamilySpec{{3, 4}, 1}), Mode::plain);
    auto w = prefix_window(*g, 60);
    double last = 1.0;
    for (int round = 0; round < 6; ++round) {
      e.run(60);
      ASSERT_TRUE(check_partial_difference(*g, e.state()).pass);
      auto v = check_window_factorization(*g, e.state(), w);
      EXPECT_TRUE(v.pass) << v.witness.dump();
      EXPECT_EQ(v.stats["double_covered"], 0);
      auto fraction = v.stats["pending_fraction"].get<double>();
      EXPECT_LE(fraction, last);
      last = fraction;
    }
  }
}

TEST(WindowFactorization, NonabelianTranslatesAreRight) {
  auto g = make_group("fpk");
  Embedder e(g, triangles(), Mode::star);
  e.run(150);
  auto v = check_window_factorization(*g, e.state(), prefix_window(*g, 40));
  EXPECT_TRUE(v.pass) << v.witness.dump();
  EXPECT_EQ(v.stats["double_covered"], 0);
}

TEST(Subsystem, EmptyAndFaultInjected) {
  auto z2 = make_group("z2");
  auto h = make_subgroup("z-cross-0", z2);
  auto built = build_graph(parse_graph_spec("cycles=3+L=even-components"));
  EXPECT_TRUE(check_subsystem({}, *h, *built.mark).pass);

  Embedder e(z2, built.graph, Mode::star1, {}, h, built.mark);
  e.run(90);
  auto st = e.state();
  ASSERT_TRUE(check_subsystem(st, *h, *built.mark).pass);

  // Move a non-L vertex into H.
  for (auto& [v, x] : st.sigma) {
    if (!built.mark->contains(v)) {
      x = IntPair{1000, 0};
      break;
    }
  }
  auto bad = check_subsystem(st, *h, *built.mark);
  EXPECT_FALSE(bad.pass);
  EXPECT_TRUE(bad.witness.contains("vertex"));
}

TEST(BruteForceVs, Examples) {
  auto z = make_group("z");
  auto w = integer_range(-5, 5);
  auto vs = brute_force_vs(*z, {0, 1}, w);
  Window expected;
  for (const auto& x : w)
    if (x != Element(0) && x != Element(1)) expected.push_back(x);
  EXPECT_EQ(vs, expected);

  EXPECT_EQ(brute_force_vs(*z, {}, w), w);

  vs = brute_force_vs(*z, {0, 2}, w);
  expected.clear();
  for (const auto& x : w)
    if (x != Element(0) && x != Element(1) && x != Element(2)) expected.push_back(x);
  EXPECT_EQ(vs, expected);
}

TEST(BruteForceVs, AgreesWithEmbedderOracle) {
  for (const char* name : {"z", "z2", "fpk"}) {
    auto g = make_group(name);
    std::mt19937 rng(17);
    std::uniform_int_distribution<std::size_t> pick(0, 200);
    std::uniform_int_distribution<std::size_t> size(0, 5);
    for (int t = 0; t < 1000; ++t) {
      std::set<Element> s;
      auto k = size(rng);
      while (s.size() < k) s.insert(g->enumerate(pick(rng)));
      std::vector<Element> sv(s.begin(), s.end());
      auto x = g->enumerate(pick(rng));
      EXPECT_EQ(vs_membership(*g, sv, x), !brute_force_vs(*g, sv, {x}).empty()) << name;
    }
  }
}

TEST(VsInjection, FixedPointAtY1) {
  // x = y1 is outside V (x - y1 = 0 = -0) and the map fixes it, so the
  // literal statement fails there and nowhere else.
  auto g = make_group("fpk");
  auto w = prefix_window(*g, 300);
  Element y1 = KernelElement{{1}, 1};
  Element y2 = KernelElement{{2}, 1};
  ASSERT_EQ(g->add(y1, y2), Element(KernelElement{{1, 2}, 2}));
  ASSERT_NE(std::find(w.begin(), w.end(), y1), w.end());
  auto v = check_lemma_vs_injection(*g, y1, y2, w);
  EXPECT_FALSE(v.pass);
  EXPECT_EQ(v.stats["failures"], 1);
  EXPECT_EQ(v.stats["crossing_failures"], 0);
  EXPECT_EQ(v.witness["example"]["x_is_y1"], true);
  EXPECT_THROW(check_lemma_vs_injection(*g, y1, y1, w), UsageError);

  // With y1 outside the window there is nothing to fail.
  Window without;
  for (const auto& x : w)
    if (x != y1) without.push_back(x);
  EXPECT_TRUE(check_lemma_vs_injection(*g, y1, y2, without).pass);
}

TEST(VsInjection, CrossingElementsMapIntoV) {
  auto g = make_group("fpk");
  auto w = prefix_window(*g, 400);
  Element y1 = KernelElement{{}, 0};
  Element y2 = KernelElement{{}, 2};
  auto v = check_lemma_vs_injection(*g, y1, y2, w);
  EXPECT_GE(v.stats["crossing"].get<std::size_t>(), 10u);
  EXPECT_EQ(v.stats["crossing_failures"], 0);
  EXPECT_EQ(v.stats["failures"], 1);
}

TEST(VsInjection, AbelianComplementIsSmall) {
  // Outside V_{y1,y2}: y1, y2 and the solution of 2x = y1 + y2 if any.
  auto z = make_group("z");
  auto zw = prefix_window(*z, 400);
  for (std::int64_t a = -6; a <= 6; ++a) {
    for (std::int64_t b = -6; b <= 6; ++b) {
      if (a == b) continue;
      auto v = check_lemma_vs_injection(*z, a, b, zw);
      auto expected_outside = 2u + ((a + b) % 2 == 0 ? 1u : 0u);
      EXPECT_EQ(v.stats["outside_vs"].get<std::size_t>(), expected_outside);
      EXPECT_EQ(v.stats["crossing"].get<std::size_t>(), expected_outside - 2);
      EXPECT_EQ(v.stats["crossing_failures"], 0);
      EXPECT_EQ(v.stats["failures"], 1);
    }
  }
}

TEST(BadSetBound, Examples) {
  auto z = make_group("z");
  auto w = prefix_window(*z, 500);
  auto single = check_abelian_bad_set_bound(*z, {0}, w);
  EXPECT_TRUE(single.pass);
  EXPECT_EQ(single.stats["bad"], 1);
  EXPECT_EQ(single.stats["bound"], 1);

  auto pair = check_abelian_bad_set_bound(*z, {0, 1}, w);
  EXPECT_TRUE(pair.pass);
  EXPECT_EQ(pair.stats["bad"], 2);
  EXPECT_EQ(pair.stats["bound"], 3);

  std::mt19937 rng(23);
  std::uniform_int_distribution<std::size_t> pick(0, 99);
  for (int t = 0; t < 50; ++t) {
    std::set<Element> s;
    while (s.size() < 4) s.insert(z->enumerate(pick(rng)));
    auto v = check_abelian_bad_set_bound(*z, {s.begin(), s.end()}, w);
    EXPECT_TRUE(v.pass);
    EXPECT_EQ(v.stats["bound"], 10);
  }
  EXPECT_THROW(check_abelian_bad_set_bound(*make_group("fpk"), {}, w), UsageError);
}
