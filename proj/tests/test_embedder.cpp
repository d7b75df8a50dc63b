#include <gtest/gtest.h>

#include <random>

#include "owf/embedder.hpp"
#include "owf/verifier.hpp"

using namespace owf;

namespace {

GraphPtr cycles(std::vector<std::uint32_t> pattern, std::uint32_t rays = 0) {
  return std::make_shared<CycleFamily>(CycleFamilySpec{std::move(pattern), rays});
}

// Direct reading of conditions (a)-(c) for a candidate image.
bool admissible(const Group& g, const EmbeddingState& st, const std::vector<Element>& images, const Element& x) {
  if (st.sigma_inv.contains(x)) return false;
  std::vector<Element> spread;
  for (const auto& y : images) {
    auto d = g.sub(x, y);
    if (st.delta.contains(d) || st.delta.contains(g.neg(d))) return false;
    spread.push_back(d);
    spread.push_back(g.neg(d));
  }
  std::set<Element> distinct(spread.begin(), spread.end());
  return distinct.size() == spread.size() && !distinct.contains(g.zero());
}

void expect_invariants(const Embedder& e) {
  const auto& st = e.state();
  ASSERT_EQ(st.sigma.size(), st.sigma_inv.size());
  for (const auto& [v, x] : st.sigma) ASSERT_EQ(st.sigma_inv.at(x), v);
  ASSERT_TRUE(check_partial_difference(e.group(), st).pass);
  ASSERT_TRUE(check_induced_iso(st, e.graph()).pass);
}

}  // namespace

TEST(Embedder, NewSessionExamples) {
  Embedder plain(make_group("z"), cycles({3}), Mode::plain);
  EXPECT_TRUE(plain.state().sigma.empty());
  EXPECT_TRUE(plain.state().delta.empty());

  try {
    Embedder bad(make_group("z2xz-demo"), cycles({3}), Mode::plain);
    FAIL() << "torsion group accepted";
  } catch (const Refusal& r) {
    ASSERT_TRUE(r.witness());
    EXPECT_EQ(*r.witness(), Element(TorsionPair{1, 0}));
  }

  auto z2 = make_group("z2");
  auto built = build_graph(parse_graph_spec("cycles=3+L=even-components"));
  Embedder sub(z2, built.graph, Mode::star1, {}, make_subgroup("z-cross-0", z2), built.mark);
  EXPECT_TRUE(sub.state().sigma.empty());
}

TEST(Embedder, NewSessionRejectsInconsistentArguments) {
  auto z2 = make_group("z2");
  auto built = build_graph(parse_graph_spec("cycles=3+L=even-components"));
  EXPECT_THROW(Embedder(make_group("fpk"), cycles({3}), Mode::plain), UsageError);
  EXPECT_THROW(Embedder(z2, built.graph, Mode::star1, {}, nullptr, built.mark), UsageError);
  EXPECT_THROW(Embedder(z2, built.graph, Mode::star1, {}, make_subgroup("z-cross-0", z2), nullptr), UsageError);
  EXPECT_THROW(Embedder(z2, built.graph, Mode::plain, {}, make_subgroup("z-cross-0", z2), built.mark), UsageError);

  auto rays = build_graph(parse_graph_spec("rays=1+L=even-components"));
  EXPECT_THROW(Embedder(z2, rays.graph, Mode::star1, {}, make_subgroup("z-cross-0", z2), rays.mark), Refusal);
}

TEST(Embedder, CoverVertexFirstIsZero) {
  Embedder e(make_group("z"), cycles({3}), Mode::plain);
  auto r = e.cover_vertex(0);
  EXPECT_EQ(r.outcome, Outcome::done);
  EXPECT_EQ(e.state().sigma.at(0), Element(0));
  EXPECT_EQ(r.rejected.total(), 0u);
  EXPECT_EQ(e.cover_vertex(0).outcome, Outcome::already_satisfied);
}

TEST(Embedder, CoverVertexThirdOfTriangleMatchesScan) {
  auto z = make_group("z");
  Embedder e(z, cycles({3}), Mode::plain);
  e.cover_vertex(0);
  e.cover_vertex(1);
  ASSERT_EQ(e.state().sigma.at(1), Element(1));
  std::vector<Element> images = {e.state().sigma.at(0), e.state().sigma.at(1)};
  Element expected;
  for (std::int64_t k = 0;; ++k) {
    Element x = k % 2 == 1 ? (k + 1) / 2 : -k / 2;
    if (admissible(*z, e.state(), images, x)) {
      expected = x;
      break;
    }
  }
  e.cover_vertex(2);
  EXPECT_EQ(e.state().sigma.at(2), expected);
  EXPECT_EQ(expected, Element(-2));
  expect_invariants(e);
}

TEST(Embedder, CoverVertexSubsystemCosetScan) {
  auto z2 = make_group("z2");
  auto h = make_subgroup("z-cross-0", z2);
  // V(L) = first vertex of every triangle, so vertex 1 has an L-neighbor.
  auto mark = std::make_shared<InducedMark>("first-of-triangle", [](Vertex v) { return v % 3 == 0; });
  Embedder e(z2, cycles({3}), Mode::star1, {}, h, mark);
  e.cover_vertex(0);
  ASSERT_EQ(e.state().sigma.at(0), Element(IntPair{0, 0}));
  std::vector<Element> images = {IntPair{0, 0}};
  Element expected;
  for (std::size_t i = 0;; ++i) {
    auto x = z2->enumerate(i);
    if (!h->contains(x) && admissible(*z2, e.state(), images, x)) {
      expected = x;
      break;
    }
  }
  e.cover_vertex(1);
  EXPECT_EQ(e.state().sigma.at(1), expected);
  EXPECT_FALSE(h->contains(expected));
}

TEST(Embedder, CoverElementExamples) {
  Embedder e(make_group("z"), cycles({3}), Mode::plain);
  auto r = e.cover_element(0);
  EXPECT_EQ(r.outcome, Outcome::done);
  EXPECT_EQ(e.state().sigma.at(0), Element(0));
  auto before = e.state().sigma;
  EXPECT_EQ(e.cover_element(0).outcome, Outcome::already_satisfied);
  EXPECT_EQ(e.state().sigma, before);

  auto z2 = make_group("z2");
  auto built = build_graph(parse_graph_spec("cycles=3+L=even-components"));
  Embedder sub(z2, built.graph, Mode::star1, {}, make_subgroup("z-cross-0", z2), built.mark);
  auto rs = sub.cover_element(IntPair{3, 1});
  ASSERT_EQ(rs.assigned.size(), 1u);
  auto v = rs.assigned[0].first;
  EXPECT_FALSE(built.mark->contains(v));
  EXPECT_EQ(v, fresh_vertex_far_from(*built.graph, {}, 2, false, built.mark.get()));
}

TEST(Embedder, CoverDifferenceMatchesPairScan) {
  auto z = make_group("z");
  Embedder e(z, cycles({3}), Mode::plain);
  auto r = e.cover_difference(5);
  ASSERT_EQ(r.outcome, Outcome::done);
  // Oracle: least i with (enumerate(i), enumerate(i) - 5) both unused; on the empty state i = 0.
  ASSERT_EQ(r.assigned.size(), 2u);
  EXPECT_EQ(r.assigned[0].second, Element(0));
  EXPECT_EQ(r.assigned[1].second, Element(-5));
  EXPECT_EQ(z->sub(r.assigned[0].second, r.assigned[1].second), Element(5));
  EXPECT_EQ((Edge{r.assigned[0].first, r.assigned[1].first}), (Edge{0, 1}));
  EXPECT_EQ(e.cover_difference(-5).outcome, Outcome::already_satisfied);
  EXPECT_THROW(e.cover_difference(0), UsageError);
  expect_invariants(e);
}

TEST(Embedder, CoverDifferenceNonabelianOrientation) {
  auto g = make_group("fpk");
  Embedder e(g, cycles({3}), Mode::star);
  Element d = KernelElement{{0, 1}, 0};
  auto r = e.cover_difference(d);
  ASSERT_EQ(r.outcome, Outcome::done);
  EXPECT_EQ(g->sub(r.assigned[0].second, r.assigned[1].second), d);
  EXPECT_TRUE(e.state().delta.contains(d));
  EXPECT_TRUE(e.state().delta.contains(g->neg(d)));
}

TEST(Embedder, CoverDifferenceSubsystemInH) {
  auto z2 = make_group("z2");
  auto h = make_subgroup("z-cross-0", z2);
  auto built = build_graph(parse_graph_spec("cycles=3+L=even-components"));
  Embedder e(z2, built.graph, Mode::star1, {}, h, built.mark);
  auto r = e.cover_difference(IntPair{2, 0});
  ASSERT_EQ(r.outcome, Outcome::done);
  for (const auto& [v, x] : r.assigned) {
    EXPECT_TRUE(built.mark->contains(v));
    EXPECT_TRUE(h->contains(x));
  }
  auto out = e.cover_difference(IntPair{1, 1});
  for (const auto& [v, x] : out.assigned) {
    EXPECT_FALSE(built.mark->contains(v));
    EXPECT_FALSE(h->contains(x));
  }
}

TEST(Embedder, RunZeroIsEmpty) {
  Embedder e(make_group("z"), cycles({3}), Mode::plain);
  EXPECT_TRUE(e.run(0).empty());
  EXPECT_TRUE(e.state().sigma.empty());
  EXPECT_EQ(e.state().cursors.steps, 0u);
}

TEST(Embedder, ScheduleIsRoundRobinAndFair) {
  for (const char* group : {"z", "z2"}) {
    Embedder e(make_group(group), cycles({3, 5}, 1), Mode::plain);
    auto reports = e.run(900);
    for (std::size_t i = 0; i < reports.size(); ++i) {
      EXPECT_EQ(static_cast<std::size_t>(reports[i].kind), i % 3);
      EXPECT_EQ(reports[i].task_index, i / 3);
      EXPECT_NE(reports[i].outcome, Outcome::budget_exhausted);
    }
    EXPECT_EQ(e.state().cursors.vertex, 300u);
    EXPECT_EQ(e.state().cursors.element, 300u);
    EXPECT_EQ(e.state().cursors.difference, 300u);
    for (Vertex v = 0; v < 300; ++v) EXPECT_TRUE(e.state().sigma.contains(v));
    for (std::size_t n = 0; n < 300; ++n) {
      EXPECT_TRUE(e.state().sigma_inv.contains(e.group().enumerate(n)));
      EXPECT_TRUE(e.state().delta.contains(e.group().enumerate(n + 1)));
    }
  }
}

TEST(Embedder, InvariantsAfterEveryStep) {
  for (const char* group : {"z", "z2"}) {
    Embedder e(make_group(group), cycles({3, 4}, 2), Mode::plain);
    for (int i = 0; i < 240; ++i) {
      e.step();
      expect_invariants(e);
    }
  }
  Embedder star(make_group("fpk"), cycles({3}, 1), Mode::star);
  for (int i = 0; i < 150; ++i) {
    star.step();
    expect_invariants(star);
  }
}

TEST(Embedder, ChosenVertexImagesLieInVS) {
  auto z = make_group("z");
  Embedder e(z, cycles({3, 5}, 1), Mode::plain);
  for (int i = 0; i < 900; ++i) {
    auto r = e.step();
    if (r.kind != TaskKind::cover_vertex || r.outcome != Outcome::done) continue;
    auto v = r.assigned[0].first;
    std::vector<Element> images;
    for (auto w : e.graph().neighbors(v)) {
      if (w != v && e.state().sigma.contains(w)) images.push_back(e.state().sigma.at(w));
    }
    EXPECT_TRUE(vs_membership(*z, images, r.assigned[0].second));
    // Abelian bad-set bound: at most one bad x per pair plus the |W| degenerate cases.
    auto k = images.size();
    EXPECT_LE(r.rejected.spread, (k == 0 ? 0 : k * (k - 1) / 2) + k);
  }
}

TEST(Embedder, MonotoneGrowth) {
  Embedder e(make_group("z2"), cycles({3}), Mode::plain);
  auto prev = e.state();
  for (int i = 0; i < 300; ++i) {
    e.step();
    const auto& cur = e.state();
    for (const auto& [v, x] : prev.sigma) ASSERT_EQ(cur.sigma.at(v), x);
    ASSERT_GE(cur.gamma_edges.size(), prev.gamma_edges.size());
    ASSERT_TRUE(std::equal(prev.gamma_edges.begin(), prev.gamma_edges.end(), cur.gamma_edges.begin()));
    for (const auto& d : prev.delta) ASSERT_TRUE(cur.delta.contains(d));
    prev = cur;
  }
}

TEST(Embedder, BudgetExhaustionLeavesStateAndDoubles) {
  SessionOptions options;
  options.budget = 1;
  Embedder e(make_group("fpk"), cycles({3}), Mode::star, options);
  e.run(3);  // vertex 0, element 0 (already used), first difference
  std::size_t exhausted = 0;
  std::size_t last_budget = 0;
  for (int i = 0; i < 60; ++i) {
    auto before = e.state().sigma;
    auto cursors = e.state().cursors;
    auto r = e.step();
    if (r.outcome == Outcome::budget_exhausted) {
      ++exhausted;
      EXPECT_EQ(e.state().sigma, before);
      if (r.kind == TaskKind::cover_vertex) EXPECT_EQ(e.state().cursors.vertex, cursors.vertex);
      if (r.kind == TaskKind::cover_difference) EXPECT_EQ(e.state().cursors.difference, cursors.difference);
      EXPECT_EQ(r.candidates_examined, r.budget);
      if (last_budget) EXPECT_GE(r.budget, last_budget);
      last_budget = r.budget;
    }
    expect_invariants(e);
  }
  EXPECT_GT(exhausted, 0u);
}

TEST(Embedder, PlainModeNeverExhausts) {
  Embedder e(make_group("z"), cycles({3}), Mode::plain);
  for (const auto& r : e.run(600)) {
    EXPECT_NE(r.outcome, Outcome::budget_exhausted);
    EXPECT_EQ(r.budget, 0u);
  }
}

TEST(Embedder, Deterministic) {
  Embedder a(make_group("z2"), cycles({3, 4}, 1), Mode::plain);
  Embedder b(make_group("z2"), cycles({3, 4}, 1), Mode::plain);
  a.run(600);
  b.run(600);
  EXPECT_EQ(a.state().sigma, b.state().sigma);
  EXPECT_EQ(a.state().gamma_edges, b.state().gamma_edges);
  EXPECT_EQ(a.state().delta_order, b.state().delta_order);
}

TEST(VsMembership, Examples) {
  auto z = make_group("z");
  std::vector<Element> s = {0, 1};
  EXPECT_TRUE(vs_membership(*z, s, 3));
  EXPECT_FALSE(vs_membership(*z, s, 0));
  for (const char* name : {"z", "z2", "fpk"}) {
    auto g = make_group(name);
    for (std::size_t n = 0; n < 50; ++n) EXPECT_TRUE(vs_membership(*g, {}, g->enumerate(n)));
  }
}

TEST(VsMembership, KernelPathology) {
  auto g = make_group("fpk");
  std::vector<Element> s = {KernelElement{{}, 0}, KernelElement{{}, 2}};
  ASSERT_EQ(g->add(s[0], s[1]), Element(KernelElement{{}, 2}));
  for (std::uint32_t j = 0; j < 40; ++j) {
    EXPECT_FALSE(vs_membership(*g, s, KernelElement{{j}, 1})) << j;
  }
}
