#include "owf/verifier.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

namespace owf {

namespace {

Verdict fail(Verdict v, Json witness) {
  v.pass = false;
  v.witness = std::move(witness);
  return v;
}

Json edge_json(const Group& g, const std::pair<Element, Element>& e) {
  return Json::array({g.to_json(e.first), g.to_json(e.second)});
}

}  // namespace

Window prefix_window(const Group& group, std::size_t m) {
  Window w;
  w.reserve(m);
  for (std::size_t n = 0; n < m; ++n) w.push_back(group.enumerate(n));
  return w;
}

Verdict check_partial_difference(const Group& group, const EmbeddingState& state) {
  Verdict v{"partial_difference"};
  const auto zero = group.zero();
  std::unordered_map<Element, std::size_t, ElementHash> owner;  // difference -> edge index
  for (std::size_t i = 0; i < state.gamma_edges.size(); ++i) {
    const auto& [a, b] = state.gamma_edges[i];
    auto d = group.sub(a, b);
    if (d == zero) {
      return fail(v, Json{{"reason", "zero difference"}, {"edge", edge_json(group, state.gamma_edges[i])}});
    }
    for (const auto& value : {d, group.sub(b, a)}) {
      auto [it, fresh] = owner.emplace(value, i);
      if (!fresh) {
        return fail(v, Json{{"reason", "repeated difference"},
                            {"difference", group.to_json(value)},
                            {"edges", Json::array({edge_json(group, state.gamma_edges[it->second]),
                                                   edge_json(group, state.gamma_edges[i])})}});
      }
    }
  }

  // The recorded Δ list must name each edge's difference pair exactly once.
  std::unordered_set<Element, ElementHash> listed;
  for (const auto& d : state.delta_order) {
    if (d == zero) return fail(v, Json{{"reason", "zero in recorded delta"}});
    if (listed.contains(d) || listed.contains(group.neg(d))) {
      return fail(v, Json{{"reason", "repeated entry in recorded delta"}, {"difference", group.to_json(d)}});
    }
    if (!owner.contains(d)) {
      return fail(v, Json{{"reason", "recorded delta entry realized by no edge"},
                          {"difference", group.to_json(d)}});
    }
    listed.insert(d);
  }
  for (const auto& e : state.gamma_edges) {
    auto d = group.sub(e.first, e.second);
    if (!listed.contains(d) && !listed.contains(group.neg(d))) {
      return fail(v, Json{{"reason", "edge difference missing from recorded delta"},
                          {"difference", group.to_json(d)},
                          {"edge", edge_json(group, e)}});
    }
  }
  v.stats["edges"] = state.gamma_edges.size();
  v.stats["differences"] = owner.size();
  return v;
}

Verdict check_induced_iso(const EmbeddingState& state, const GraphPresentation& graph) {
  Verdict v{"induced_iso"};
  std::unordered_map<Element, Vertex, ElementHash> preimage;
  for (const auto& [u, x] : state.sigma) {
    if (!preimage.emplace(x, u).second) {
      return fail(v, Json{{"reason", "sigma is not injective"},
                          {"vertices", Json::array({preimage[x], u})}});
    }
  }
  std::set<std::pair<Vertex, Vertex>> image_edges;
  for (const auto& [a, b] : state.gamma_edges) {
    auto ia = preimage.find(a);
    auto ib = preimage.find(b);
    if (ia == preimage.end() || ib == preimage.end()) {
      return fail(v, Json{{"reason", "edge endpoint outside the image of sigma"},
                          {"edge", Json::array({to_string(a), to_string(b)})}});
    }
    auto u = std::min(ia->second, ib->second);
    auto w = std::max(ia->second, ib->second);
    auto nb = graph.neighbors(u);
    if (std::find(nb.begin(), nb.end(), w) == nb.end()) {
      return fail(v, Json{{"reason", "image edge with no edge in F"}, {"vertices", Json::array({u, w})}});
    }
    if (!image_edges.emplace(u, w).second) {
      return fail(v, Json{{"reason", "duplicate image edge"}, {"vertices", Json::array({u, w})}});
    }
  }
  for (const auto& [u, x] : state.sigma) {
    for (auto w : graph.neighbors(u)) {
      if (w < u || !state.sigma.contains(w)) continue;
      if (!image_edges.contains({u, w})) {
        return fail(v, Json{{"reason", "edge of F between embedded vertices is missing"},
                            {"vertices", Json::array({u, w})}});
      }
    }
  }
  v.stats["vertices"] = state.sigma.size();
  v.stats["edges"] = image_edges.size();
  return v;
}

Verdict check_window_factorization(const Group& group, const EmbeddingState& state,
                                   const Window& window) {
  Verdict v{"window_factorization"};
  std::unordered_set<Element, ElementHash> differences;
  std::vector<std::pair<Element, Element>> oriented;
  for (const auto& [a, b] : state.gamma_edges) {
    differences.insert(group.sub(a, b));
    differences.insert(group.sub(b, a));
    oriented.emplace_back(a, b);
    oriented.emplace_back(b, a);
  }

  std::size_t pairs = 0, covered = 0, doubled = 0, uncovered = 0, pending = 0;
  Json first_double;
  Json first_uncovered;
  for (std::size_t i = 0; i < window.size(); ++i) {
    for (std::size_t j = i + 1; j < window.size(); ++j) {
      const auto& a = window[i];
      const auto& b = window[j];
      ++pairs;
      if (!differences.contains(group.sub(a, b))) {
        ++pending;
        continue;
      }
      // Solve x + g = a for each orientation (x, y), then test y + g = b.
      std::size_t hits = 0;
      Json translates = Json::array();
      for (const auto& [x, y] : oriented) {
        auto g = group.add(group.neg(x), a);
        if (group.add(y, g) == b) {
          ++hits;
          if (translates.size() < 2)
            translates.push_back({{"edge", edge_json(group, {x, y})}, {"g", group.to_json(g)}});
        }
      }
      if (hits == 1) {
        ++covered;
      } else if (hits == 0) {
        ++uncovered;
        if (first_uncovered.is_null())
          first_uncovered = {{"pair", Json::array({group.to_json(a), group.to_json(b)})}};
      } else {
        ++doubled;
        if (first_double.is_null())
          first_double = {{"pair", Json::array({group.to_json(a), group.to_json(b)})},
                          {"translates", translates}};
      }
    }
  }
  v.stats["pairs"] = pairs;
  v.stats["covered"] = covered;
  v.stats["double_covered"] = doubled;
  v.stats["uncovered"] = uncovered;
  v.stats["pending"] = pending;
  v.stats["pending_fraction"] = pairs == 0 ? 0.0 : static_cast<double>(pending) / static_cast<double>(pairs);
  if (doubled > 0) return fail(v, Json{{"reason", "pair covered by more than one translate"}, {"example", first_double}});
  if (uncovered > 0)
    return fail(v, Json{{"reason", "difference in delta but no translate covers the pair"},
                        {"example", first_uncovered}});
  return v;
}

Verdict check_subsystem(const EmbeddingState& state, const SubgroupView& subgroup,
                        const InducedMark& mark) {
  Verdict v{"subsystem"};
  const auto& group = subgroup.parent();
  std::unordered_map<Element, Vertex, ElementHash> preimage;
  std::size_t in_h = 0;
  for (const auto& [u, x] : state.sigma) {
    preimage.emplace(x, u);
    bool inside = subgroup.contains(x);
    if (inside != mark.contains(u)) {
      return fail(v, Json{{"reason", inside ? "non-L vertex mapped into H" : "L vertex mapped outside H"},
                          {"vertex", u},
                          {"image", group.to_json(x)}});
    }
    in_h += inside;
  }
  std::size_t inner = 0;
  for (const auto& e : state.gamma_edges) {
    const auto& [a, b] = e;
    auto d = group.sub(a, b);
    bool both_in_h = subgroup.contains(a) && subgroup.contains(b);
    if (both_in_h) {
      auto ia = preimage.find(a);
      auto ib = preimage.find(b);
      if (ia == preimage.end() || ib == preimage.end() || !mark.contains(ia->second) ||
          !mark.contains(ib->second)) {
        return fail(v, Json{{"reason", "edge inside H does not join images of L"}, {"edge", edge_json(group, e)}});
      }
      if (!subgroup.contains(d)) {
        return fail(v, Json{{"reason", "edge inside H with difference outside H"}, {"edge", edge_json(group, e)}});
      }
      ++inner;
    } else if (subgroup.contains(d)) {
      return fail(v, Json{{"reason", "difference in H from an edge leaving H"},
                          {"edge", edge_json(group, e)},
                          {"difference", group.to_json(d)}});
    }
  }
  v.stats["images_in_h"] = in_h;
  v.stats["edges_in_h"] = inner;
  v.stats["edges_outside_h"] = state.gamma_edges.size() - inner;
  return v;
}

std::vector<Element> brute_force_vs(const Group& group, const std::vector<Element>& s,
                                    const Window& window) {
  std::vector<Element> out;
  for (const auto& x : window) {
    std::set<Element> values;
    for (const auto& y : s) {
      auto d = group.sub(x, y);
      values.insert(group.neg(d));
      values.insert(std::move(d));
    }
    if (values.size() == 2 * s.size()) out.push_back(x);
  }
  return out;
}

Verdict check_lemma_vs_injection(const Group& group, const Element& y1, const Element& y2,
                                 const Window& window) {
  if (y1 == y2) throw UsageError("the injection check needs y1 != y2");
  Verdict v{"lemma_vs_injection"};
  const std::vector<Element> s{y1, y2};
  auto inside = brute_force_vs(group, s, window);
  std::set<Element> good(inside.begin(), inside.end());
  // Outside V because x - y1 = -(x - y2), as opposed to x being y1 or y2.
  auto crossing = [&](const Element& x) { return group.sub(x, y1) == group.neg(group.sub(x, y2)); };

  std::size_t outside = 0, crossed = 0, failures = 0, crossing_failures = 0;
  Json first;
  for (const auto& x : window) {
    if (good.contains(x)) continue;
    ++outside;
    bool cross = crossing(x);
    crossed += cross;
    auto image = group.add(group.sub(y1, x), y1);
    if (brute_force_vs(group, s, {image}).empty()) {
      ++failures;
      crossing_failures += cross;
      if (first.is_null())
        first = {{"x", group.to_json(x)}, {"image", group.to_json(image)}, {"x_is_y1", x == y1},
                 {"x_is_y2", x == y2}};
    }
  }
  v.stats["window"] = window.size();
  v.stats["outside_vs"] = outside;
  v.stats["crossing"] = crossed;
  v.stats["failures"] = failures;
  v.stats["crossing_failures"] = crossing_failures;
  if (failures > 0)
    return fail(v, Json{{"reason", "y1 - x + y1 lies outside V_{y1,y2}"}, {"failures", failures}, {"example", first}});
  return v;
}

Verdict check_abelian_bad_set_bound(const Group& group, const std::vector<Element>& s,
                                    const Window& window) {
  if (!group.is_abelian()) throw UsageError("the finite bad-set bound only holds in abelian groups");
  Verdict v{"abelian_bad_set_bound"};
  auto inside = brute_force_vs(group, s, window);
  std::set<Element> good(inside.begin(), inside.end());
  Json bad = Json::array();
  for (const auto& x : window) {
    if (!good.contains(x)) bad.push_back(group.to_json(x));
  }
  auto k = s.size();
  auto bound = (k == 0 ? 0 : k * (k - 1) / 2) + k;
  v.stats["bad"] = bad.size();
  v.stats["bound"] = bound;
  if (bad.size() > bound) return fail(v, Json{{"reason", "bad set exceeds C(|S|,2) + |S|"}, {"bad", bad}});
  return v;
}

}  // namespace owf
