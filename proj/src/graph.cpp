#include "owf/graph.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <deque>
#include <sstream>
#include <unordered_map>

#include "owf/group.hpp"

namespace owf {

namespace {

std::uint64_t isqrt(std::uint64_t n) {
  auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<long double>(n)));
  while (r * r > n) --r;
  while ((r + 1) * (r + 1) <= n) ++r;
  return r;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t begin = 0;
  while (true) {
    auto end = text.find(sep, begin);
    parts.push_back(text.substr(begin, end == std::string_view::npos ? end : end - begin));
    if (end == std::string_view::npos) break;
    begin = end + 1;
  }
  return parts;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::uint32_t parse_natural(std::string_view s, std::string_view clause) {
  s = trim(s);
  std::uint32_t value = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw UsageError("expected a natural number in graph clause '" + std::string(clause) + "'");
  return value;
}

bool side_ok(Vertex v, std::optional<bool> want_in_L, const InducedMark* mark) {
  return !want_in_L || mark->contains(v) == *want_in_L;
}

bool far_from(const GraphPresentation& g, const VertexSet& s, std::size_t r, Vertex v) {
  if (s.empty()) return true;
  std::unordered_map<Vertex, std::size_t> seen{{v, 0}};
  std::deque<Vertex> queue{v};
  while (!queue.empty()) {
    auto u = queue.front();
    queue.pop_front();
    if (s.contains(u)) return false;
    auto d = seen[u];
    if (d == r) continue;
    for (auto w : g.neighbors(u)) {
      if (seen.emplace(w, d + 1).second) queue.push_back(w);
    }
  }
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------

CycleFamily::CycleFamily(CycleFamilySpec spec) : spec_(std::move(spec)) {
  if (spec_.pattern.empty() && spec_.rays == 0)
    throw UsageError("graph needs at least one cycle length or one ray");
  pattern_prefix_.push_back(0);
  for (auto len : spec_.pattern) {
    if (len < 3) throw UsageError("cycle lengths must be at least 3, got " + std::to_string(len));
    pattern_prefix_.push_back(pattern_prefix_.back() + len);
  }
}

std::uint64_t CycleFamily::block_length(std::uint64_t round) const {
  return round == 0 ? 1 : round;
}

std::uint64_t CycleFamily::cycle_length(std::uint64_t round) const {
  if (spec_.pattern.empty()) return 0;
  return spec_.pattern[round % spec_.pattern.size()];
}

std::uint64_t CycleFamily::round_start(std::uint64_t round) const {
  std::uint64_t ray_ids = round == 0 ? 0 : 1 + round * (round - 1) / 2;
  std::uint64_t cycle_ids = 0;
  if (!spec_.pattern.empty()) {
    auto p = spec_.pattern.size();
    cycle_ids = (round / p) * pattern_prefix_.back() + pattern_prefix_[round % p];
  }
  return spec_.rays * ray_ids + cycle_ids;
}

CycleFamily::Location CycleFamily::locate(Vertex v) const {
  // Every round holds at least one vertex, so v lies in a round ≤ v.
  std::uint64_t lo = 0;
  std::uint64_t hi = v + 1;
  while (hi - lo > 1) {
    auto mid = lo + (hi - lo) / 2;
    if (round_start(mid) <= v) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  auto round = lo;
  auto offset = v - round_start(round);
  auto block = block_length(round);
  if (offset < spec_.rays * block) {
    auto k = static_cast<std::int64_t>(offset % block);
    std::int64_t position = 0;
    if (round % 2 == 1) {
      auto m = static_cast<std::int64_t>(round / 2);
      position = m * m + 1 + k;
    } else if (round > 0) {
      auto m = static_cast<std::int64_t>(round / 2);
      position = -(m * (m - 1) + 1 + k);
    }
    return {round, true, offset / block, position};
  }
  return {round, false, 0, static_cast<std::int64_t>(offset - spec_.rays * block)};
}

Vertex CycleFamily::ray_vertex(std::uint64_t ray, std::int64_t position) const {
  std::uint64_t round = 0;
  std::uint64_t k = 0;
  if (position > 0) {
    auto p = static_cast<std::uint64_t>(position);
    auto m = isqrt(p - 1);
    round = 2 * m + 1;
    k = p - m * m - 1;
  } else if (position < 0) {
    auto q = static_cast<std::uint64_t>(-position);
    // least m ≥ 1 with q ≤ m(m + 1)
    auto m = std::max<std::uint64_t>(1, isqrt(q));
    while (m * (m + 1) < q) ++m;
    while (m > 1 && (m - 1) * m >= q) --m;
    round = 2 * m;
    k = q - m * (m - 1) - 1;
  }
  return round_start(round) + ray * block_length(round) + k;
}

std::vector<Vertex> CycleFamily::neighbors(Vertex v) const {
  auto loc = locate(v);
  std::vector<Vertex> out;
  if (loc.on_ray) {
    out = {ray_vertex(loc.index, loc.position - 1), ray_vertex(loc.index, loc.position + 1)};
  } else {
    auto len = static_cast<std::int64_t>(cycle_length(loc.round));
    auto base = round_start(loc.round) + spec_.rays * block_length(loc.round);
    out = {base + static_cast<Vertex>((loc.position + len - 1) % len),
           base + static_cast<Vertex>((loc.position + 1) % len)};
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::uint64_t CycleFamily::component_of(Vertex v) const {
  auto loc = locate(v);
  return loc.on_ray ? loc.index : spec_.rays + loc.round;
}

std::string CycleFamily::describe() const { return owf::describe(GraphConfig{spec_, std::nullopt}); }

// ---------------------------------------------------------------------------

MarkPtr make_component_mark(std::shared_ptr<const CycleFamily> graph, std::string_view rule) {
  std::uint64_t parity = 0;
  if (rule == "even-components") {
    parity = 0;
  } else if (rule == "odd-components") {
    parity = 1;
  } else {
    throw UsageError("unknown L rule '" + std::string(rule) +
                     "' (expected even-components or odd-components)");
  }
  return std::make_shared<InducedMark>(std::string(rule), [graph, parity](Vertex v) {
    return graph->component_of(v) % 2 == parity;
  });
}

GraphConfig parse_graph_spec(std::string_view text) {
  GraphConfig config;
  bool any = false;
  for (auto clause : split(text, '+')) {
    clause = trim(clause);
    if (clause.empty()) continue;
    auto eq = clause.find('=');
    if (eq == std::string_view::npos)
      throw UsageError("graph clause '" + std::string(clause) + "' is not key=value");
    auto key = trim(clause.substr(0, eq));
    auto value = trim(clause.substr(eq + 1));
    if (key == "cycles") {
      config.family.pattern.clear();
      for (auto part : split(value, ',')) config.family.pattern.push_back(parse_natural(part, clause));
      any = true;
    } else if (key == "rays") {
      config.family.rays = parse_natural(value, clause);
      any = true;
    } else if (key == "L") {
      if (value != "even-components" && value != "odd-components")
        throw UsageError("unknown L rule '" + std::string(value) + "'");
      config.mark_rule = std::string(value);
    } else {
      throw UsageError("unknown graph clause '" + std::string(key) + "'");
    }
  }
  if (!any) throw UsageError("graph spec '" + std::string(text) + "' names no cycles or rays");
  for (auto len : config.family.pattern) {
    if (len < 3) throw UsageError("cycle lengths must be at least 3");
  }
  if (config.family.pattern.empty() && config.family.rays == 0)
    throw UsageError("graph needs at least one cycle length or one ray");
  return config;
}

std::string describe(const GraphConfig& config) {
  std::ostringstream os;
  const char* sep = "";
  if (config.family.rays > 0) {
    os << "rays=" << config.family.rays;
    sep = "+";
  }
  if (!config.family.pattern.empty()) {
    os << sep << "cycles=";
    for (std::size_t i = 0; i < config.family.pattern.size(); ++i)
      os << (i ? "," : "") << config.family.pattern[i];
    sep = "+";
  }
  if (config.mark_rule) os << sep << "L=" << *config.mark_rule;
  return os.str();
}

BuiltGraph build_graph(const GraphConfig& config) {
  BuiltGraph built;
  built.graph = std::make_shared<CycleFamily>(config.family);
  if (config.mark_rule) built.mark = make_component_mark(built.graph, *config.mark_rule);
  return built;
}

// ---------------------------------------------------------------------------

std::set<Vertex> ball(const GraphPresentation& g, const std::vector<Vertex>& seeds, std::size_t r) {
  std::set<Vertex> seen(seeds.begin(), seeds.end());
  std::vector<Vertex> frontier(seen.begin(), seen.end());
  for (std::size_t d = 0; d < r && !frontier.empty(); ++d) {
    std::vector<Vertex> next;
    for (auto u : frontier) {
      for (auto w : g.neighbors(u)) {
        if (seen.insert(w).second) next.push_back(w);
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

Vertex fresh_vertex_far_from(const GraphPresentation& g, const VertexSet& s, std::size_t r,
                             std::optional<bool> want_in_L, const InducedMark* mark, Vertex start) {
  if (want_in_L && mark == nullptr) throw UsageError("want_in_L needs an induced mark");
  for (Vertex v = start;; ++v) {
    if (side_ok(v, want_in_L, mark) && far_from(g, s, r, v)) return v;
  }
}

Edge fresh_edge_far_from(const GraphPresentation& g, const VertexSet& s, std::size_t r,
                         std::optional<bool> want_in_L, const InducedMark* mark, Vertex start) {
  if (want_in_L && mark == nullptr) throw UsageError("want_in_L needs an induced mark");
  for (Vertex v = start;; ++v) {
    if (!side_ok(v, want_in_L, mark) || !far_from(g, s, r, v)) continue;
    for (auto w : g.neighbors(v)) {
      if (side_ok(w, want_in_L, mark) && far_from(g, s, r, w)) return {v, w};
    }
  }
}

std::size_t contracted_degree(const GraphPresentation& g, const InducedMark& mark, Vertex v) {
  std::size_t outside = 0;
  bool touches_l = false;
  for (auto w : g.neighbors(v)) {
    if (mark.contains(w)) {
      touches_l = true;
    } else {
      ++outside;
    }
  }
  return outside + (touches_l ? 1 : 0);
}

bool both_sides_unbounded(const InducedMark& mark, Vertex probe) {
  for (Vertex top = 16; top <= probe; top *= 2) {
    bool in = false;
    bool out = false;
    for (Vertex v = top / 2; v < top && !(in && out); ++v) {
      (mark.contains(v) ? in : out) = true;
    }
    if (!(in && out)) return false;
  }
  return true;
}

}  // namespace owf
