#ifndef OWF_GRAPH_HPP
#define OWF_GRAPH_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

namespace owf {

using Vertex = std::uint64_t;
using VertexSet = std::unordered_set<Vertex>;
using Edge = std::pair<Vertex, Vertex>;

/// A countable, locally finite graph whose vertices are the naturals.
/// Implementations are pure: equal queries give equal answers from any thread.
class GraphPresentation {
 public:
  virtual ~GraphPresentation() = default;
  /// Sorted ascending, no duplicates.
  virtual std::vector<Vertex> neighbors(Vertex v) const = 0;
  virtual std::size_t degree(Vertex v) const { return neighbors(v).size(); }
  /// Normalized spec string, round-trips through parse_graph_spec.
  virtual std::string describe() const = 0;
};

using GraphPtr = std::shared_ptr<const GraphPresentation>;

/// Cycle lengths repeated forever, plus `rays` double rays.
struct CycleFamilySpec {
  std::vector<std::uint32_t> pattern;
  std::uint32_t rays = 0;
};

/// Disjoint union of double rays and cycles, laid out in rounds.
///
/// Round t holds, in order: block t of every ray (block 0 is the ray's
/// center, block t ≥ 1 has t vertices), then cycle t of the repeated pattern.
/// A cycle's vertices are consecutive ids in ring order. Ray blocks alternate
/// sides: odd blocks extend the positive half outward, even blocks the
/// negative half. With a single ray, positions −2 … 4 carry ids 3 2 0 1 4 5 6.
///
/// Components are numbered rays first (0 … rays−1), then cycles in order.
class CycleFamily final : public GraphPresentation {
 public:
  explicit CycleFamily(CycleFamilySpec spec);

  std::vector<Vertex> neighbors(Vertex v) const override;
  std::size_t degree(Vertex) const override { return 2; }
  std::string describe() const override;

  const CycleFamilySpec& spec() const { return spec_; }
  std::uint64_t component_of(Vertex v) const;

 private:
  struct Location {
    std::uint64_t round;
    bool on_ray;
    std::uint64_t index;     // ray number, or unused for cycles
    std::int64_t position;   // ray position, or ring position
  };

  std::uint64_t block_length(std::uint64_t round) const;
  std::uint64_t cycle_length(std::uint64_t round) const;
  std::uint64_t round_start(std::uint64_t round) const;
  Location locate(Vertex v) const;
  Vertex ray_vertex(std::uint64_t ray, std::int64_t position) const;

  CycleFamilySpec spec_;
  std::vector<std::uint64_t> pattern_prefix_;  // prefix sums, size p + 1
};

/// Selects V(L). L is the induced subgraph on the selected vertices.
class InducedMark {
 public:
  InducedMark(std::string name, std::function<bool(Vertex)> in_l)
      : name_(std::move(name)), in_l_(std::move(in_l)) {}

  bool contains(Vertex v) const { return in_l_(v); }
  const std::string& name() const { return name_; }

 private:
  std::string name_;
  std::function<bool(Vertex)> in_l_;
};

using MarkPtr = std::shared_ptr<const InducedMark>;

/// "even-components" or "odd-components" of a cycle family.
MarkPtr make_component_mark(std::shared_ptr<const CycleFamily> graph, std::string_view rule);

struct GraphConfig {
  CycleFamilySpec family;
  std::optional<std::string> mark_rule;
};

/// Parses the mini-language: '+'-separated clauses `cycles=3,5`, `rays=2`,
/// `L=even-components` (or `L=odd-components`). Throws UsageError.
GraphConfig parse_graph_spec(std::string_view text);
std::string describe(const GraphConfig& config);

struct BuiltGraph {
  std::shared_ptr<const CycleFamily> graph;
  MarkPtr mark;  // null when the spec has no L clause
};

BuiltGraph build_graph(const GraphConfig& config);

/// All vertices at distance ≤ r from `seeds`.
std::set<Vertex> ball(const GraphPresentation& g, const std::vector<Vertex>& seeds, std::size_t r);

/// Least id ≥ `start` at distance > r from every vertex of S. When `want_in_L`
/// is set, the vertex must also lie inside (or outside) V(L).
Vertex fresh_vertex_far_from(const GraphPresentation& g, const VertexSet& s, std::size_t r,
                             std::optional<bool> want_in_L = std::nullopt,
                             const InducedMark* mark = nullptr, Vertex start = 0);

/// Least edge {v, w} (by v, then w) with both ends at distance > r from S.
/// With `want_in_L` = true both ends lie in V(L) (so the edge is in E(L));
/// with false both ends lie outside V(L).
Edge fresh_edge_far_from(const GraphPresentation& g, const VertexSet& s, std::size_t r,
                         std::optional<bool> want_in_L = std::nullopt,
                         const InducedMark* mark = nullptr, Vertex start = 0);

/// Degree of v in F / V(L): outside neighbors count individually, neighbors in
/// V(L) collapse to one.
std::size_t contracted_degree(const GraphPresentation& g, const InducedMark& mark, Vertex v);

/// Evidence that both V(L) and its complement are infinite: each side has
/// vertices in the top half of every probed prefix [0, 2^k), k up to log2(probe).
bool both_sides_unbounded(const InducedMark& mark, Vertex probe);

}  // namespace owf

#endif  // OWF_GRAPH_HPP
