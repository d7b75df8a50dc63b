#ifndef OWF_EMBEDDER_HPP
#define OWF_EMBEDDER_HPP

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "owf/graph.hpp"
#include "owf/group.hpp"

namespace owf {

/// plain: abelian groups, where every partial difference embedding keeps
/// extension candidates plentiful. star: any involution-free group, candidate
/// scans are capped by a budget. star1: subsystem over a normal subgroup H,
/// with V(L) mapped onto H.
enum class Mode { plain, star, star1 };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

enum class TaskKind { cover_vertex, cover_element, cover_difference };
enum class Outcome { done, already_satisfied, budget_exhausted };

std::string_view to_string(TaskKind kind);
std::string_view to_string(Outcome outcome);

/// Why scanned candidates were passed over.
struct RejectCounts {
  std::size_t used = 0;        // image already taken
  std::size_t coset = 0;       // wrong coset of H (star1 only)
  std::size_t difference = 0;  // would repeat a difference already in Δ
  std::size_t spread = 0;      // ±(x − σ(w)) values collide (x ∉ V_W)

  RejectCounts& operator+=(const RejectCounts& o);
  std::size_t total() const { return used + coset + difference + spread; }
};

struct StepReport {
  TaskKind kind = TaskKind::cover_vertex;
  std::size_t task_index = 0;
  std::optional<Vertex> target_vertex;
  std::optional<Element> target_element;
  Outcome outcome = Outcome::done;
  std::vector<std::pair<Vertex, Element>> assigned;
  std::size_t candidates_examined = 0;
  RejectCounts rejected;
  std::size_t budget = 0;  // cap in force; 0 means uncapped
};

/// Number of tasks of each kind completed; the next task of a kind has this index.
struct Cursors {
  std::size_t vertex = 0;
  std::size_t element = 0;
  std::size_t difference = 0;
  std::size_t steps = 0;
};

/// The partial embedding σ: F′ → Γ′ together with Δ(Γ′).
struct EmbeddingState {
  std::map<Vertex, Element> sigma;
  std::unordered_map<Element, Vertex, ElementHash> sigma_inv;
  /// Edges of Γ′ in insertion order.
  std::vector<std::pair<Element, Element>> gamma_edges;
  /// Δ(Γ′) as a set: holds both d and −d for every edge.
  std::unordered_set<Element, ElementHash> delta;
  /// One canonical representative of {d, −d} per edge, in insertion order.
  std::vector<Element> delta_order;
  Cursors cursors;
  RejectCounts rejected;
};

/// True iff the 2|S| values ±(x − y), y ∈ S, are pairwise distinct.
bool vs_membership(const Group& group, std::span<const Element> s, const Element& x);

struct SessionOptions {
  std::size_t involution_prefix = 1000;
  /// Initial per-task candidate cap in star mode; doubles after each exhaustion.
  std::size_t budget = 4096;
  /// Prefix size for the infinite-index and infinite-complement evidence.
  std::size_t evidence_prefix = 10000;
  /// New isolated vertices and edges are placed at distance > this from F′.
  std::size_t far_radius = 2;
};

/// Greedy construction session. Runs the three covering tasks under a
/// round-robin schedule: step 3k covers vertex k, step 3k + 1 covers the k-th
/// enumerated element, step 3k + 2 the k-th nonzero enumerated element as a
/// difference. Deterministic given its inputs.
class Embedder {
 public:
  /// Throws Refusal if the group has an involution in the scanned prefix or
  /// the subsystem conditions fail; UsageError for inconsistent arguments.
  Embedder(GroupPtr group, GraphPtr graph, Mode mode, SessionOptions options = {},
           SubgroupPtr subgroup = nullptr, MarkPtr mark = nullptr);

  StepReport cover_vertex(Vertex v);
  StepReport cover_element(const Element& g);
  StepReport cover_difference(const Element& g);

  StepReport step();
  std::vector<StepReport> run(std::size_t n);

  const EmbeddingState& state() const { return state_; }
  const Group& group() const { return *group_; }
  const GraphPresentation& graph() const { return *graph_; }
  Mode mode() const { return mode_; }
  const SubgroupView* subgroup() const { return subgroup_.get(); }
  const InducedMark* mark() const { return mark_.get(); }
  const SessionOptions& options() const { return options_; }

 private:
  enum class Side { any, in_l, outside_l };

  std::size_t budget_for(TaskKind kind) const;
  void settle_budget(TaskKind kind, Outcome outcome);
  bool used(const Element& x) const { return state_.sigma_inv.contains(x); }
  void assign(Vertex v, const Element& x);
  void add_edge(const Element& a, const Element& b);
  void advance_free_hint();
  Side side_of(std::optional<bool> want_in_L) const;

  GroupPtr group_;
  GraphPtr graph_;
  Mode mode_;
  SessionOptions options_;
  SubgroupPtr subgroup_;
  MarkPtr mark_;

  EmbeddingState state_;
  VertexSet embedded_;
  std::array<std::size_t, 3> budgets_{};
  // Least enumeration index not yet used as an image.
  std::size_t free_hint_ = 0;
  // Far-vertex / far-edge scans restart here; distance to F′ only shrinks.
  std::array<Vertex, 3> far_vertex_hint_{};
  std::array<Vertex, 3> far_edge_hint_{};
};

}  // namespace owf

#endif  // OWF_EMBEDDER_HPP
