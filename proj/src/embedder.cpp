#include "owf/embedder.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace owf {

namespace {

constexpr std::size_t index_of(TaskKind kind) { return static_cast<std::size_t>(kind); }

}  // namespace

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::plain: return "plain";
    case Mode::star: return "star";
    case Mode::star1: return "star1";
  }
  return "?";
}

Mode parse_mode(std::string_view text) {
  if (text == "plain") return Mode::plain;
  if (text == "star") return Mode::star;
  if (text == "star1") return Mode::star1;
  throw UsageError("unknown mode '" + std::string(text) + "' (expected plain, star or star1)");
}

std::string_view to_string(TaskKind kind) {
  switch (kind) {
    case TaskKind::cover_vertex: return "cover-vertex";
    case TaskKind::cover_element: return "cover-element";
    case TaskKind::cover_difference: return "cover-difference";
  }
  return "?";
}

std::string_view to_string(Outcome outcome) {
  switch (outcome) {
    case Outcome::done: return "done";
    case Outcome::already_satisfied: return "already-satisfied";
    case Outcome::budget_exhausted: return "budget-exhausted";
  }
  return "?";
}

RejectCounts& RejectCounts::operator+=(const RejectCounts& o) {
  used += o.used;
  coset += o.coset;
  difference += o.difference;
  spread += o.spread;
  return *this;
}

bool vs_membership(const Group& group, std::span<const Element> s, const Element& x) {
  std::vector<Element> plus;
  std::vector<Element> minus;
  plus.reserve(s.size());
  minus.reserve(s.size());
  for (const auto& y : s) {
    plus.push_back(group.sub(x, y));
    minus.push_back(group.neg(plus.back()));
  }
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (plus[i] == minus[i]) return false;
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      // −d_i = d_j iff d_i = −d_j, and −d_i = −d_j iff d_i = d_j.
      if (plus[i] == plus[j] || plus[i] == minus[j]) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------

Embedder::Embedder(GroupPtr group, GraphPtr graph, Mode mode, SessionOptions options,
                   SubgroupPtr subgroup, MarkPtr mark)
    : group_(std::move(group)),
      graph_(std::move(graph)),
      mode_(mode),
      options_(options),
      subgroup_(std::move(subgroup)),
      mark_(std::move(mark)) {
  if (!group_ || !graph_) throw UsageError("a session needs a group and a graph");
  if (group_->enumerate(0) != group_->zero())
    throw UsageError("group enumeration must start at zero");

  auto involutions = assert_involution_free(*group_, std::max<std::size_t>(1, options_.involution_prefix));
  if (!involutions.involution_free) {
    throw Refusal("group '" + std::string(group_->name()) + "' has the involution " +
                      to_string(*involutions.witness) +
                      "; no G-regular solution exists when F has infinitely many odd cycles, "
                      "and the construction requires an involution-free group",
                  involutions.witness);
  }
  if (mode_ == Mode::plain && !group_->is_abelian()) {
    throw UsageError("plain mode needs an abelian group; use --mode star for '" +
                     std::string(group_->name()) + "'");
  }
  for (Vertex v = 0; v < 64; ++v) {
    if (graph_->degree(v) == 0)
      throw Refusal("graph has the isolated vertex " + std::to_string(v) +
                    "; families with isolated vertices are not supported");
  }
  if (mode_ == Mode::star1) {
    if (!subgroup_) throw UsageError("star1 mode needs a subgroup");
    if (!mark_) throw UsageError("star1 mode needs an L clause in the graph spec");
    if (subgroup_->parent().id() != group_->id())
      throw UsageError("subgroup '" + std::string(subgroup_->name()) + "' is not a subgroup of '" +
                       std::string(group_->name()) + "'");
    auto m = options_.evidence_prefix;
    auto cosets = subgroup_->coset_count(m);
    if (static_cast<double>(cosets) < std::sqrt(static_cast<double>(m)) / 2.0)
      throw Refusal("subgroup '" + std::string(subgroup_->name()) + "' shows only " +
                    std::to_string(cosets) + " cosets in a prefix of " + std::to_string(m) +
                    "; the subsystem construction needs infinite index");
    if (!both_sides_unbounded(*mark_, m))
      throw Refusal("subsystem needs both V(L) and V(F) - V(L) infinite; mark '" + mark_->name() +
                    "' leaves one side finite");
  } else if (subgroup_) {
    throw UsageError("a subgroup is only meaningful in star1 mode");
  }
  budgets_.fill(mode_ == Mode::star ? std::max<std::size_t>(1, options_.budget) : 0);
}

std::size_t Embedder::budget_for(TaskKind kind) const { return budgets_[index_of(kind)]; }

void Embedder::settle_budget(TaskKind kind, Outcome outcome) {
  if (mode_ != Mode::star) return;
  auto& b = budgets_[index_of(kind)];
  if (outcome == Outcome::budget_exhausted) {
    b *= 2;
  } else {
    b = std::max<std::size_t>(1, options_.budget);
  }
}

void Embedder::assign(Vertex v, const Element& x) {
  state_.sigma.emplace(v, x);
  state_.sigma_inv.emplace(x, v);
  embedded_.insert(v);
}

void Embedder::add_edge(const Element& a, const Element& b) {
  auto d = group_->sub(a, b);
  state_.delta.insert(d);
  state_.delta.insert(group_->neg(d));
  state_.delta_order.push_back(group_->canonical_difference(d));
  state_.gamma_edges.emplace_back(a, b);
}

void Embedder::advance_free_hint() {
  while (used(group_->enumerate(free_hint_))) ++free_hint_;
}

Embedder::Side Embedder::side_of(std::optional<bool> want_in_L) const {
  if (!want_in_L) return Side::any;
  return *want_in_L ? Side::in_l : Side::outside_l;
}

StepReport Embedder::cover_vertex(Vertex v) {
  StepReport report;
  report.kind = TaskKind::cover_vertex;
  report.target_vertex = v;
  if (state_.sigma.contains(v)) {
    report.outcome = Outcome::already_satisfied;
    return report;
  }
  report.budget = budget_for(TaskKind::cover_vertex);

  std::vector<Element> images;
  for (auto w : graph_->neighbors(v)) {
    if (auto it = state_.sigma.find(w); it != state_.sigma.end()) images.push_back(it->second);
  }

  std::optional<Element> required_coset;
  std::vector<Element> forbidden_cosets;
  if (mode_ == Mode::star1) {
    if (mark_->contains(v)) {
      required_coset = subgroup_->coset_key(group_->zero());
    } else {
      forbidden_cosets.push_back(subgroup_->coset_key(group_->zero()));
      for (const auto& y : images) forbidden_cosets.push_back(subgroup_->coset_key(y));
    }
  }

  for (auto i = free_hint_;; ++i) {
    if (report.budget != 0 && report.candidates_examined >= report.budget) {
      report.outcome = Outcome::budget_exhausted;
      break;
    }
    auto x = group_->enumerate(i);
    ++report.candidates_examined;
    if (used(x)) {
      ++report.rejected.used;
      continue;
    }
    if (mode_ == Mode::star1) {
      auto key = subgroup_->coset_key(x);
      bool ok = required_coset ? key == *required_coset
                               : std::find(forbidden_cosets.begin(), forbidden_cosets.end(), key) ==
                                     forbidden_cosets.end();
      if (!ok) {
        ++report.rejected.coset;
        continue;
      }
    }
    // Δ holds both signs, so checking x − y also covers y − x.
    bool repeats = std::any_of(images.begin(), images.end(), [&](const Element& y) {
      return state_.delta.contains(group_->sub(x, y));
    });
    if (repeats) {
      ++report.rejected.difference;
      continue;
    }
    if (!vs_membership(*group_, images, x)) {
      ++report.rejected.spread;
      continue;
    }
    assign(v, x);
    for (const auto& y : images) add_edge(x, y);
    report.assigned.emplace_back(v, x);
    report.outcome = Outcome::done;
    advance_free_hint();
    break;
  }
  state_.rejected += report.rejected;
  settle_budget(TaskKind::cover_vertex, report.outcome);
  return report;
}

StepReport Embedder::cover_element(const Element& g) {
  group_->require(g);
  StepReport report;
  report.kind = TaskKind::cover_element;
  report.target_element = g;
  if (used(g)) {
    report.outcome = Outcome::already_satisfied;
    return report;
  }
  std::optional<bool> want_in_L;
  if (mode_ == Mode::star1) want_in_L = subgroup_->contains(g);
  auto& hint = far_vertex_hint_[static_cast<std::size_t>(side_of(want_in_L))];
  auto v = fresh_vertex_far_from(*graph_, embedded_, options_.far_radius, want_in_L, mark_.get(), hint);
  hint = v;
  assign(v, g);
  report.assigned.emplace_back(v, g);
  report.candidates_examined = 1;
  report.outcome = Outcome::done;
  advance_free_hint();
  return report;
}

StepReport Embedder::cover_difference(const Element& g) {
  group_->require(g);
  if (g == group_->zero()) throw UsageError("zero is never a difference");
  StepReport report;
  report.kind = TaskKind::cover_difference;
  report.target_element = g;
  if (state_.delta.contains(g)) {
    report.outcome = Outcome::already_satisfied;
    return report;
  }
  report.budget = budget_for(TaskKind::cover_difference);

  std::optional<bool> want_in_L;
  if (mode_ == Mode::star1) want_in_L = subgroup_->contains(g);

  const auto minus_g = group_->neg(g);
  for (auto i = free_hint_;; ++i) {
    if (report.budget != 0 && report.candidates_examined >= report.budget) {
      report.outcome = Outcome::budget_exhausted;
      break;
    }
    auto x = group_->enumerate(i);
    auto y = group_->add(minus_g, x);  // x − y = g
    ++report.candidates_examined;
    if (used(x) || used(y)) {
      ++report.rejected.used;
      continue;
    }
    if (want_in_L) {
      bool ok = subgroup_->contains(x) == *want_in_L && subgroup_->contains(y) == *want_in_L;
      if (!ok) {
        ++report.rejected.coset;
        continue;
      }
    }
    auto& hint = far_edge_hint_[static_cast<std::size_t>(side_of(want_in_L))];
    auto [v, w] = fresh_edge_far_from(*graph_, embedded_, options_.far_radius, want_in_L, mark_.get(), hint);
    hint = v;
    assign(v, x);
    assign(w, y);
    add_edge(x, y);
    report.assigned = {{v, x}, {w, y}};
    report.outcome = Outcome::done;
    advance_free_hint();
    break;
  }
  state_.rejected += report.rejected;
  settle_budget(TaskKind::cover_difference, report.outcome);
  return report;
}

StepReport Embedder::step() {
  auto& cur = state_.cursors;
  StepReport report;
  switch (cur.steps % 3) {
    case 0:
      report = cover_vertex(cur.vertex);
      report.task_index = cur.vertex;
      if (report.outcome != Outcome::budget_exhausted) ++cur.vertex;
      break;
    case 1:
      report = cover_element(group_->enumerate(cur.element));
      report.task_index = cur.element;
      ++cur.element;
      break;
    default:
      // enumerate(0) is zero, so the k-th nonzero element sits at index k + 1.
      report = cover_difference(group_->enumerate(cur.difference + 1));
      report.task_index = cur.difference;
      if (report.outcome != Outcome::budget_exhausted) ++cur.difference;
      break;
  }
  ++cur.steps;
  return report;
}

std::vector<StepReport> Embedder::run(std::size_t n) {
  std::vector<StepReport> reports;
  reports.reserve(n);
  for (std::size_t i = 0; i < n; ++i) reports.push_back(step());
  return reports;
}

}  // namespace owf
