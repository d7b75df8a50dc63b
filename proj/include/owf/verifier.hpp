#ifndef OWF_VERIFIER_HPP
#define OWF_VERIFIER_HPP

#include <string>
#include <vector>

#include "owf/embedder.hpp"
#include "owf/graph.hpp"
#include "owf/group.hpp"

// Brute-force checks of the finite shadows of the construction. Nothing here
// calls into the embedder's candidate tests; every check recomputes from the
// raw σ, edge list and recorded Δ.

namespace owf {

/// Outcome of one check. A failing verdict always carries a witness.
struct Verdict {
  explicit Verdict(std::string name) : check(std::move(name)) {}

  std::string check;
  bool pass = true;
  Json witness;  // null on pass
  Json stats = Json::object();
};

using Window = std::vector<Element>;

/// The first m enumerated elements.
Window prefix_window(const Group& group, std::size_t m);

/// Δ(Γ′) has no repeats up to sign, never contains zero, and agrees with the
/// recorded Δ list.
Verdict check_partial_difference(const Group& group, const EmbeddingState& state);

/// {u, v} ∈ E(F) ⇔ {σ(u), σ(v)} ∈ Γ′ for all embedded u, v.
Verdict check_induced_iso(const EmbeddingState& state, const GraphPresentation& graph);

/// For every pair {a, b} of window elements with a − b ∈ Δ, counts the
/// translates Γ′-edge + g landing on {a, b}; exactly one is required. Pairs
/// whose difference is not yet in Δ are pending.
///
/// stats: pairs, covered, double_covered, uncovered, pending, pending_fraction.
Verdict check_window_factorization(const Group& group, const EmbeddingState& state,
                                   const Window& window);

/// σ(v) ∈ H ⇔ v ∈ V(L); edges inside H join L-images and have differences in
/// H; all other differences avoid H.
Verdict check_subsystem(const EmbeddingState& state, const SubgroupView& subgroup,
                        const InducedMark& mark);

/// V_S ∩ window by direct evaluation of |±{x − y : y ∈ S}|.
std::vector<Element> brute_force_vs(const Group& group, const std::vector<Element>& s,
                                    const Window& window);

/// Every window element x outside V_{y1,y2} has y1 − x + y1 inside it.
/// Checks the whole window; stats split the outside elements into crossing
/// ones (x − y1 = −(x − y2)) and the rest, and count failures of each kind.
/// Throws UsageError if y1 == y2.
Verdict check_lemma_vs_injection(const Group& group, const Element& y1, const Element& y2,
                                 const Window& window);

/// |window − V_S| ≤ C(|S|, 2) + |S|. Throws UsageError on non-abelian groups.
Verdict check_abelian_bad_set_bound(const Group& group, const std::vector<Element>& s,
                                    const Window& window);

}  // namespace owf

#endif  // OWF_VERIFIER_HPP
