#include "owf/group.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <sstream>
#include <tuple>
#include <unordered_set>

namespace owf {

namespace {

std::size_t mix(std::size_t seed, std::size_t v) {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

std::int64_t iabs(std::int64_t v) { return v < 0 ? -v : v; }

/// Enumeration memo grown one block (shell / grade) at a time. Appending is
/// deterministic, so readers observe the same sequence as a recomputation.
class LazyEnumeration {
 public:
  using BlockFn = std::function<std::vector<Element>(std::size_t)>;

  explicit LazyEnumeration(BlockFn block) : block_(std::move(block)) {}

  Element at(std::size_t n) const {
    std::lock_guard lock(mutex_);
    while (items_.size() <= n) {
      auto next = block_(blocks_++);
      items_.insert(items_.end(), std::make_move_iterator(next.begin()),
                    std::make_move_iterator(next.end()));
    }
    return items_[n];
  }

 private:
  BlockFn block_;
  mutable std::mutex mutex_;
  mutable std::vector<Element> items_;
  mutable std::size_t blocks_ = 0;
};

[[noreturn]] void mixed(std::string_view group, const Element& e) {
  throw UsageError("element " + to_string(e) + " does not belong to group '" +
                   std::string(group) + "'");
}

// ---------------------------------------------------------------------------
// ℤ, enumerated 0, 1, −1, 2, −2, ...

class Integers final : public Group {
 public:
  GroupId id() const override { return GroupId::integers; }
  std::string_view name() const override { return "z"; }
  bool is_abelian() const override { return true; }
  Element zero() const override { return std::int64_t{0}; }

  Element add(const Element& a, const Element& b) const override {
    require(a);
    require(b);
    return a.as<std::int64_t>() + b.as<std::int64_t>();
  }
  Element neg(const Element& a) const override {
    require(a);
    return -a.as<std::int64_t>();
  }
  Element enumerate(std::size_t n) const override {
    if (n % 2 == 1) return static_cast<std::int64_t>((n + 1) / 2);
    return -static_cast<std::int64_t>(n / 2);
  }
  bool enumerates_before(const Element& a, const Element& b) const override {
    auto x = a.as<std::int64_t>();
    auto y = b.as<std::int64_t>();
    return std::make_tuple(iabs(x), x < 0) < std::make_tuple(iabs(y), y < 0);
  }
  bool owns(const Element& e) const override { return e.holds<std::int64_t>(); }

  Json to_json(const Element& e) const override { return e.as<std::int64_t>(); }
  Element from_json(const Json& j) const override {
    if (!j.is_number_integer()) throw UsageError("integer element expected, got " + j.dump());
    return j.get<std::int64_t>();
  }
};

// ---------------------------------------------------------------------------
// ℤ², enumerated by square shells max(|a|,|b|) = k; inside a shell by
// (|a| + |b|, a, b).

auto pair_key(const IntPair& p) {
  return std::make_tuple(std::max(iabs(p.first), iabs(p.second)),
                         iabs(p.first) + iabs(p.second), p.first, p.second);
}

class IntegerPairs final : public Group {
 public:
  IntegerPairs()
      : enumeration_([](std::size_t shell) {
          auto k = static_cast<std::int64_t>(shell);
          std::vector<IntPair> ring;
          for (std::int64_t a = -k; a <= k; ++a) {
            for (std::int64_t b = -k; b <= k; ++b) {
              if (std::max(iabs(a), iabs(b)) == k) ring.push_back({a, b});
            }
          }
          std::sort(ring.begin(), ring.end(),
                    [](const IntPair& x, const IntPair& y) { return pair_key(x) < pair_key(y); });
          return std::vector<Element>(ring.begin(), ring.end());
        }) {}

  GroupId id() const override { return GroupId::integer_pairs; }
  std::string_view name() const override { return "z2"; }
  bool is_abelian() const override { return true; }
  Element zero() const override { return IntPair{0, 0}; }

  Element add(const Element& a, const Element& b) const override {
    require(a);
    require(b);
    const auto& x = a.as<IntPair>();
    const auto& y = b.as<IntPair>();
    return IntPair{x.first + y.first, x.second + y.second};
  }
  Element neg(const Element& a) const override {
    require(a);
    const auto& x = a.as<IntPair>();
    return IntPair{-x.first, -x.second};
  }
  Element enumerate(std::size_t n) const override { return enumeration_.at(n); }
  bool enumerates_before(const Element& a, const Element& b) const override {
    return pair_key(a.as<IntPair>()) < pair_key(b.as<IntPair>());
  }
  bool owns(const Element& e) const override { return e.holds<IntPair>(); }

  Json to_json(const Element& e) const override {
    const auto& p = e.as<IntPair>();
    return Json::array({p.first, p.second});
  }
  Element from_json(const Json& j) const override {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw UsageError("integer pair [a, b] expected, got " + j.dump());
    return IntPair{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
  }

 private:
  LazyEnumeration enumeration_;
};

// ---------------------------------------------------------------------------
// ℤ₂ × ℤ; enumerated (0,0), (1,0), (0,1), (1,1), (0,−1), (1,−1), ...

class TorsionDemo final : public Group {
 public:
  GroupId id() const override { return GroupId::torsion_demo; }
  std::string_view name() const override { return "z2xz-demo"; }
  bool is_abelian() const override { return true; }
  Element zero() const override { return TorsionPair{0, 0}; }

  Element add(const Element& a, const Element& b) const override {
    require(a);
    require(b);
    const auto& x = a.as<TorsionPair>();
    const auto& y = b.as<TorsionPair>();
    return TorsionPair{(x.parity + y.parity) % 2, x.value + y.value};
  }
  Element neg(const Element& a) const override {
    require(a);
    const auto& x = a.as<TorsionPair>();
    return TorsionPair{x.parity, -x.value};
  }
  Element enumerate(std::size_t n) const override {
    return TorsionPair{static_cast<std::int64_t>(n % 2),
                       Integers{}.enumerate(n / 2).as<std::int64_t>()};
  }
  bool enumerates_before(const Element& a, const Element& b) const override {
    const auto& x = a.as<TorsionPair>();
    const auto& y = b.as<TorsionPair>();
    return std::make_tuple(iabs(x.value), x.value < 0, x.parity) <
           std::make_tuple(iabs(y.value), y.value < 0, y.parity);
  }
  bool owns(const Element& e) const override {
    if (!e.holds<TorsionPair>()) return false;
    auto p = e.as<TorsionPair>().parity;
    return p == 0 || p == 1;
  }

  Json to_json(const Element& e) const override {
    const auto& p = e.as<TorsionPair>();
    return Json::array({p.parity, p.value});
  }
  Element from_json(const Json& j) const override {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number_integer() || !j[1].is_number_integer())
      throw UsageError("pair [parity, value] expected, got " + j.dump());
    Element e = TorsionPair{j[0].get<std::int64_t>(), j[1].get<std::int64_t>()};
    if (!owns(e)) throw UsageError("parity must be 0 or 1 in " + j.dump());
    return e;
  }
};

// ---------------------------------------------------------------------------
// Free-product kernel. Generator h_i weighs i + 1, shift k weighs |k|; the
// enumeration walks total weight 0, 1, 2, ... (finitely many elements each),
// and orders a weight class by (word length, |shift|, word, shift).

std::int64_t weight(const KernelElement& e) {
  std::int64_t w = iabs(e.shift);
  for (auto i : e.word) w += static_cast<std::int64_t>(i) + 1;
  return w;
}

std::tuple<std::int64_t, std::size_t, std::int64_t, const std::vector<std::uint32_t>&, std::int64_t>
kernel_key(const KernelElement& e) {
  return {weight(e), e.word.size(), iabs(e.shift), e.word, e.shift};
}

bool reduced(const std::vector<std::uint32_t>& word) {
  return std::adjacent_find(word.begin(), word.end()) == word.end();
}

void reduced_words(std::int64_t budget, std::vector<std::uint32_t>& prefix,
                   std::vector<std::vector<std::uint32_t>>& out) {
  if (budget == 0) {
    out.push_back(prefix);
    return;
  }
  for (std::int64_t part = 1; part <= budget; ++part) {
    auto index = static_cast<std::uint32_t>(part - 1);
    if (!prefix.empty() && prefix.back() == index) continue;
    prefix.push_back(index);
    reduced_words(budget - part, prefix, out);
    prefix.pop_back();
  }
}

std::vector<Element> kernel_grade(std::size_t grade) {
  auto w = static_cast<std::int64_t>(grade);
  std::vector<KernelElement> items;
  for (std::int64_t shift = -w; shift <= w; ++shift) {
    std::vector<std::vector<std::uint32_t>> words;
    std::vector<std::uint32_t> prefix;
    reduced_words(w - iabs(shift), prefix, words);
    for (auto& word : words) {
      if ((static_cast<std::int64_t>(word.size()) + shift) % 2 != 0) continue;
      items.push_back({std::move(word), shift});
    }
  }
  std::sort(items.begin(), items.end(), [](const KernelElement& a, const KernelElement& b) {
    return kernel_key(a) < kernel_key(b);
  });
  return std::vector<Element>(std::make_move_iterator(items.begin()),
                              std::make_move_iterator(items.end()));
}

class FreeProductKernel final : public Group {
 public:
  FreeProductKernel() : enumeration_(kernel_grade) {}

  GroupId id() const override { return GroupId::free_product_kernel; }
  std::string_view name() const override { return "fpk"; }
  bool is_abelian() const override { return false; }
  Element zero() const override { return KernelElement{}; }

  Element add(const Element& a, const Element& b) const override {
    require(a);
    require(b);
    const auto& x = a.as<KernelElement>();
    const auto& y = b.as<KernelElement>();
    KernelElement out{x.word, x.shift + y.shift};
    for (auto g : y.word) {
      if (!out.word.empty() && out.word.back() == g) {
        out.word.pop_back();
      } else {
        out.word.push_back(g);
      }
    }
    return out;
  }
  Element neg(const Element& a) const override {
    require(a);
    const auto& x = a.as<KernelElement>();
    return KernelElement{{x.word.rbegin(), x.word.rend()}, -x.shift};
  }
  Element enumerate(std::size_t n) const override { return enumeration_.at(n); }
  bool enumerates_before(const Element& a, const Element& b) const override {
    return kernel_key(a.as<KernelElement>()) < kernel_key(b.as<KernelElement>());
  }
  bool owns(const Element& e) const override {
    if (!e.holds<KernelElement>()) return false;
    const auto& k = e.as<KernelElement>();
    return reduced(k.word) && (static_cast<std::int64_t>(k.word.size()) + k.shift) % 2 == 0;
  }

  Json to_json(const Element& e) const override {
    const auto& k = e.as<KernelElement>();
    Json j;
    j["word"] = k.word;
    j["shift"] = k.shift;
    return j;
  }
  Element from_json(const Json& j) const override {
    if (!j.is_object() || !j.contains("word") || !j.contains("shift") || !j["word"].is_array() ||
        !j["shift"].is_number_integer())
      throw UsageError("kernel element {\"word\": [...], \"shift\": k} expected, got " + j.dump());
    KernelElement k;
    for (const auto& g : j["word"]) {
      if (!g.is_number_unsigned()) throw UsageError("generator index must be a natural: " + j.dump());
      k.word.push_back(g.get<std::uint32_t>());
    }
    k.shift = j["shift"].get<std::int64_t>();
    if (!reduced(k.word)) throw UsageError("word is not reduced: " + j.dump());
    if ((static_cast<std::int64_t>(k.word.size()) + k.shift) % 2 != 0)
      throw UsageError("word length + shift must be even: " + j.dump());
    return k;
  }

 private:
  LazyEnumeration enumeration_;
};

// ---------------------------------------------------------------------------

class PairAxisSubgroup final : public SubgroupView {
 public:
  PairAxisSubgroup(GroupPtr parent, bool first_axis)
      : parent_(std::move(parent)), first_axis_(first_axis) {}

  std::string_view name() const override { return first_axis_ ? "z-cross-0" : "0-cross-z"; }
  const Group& parent() const override { return *parent_; }
  bool contains(const Element& a) const override {
    parent_->require(a);
    const auto& p = a.as<IntPair>();
    return first_axis_ ? p.second == 0 : p.first == 0;
  }
  Element coset_key(const Element& a) const override {
    parent_->require(a);
    const auto& p = a.as<IntPair>();
    return first_axis_ ? IntPair{0, p.second} : IntPair{p.first, 0};
  }

 private:
  GroupPtr parent_;
  bool first_axis_;
};

}  // namespace

std::size_t Element::hash() const {
  return std::visit(
      [this](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        std::size_t h = value_.index();
        if constexpr (std::is_same_v<T, std::int64_t>) {
          h = mix(h, std::hash<std::int64_t>{}(v));
        } else if constexpr (std::is_same_v<T, KernelElement>) {
          h = mix(h, std::hash<std::int64_t>{}(v.shift));
          for (auto g : v.word) h = mix(h, g);
        } else if constexpr (std::is_same_v<T, IntPair>) {
          h = mix(mix(h, std::hash<std::int64_t>{}(v.first)), std::hash<std::int64_t>{}(v.second));
        } else {
          h = mix(mix(h, std::hash<std::int64_t>{}(v.parity)), std::hash<std::int64_t>{}(v.value));
        }
        return h;
      },
      value_);
}

std::string to_string(const Element& e) {
  std::ostringstream os;
  std::visit(
      [&os](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::int64_t>) {
          os << v;
        } else if constexpr (std::is_same_v<T, IntPair>) {
          os << '(' << v.first << ',' << v.second << ')';
        } else if constexpr (std::is_same_v<T, TorsionPair>) {
          os << '(' << v.parity << ',' << v.value << ')';
        } else {
          os << '(';
          if (v.word.empty()) os << "id";
          for (std::size_t i = 0; i < v.word.size(); ++i) os << (i ? "+h" : "h") << v.word[i];
          os << ',' << v.shift << ')';
        }
      },
      e.storage());
  return os.str();
}

Element Group::canonical_difference(const Element& d) const {
  auto n = neg(d);
  return enumerates_before(n, d) ? n : d;
}

void Group::require(const Element& e) const {
  if (!owns(e)) mixed(name(), e);
}

GroupPtr make_group(std::string_view name) {
  if (name == "z") return std::make_shared<Integers>();
  if (name == "z2") return std::make_shared<IntegerPairs>();
  if (name == "fpk") return std::make_shared<FreeProductKernel>();
  if (name == "z2xz-demo") return std::make_shared<TorsionDemo>();
  throw UsageError("unknown group '" + std::string(name) + "' (expected z, z2, fpk or z2xz-demo)");
}

InvolutionReport assert_involution_free(const Group& g, std::size_t prefix_size) {
  if (prefix_size == 0) throw UsageError("involution scan needs a prefix of at least one element");
  InvolutionReport report;
  const auto zero = g.zero();
  for (std::size_t n = 0; n < prefix_size; ++n) {
    auto x = g.enumerate(n);
    ++report.checked;
    if (x != zero && g.add(x, x) == zero) {
      report.involution_free = false;
      report.witness = std::move(x);
      break;
    }
  }
  return report;
}

std::size_t SubgroupView::coset_count(std::size_t m) const {
  std::unordered_set<Element, ElementHash> keys;
  for (std::size_t n = 0; n < m; ++n) keys.insert(coset_key(parent().enumerate(n)));
  return keys.size();
}

SubgroupPtr make_subgroup(std::string_view name, GroupPtr parent) {
  if (!parent) throw UsageError("subgroup needs a parent group");
  if (name == "z-cross-0" || name == "0-cross-z") {
    if (parent->id() != GroupId::integer_pairs)
      throw UsageError("subgroup '" + std::string(name) + "' lives in z2, not '" +
                       std::string(parent->name()) + "'");
    return std::make_shared<PairAxisSubgroup>(std::move(parent), name == "z-cross-0");
  }
  throw UsageError("unknown subgroup '" + std::string(name) + "' (expected z-cross-0 or 0-cross-z)");
}

}  // namespace owf
