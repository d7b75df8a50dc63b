#ifndef OWF_GROUP_HPP
#define OWF_GROUP_HPP

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "json.hpp"

namespace owf {

using Json = nlohmann::ordered_json;

/// Thrown when operands or arguments do not belong together (mixed groups,
/// malformed specs, non-canonical encodings).
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Element of ℤ²: componentwise addition.
struct IntPair {
  std::int64_t first = 0;
  std::int64_t second = 0;
  auto operator<=>(const IntPair&) const = default;
};

/// Element of ℤ₂ × ℤ. Only used to demonstrate refusal; it has involutions.
struct TorsionPair {
  std::int64_t parity = 0;  // in {0, 1}
  std::int64_t value = 0;
  auto operator<=>(const TorsionPair&) const = default;
};

/// Element (h, k) of the kernel of (h, k) ↦ (|h| + k) mod 2 inside
/// (free product of countably many involutions) × ℤ.
///
/// `word` is the reduced spelling h_{i1} + ... + h_{it} of h: no two
/// adjacent indices are equal. Canonical iff reduced and t + k is even.
struct KernelElement {
  std::vector<std::uint32_t> word;
  std::int64_t shift = 0;
  auto operator<=>(const KernelElement&) const = default;
};

/// Canonically encoded group element; equality is identity of encodings.
class Element {
 public:
  using Storage = std::variant<std::int64_t, IntPair, KernelElement, TorsionPair>;

  Element() = default;
  Element(std::int64_t v) : value_(v) {}  // NOLINT: integers read naturally
  Element(IntPair p) : value_(p) {}       // NOLINT
  Element(TorsionPair p) : value_(p) {}   // NOLINT
  Element(KernelElement k) : value_(std::move(k)) {}  // NOLINT

  const Storage& storage() const { return value_; }

  template <typename T>
  const T& as() const { return std::get<T>(value_); }
  template <typename T>
  bool holds() const { return std::holds_alternative<T>(value_); }

  bool operator==(const Element&) const = default;
  auto operator<=>(const Element&) const = default;

  std::size_t hash() const;

 private:
  Storage value_{std::int64_t{0}};
};

struct ElementHash {
  std::size_t operator()(const Element& e) const { return e.hash(); }
};

std::string to_string(const Element& e);

/// Thrown when a construction is requested that provably cannot exist.
class Refusal : public std::runtime_error {
 public:
  explicit Refusal(const std::string& what, std::optional<Element> witness = std::nullopt)
      : std::runtime_error(what), witness_(std::move(witness)) {}

  const std::optional<Element>& witness() const { return witness_; }

 private:
  std::optional<Element> witness_;
};

enum class GroupId { integers, integer_pairs, free_product_kernel, torsion_demo };

/// A countable group written additively, with a fixed enumeration of order
/// type ω (every element has a finite index).
///
/// Descriptors are immutable from the caller's point of view and may be
/// shared across threads. Some groups memoize their enumeration internally.
class Group {
 public:
  virtual ~Group() = default;

  virtual GroupId id() const = 0;
  /// CLI / certificate name: "z", "z2", "fpk", "z2xz-demo".
  virtual std::string_view name() const = 0;
  virtual bool is_abelian() const = 0;

  virtual Element zero() const = 0;
  /// Throws UsageError if either operand belongs to another group.
  virtual Element add(const Element& a, const Element& b) const = 0;
  virtual Element neg(const Element& a) const = 0;
  /// n-th element of the documented enumeration; enumerate(0) is zero().
  virtual Element enumerate(std::size_t n) const = 0;
  /// Strict order agreeing with enumeration index.
  virtual bool enumerates_before(const Element& a, const Element& b) const = 0;
  /// True if `e` is a canonical encoding of an element of this group.
  virtual bool owns(const Element& e) const = 0;

  virtual Json to_json(const Element& e) const = 0;
  /// Parses and enforces canonical form; throws UsageError otherwise.
  virtual Element from_json(const Json& j) const = 0;

  /// a − b, i.e. a + (−b). For non-abelian groups the order matters.
  Element sub(const Element& a, const Element& b) const { return add(a, neg(b)); }
  /// Canonical pick of {d, −d}: the one enumerated first.
  Element canonical_difference(const Element& d) const;
  void require(const Element& e) const;
};

using GroupPtr = std::shared_ptr<const Group>;

/// Accepts "z", "z2", "fpk" and "z2xz-demo".
GroupPtr make_group(std::string_view name);

struct InvolutionReport {
  bool involution_free = true;
  std::size_t checked = 0;
  std::optional<Element> witness;
};

/// Scans the first `prefix_size` enumerated elements for x ≠ 0 with x + x = 0.
InvolutionReport assert_involution_free(const Group& g, std::size_t prefix_size);

/// A normal subgroup H of a parent group, with a canonical coset representative.
class SubgroupView {
 public:
  virtual ~SubgroupView() = default;
  virtual std::string_view name() const = 0;
  virtual const Group& parent() const = 0;
  virtual bool contains(const Element& a) const = 0;
  /// Canonical representative of a + H; constant exactly on cosets.
  virtual Element coset_key(const Element& a) const = 0;

  /// Number of distinct cosets met by the first `m` enumerated elements.
  std::size_t coset_count(std::size_t m) const;
};

using SubgroupPtr = std::shared_ptr<const SubgroupView>;

/// "z-cross-0" (ℤ × {0}) and "0-cross-z" ({0} × ℤ), both inside ℤ².
SubgroupPtr make_subgroup(std::string_view name, GroupPtr parent);

}  // namespace owf

template <>
struct std::hash<owf::Element> {
  std::size_t operator()(const owf::Element& e) const { return e.hash(); }
};

#endif  // OWF_GROUP_HPP
