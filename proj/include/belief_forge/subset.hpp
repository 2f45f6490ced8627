#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace belief_forge {

/// A subset of a frame, stored as a bitmask over element indices.
///
/// Subsets order canonically: ascending cardinality, ties by ascending mask.
/// This is the order used for every family-valued result, so iteration over
/// a family visits subsets before their supersets.
class Subset {
 public:
  constexpr Subset() = default;
  constexpr explicit Subset(std::uint64_t bits) : bits_(bits) {}

  static Subset of(std::initializer_list<int> indices) {
    std::uint64_t b = 0;
    for (int i : indices) b |= std::uint64_t{1} << i;
    return Subset(b);
  }

  constexpr std::uint64_t bits() const { return bits_; }
  constexpr int cardinality() const { return std::popcount(bits_); }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool contains(int index) const { return (bits_ >> index) & 1U; }

  constexpr bool is_subset_of(Subset other) const { return (bits_ & ~other.bits_) == 0; }
  constexpr bool is_strict_subset_of(Subset other) const {
    return is_subset_of(other) && bits_ != other.bits_;
  }
  constexpr bool intersects(Subset other) const { return (bits_ & other.bits_) != 0; }

  friend constexpr Subset operator&(Subset a, Subset b) { return Subset(a.bits_ & b.bits_); }
  friend constexpr Subset operator|(Subset a, Subset b) { return Subset(a.bits_ | b.bits_); }
  friend constexpr Subset operator-(Subset a, Subset b) { return Subset(a.bits_ & ~b.bits_); }

  friend constexpr bool operator==(Subset a, Subset b) = default;
  friend constexpr std::strong_ordering operator<=>(Subset a, Subset b) {
    if (auto c = a.cardinality() <=> b.cardinality(); c != 0) return c;
    return a.bits_ <=> b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
};

/// The finite universe: an ordered list of distinct element labels.
class Frame {
 public:
  static constexpr std::size_t kMaxSize = 64;

  /// Throws InvalidArgument on duplicate labels or a size outside [1, 64].
  explicit Frame(std::vector<std::string> labels);

  /// Frame with labels u1..un.
  static Frame numbered(std::size_t n);

  std::size_t size() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(std::size_t index) const { return labels_.at(index); }
  std::optional<std::size_t> index_of(std::string_view label) const;

  Subset full() const;
  Subset complement(Subset a) const { return full() - a; }
  bool owns(Subset a) const { return a.is_subset_of(full()); }

  /// Throws InvalidArgument naming the first unknown label.
  Subset subset(std::span<const std::string> labels) const;
  std::vector<std::string> labels_of(Subset a) const;
  /// "{u1,u2}" style rendering.
  std::string format(Subset a) const;

  friend bool operator==(const Frame&, const Frame&) = default;

 private:
  std::vector<std::string> labels_;
};

/// A deduplicated, canonically ordered collection of subsets.
class SetFamily {
 public:
  SetFamily() = default;
  SetFamily(std::initializer_list<Subset> members);
  explicit SetFamily(std::vector<Subset> members);

  const std::vector<Subset>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  bool contains(Subset a) const;
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }

  /// Returns a copy with `a` inserted (no-op when already present).
  SetFamily with(Subset a) const;
  SetFamily united(const SetFamily& other) const;

  friend bool operator==(const SetFamily&, const SetFamily&) = default;

 private:
  std::vector<Subset> members_;
};

/// Members not strictly contained in another member.
SetFamily maximal_elements(const SetFamily& family);

/// Maximal members of `family` strictly contained in `a`.
SetFamily strict_lower_family(const SetFamily& family, Subset a);

/// Maximal members of `family` contained in every set of `sets`.
/// Every input set must be a member of `family` (InvalidArgument otherwise).
SetFamily meet(const SetFamily& family, std::span<const Subset> sets);

/// Same as meet() but skips the membership check on `sets`.
SetFamily meet_unchecked(const SetFamily& family, std::span<const Subset> sets);

/// Closure of `family` under pairwise intersection.
SetFamily intersection_closure(const SetFamily& family);

/// All intersections of exactly `j` distinct members, 1 <= j <= size.
SetFamily stratum(const SetFamily& family, std::size_t j);

/// First pair (a, b) of members whose intersection is missing, if any.
std::optional<std::pair<Subset, Subset>> closure_witness(const SetFamily& family);

/// Intersection of the members of `sets` selected by the bits of `index_mask`.
/// An empty selection yields `top`.
inline Subset intersect_selected(std::span<const Subset> sets, std::uint64_t index_mask,
                                 Subset top = Subset(~std::uint64_t{0})) {
  Subset acc = top;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if ((index_mask >> i) & 1U) acc = acc & sets[i];
  }
  return acc;
}

}  // namespace belief_forge
