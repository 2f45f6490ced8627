#include "belief_forge/subset.hpp"

#include <algorithm>
#include <set>
#include <unordered_set>

#include "belief_forge/errors.hpp"

namespace belief_forge {

Frame::Frame(std::vector<std::string> labels) : labels_(std::move(labels)) {
  if (labels_.empty() || labels_.size() > kMaxSize) {
    throw InvalidArgument("frame size must be in [1, 64], got " + std::to_string(labels_.size()));
  }
  std::set<std::string_view> seen;
  for (const auto& l : labels_) {
    if (!seen.insert(l).second) throw InvalidArgument("duplicate frame label '" + l + "'");
  }
}

Frame Frame::numbered(std::size_t n) {
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) labels.push_back("u" + std::to_string(i));
  return Frame(std::move(labels));
}

std::optional<std::size_t> Frame::index_of(std::string_view label) const {
  auto it = std::find(labels_.begin(), labels_.end(), label);
  if (it == labels_.end()) return std::nullopt;
  return static_cast<std::size_t>(it - labels_.begin());
}

Subset Frame::full() const {
  return Subset(size() == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size()) - 1);
}

Subset Frame::subset(std::span<const std::string> labels) const {
  std::uint64_t bits = 0;
  for (const auto& l : labels) {
    auto idx = index_of(l);
    if (!idx) throw InvalidArgument("unknown label '" + l + "'");
    bits |= std::uint64_t{1} << *idx;
  }
  return Subset(bits);
}

std::vector<std::string> Frame::labels_of(Subset a) const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < size(); ++i) {
    if (a.contains(static_cast<int>(i))) out.push_back(labels_[i]);
  }
  return out;
}

std::string Frame::format(Subset a) const {
  std::string out = "{";
  bool first = true;
  for (const auto& l : labels_of(a)) {
    if (!first) out += ",";
    out += l;
    first = false;
  }
  return out + "}";
}

SetFamily::SetFamily(std::initializer_list<Subset> members)
    : SetFamily(std::vector<Subset>(members)) {}

SetFamily::SetFamily(std::vector<Subset> members) : members_(std::move(members)) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
}

bool SetFamily::contains(Subset a) const {
  return std::binary_search(members_.begin(), members_.end(), a);
}

SetFamily SetFamily::with(Subset a) const {
  if (contains(a)) return *this;
  SetFamily out = *this;
  out.members_.insert(std::lower_bound(out.members_.begin(), out.members_.end(), a), a);
  return out;
}

SetFamily SetFamily::united(const SetFamily& other) const {
  std::vector<Subset> all = members_;
  all.insert(all.end(), other.members_.begin(), other.members_.end());
  return SetFamily(std::move(all));
}

SetFamily maximal_elements(const SetFamily& family) {
  const auto& m = family.members();
  std::vector<Subset> out;
  // Canonical order puts supersets after their subsets, so only later
  // members can dominate an earlier one.
  for (std::size_t i = 0; i < m.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = i + 1; j < m.size() && !dominated; ++j) {
      dominated = m[i].is_strict_subset_of(m[j]);
    }
    if (!dominated) out.push_back(m[i]);
  }
  return SetFamily(std::move(out));
}

SetFamily strict_lower_family(const SetFamily& family, Subset a) {
  std::vector<Subset> below;
  for (Subset b : family) {
    if (b.is_strict_subset_of(a)) below.push_back(b);
  }
  return maximal_elements(SetFamily(std::move(below)));
}

SetFamily meet_unchecked(const SetFamily& family, std::span<const Subset> sets) {
  Subset bound = intersect_selected(sets, sets.size() >= 64 ? ~std::uint64_t{0}
                                                            : (std::uint64_t{1} << sets.size()) - 1);
  std::vector<Subset> lower;
  for (Subset c : family) {
    if (c.is_subset_of(bound)) lower.push_back(c);
  }
  return maximal_elements(SetFamily(std::move(lower)));
}

SetFamily meet(const SetFamily& family, std::span<const Subset> sets) {
  if (sets.empty()) throw InvalidArgument("meet of an empty list");
  for (Subset s : sets) {
    if (!family.contains(s)) throw InvalidArgument("meet argument is not a member of the family");
  }
  return meet_unchecked(family, sets);
}

SetFamily intersection_closure(const SetFamily& family) {
  std::vector<Subset> all = family.members();
  std::unordered_set<std::uint64_t> seen;
  for (Subset s : all) seen.insert(s.bits());
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      Subset x = all[i] & all[j];
      if (seen.insert(x.bits()).second) all.push_back(x);
    }
  }
  return SetFamily(std::move(all));
}

SetFamily stratum(const SetFamily& family, std::size_t j) {
  if (j < 1 || j > family.size()) {
    throw InvalidArgument("stratum index " + std::to_string(j) + " outside [1, " +
                          std::to_string(family.size()) + "]");
  }
  // reach[c] holds every intersection of exactly c distinct members seen so far.
  std::vector<std::unordered_set<std::uint64_t>> reach(j + 1);
  reach[0].insert(~std::uint64_t{0});
  for (Subset a : family) {
    for (std::size_t c = j; c-- > 0;) {
      for (std::uint64_t v : reach[c]) reach[c + 1].insert(v & a.bits());
    }
  }
  std::vector<Subset> out;
  for (std::uint64_t v : reach[j]) out.emplace_back(v);
  return SetFamily(std::move(out));
}

std::optional<std::pair<Subset, Subset>> closure_witness(const SetFamily& family) {
  const auto& m = family.members();
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (!family.contains(m[i] & m[j])) return std::pair{m[i], m[j]};
    }
  }
  return std::nullopt;
}

}  // namespace belief_forge
