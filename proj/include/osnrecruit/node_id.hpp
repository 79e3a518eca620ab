#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace osnrecruit {

/// Opaque user identifier as it appears in node/edge files.
///
/// Ordering is "natural": identifiers made only of decimal digits compare
/// numerically and sort before all other identifiers, which compare
/// lexicographically. Every deterministic tie-break in the library uses
/// this order.
class NodeId {
 public:
  NodeId() = default;
  explicit NodeId(std::string value) : value_(std::move(value)) {}
  explicit NodeId(const char* value) : value_(value) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const NodeId&, const NodeId&) = default;
  friend std::strong_ordering operator<=>(const NodeId& a, const NodeId& b);

  friend std::ostream& operator<<(std::ostream& os, const NodeId& id) { return os << id.value_; }

 private:
  std::string value_;
};

/// Dense position of a node inside a SocialGraph. Index order equals NodeId order.
using NodeIndex = std::uint32_t;

}  // namespace osnrecruit

template <>
struct std::hash<osnrecruit::NodeId> {
  std::size_t operator()(const osnrecruit::NodeId& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
