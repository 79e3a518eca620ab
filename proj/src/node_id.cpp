#include "osnrecruit/node_id.hpp"

#include <algorithm>

namespace osnrecruit {
namespace {

bool all_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; });
}

std::string_view strip_leading_zeros(std::string_view s) {
  const auto pos = s.find_first_not_of('0');
  return pos == std::string_view::npos ? s.substr(s.size() - 1) : s.substr(pos);
}

}  // namespace

std::strong_ordering operator<=>(const NodeId& a, const NodeId& b) {
  const bool an = all_digits(a.value_);
  const bool bn = all_digits(b.value_);
  if (an != bn) return an ? std::strong_ordering::less : std::strong_ordering::greater;
  if (an) {
    // Arbitrary-length numeric compare without overflow.
    const auto sa = strip_leading_zeros(a.value_);
    const auto sb = strip_leading_zeros(b.value_);
    if (sa.size() != sb.size()) return sa.size() <=> sb.size();
    if (const auto c = sa.compare(sb); c != 0) return c <=> 0;
    // "007" and "7" are distinct ids; fall through to a raw compare.
  }
  return a.value_.compare(b.value_) <=> 0;
}

}  // namespace osnrecruit
