#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace treeshift {

/// Finite name of a vertex in a possibly infinite directed tree.
///
/// The vertex is reached from the anchor by `up` parent steps followed by
/// descending along `path` (0-based child indices in rule order). Rooted
/// trees are anchored at the root and always have `up == 0`.
///
/// Canonical form: when `up > 0` the first path entry must not step back
/// into p^{up-1}(anchor); see canonicalize() in tree.hpp.
struct VertexAddress {
  std::uint32_t up = 0;
  std::vector<std::uint32_t> path;

  VertexAddress() = default;
  VertexAddress(std::uint32_t up_steps, std::vector<std::uint32_t> child_path)
      : up(up_steps), path(std::move(child_path)) {}

  /// Generation relative to the anchor (negative above it).
  std::int64_t generation() const {
    return static_cast<std::int64_t>(path.size()) - static_cast<std::int64_t>(up);
  }

  bool is_anchor() const { return up == 0 && path.empty(); }

  friend auto operator<=>(const VertexAddress&, const VertexAddress&) = default;
  friend bool operator==(const VertexAddress&, const VertexAddress&) = default;
};

/// Textual form "(up; i1.i2.…)", e.g. "(0; 1.0)", "(2;)".
std::string to_string(const VertexAddress& addr);

/// Inverse of to_string(); whitespace-tolerant. Throws ParseError.
VertexAddress parse_address(std::string_view text);

struct VertexAddressHash {
  std::size_t operator()(const VertexAddress& a) const noexcept;
};

}  // namespace treeshift
