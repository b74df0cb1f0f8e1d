#include "treeshift/presets.hpp"

#include <charconv>
#include <cmath>
#include <mutex>

#include "treeshift/errors.hpp"

namespace treeshift::presets {

namespace {

std::optional<long long> parse_suffix(std::string_view label, std::string_view prefix) {
  if (label.size() <= prefix.size() || label.substr(0, prefix.size()) != prefix) {
    return std::nullopt;
  }
  auto digits = label.substr(prefix.size());
  long long value = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return value;
}

// Address of the k-th vertex (k >= 1) on the chain hanging from `branch`.
VertexAddress chain_vertex(std::uint32_t branch, std::size_t k) {
  VertexAddress a;
  a.path.assign(k, 0);
  a.path[0] = branch;
  return a;
}

// Chain label for a rooted/anchored two-chain address, or nullopt.
std::optional<std::string> chain_label(const VertexAddress& v) {
  if (v.up != 0 || v.path.empty() || v.path[0] > 1) return std::nullopt;
  for (std::size_t i = 1; i < v.path.size(); ++i) {
    if (v.path[i] != 0) return std::nullopt;
  }
  return std::string(v.path[0] == 0 ? "u" : "v") + std::to_string(v.path.size());
}

std::optional<VertexAddress> resolve_chain(std::string_view label) {
  for (auto [prefix, branch] : {std::pair{std::string_view("u"), 0u}, std::pair{std::string_view("v"), 1u}}) {
    if (auto k = parse_suffix(label, prefix); k && *k >= 1) {
      return chain_vertex(branch, static_cast<std::size_t>(*k));
    }
  }
  return std::nullopt;
}

// Lazily extended table of block exponents; shared by copies of the tree.
class ExponentTable {
 public:
  explicit ExponentTable(BlockLengths lengths) : lengths_(std::move(lengths)) {}

  int at(std::size_t k) {
    std::lock_guard lock(mutex_);
    while (exponents_.size() < k) extend();
    return exponents_[k - 1];
  }

 private:
  std::size_t block_length(std::size_t j) {
    if (j <= lengths_.explicit_values.size()) return lengths_.explicit_values[j - 1];
    if (lengths_.tail == "linear") return j;
    if (lengths_.tail == "double") {
      const std::size_t prev = j >= 2 ? block_length(j - 1) : 0;
      return prev == 0 ? 1 : 2 * prev;
    }
    return std::size_t{1} << std::min<std::size_t>(j, 62);
  }

  void extend() {
    ++block_;
    const std::size_t m = block_length(block_);
    const int sign = (block_ % 2 == 1) ? -1 : 1;
    for (std::size_t i = 1; i <= 2 * m; ++i) {
      const auto magnitude = static_cast<int>(i <= m ? i : 2 * m - i);
      exponents_.push_back(sign * magnitude);
    }
    if (m == 0 && block_ > 4096) throw Error("block lengths never grow");
  }

  BlockLengths lengths_;
  std::mutex mutex_;
  std::vector<int> exponents_;
  std::size_t block_ = 0;
};

}  // namespace

int example_4_1_exponent(const BlockLengths& lengths, std::size_t k) {
  if (k == 0) return 0;
  return ExponentTable(lengths).at(k);
}

TreeModel example_4_1(BlockLengths lengths) {
  auto table = std::make_shared<ExponentTable>(lengths);
  TreeDefinition def;
  def.name = "example_4_1";
  def.kind = TreeKind::rooted;
  def.anchor_label = "ro";
  def.arity = [](const VertexAddress& v) -> std::size_t { return v.path.empty() ? 2 : 1; };
  def.weight = [table](const VertexAddress& v) {
    if (v.path.empty()) return 1.0;
    const int e = table->at(v.path.size());
    return std::ldexp(1.0, v.path[0] == 1 ? e : -e);
  };
  def.labels.resolve = resolve_chain;
  def.labels.name = chain_label;
  return TreeModel(std::move(def));
}

TreeModel example_7_2() {
  TreeDefinition def;
  def.name = "example_7_2";
  def.kind = TreeKind::unrooted;
  def.anchor_label = "o0";
  def.arity = [](const VertexAddress& v) -> std::size_t {
    return (v.up == 0 && v.path.empty()) ? 2 : 1;
  };
  def.spine_child_index = [](std::uint32_t) -> std::uint32_t { return 0; };
  def.weight = [](const VertexAddress& v) {
    return v.path.empty() ? 1.0 : std::ldexp(1.0, -static_cast<int>(v.path.size()));
  };
  def.labels.resolve = [](std::string_view label) -> std::optional<VertexAddress> {
    if (auto k = parse_suffix(label, "o"); k && *k >= 0) {
      return VertexAddress{static_cast<std::uint32_t>(*k), {}};
    }
    return resolve_chain(label);
  };
  def.labels.name = [](const VertexAddress& v) -> std::optional<std::string> {
    if (v.path.empty()) return "o" + std::to_string(v.up);
    return chain_label(v);
  };
  return TreeModel(std::move(def));
}

TreeModel full_binary(double weight, double ratio) {
  TreeDefinition def;
  def.name = "full_binary";
  def.kind = TreeKind::rooted;
  def.anchor_label = "ro";
  def.arity = [](const VertexAddress&) -> std::size_t { return 2; };
  def.weight = [weight, ratio](const VertexAddress& v) {
    return weight * std::pow(ratio, static_cast<double>(v.path.size()));
  };
  def.radial = RadialProfile{
      [](std::size_t) -> std::size_t { return 2; },
      [weight, ratio](std::size_t d) { return weight * std::pow(ratio, static_cast<double>(d)); }};
  return TreeModel(std::move(def));
}

TreeModel unary_path(bool rooted, double weight) {
  TreeDefinition def;
  def.name = "unary_path";
  def.kind = rooted ? TreeKind::rooted : TreeKind::unrooted;
  def.anchor_label = rooted ? "e0" : "z0";
  def.arity = [](const VertexAddress&) -> std::size_t { return 1; };
  def.weight = [weight](const VertexAddress&) { return weight; };
  if (rooted) {
    def.radial = RadialProfile{[](std::size_t) -> std::size_t { return 1; },
                               [weight](std::size_t) { return weight; }};
    def.labels.resolve = [](std::string_view label) -> std::optional<VertexAddress> {
      if (auto k = parse_suffix(label, "e"); k && *k >= 0) {
        return VertexAddress{0, std::vector<std::uint32_t>(static_cast<std::size_t>(*k), 0)};
      }
      return std::nullopt;
    };
    def.labels.name = [](const VertexAddress& v) -> std::optional<std::string> {
      return "e" + std::to_string(v.path.size());
    };
  } else {
    def.spine_child_index = [](std::uint32_t) -> std::uint32_t { return 0; };
    def.labels.resolve = [](std::string_view label) -> std::optional<VertexAddress> {
      auto k = parse_suffix(label, "z");
      if (!k) return std::nullopt;
      if (*k < 0) return VertexAddress{static_cast<std::uint32_t>(-*k), {}};
      return VertexAddress{0, std::vector<std::uint32_t>(static_cast<std::size_t>(*k), 0)};
    };
    def.labels.name = [](const VertexAddress& v) -> std::optional<std::string> {
      return "z" + std::to_string(v.generation());
    };
  }
  return TreeModel(std::move(def));
}

const std::vector<std::string>& names() {
  static const std::vector<std::string> all{"example_4_1", "example_7_2", "full_binary",
                                            "unary_path"};
  return all;
}

TreeModel by_name(std::string_view name) {
  if (name == "example_4_1") return example_4_1();
  if (name == "example_7_2") return example_7_2();
  if (name == "full_binary") return full_binary();
  if (name == "unary_path") return unary_path();
  throw UnknownPreset("unknown tree preset '" + std::string(name) + "'");
}

}  // namespace treeshift::presets
