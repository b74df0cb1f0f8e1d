#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "treeshift/tree.hpp"

namespace treeshift::presets {

/// Block-length sequence (m_k)_{k>=1} for the two-chain rooted example.
/// Explicit values are used first; afterwards the sequence continues with
/// `tail` ("pow2": m_k = 2^k, "linear": m_k = k, "double": m_k = 2 m_{k-1}).
struct BlockLengths {
  std::vector<std::size_t> explicit_values;
  std::string tail = "pow2";
};

/// Rooted tree: the root has two infinite chains u_1 -> u_2 -> ... (child 0)
/// and v_1 -> v_2 -> ... (child 1). mu_root = 1, mu_{u_k} = 1 / mu_{v_k}, and
/// mu_{v_k} = 2^{e_k} where block j (length 2 m_j) walks the exponent
/// 1, 2, ..., m_j, m_j - 1, ..., 0 away from zero, downwards for odd j and
/// upwards for even j.
TreeModel example_4_1(BlockLengths lengths = {});

/// Exponent e_k of mu_{v_k} (k >= 1) for the given block lengths.
int example_4_1_exponent(const BlockLengths& lengths, std::size_t k);

/// Unrooted tree: spine ... -> o_2 -> o_1 -> o_0, o_0 -> u_1 (child 0) and
/// o_0 -> v_1 (child 1), chains u_k -> u_{k+1}, v_k -> v_{k+1}.
/// mu_{o_k} = 1, mu_{u_k} = mu_{v_k} = 2^{-k}. Anchored at o_0.
TreeModel example_7_2();

/// Rooted full binary tree with mu_v = weight * ratio^{depth(v)}.
TreeModel full_binary(double weight = 1.0, double ratio = 1.0);

/// Unary path with constant weight; rooted (N_0-like) or unrooted (Z-like).
TreeModel unary_path(bool rooted = true, double weight = 1.0);

/// Names accepted by by_name() / tree-spec "preset" fields.
const std::vector<std::string>& names();

/// Preset with default parameters. Throws UnknownPreset.
TreeModel by_name(std::string_view name);

}  // namespace treeshift::presets
