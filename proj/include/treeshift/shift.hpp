#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "treeshift/space.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

/// (Bf)(v) = sum of f over the children of v; B e_root = 0.
template <class Scalar>
BasicSparseVector<Scalar> apply_B(const BasicSparseVector<Scalar>& f, const TreeModel& tree);

/// Formal transpose of B: S e_v = sum of e_u over the children u of v.
template <class Scalar>
BasicSparseVector<Scalar> apply_S(const BasicSparseVector<Scalar>& f, const TreeModel& tree);

template <class Scalar>
BasicSparseVector<Scalar> apply_B_pow(const BasicSparseVector<Scalar>& f, std::size_t n,
                                      const TreeModel& tree);

struct OperatorNorm {
  double value = 0;
  /// The value is a supremum over a truncation of an infinite tree, hence a
  /// lower bound for the true norm.
  bool is_sup_over_truncation = true;
  VertexAddress attained_at;
  std::size_t vertices = 0;
};

/// ||B|| as the supremum over the truncation of |mu_v| * fiber_quantity(v, 1).
OperatorNorm operator_norm(const SpaceSpec& spec, const TreeModel& tree, const Truncation& trunc);

/// Same supremum for B^n (Chi^n in place of Chi).
OperatorNorm operator_norm_pow(std::size_t n, const SpaceSpec& spec, const TreeModel& tree,
                               const Truncation& trunc);

/// Exact ||B||^{p*} for integer p*, or the exact ||B|| for ell^1 and c0.
Rational operator_norm_exact(const SpaceSpec& spec, const TreeModel& tree, const Truncation& trunc);

/// Vector supported on Chi(v) with ||B f|| / ||f|| equal to the per-vertex
/// quantity of operator_norm (empty when v is a leaf).
SparseVector norm_attaining_vector(const VertexAddress& v, const SpaceSpec& spec,
                                   const TreeModel& tree);

struct OrbitStep {
  std::size_t n = 0;
  SparseVector value;
  double norm = 0;
};

/// B^n f for n = 0..n_max, stopping after the first zero iterate.
std::vector<OrbitStep> orbit(const SparseVector& f, std::size_t n_max, const TreeModel& tree,
                             const SpaceSpec& spec);

struct BallSpec {
  SparseVector center;
  double radius = 1;
  SpaceSpec space;
};

inline constexpr double kDefaultSlack = 1e-6;

/// Tries f = I_n(center_U) + S_n(center_V) and returns it when
/// ||f - c_U|| < r_U (1 - slack) and ||B^n f - c_V|| < r_V (1 - slack).
/// nullopt means this construction did not certify n.
std::optional<SparseVector> witness_return(std::size_t n, const BallSpec& U, const BallSpec& V,
                                           const TreeModel& tree, double slack = kDefaultSlack);

struct ReturnSetReport {
  std::size_t horizon = 0;
  std::vector<std::size_t> certified_in;
  std::vector<std::size_t> uncertified;
  std::map<std::size_t, SparseVector> witnesses;
};

ReturnSetReport return_set(const BallSpec& U, const BallSpec& V, const TreeModel& tree,
                           std::size_t horizon, double slack = kDefaultSlack);

}  // namespace treeshift
