#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "treeshift/space.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

struct SimplexInstance {
  std::vector<double> weights;
  SpaceSpec space;
};

/// inf over the l1-simplex of the weighted norm of (x_j mu_j):
///   ell^1: min |mu_j|;  ell^p: (sum |mu_j|^{-p*})^{-1/p*};  c0: (sum 1/|mu_j|)^{-1}.
/// Throws EmptyIndexSet.
double simplex_inf(const SimplexInstance& inst);

/// Norm of (x_j mu_j)_j in the instance's space.
double simplex_norm(const std::vector<double>& x, const SimplexInstance& inst);

/// Nonnegative x with sum 1 reaching simplex_inf (exactly for p > 1 and c0;
/// within delta for ell^1, on the lowest index that qualifies).
std::vector<double> simplex_optimizer(const SimplexInstance& inst, double delta);

/// Exact minimiser for dyadic weights (integer p* for ell^p).
std::vector<Rational> simplex_optimizer_exact(const std::vector<Rational>& weights,
                                              const SpaceSpec& space);

inline double default_delta(std::size_t n) { return std::ldexp(1e-3, -static_cast<int>(n)); }

/// g on chi_n(v, n), nonnegative with sum 1, B^n g = e_v, norm near the
/// simplex infimum of the fiber weights. Throws EmptyFiber.
SparseVector build_Sn(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                      const SpaceSpec& spec, double delta);
ExactVector build_Sn_exact(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                           const SpaceSpec& spec);

enum class InBranch { kept, cancelled };
std::string_view to_string(InBranch b);

struct InResult {
  SparseVector vector;
  InBranch branch = InBranch::kept;
  /// (2/M)^{1/p*} for ell^p, 2/M for c0, and for ell^1 the smaller of
  /// |mu_{p^n v}| and the fiber infimum.
  double bound = 0;
  /// Spine term and the total M in the space's scale.
  double spine_term = 0;
  double M = 0;
};

/// Approximate identity I_n e_v on an unrooted tree. Throws RootedTree.
InResult build_In_unrooted(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                           const SpaceSpec& spec);

struct TailBudget {
  std::function<double(std::size_t)> bound = [](std::size_t j) {
    return std::ldexp(1.0, -static_cast<int>(j));
  };
};

struct RecurrenceCertificate {
  std::size_t j = 0;
  std::size_t n = 0;
  double budget = 0;
  double term_norm = 0;
  /// sum over later retained l of ||B^{n_j}|| ||g_l|| (norms from the truncation).
  double bound = 0;
  /// ||B^{n_j} f - e_root|| evaluated directly.
  double residual = 0;
  /// Sum of the budgets b_l for the later retained terms.
  double budget_tail = 0;
};

struct RecurrentVector {
  SparseVector f;
  std::vector<RecurrenceCertificate> certificates;
  /// Sequence entries passed over because their fiber was too light.
  std::vector<std::size_t> skipped;
};

/// f = sum_j g_j with g_j = S_{n_j} e_root on disjoint fibers. Throws
/// CriterionTooWeak when no term meets its budget and Error on unrooted trees.
RecurrentVector build_recurrent_vector(const std::vector<std::size_t>& seq, const TreeModel& tree,
                                       const SpaceSpec& spec, const TailBudget& budget,
                                       std::size_t terms, const Truncation& trunc);

}  // namespace treeshift
