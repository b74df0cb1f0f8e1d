#include "treeshift/shift.hpp"

#include <cmath>

#include "treeshift/errors.hpp"
#include "treeshift/extremal.hpp"

namespace treeshift {

template <class Scalar>
BasicSparseVector<Scalar> apply_B(const BasicSparseVector<Scalar>& f, const TreeModel& tree) {
  return apply_B_pow(f, 1, tree);
}

template <class Scalar>
BasicSparseVector<Scalar> apply_S(const BasicSparseVector<Scalar>& f, const TreeModel& tree) {
  std::vector<typename BasicSparseVector<Scalar>::Entry> out;
  for (const auto& [v, x] : f) {
    require_resolvable(v, tree);
    for (auto& c : children(v, tree)) out.emplace_back(std::move(c), x);
  }
  return BasicSparseVector<Scalar>::from_entries(std::move(out));
}

template <class Scalar>
BasicSparseVector<Scalar> apply_B_pow(const BasicSparseVector<Scalar>& f, std::size_t n,
                                      const TreeModel& tree) {
  for (const auto& e : f) require_resolvable(e.first, tree);
  if (n == 0) return f;
  std::vector<typename BasicSparseVector<Scalar>::Entry> out;
  out.reserve(f.size());
  for (const auto& [v, x] : f) {
    if (auto up = p_n(v, n, tree)) out.emplace_back(std::move(*up), x);
  }
  return BasicSparseVector<Scalar>::from_entries(std::move(out));
}

template SparseVector apply_B(const SparseVector&, const TreeModel&);
template ExactVector apply_B(const ExactVector&, const TreeModel&);
template SparseVector apply_S(const SparseVector&, const TreeModel&);
template ExactVector apply_S(const ExactVector&, const TreeModel&);
template SparseVector apply_B_pow(const SparseVector&, std::size_t, const TreeModel&);
template ExactVector apply_B_pow(const ExactVector&, std::size_t, const TreeModel&);

namespace {

// A rooted truncation whose bottom layer has no children is the whole tree.
bool truncation_is_partial(const TreeModel& tree, const Truncation& trunc,
                           const std::vector<VertexAddress>& verts) {
  if (!tree.is_rooted()) return true;
  for (const auto& v : verts) {
    if (v.path.size() == trunc.depth && tree.arity(v) > 0) return true;
  }
  return false;
}

}  // namespace

OperatorNorm operator_norm_pow(std::size_t n, const SpaceSpec& spec, const TreeModel& tree,
                               const Truncation& trunc) {
  const auto verts = enumerate(tree, trunc);
  OperatorNorm out;
  out.vertices = verts.size();
  out.is_sup_over_truncation = truncation_is_partial(tree, trunc, verts);
  bool first = true;
  for (const auto& v : verts) {
    const double q = fiber_quantity(v, n, tree, spec);
    const double value = q == 0 ? 0.0 : std::abs(tree.weight(v)) * q;
    if (first || value > out.value) {
      out.value = value;
      out.attained_at = v;
      first = false;
    }
  }
  return out;
}

OperatorNorm operator_norm(const SpaceSpec& spec, const TreeModel& tree, const Truncation& trunc) {
  return operator_norm_pow(1, spec, tree, trunc);
}

Rational operator_norm_exact(const SpaceSpec& spec, const TreeModel& tree,
                             const Truncation& trunc) {
  int k = 1;
  if (!spec.is_c0() && !spec.is_ell1()) {
    auto q = spec.integer_conjugate();
    if (!q) throw InexactMode("exact operator norm needs an integer conjugate exponent");
    k = *q;
  }
  Rational best = 0;
  enumerate(tree, trunc, [&](const VertexAddress& v) {
    const Rational s = fiber_quantity_exact(v, 1, tree, spec);
    const Rational value = pow(abs(to_rational(tree.weight(v))), k) * s;
    if (value > best) best = value;
  });
  return best;
}

SparseVector norm_attaining_vector(const VertexAddress& v, const SpaceSpec& spec,
                                   const TreeModel& tree) {
  std::vector<SparseVector::Entry> out;
  const auto kids = children(v, tree);
  if (kids.empty()) return {};
  if (spec.is_ell1()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < kids.size(); ++i) {
      if (std::abs(tree.weight(kids[i])) < std::abs(tree.weight(kids[best]))) best = i;
    }
    return basis(kids[best]);
  }
  const double power = spec.is_c0() ? 1.0 : spec.p_star;
  for (const auto& u : kids) out.emplace_back(u, std::pow(std::abs(tree.weight(u)), -power));
  return SparseVector::from_entries(std::move(out));
}

std::vector<OrbitStep> orbit(const SparseVector& f, std::size_t n_max, const TreeModel& tree,
                             const SpaceSpec& spec) {
  std::vector<OrbitStep> steps;
  SparseVector current = f;
  for (std::size_t n = 0; n <= n_max; ++n) {
    if (n > 0) current = apply_B(current, tree);
    steps.push_back({n, current, norm(current, spec, tree)});
    if (current.empty()) break;
  }
  return steps;
}

namespace {

bool inside(const SparseVector& f, const BallSpec& ball, const TreeModel& tree, double slack) {
  return norm(f - ball.center, ball.space, tree) < ball.radius * (1.0 - slack);
}

SparseVector combine(std::vector<SparseVector::Entry> entries) {
  return SparseVector::from_entries(std::move(entries));
}

}  // namespace

std::optional<SparseVector> witness_return(std::size_t n, const BallSpec& U, const BallSpec& V,
                                           const TreeModel& tree, double slack) {
  if (n == 0) {
    const SparseVector mid = 0.5 * (U.center + V.center);
    for (const auto* f : {&U.center, &V.center, &mid}) {
      if (inside(*f, U, tree, slack) && inside(*f, V, tree, slack)) return *f;
    }
    return std::nullopt;
  }
  std::vector<SparseVector::Entry> entries;
  try {
    if (tree.is_rooted()) {
      entries.assign(U.center.begin(), U.center.end());
    } else {
      for (const auto& [v, x] : U.center) {
        for (const auto& [u, y] : build_In_unrooted(v, n, tree, U.space).vector) {
          entries.emplace_back(u, x * y);
        }
      }
    }
    for (const auto& [v, x] : V.center) {
      for (const auto& [u, y] : build_Sn(v, n, tree, V.space, default_delta(n))) {
        entries.emplace_back(u, x * y);
      }
    }
  } catch (const EmptyFiber&) {
    return std::nullopt;
  } catch (const EnumerationCapExceeded&) {
    return std::nullopt;
  }
  SparseVector f = combine(std::move(entries));
  if (!inside(f, U, tree, slack)) return std::nullopt;
  if (!inside(apply_B_pow(f, n, tree), V, tree, slack)) return std::nullopt;
  return f;
}

ReturnSetReport return_set(const BallSpec& U, const BallSpec& V, const TreeModel& tree,
                           std::size_t horizon, double slack) {
  ReturnSetReport report;
  report.horizon = horizon;
  for (std::size_t n = 0; n <= horizon; ++n) {
    if (auto f = witness_return(n, U, V, tree, slack)) {
      report.certified_in.push_back(n);
      report.witnesses.emplace(n, std::move(*f));
    } else {
      report.uncertified.push_back(n);
    }
  }
  return report;
}

}  // namespace treeshift
