#include "treeshift/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "treeshift/errors.hpp"
#include "treeshift/shift.hpp"

namespace treeshift {

namespace {

void check_instance(const SimplexInstance& inst) {
  if (inst.weights.empty()) throw EmptyIndexSet("simplex instance has no weights");
  for (double w : inst.weights) {
    if (w == 0.0 || !std::isfinite(w)) throw Error("simplex weights must be nonzero and finite");
  }
}

// Conjugate-side exponent: p* for ell^p, 1 for c0.
double dual_power(const SpaceSpec& s) { return s.is_c0() ? 1.0 : s.p_star; }

// Unnormalised minimiser t_j = (|mu_j|^{-1} / max)^{power}, plus its sum.
std::pair<std::vector<double>, double> scaled_inverse_powers(const std::vector<double>& w,
                                                             double power) {
  double top = 0;
  for (double x : w) top = std::max(top, 1.0 / std::abs(x));
  std::vector<double> t;
  t.reserve(w.size());
  double sum = 0;
  for (double x : w) {
    t.push_back(std::pow((1.0 / std::abs(x)) / top, power));
    sum += t.back();
  }
  return {std::move(t), sum};
}

std::size_t ell1_pick(const std::vector<double>& w, double delta) {
  double inf = std::numeric_limits<double>::infinity();
  for (double x : w) inf = std::min(inf, std::abs(x));
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (std::abs(w[i]) <= inf + delta) return i;
  }
  return 0;
}

}  // namespace

double simplex_inf(const SimplexInstance& inst) {
  check_instance(inst);
  const auto& w = inst.weights;
  if (inst.space.is_ell1()) {
    double inf = std::numeric_limits<double>::infinity();
    for (double x : w) inf = std::min(inf, std::abs(x));
    return inf;
  }
  const double power = dual_power(inst.space);
  double top = 0;
  for (double x : w) top = std::max(top, 1.0 / std::abs(x));
  const auto [t, sum] = scaled_inverse_powers(w, power);
  return 1.0 / (top * std::pow(sum, 1.0 / power));
}

double simplex_norm(const std::vector<double>& x, const SimplexInstance& inst) {
  double top = 0;
  for (std::size_t i = 0; i < x.size(); ++i) top = std::max(top, std::abs(x[i] * inst.weights[i]));
  if (inst.space.is_c0() || top == 0) return top;
  double acc = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = std::abs(x[i] * inst.weights[i]);
    acc += inst.space.is_ell1() ? t : std::pow(t / top, inst.space.p);
  }
  return inst.space.is_ell1() ? acc : top * std::pow(acc, 1.0 / inst.space.p);
}

std::vector<double> simplex_optimizer(const SimplexInstance& inst, double delta) {
  check_instance(inst);
  if (inst.space.is_ell1()) {
    std::vector<double> x(inst.weights.size(), 0.0);
    x[ell1_pick(inst.weights, delta)] = 1.0;
    return x;
  }
  auto [t, sum] = scaled_inverse_powers(inst.weights, dual_power(inst.space));
  for (auto& v : t) v /= sum;
  return t;
}

std::vector<Rational> simplex_optimizer_exact(const std::vector<Rational>& weights,
                                              const SpaceSpec& space) {
  if (weights.empty()) throw EmptyIndexSet("simplex instance has no weights");
  std::vector<Rational> x(weights.size(), Rational(0));
  if (space.is_ell1()) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < weights.size(); ++i) {
      if (abs(weights[i]) < abs(weights[best])) best = i;
    }
    x[best] = 1;
    return x;
  }
  int k = 1;
  if (!space.is_c0()) {
    auto q = space.integer_conjugate();
    if (!q) throw InexactMode("exact simplex minimiser needs an integer conjugate exponent");
    k = *q;
  }
  Rational sum = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] == 0) throw Error("simplex weights must be nonzero");
    x[i] = pow(1 / abs(weights[i]), k);
    sum += x[i];
  }
  for (auto& v : x) v /= sum;
  return x;
}

namespace {

std::vector<VertexAddress> nonempty_fiber(const VertexAddress& v, std::size_t n,
                                          const TreeModel& tree) {
  auto fiber = chi_n(v, n, tree);
  if (fiber.empty()) {
    throw EmptyFiber(fmt::format("vertex {} has no descendants {} generations down",
                                 tree.display(v), n));
  }
  return fiber;
}

}  // namespace

SparseVector build_Sn(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                      const SpaceSpec& spec, double delta) {
  require_resolvable(v, tree);
  auto fiber = nonempty_fiber(v, n, tree);
  SimplexInstance inst{{}, spec};
  inst.weights.reserve(fiber.size());
  for (const auto& u : fiber) inst.weights.push_back(tree.weight(u));
  const auto x = simplex_optimizer(inst, delta);
  std::vector<SparseVector::Entry> entries;
  entries.reserve(fiber.size());
  for (std::size_t i = 0; i < fiber.size(); ++i) entries.emplace_back(std::move(fiber[i]), x[i]);
  return SparseVector::from_entries(std::move(entries));
}

ExactVector build_Sn_exact(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                           const SpaceSpec& spec) {
  require_resolvable(v, tree);
  auto fiber = nonempty_fiber(v, n, tree);
  std::vector<Rational> w;
  w.reserve(fiber.size());
  for (const auto& u : fiber) w.push_back(to_rational(tree.weight(u)));
  const auto x = simplex_optimizer_exact(w, spec);
  std::vector<ExactVector::Entry> entries;
  entries.reserve(fiber.size());
  for (std::size_t i = 0; i < fiber.size(); ++i) entries.emplace_back(std::move(fiber[i]), x[i]);
  return ExactVector::from_entries(std::move(entries));
}

std::string_view to_string(InBranch b) { return b == InBranch::kept ? "kept" : "cancelled"; }

InResult build_In_unrooted(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                           const SpaceSpec& spec) {
  if (tree.is_rooted()) throw RootedTree("I_n with a case split is defined on unrooted trees");
  require_resolvable(v, tree);
  const VertexAddress w = *p_n(v, n, tree);
  const auto fiber = nonempty_fiber(w, n, tree);
  const double mu_w = std::abs(tree.weight(w));

  SimplexInstance inst{{}, spec};
  for (const auto& u : fiber) inst.weights.push_back(tree.weight(u));
  const double fiber_inf = simplex_inf(inst);

  InResult out;
  bool keep = false;
  if (spec.is_ell1()) {
    out.spine_term = 1.0 / mu_w;
    keep = mu_w <= fiber_inf;
    out.bound = std::min(mu_w, fiber_inf);
    out.M = 1.0 / out.bound;
  } else {
    const double power = dual_power(spec);
    out.spine_term = std::pow(mu_w, -power);
    // fiber_inf = (sum |mu_u|^{-power})^{-1/power}
    const double fiber_sum = std::pow(fiber_inf, -power);
    out.M = out.spine_term + fiber_sum;
    keep = out.spine_term >= out.M / 2;
    out.bound = std::pow(2.0 / out.M, 1.0 / power);
  }
  out.branch = keep ? InBranch::kept : InBranch::cancelled;
  if (keep) {
    out.vector = basis(v);
  } else {
    const auto x = simplex_optimizer(inst, 0.0);
    std::vector<SparseVector::Entry> entries{{v, 1.0}};
    for (std::size_t i = 0; i < fiber.size(); ++i) entries.emplace_back(fiber[i], -x[i]);
    out.vector = SparseVector::from_entries(std::move(entries));
  }
  return out;
}

RecurrentVector build_recurrent_vector(const std::vector<std::size_t>& seq, const TreeModel& tree,
                                       const SpaceSpec& spec, const TailBudget& budget,
                                       std::size_t terms, const Truncation& trunc) {
  if (!tree.is_rooted()) throw Error("recurrent-vector synthesis needs a rooted tree");
  const VertexAddress root{};
  RecurrentVector out;
  std::vector<std::size_t> chosen;
  std::vector<double> op_norms;  // ||B^{n_l}|| over the truncation
  std::vector<double> budgets;
  std::vector<SparseVector> parts;
  double c = 1.0;
  std::size_t pos = 0;
  for (std::size_t j = 1; j <= terms && pos < seq.size(); ++j) {
    const double target = budget.bound(j) / c;
    bool found = false;
    while (pos < seq.size()) {
      const std::size_t n = seq[pos++];
      if (!chosen.empty() && n <= chosen.back()) continue;
      const double q = fiber_quantity(root, n, tree, spec);
      if (q > 0 && 1.0 / q <= target * (1 + 1e-12)) {
        chosen.push_back(n);
        budgets.push_back(budget.bound(j));
        parts.push_back(build_Sn(root, n, tree, spec, 0.0));
        op_norms.push_back(operator_norm_pow(n, spec, tree, trunc).value);
        c = std::max(c, op_norms.back());
        found = true;
        break;
      }
      out.skipped.push_back(n);
    }
    if (!found) break;
  }
  if (chosen.empty()) {
    throw CriterionTooWeak("no sequence entry has a fiber heavy enough for its budget");
  }

  std::vector<SparseVector::Entry> entries;
  std::vector<double> part_norms;
  for (const auto& g : parts) {
    part_norms.push_back(norm(g, spec, tree));
    entries.insert(entries.end(), g.begin(), g.end());
  }
  out.f = SparseVector::from_entries(std::move(entries));

  for (std::size_t j = 0; j < chosen.size(); ++j) {
    RecurrenceCertificate cert;
    cert.j = j + 1;
    cert.n = chosen[j];
    cert.budget = budgets[j];
    cert.term_norm = part_norms[j];
    for (std::size_t l = j + 1; l < chosen.size(); ++l) {
      cert.bound += op_norms[j] * part_norms[l];
      cert.budget_tail += budgets[l];
    }
    cert.residual = norm(apply_B_pow(out.f, chosen[j], tree) - basis(root), spec, tree);
    out.certificates.push_back(cert);
  }
  return out;
}

}  // namespace treeshift
