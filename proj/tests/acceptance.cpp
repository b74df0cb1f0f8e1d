#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "treeshift/cli.hpp"
#include "treeshift/criteria.hpp"
#include "treeshift/extremal.hpp"
#include "treeshift/presets.hpp"
#include "treeshift/shift.hpp"

using namespace treeshift;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  fmt::print("C{:<2} {} {}\n", id, ok ? "PASS" : "FAIL", detail);
  if (!ok) ++failures;
}

Truncation window(std::size_t depth, std::size_t ancestry = 0) {
  Truncation t;
  t.depth = depth;
  t.ancestry = ancestry;
  return t;
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

void c1_norm_example_4_1() {
  const std::vector<presets::BlockLengths> seqs{
      {}, {{2, 4, 8}, "pow2"}, {{1}, "linear"}, {{3, 5}, "double"}, {{5}, "linear"}};
  const double want = std::sqrt(4.25);
  bool ok = true;
  double worst = 0;
  for (const auto& m : seqs) {
    const auto t = presets::example_4_1(m);
    const std::size_t m1 = m.explicit_values.empty() ? 2 : m.explicit_values[0];
    const auto trunc = window(2 * m1 + 2);
    const double got = operator_norm(SpaceSpec::ell(2), t, trunc).value;
    worst = std::max(worst, std::abs(got - want));
    ok = ok && close(got, want, 1e-9) &&
         operator_norm_exact(SpaceSpec::ell(2), t, trunc) == Rational(17, 4);
  }
  report(1, ok, fmt::format("Example 4.1 ||B|| = sqrt(17/4) over {} block sequences, max error {:.3g}, "
                            "exact square 17/4", seqs.size(), worst));
}

void c2_norm_example_7_2() {
  const auto t = presets::example_7_2();
  const auto trunc = window(8, 8);
  bool ok = true;
  std::string detail;
  for (double p : {1.0, 2.0, 4.0}) {
    const double got = operator_norm(SpaceSpec::ell(p), t, trunc).value;
    const double want = std::pow(2.0, 2 - 1 / p);
    ok = ok && close(got, want, 1e-9);
    detail += fmt::format("p={} {:.12g} ", p, got);
  }
  // c0: sup over v of |mu_v| * sum_{u in Chi(v)} 1/|mu_u|, enumerated directly
  double direct = 0;
  for (const auto& v : enumerate(t, trunc)) {
    double s = 0;
    for (const auto& u : children(v, t)) s += 1 / std::abs(t.weight(u));
    direct = std::max(direct, std::abs(t.weight(v)) * s);
  }
  const auto c0 = operator_norm(SpaceSpec::c0(), t, trunc);
  const auto f = norm_attaining_vector(c0.attained_at, SpaceSpec::c0(), t);
  const double ratio = norm(apply_B(f, t), SpaceSpec::c0(), t) / norm(f, SpaceSpec::c0(), t);
  ok = ok && close(c0.value, direct, 1e-9) && close(ratio, c0.value, 1e-9) &&
       operator_norm_exact(SpaceSpec::c0(), t, trunc) == to_rational(direct);
  report(2, ok, detail + fmt::format("c0 {:.12g} (direct sum {:.12g}, attaining ratio {:.12g})",
                                     c0.value, direct, ratio));
}

void c3_orbit() {
  const auto t = presets::example_7_2();
  constexpr std::size_t K = 7;
  std::vector<SparseVector::Entry> e;
  for (std::size_t k = 0; k <= K; ++k) {
    e.emplace_back(t.resolve("u" + std::to_string(std::size_t{1} << k)), 1.0);
    e.emplace_back(t.resolve("v" + std::to_string(std::size_t{1} << k)), -1.0);
  }
  const auto f = SparseVector::from_entries(std::move(e));
  const auto target = basis(t.resolve("u1")) - basis(t.resolve("v1"));
  bool ok = true;
  double worst = 0;
  for (double p : {1.0, 2.0, 3.0}) {
    const auto spec = SpaceSpec::ell(p);
    double prev = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k <= 6; ++k) {
      const std::size_t n = (std::size_t{1} << k) - 1;
      const double r = norm(apply_B_pow(f, n, t) - target, spec, t);
      double tail = 0;
      for (std::size_t l = k + 1; l <= K; ++l) {
        tail += std::pow(2.0, -p * static_cast<double>((std::size_t{1} << l) - (std::size_t{1} << k)));
      }
      tail *= 2 / std::pow(2.0, p);
      const double rp = std::pow(r, p);
      worst = std::max(worst, std::abs(rp - tail));
      ok = ok && close(rp, tail, 1e-9) && r < prev;
      prev = r;
    }
  }
  report(3, ok, fmt::format("Example 7.2 residual^p equals the tail sum for p in {{1,2,3}}, k = 1..6, "
                            "strictly decreasing; max error {:.3g}", worst));
}

void c4_disjoint() {
  const auto t = presets::example_4_1();
  const auto spec = SpaceSpec::ell(2);
  bool ok = true;
  std::size_t smallest = std::numeric_limits<std::size_t>::max();
  for (std::size_t k = 1; k <= 5; ++k) {
    for (double N : {1.0, 2.0, 4.0}) {
      const auto Iu = I_set({t.resolve("u" + std::to_string(k))}, N, t, spec, 1000);
      const auto Iv = I_set({t.resolve("v" + std::to_string(k))}, N, t, spec, 1000);
      ok = ok && (Iu & Iv).empty();
      smallest = std::min({smallest, Iu.size(), Iv.size()});
    }
  }
  report(4, ok, fmt::format("Example 4.1 I(u_k,N) and I(v_k,N) disjoint for k <= 5, N in {{1,2,4}}, "
                            "horizon 1000 (smallest set has {} elements)", smallest));
}

// minimum over the mesh-1/m simplex grid, in the space's scale
double grid_min(const SimplexInstance& inst, int m) {
  const std::size_t k = inst.weights.size();
  const auto& sp = inst.space;
  // per-coordinate contributions tab[j][c] for x_j = c/m
  std::vector<std::vector<double>> tab(k, std::vector<double>(static_cast<std::size_t>(m) + 1));
  for (std::size_t j = 0; j < k; ++j) {
    for (int c = 0; c <= m; ++c) {
      const double y = static_cast<double>(c) / m * std::abs(inst.weights[j]);
      tab[j][static_cast<std::size_t>(c)] = sp.is_c0() ? y : std::pow(y, sp.p);
    }
  }
  double best = std::numeric_limits<double>::infinity();
  std::function<void(std::size_t, int, double)> rec = [&](std::size_t j, int left, double acc) {
    if (j + 1 == k) {
      const double v = tab[j][static_cast<std::size_t>(left)];
      best = std::min(best, sp.is_c0() ? std::max(acc, v) : acc + v);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      const double v = tab[j][static_cast<std::size_t>(c)];
      const double next = sp.is_c0() ? std::max(acc, v) : acc + v;
      if (next >= best) continue;
      rec(j + 1, left - c, next);
    }
  };
  rec(0, m, 0.0);
  return sp.is_c0() ? best : std::pow(best, 1 / sp.p);
}

void c5_simplex() {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logw(-8, 8);
  std::uniform_int_distribution<int> size(1, 6);
  const std::vector<SpaceSpec> spaces{SpaceSpec::ell(1), SpaceSpec::ell(1.5), SpaceSpec::ell(2),
                                      SpaceSpec::ell(3), SpaceSpec::c0()};
  constexpr double kDeltaL1 = 1e-3;
  bool ok = true;
  double grid_slack = std::numeric_limits<double>::infinity();
  double opt_excess = 0;
  for (int trial = 0; trial < 200; ++trial) {
    SimplexInstance inst{{}, spaces[static_cast<std::size_t>(trial) % spaces.size()]};
    const int k = size(rng);
    for (int i = 0; i < k; ++i) inst.weights.push_back(std::exp2(logw(rng)));
    const double inf = simplex_inf(inst);
    const double grid = grid_min(inst, 64);
    grid_slack = std::min(grid_slack, grid - inf);
    const double delta = inst.space.is_ell1() ? kDeltaL1 : 1e-9;
    const auto x = simplex_optimizer(inst, inst.space.is_ell1() ? kDeltaL1 : 0.0);
    const double sum = std::accumulate(x.begin(), x.end(), 0.0);
    bool feasible = close(sum, 1.0, 1e-12);
    for (double xi : x) feasible = feasible && xi >= 0;
    const double excess = simplex_norm(x, inst) - inf;
    opt_excess = std::max(opt_excess, excess);
    ok = ok && grid >= inf - 1e-6 && feasible && excess <= delta;
  }
  report(5, ok, fmt::format("200 simplex instances: grid minimum - infimum >= {:.3g}, optimizer excess "
                            "<= {:.3g}", grid_slack, opt_excess));
}

SparseVector random_vector(std::mt19937_64& rng, const std::vector<VertexAddress>& pool) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> count(1, 8), val(-256, 256);
  std::vector<SparseVector::Entry> e;
  const int k = count(rng);
  for (int i = 0; i < k; ++i) e.emplace_back(pool[pick(rng)], val(rng) / 32.0);
  return SparseVector::from_entries(std::move(e));
}

void c6_duality() {
  std::mt19937_64 rng(6);
  bool ok = true;
  double worst = 0;
  std::size_t pairs = 0;
  for (const auto& name : presets::names()) {
    const auto t = presets::by_name(name);
    const auto pool = enumerate(t, window(5, 4));
    for (int i = 0; i < 1000; ++i, ++pairs) {
      const auto f = random_vector(rng, pool);
      const auto g = random_vector(rng, pool);
      const double lhs = pairing(apply_B(f, t), g);
      const double gap = std::abs(lhs - pairing(f, apply_S(g, t)));
      worst = std::max(worst, gap / (1 + std::abs(lhs)));
      const auto fe = to_exact(f), ge = to_exact(g);
      ok = ok && gap <= 1e-9 * (1 + std::abs(lhs)) &&
           pairing(apply_B(fe, t), ge) == pairing(fe, apply_S(ge, t));
    }
  }
  report(6, ok, fmt::format("<Bf,g> = <f,Sg> on {} random pairs over {} presets (max relative gap {:.3g}, "
                            "exact equality in rational mode)",
                            pairs, presets::names().size(), worst));
}

void c7_right_inverse() {
  bool ok = true;
  std::size_t checks = 0;
  for (const auto& t : {presets::full_binary(), presets::example_4_1(), presets::example_7_2()}) {
    for (const auto& v : enumerate(t, window(3, t.is_rooted() ? 0 : 3))) {
      for (std::size_t n = 1; n <= 6; ++n, ++checks) {
        const auto g = build_Sn_exact(v, n, t, SpaceSpec::ell(2));
        ok = ok && apply_B_pow(g, n, t) == basis_exact(v);
      }
    }
  }
  report(7, ok, fmt::format("B^n S_n e_v = e_v exactly for {} (v, n) pairs, depth <= 3, n <= 6", checks));
}

void c8_hypercyclicity() {
  const auto spec = SpaceSpec::ell(2);
  const auto bin = presets::full_binary();
  const auto b = dynamics_report(bin, spec, FamilySpec::infinite(),
                                 singleton_samples(bin, default_sample_vertices(bin)), 64);
  bool witness_ok = !b.witness.empty();
  for (std::size_t k = 0; k < b.witness.size(); ++k) witness_ok = witness_ok && b.witness[k] == k + 1;

  const auto path = presets::unary_path(true);
  const auto pr = dynamics_report(path, spec, FamilySpec::infinite(),
                                  singleton_samples(path, default_sample_vertices(path)), 64);
  bool path_fails = !pr.satisfied;
  for (const auto& e : pr.entries) {
    if (e.N == 2) path_fails = path_fails && e.verdict.status == VerdictStatus::fails;
  }

  const auto e = presets::example_7_2();
  const auto u1 = e.resolve("u1");
  const auto er = dynamics_report(e, spec, FamilySpec::infinite(), {{"{u1}", {u1}}}, 50);
  const bool capped = close(er.samples[0].ceiling, 3.0, 1e-9) &&
                      (I_set({u1}, 4, e, spec, 50) & J_set({u1}, 4, e, spec, 50)).empty();
  report(8, b.satisfied && witness_ok && path_fails && !er.satisfied && capped,
         fmt::format("full_binary satisfied with n_k = k ({} terms); unary_path fails at N = 2; "
                     "Example 7.2 fails with I and J capped at {:.12g}",
                     b.witness.size(), er.samples[0].ceiling));
}

void c9_limit_point() {
  const auto spec = SpaceSpec::ell(2);
  const auto t = presets::example_4_1();
  const auto a = limit_point_report(t, spec, default_sample_vertices(t), 128);
  const auto e = presets::example_7_2();
  const auto b = limit_point_report(e, spec, default_sample_vertices(e), 128);
  const bool spine_one = b.spine_limit && close(*b.spine_limit, 1.0, 1e-12);
  report(9, a.satisfied && b.vertex_diverges && !b.spine_decay && !b.satisfied && spine_one,
         fmt::format("Example 4.1: {}; Example 7.2 spine weights stay at {}", a.summary,
                     b.spine_limit ? fmt::format("{:.12g}", *b.spine_limit) : "n/a"));
}

void c10_recurrent() {
  const auto bin = presets::full_binary();
  const auto spec = SpaceSpec::ell(2);
  std::vector<std::size_t> seq(40);
  std::iota(seq.begin(), seq.end(), 1);
  const auto rv = build_recurrent_vector(seq, bin, spec, TailBudget{}, 4, window(20));
  bool ok = rv.certificates.size() == 4;
  std::string ns;
  for (const auto& c : rv.certificates) {
    const double residual = norm(apply_B_pow(rv.f, c.n, bin) - basis({}), spec, bin);
    double tail = 0;
    for (const auto& d : rv.certificates) {
      if (d.j > c.j) tail += std::ldexp(1.0, -static_cast<int>(d.j));
    }
    ok = ok && residual <= tail + 1e-9 && close(residual, c.residual, 1e-12);
    ns += fmt::format("{}{}", ns.empty() ? "" : ",", c.n);
  }
  report(10, ok, fmt::format("recurrent vector on full_binary with n_j = {}: every re-verified residual "
                             "within its tail budget", ns));
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void c11_determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "treeshift_acceptance";
  std::filesystem::create_directories(dir);
  bool ok = true;
  for (const auto& name : cli::experiments()) {
    std::string csv[2];
    for (int r = 0; r < 2; ++r) {
      const auto path = dir / fmt::format("{}_{}.csv", name, r);
      std::ostringstream out, err;
      const int code = cli::main({"treeshift", "reproduce", name, "--seed", "1234", "--csv", path.string()},
                                 out, err);
      ok = ok && code == 0;
      csv[r] = slurp(path);
    }
    ok = ok && !csv[0].empty() && csv[0] == csv[1];
  }
  report(11, ok, fmt::format("{} reproduce experiments give byte-identical CSV across two seeded runs",
                             cli::experiments().size()));
}

}  // namespace

int main() {
  const std::vector<std::function<void()>> checks{c1_norm_example_4_1, c2_norm_example_7_2, c3_orbit,
                                                  c4_disjoint,         c5_simplex,          c6_duality,
                                                  c7_right_inverse,    c8_hypercyclicity,   c9_limit_point,
                                                  c10_recurrent,       c11_determinism};
  for (std::size_t i = 0; i < checks.size(); ++i) {
    try {
      checks[i]();
    } catch (const std::exception& e) {
      report(static_cast<int>(i + 1), false, std::string("threw: ") + e.what());
    }
  }
  std::fflush(stdout);
  return failures == 0 ? 0 : 1;
}
