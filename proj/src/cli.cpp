#include "treeshift/cli.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "treeshift/criteria.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/extremal.hpp"
#include "treeshift/presets.hpp"
#include "treeshift/shift.hpp"
#include "treeshift/tree_spec.hpp"

namespace treeshift::cli {

namespace {

std::string num(double x) { return fmt::format("{:.12g}", x); }

struct Output {
  std::ostringstream text;
  std::ostringstream csv;
  int code = kPass;
};

TreeModel load_tree(const RunConfig& cfg, const std::string& fallback = {}) {
  const std::string arg = cfg.tree.empty() ? fallback : cfg.tree;
  if (arg.empty()) throw ParseError("--tree is required for '" + cfg.command + "'");
  return load_tree_argument(arg);
}

Truncation truncation_for(const RunConfig& cfg, const TreeModel& tree) {
  Truncation t = tree.default_truncation();
  if (cfg.depth) t.depth = *cfg.depth;
  if (cfg.ancestry) t.ancestry = *cfg.ancestry;
  return t;
}

std::vector<VertexAddress> resolve_all(const std::vector<std::string>& labels,
                                       const TreeModel& tree) {
  std::vector<VertexAddress> out;
  for (const auto& l : labels) out.push_back(tree.resolve(l));
  return out;
}

SparseVector vector_argument(const std::string& spec, const TreeModel& tree) {
  if (spec.empty()) throw ParseError("a vector is required (vertex label, address or file)");
  std::ifstream in(spec);
  if (in) return read_vector(in, tree);
  return basis(tree.resolve(spec));
}

// ---- validate ----------------------------------------------------------------

void cmd_validate(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto trunc = truncation_for(cfg, tree);
  const auto rep = validate(tree, trunc);
  o.text << fmt::format("tree {} ({}), {} vertices checked\n", tree.name(),
                        tree.is_rooted() ? "rooted" : "unrooted", rep.vertices_checked);
  o.csv << "kind,vertex,message\n";
  for (const auto& v : rep.violations) {
    o.text << fmt::format("  {} at {}: {}\n", to_string(v.kind), v.address, v.message);
    o.csv << fmt::format("{},{},\"{}\"\n", to_string(v.kind), v.address, v.message);
  }
  if (!rep.ok()) {
    o.text << fmt::format("INVALID: {} violation(s)\n", rep.violations.size());
    o.code = kSpecError;
    return;
  }

  // Seeded spot checks of duality and contractivity on random sparse vectors.
  const auto verts = enumerate(tree, trunc);
  const auto spec = parse_space(cfg.space);
  const auto op = operator_norm(spec, tree, trunc);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<std::size_t> pick(0, verts.size() - 1);
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  auto random_vector = [&] {
    std::vector<SparseVector::Entry> e;
    for (int i = 0; i < 4; ++i) e.emplace_back(verts[pick(rng)], val(rng));
    return SparseVector::from_entries(std::move(e));
  };
  double worst_duality = 0;
  bool contractive = true;
  for (int trial = 0; trial < 200; ++trial) {
    const auto f = random_vector();
    const auto g = random_vector();
    const double lhs = pairing(apply_B(f, tree), g);
    const double rhs = pairing(f, apply_S(g, tree));
    worst_duality = std::max(worst_duality, std::abs(lhs - rhs) / (1 + std::abs(lhs)));
    // B f may leave the truncation only upward, where the norm bound still applies.
    if (norm(apply_B(f, tree), spec, tree) > op.value * norm(f, spec, tree) * (1 + 1e-9) &&
        !op.is_sup_over_truncation) {
      contractive = false;
    }
  }
  o.text << fmt::format("seed {}: duality defect {} over 200 random pairs\n", cfg.seed,
                        num(worst_duality));
  if (worst_duality > 1e-9 || !contractive) {
    o.text << "INVARIANT BREACH\n";
    o.code = kInternalError;
    return;
  }
  o.text << "OK\n";
}

// ---- norm ----------------------------------------------------------------------

void cmd_norm(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto trunc = truncation_for(cfg, tree);
  const auto spec = parse_space(cfg.space);
  const auto r = operator_norm(spec, tree, trunc);
  o.text << fmt::format("operator norm of B on {} over {} vertices: {}\n", to_string(spec),
                        r.vertices, num(r.value));
  o.text << fmt::format("sup_over_truncation: {}\nattained at: {}\n",
                        r.is_sup_over_truncation ? "yes" : "no", tree.display(r.attained_at));
  // Cross-check with the norm-attaining vector at the maximising vertex.
  const auto f = norm_attaining_vector(r.attained_at, spec, tree);
  if (!f.empty()) {
    const double ratio = norm(apply_B(f, tree), spec, tree) / norm(f, spec, tree);
    o.text << fmt::format("extremal vector ratio: {}\n", num(ratio));
    if (std::abs(ratio - r.value) > 1e-9 * std::max(1.0, r.value)) {
      o.text << "INVARIANT BREACH: extremal vector disagrees with the supremum\n";
      o.code = kInternalError;
    }
  }
  std::string exact;
  if (cfg.exact) {
    const auto e = operator_norm_exact(spec, tree, trunc);
    const bool powered = !spec.is_c0() && !spec.is_ell1();
    exact = e.str();
    o.text << fmt::format("exact {}: {}\n", powered ? "||B||^{p*}" : "||B||", exact);
  }
  o.csv << "space,norm,sup_over_truncation,attained_at,exact\n";
  o.csv << fmt::format("{},{},{},{},{}\n", to_string(spec), num(r.value),
                       r.is_sup_over_truncation ? 1 : 0, to_string(r.attained_at), exact);
}

// ---- orbit ---------------------------------------------------------------------

void cmd_orbit(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto spec = parse_space(cfg.space);
  SparseVector f;
  if (!cfg.vector_path.empty()) f = vector_argument(cfg.vector_path, tree);
  for (const auto& v : resolve_all(cfg.vertices, tree)) f += basis(v);
  const auto steps = orbit(f, cfg.horizon.value_or(16), tree, spec);
  o.csv << "n,norm,support\n";
  for (const auto& s : steps) {
    o.text << fmt::format("n = {:3}  norm = {}  support = {}\n", s.n, num(s.norm), s.value.size());
    o.csv << fmt::format("{},{},{}\n", s.n, num(s.norm), s.value.size());
  }
}

// ---- criteria ------------------------------------------------------------------

std::vector<VertexAddress> sample_for(const RunConfig& cfg, const TreeModel& tree) {
  auto sample = default_sample_vertices(tree);
  for (const auto& v : resolve_all(cfg.vertices, tree)) {
    if (std::find(sample.begin(), sample.end(), v) == sample.end()) sample.push_back(v);
  }
  return sample;
}

void write_dynamics(const DynamicsReport& rep, const TreeModel& tree, std::ostream& text) {
  text << fmt::format("family {} at horizon {} ({} sampled sets; sampling stands in for all "
                      "finite F)\n",
                      to_string(rep.family), rep.horizon, rep.samples.size());
  for (std::size_t i = 0; i < rep.samples.size(); ++i) {
    const auto& s = rep.samples[i];
    text << fmt::format("[F = {}] ceiling {}{}\n", s.sample.label, num(s.ceiling),
                        s.diverges ? " (diverges)" : "");
    for (const auto& e : rep.entries) {
      if (e.sample != i) continue;
      text << fmt::format("  N = {:>6}: {:<12} |A| = {:<4} {}\n", num(e.N),
                          to_string(e.verdict.status), e.set.size(), e.verdict.detail);
    }
  }
  if (!rep.witness.empty()) {
    text << "witness n_k:";
    for (auto n : rep.witness) text << ' ' << n;
    text << '\n';
  }
  (void)tree;
  text << rep.summary << '\n';
}

void cmd_criteria(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto spec = parse_space(cfg.space);
  const auto fam = parse_family(cfg.family);
  const auto sample = sample_for(cfg, tree);
  const std::size_t H = cfg.horizon.value_or(64);
  const auto rep = dynamics_report(tree, spec, fam, singleton_samples(tree, sample), H);
  write_dynamics(rep, tree, o.text);
  o.csv << "v,n,q_value,j_value\n";
  for (const auto& v : sample) {
    for (std::size_t n = 0; n <= H; ++n) {
      const std::string j = tree.is_rooted() ? "" : num(j_value(v, n, tree, spec));
      o.csv << fmt::format("{},{},{},{}\n", tree.display(v), n, num(q_value(v, n, tree, spec)), j);
    }
  }
}

// ---- supercyclic -----------------------------------------------------------------

void cmd_supercyclic(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto spec = parse_space(cfg.space);
  const auto gamma = parse_gamma(cfg.gamma);
  const auto sample = sample_for(cfg, tree);
  const auto rep = supercyclicity_report(tree, spec, gamma, sample, cfg.horizon.value_or(64));
  o.text << fmt::format("Gamma {} ({}), mode {}\n", rep.gamma,
                        gamma.bounded ? "bounded" : "unbounded", rep.mode);
  if (rep.delegated) write_dynamics(*rep.delegated, tree, o.text);
  o.csv << "rung,n,lambda,score\n";
  for (const auto& s : rep.ladder) {
    o.text << fmt::format("  rung {:>6}: n = {:3} lambda = {} score = {}\n", num(s.rung), s.n,
                          num(s.lambda), num(s.score));
    o.csv << fmt::format("{},{},{},{}\n", num(s.rung), s.n, num(s.lambda), num(s.score));
  }
  o.text << rep.summary << '\n';
  o.text << (rep.satisfied ? "verdict: satisfied at horizon\n" : "verdict: fails at horizon\n");
}

// ---- limit-point -----------------------------------------------------------------

void cmd_limit_point(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto spec = parse_space(cfg.space);
  const auto sample = sample_for(cfg, tree);
  const auto rep = limit_point_report(tree, spec, sample, cfg.horizon.value_or(128));
  o.csv << "v,k,n_k\n";
  for (const auto& lad : rep.vertices) {
    o.text << fmt::format("{}: best q {} ladder {}/{}{}\n", tree.display(lad.v), num(lad.best),
                          lad.n_k.size(), default_ladder().size(),
                          rep.unrooted && lad.reaches_top
                              ? fmt::format(", spine max {}", num(lad.spine_max))
                              : "");
    for (std::size_t k = 0; k < lad.n_k.size(); ++k) {
      o.csv << fmt::format("{},{},{}\n", tree.display(lad.v), k, lad.n_k[k]);
    }
  }
  o.text << rep.summary << '\n';
  o.text << (rep.satisfied ? "verdict: satisfied at horizon\n" : "verdict: fails at horizon\n");
}

// ---- return-set ------------------------------------------------------------------

void cmd_return_set(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg);
  const auto spec = parse_space(cfg.space);
  const std::string anchor = tree.anchor_label();
  BallSpec U{vector_argument(cfg.center_u.empty() ? anchor : cfg.center_u, tree), cfg.radius_u,
             spec};
  BallSpec V{vector_argument(cfg.center_v.empty() ? anchor : cfg.center_v, tree), cfg.radius_v,
             spec};
  if (!(U.radius > 0) || !(V.radius > 0)) throw ParseError("ball radii must be positive");
  const auto rep = return_set(U, V, tree, cfg.horizon.value_or(16), cfg.slack);
  o.csv << "n,certified,dist_u,dist_v\n";
  for (std::size_t n = 0; n <= rep.horizon; ++n) {
    auto it = rep.witnesses.find(n);
    if (it == rep.witnesses.end()) {
      o.csv << fmt::format("{},0,,\n", n);
      continue;
    }
    const double du = norm(it->second - U.center, spec, tree);
    const double dv = norm(apply_B_pow(it->second, n, tree) - V.center, spec, tree);
    o.csv << fmt::format("{},1,{},{}\n", n, num(du), num(dv));
  }
  TimeSet cert = TimeSet::from(rep.horizon, rep.certified_in);
  o.text << fmt::format("certified return times up to {}: {}\n", rep.horizon, to_string(cert));
  o.text << fmt::format("uncertified (witness family failed, not refuted): {}\n",
                        to_string(TimeSet::from(rep.horizon, rep.uncertified)));
}

// ---- reproduce -------------------------------------------------------------------

struct Check {
  std::ostream& text;
  bool all = true;
  void operator()(bool ok, const std::string& what) {
    text << (ok ? "PASS " : "FAIL ") << what << '\n';
    all = all && ok;
  }
};

void exp_disjoint_sets(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg, "preset:example_4_1");
  const auto spec = parse_space(cfg.space);
  const std::size_t H = cfg.horizon.value_or(1000);
  Check check{o.text};
  o.csv << "k,N,size_u,size_v,intersection\n";
  for (std::size_t k = 1; k <= 5; ++k) {
    const auto u = tree.resolve("u" + std::to_string(k));
    const auto v = tree.resolve("v" + std::to_string(k));
    for (double N : {1.0, 2.0, 4.0}) {
      const auto Iu = I_set({u}, N, tree, spec, H);
      const auto Iv = I_set({v}, N, tree, spec, H);
      const auto both = Iu & Iv;
      o.csv << fmt::format("{},{},{},{},{}\n", k, num(N), Iu.size(), Iv.size(), both.size());
      check(both.empty(), fmt::format("I(u{0},{1}) and I(v{0},{1}) disjoint up to {2} ({3} and {4} "
                                      "elements)",
                                      k, num(N), H, Iu.size(), Iv.size()));
    }
  }
  if (!check.all) o.code = kMismatch;
}

void exp_limit_point_not_hc(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg, "preset:example_4_1");
  const auto spec = parse_space(cfg.space);
  const std::size_t H = cfg.horizon.value_or(128);
  const auto sample = default_sample_vertices(tree);
  const auto dyn =
      dynamics_report(tree, spec, FamilySpec::infinite(), singleton_samples(tree, sample), H);
  const auto lim = limit_point_report(tree, spec, sample, H);
  Check check{o.text};
  check(!dyn.satisfied, "hypercyclicity criterion fails: " + dyn.summary);
  check(lim.root_diverges, "root fiber quantity diverges (limit point at e_root)");
  check(lim.satisfied, "limit-point report: " + lim.summary);
  o.csv << "n,q_root,q_u1,q_v1\n";
  const auto u1 = tree.resolve("u1");
  const auto v1 = tree.resolve("v1");
  for (std::size_t n = 0; n <= H; ++n) {
    o.csv << fmt::format("{},{},{},{}\n", n, num(q_value({}, n, tree, spec)),
                         num(q_value(u1, n, tree, spec)), num(q_value(v1, n, tree, spec)));
  }
  if (!check.all) o.code = kMismatch;
}

// f(u_{2^k}) = 1, f(v_{2^k}) = -1 for k = 0..K.
template <class Scalar>
BasicSparseVector<Scalar> example_7_2_vector(const TreeModel& tree, std::size_t K) {
  std::vector<typename BasicSparseVector<Scalar>::Entry> e;
  for (std::size_t k = 0; k <= K; ++k) {
    const std::size_t i = std::size_t{1} << k;
    e.emplace_back(tree.resolve("u" + std::to_string(i)), Scalar(1));
    e.emplace_back(tree.resolve("v" + std::to_string(i)), Scalar(-1));
  }
  return BasicSparseVector<Scalar>::from_entries(std::move(e));
}

void exp_orbit(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg, "preset:example_7_2");
  const auto spec = parse_space(cfg.space);
  constexpr std::size_t K = 7;
  const auto f = example_7_2_vector<double>(tree, K);
  const auto target = basis(tree.resolve("u1")) - basis(tree.resolve("v1"));
  Check check{o.text};
  o.csv << "k,n,residual,analytic\n";
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k <= 6; ++k) {
    const std::size_t n = (std::size_t{1} << k) - 1;
    const double residual = norm(apply_B_pow(f, n, tree) - target, spec, tree);
    double analytic = 0;
    if (spec.is_c0()) {
      analytic = std::ldexp(1.0, -static_cast<int>((std::size_t{1} << k) + 1));
    } else {
      double sum = 0;
      for (std::size_t l = k + 1; l <= K; ++l) {
        sum += std::pow(2.0, -spec.p * static_cast<double>((std::size_t{1} << l) - (std::size_t{1} << k)));
      }
      analytic = std::pow(2.0 / std::pow(2.0, spec.p) * sum, 1.0 / spec.p);
    }
    o.csv << fmt::format("{},{},{},{}\n", k, n, num(residual), num(analytic));
    check(std::abs(residual - analytic) <= 1e-9 * std::max(1.0, analytic),
          fmt::format("k = {}: residual {} matches tail sum {}", k, num(residual), num(analytic)));
    check(residual < prev, fmt::format("k = {}: strictly below the previous residual", k));
    prev = residual;
    if (cfg.exact) {
      const auto fe = example_7_2_vector<Rational>(tree, K);
      const auto te = basis_exact(tree.resolve("u1")) - basis_exact(tree.resolve("v1"));
      const Rational got = norm_pow_exact(apply_B_pow(fe, n, tree) - te, spec, tree);
      Rational want = 0;
      if (spec.is_c0()) {
        want = pow(Rational(2), -static_cast<int>((std::size_t{1} << k) + 1));
      } else {
        const int p = *spec.integer_exponent();
        for (std::size_t l = k + 1; l <= K; ++l) {
          want += 2 * pow(Rational(2), -p * static_cast<int>((std::size_t{1} << l) - (std::size_t{1} << k) + 1));
        }
      }
      check(got == want, fmt::format("k = {}: exact residual {} equals {}", k, got.str(), want.str()));
    }
  }
  if (!check.all) o.code = kMismatch;
}

void exp_not_hc(const RunConfig& cfg, Output& o) {
  const auto tree = load_tree(cfg, "preset:example_7_2");
  const auto spec = parse_space(cfg.space);
  const std::size_t H = cfg.horizon.value_or(50);
  const auto u1 = tree.resolve("u1");
  std::vector<SampleSet> samples{{"{u1}", {u1}}};
  const auto sample = default_sample_vertices(tree);
  for (auto& s : singleton_samples(tree, sample)) {
    if (s.vertices != std::vector<VertexAddress>{u1}) samples.push_back(std::move(s));
  }
  const auto rep = dynamics_report(tree, spec, FamilySpec::infinite(), samples, H);
  Check check{o.text};
  const double expected = spec.is_ell1()  ? 2.0
                          : spec.is_c0() ? 5.0
                                         : std::pow(1.0 + 2.0 * std::pow(2.0, spec.p_star),
                                                    1.0 / spec.p_star);
  check(std::abs(rep.samples[0].ceiling - expected) <= 1e-9 * expected,
        fmt::format("I and J over {{u1}} capped at {} (expected {})", num(rep.samples[0].ceiling),
                    num(expected)));
  const auto none = I_set({u1}, 4, tree, spec, H) & J_set({u1}, 4, tree, spec, H);
  check(rep.samples[0].ceiling <= 4 ? none.empty() : !none.empty(),
        fmt::format("I({{u1}},4) and J({{u1}},4) meet in {}", to_string(none)));
  check(!rep.satisfied, "hypercyclicity criterion fails: " + rep.summary);
  o.csv << "n,q_u1,j_u1,Q\n";
  for (std::size_t n = 0; n <= H; ++n) {
    o.csv << fmt::format("{},{},{},{}\n", n, num(q_value(u1, n, tree, spec)),
                         num(j_value(u1, n, tree, spec)), num(rep.samples[0].Q[n]));
  }
  if (!check.all) o.code = kMismatch;
}

const std::map<std::string, std::function<void(const RunConfig&, Output&)>>& catalogue() {
  static const std::map<std::string, std::function<void(const RunConfig&, Output&)>> c{
      {"example_4_1_disjoint_sets", exp_disjoint_sets},
      {"example_7_1_limit_point_not_hc", exp_limit_point_not_hc},
      {"example_7_2_orbit", exp_orbit},
      {"example_7_2_not_hc", exp_not_hc},
  };
  return c;
}

void cmd_reproduce(const RunConfig& cfg, Output& o) {
  auto it = catalogue().find(cfg.experiment);
  if (it == catalogue().end()) {
    throw UnknownPreset("unknown experiment '" + cfg.experiment + "'");
  }
  o.text << "experiment " << cfg.experiment << '\n';
  it->second(cfg, o);
  o.text << (o.code == kPass ? "RESULT PASS\n" : "RESULT FAIL\n");
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ParseError("cannot write '" + path + "'");
  f << content;
}

}  // namespace

const std::vector<std::string>& experiments() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [k, _] : catalogue()) n.push_back(k);
    return n;
  }();
  return names;
}

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  static const std::map<std::string, std::function<void(const RunConfig&, Output&)>> commands{
      {"validate", cmd_validate},       {"norm", cmd_norm},
      {"orbit", cmd_orbit},             {"criteria", cmd_criteria},
      {"supercyclic", cmd_supercyclic}, {"limit-point", cmd_limit_point},
      {"return-set", cmd_return_set},   {"reproduce", cmd_reproduce},
  };
  Output o;
  try {
    auto it = commands.find(cfg.command);
    if (it == commands.end()) throw ParseError("unknown command '" + cfg.command + "'");
    if (cfg.horizon && *cfg.horizon < 1) throw ParseError("--horizon must be >= 1");
    if (cfg.exact && cfg.command != "norm" && cfg.command != "reproduce") {
      throw InexactMode("--exact applies to norm and reproduce");
    }
    it->second(cfg, o);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSpecError;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  try {
    if (cfg.out.empty()) {
      out << o.text.str();
    } else {
      write_file(cfg.out, o.text.str());
    }
    if (!cfg.csv.empty()) write_file(cfg.csv, o.csv.str());
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kSpecError;
  }
  return o.code;
}

int main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Weighted backward shifts on directed trees", "treeshift"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub, bool needs_tree) {
    auto* t = sub->add_option("--tree", cfg.tree, "tree spec file or preset:<name>");
    if (needs_tree) t->required();
    sub->add_option("--space", cfg.space, "p >= 1 or c0")->capture_default_str();
    sub->add_option("--horizon", cfg.horizon, "time horizon");
    sub->add_option("--depth", cfg.depth, "truncation depth");
    sub->add_option("--ancestry", cfg.ancestry, "truncation ancestry (unrooted trees)");
    sub->add_option("--out", cfg.out, "report text file (default stdout)");
    sub->add_option("--csv", cfg.csv, "CSV output file");
    sub->add_flag("--exact", cfg.exact, "exact rational arithmetic for dyadic weights");
    sub->add_option("--seed", cfg.seed, "seed for randomized checks")->capture_default_str();
  };

  auto* validate_cmd = app.add_subcommand("validate", "check tree axioms and weights");
  common(validate_cmd, true);
  validate_cmd->footer("CSV: kind,vertex,message");

  auto* norm_cmd = app.add_subcommand("norm", "operator norm of B over the truncation");
  common(norm_cmd, true);
  norm_cmd->footer("CSV: space,norm,sup_over_truncation,attained_at,exact");

  auto* orbit_cmd = app.add_subcommand("orbit", "iterate B on a finitely supported vector");
  common(orbit_cmd, true);
  orbit_cmd->add_option("--vector", cfg.vector_path, "vector file (address<TAB>value lines)");
  orbit_cmd->add_option("--vertex", cfg.vertices, "add e_v for this vertex (repeatable)");
  orbit_cmd->footer("CSV: n,norm,support");

  auto* criteria_cmd = app.add_subcommand("criteria", "I/J sets and family verdicts");
  common(criteria_cmd, true);
  criteria_cmd->add_option("--family", cfg.family,
                           "infinite | cofinite | syndetic:<g> | thick:<L> | tilde:<N>:<inner>")
      ->capture_default_str();
  criteria_cmd->add_option("--vertex", cfg.vertices, "extra sampled vertex (repeatable)");
  criteria_cmd->footer("CSV: v,n,q_value,j_value");

  auto* super_cmd = app.add_subcommand("supercyclic", "Gamma-supercyclicity search");
  common(super_cmd, true);
  super_cmd->add_option("--gamma", cfg.gamma, "1 | const:<c> | pow:<r>")->capture_default_str();
  super_cmd->add_option("--vertex", cfg.vertices, "extra sampled vertex (repeatable)");
  super_cmd->footer("CSV: rung,n,lambda,score");

  auto* limit_cmd = app.add_subcommand("limit-point", "orbits with a nonzero limit point");
  common(limit_cmd, true);
  limit_cmd->add_option("--vertex", cfg.vertices, "extra sampled vertex (repeatable)");
  limit_cmd->footer("CSV: v,k,n_k");

  auto* ret_cmd = app.add_subcommand("return-set", "certified return times between two balls");
  common(ret_cmd, true);
  ret_cmd->add_option("--center-u", cfg.center_u, "center of U (vertex or vector file)");
  ret_cmd->add_option("--center-v", cfg.center_v, "center of V (vertex or vector file)");
  ret_cmd->add_option("--radius-u", cfg.radius_u)->capture_default_str();
  ret_cmd->add_option("--radius-v", cfg.radius_v)->capture_default_str();
  ret_cmd->add_option("--slack", cfg.slack)->capture_default_str();
  ret_cmd->footer("CSV: n,certified,dist_u,dist_v");

  auto* repro_cmd = app.add_subcommand("reproduce", "run a scripted example check");
  common(repro_cmd, false);
  std::string names;
  for (const auto& n : experiments()) names += (names.empty() ? "" : " | ") + n;
  repro_cmd->add_option("experiment", cfg.experiment, names)->required();
  repro_cmd->footer(
      "CSV per experiment:\n  example_4_1_disjoint_sets: k,N,size_u,size_v,intersection\n"
      "  example_7_1_limit_point_not_hc: n,q_root,q_u1,q_v1\n"
      "  example_7_2_orbit: k,n,residual,analytic\n  example_7_2_not_hc: n,q_u1,j_u1,Q");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();  // program name
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kSpecError;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run(cfg, out, err);
}

}  // namespace treeshift::cli
