#include "treeshift/criteria.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "treeshift/errors.hpp"

namespace treeshift {

// ---- TimeSet ---------------------------------------------------------------

TimeSet TimeSet::from(std::size_t horizon, const std::vector<std::size_t>& elements) {
  TimeSet s(horizon);
  for (auto n : elements) s.insert(n);
  return s;
}

TimeSet TimeSet::full(std::size_t horizon) {
  TimeSet s(horizon);
  s.bits_.assign(horizon + 1, true);
  return s;
}

void TimeSet::insert(std::size_t n) {
  if (n < bits_.size()) bits_[n] = true;
}

std::size_t TimeSet::size() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), true));
}

std::vector<std::size_t> TimeSet::elements() const {
  std::vector<std::size_t> out;
  for (std::size_t n = 0; n < bits_.size(); ++n) {
    if (bits_[n]) out.push_back(n);
  }
  return out;
}

TimeSet TimeSet::restricted(std::size_t h) const {
  TimeSet s(h);
  for (std::size_t n = 0; n <= h && n < bits_.size(); ++n) s.bits_[n] = bits_[n];
  return s;
}

TimeSet operator&(const TimeSet& a, const TimeSet& b) {
  TimeSet s(std::min(a.horizon(), b.horizon()));
  for (std::size_t n = 0; n <= s.horizon(); ++n) s.bits_[n] = a.bits_[n] && b.bits_[n];
  return s;
}

std::string to_string(const TimeSet& s) {
  const auto el = s.elements();
  std::string out = "{";
  for (std::size_t i = 0; i < el.size();) {
    std::size_t j = i;
    while (j + 1 < el.size() && el[j + 1] == el[j] + 1) ++j;
    if (i) out += ",";
    if (j >= i + 2) {
      out += fmt::format("{}..{}", el[i], el[j]);
    } else {
      out += std::to_string(el[i]);
      if (j == i + 1) out += "," + std::to_string(el[j]);
    }
    i = j + 1;
  }
  return out + "}";
}

// ---- families --------------------------------------------------------------

FamilySpec FamilySpec::infinite() { return {}; }

FamilySpec FamilySpec::cofinite() {
  FamilySpec f;
  f.kind = Kind::cofinite;
  return f;
}

FamilySpec FamilySpec::syndetic(std::size_t gap) {
  if (gap < 1) throw Error("syndetic gap must be >= 1");
  FamilySpec f;
  f.kind = Kind::syndetic;
  f.param = gap;
  return f;
}

FamilySpec FamilySpec::thick(std::size_t length) {
  if (length < 1) throw Error("thick length must be >= 1");
  FamilySpec f;
  f.kind = Kind::thick;
  f.param = length;
  return f;
}

FamilySpec FamilySpec::tilde_of(FamilySpec inner, std::size_t N) {
  FamilySpec f;
  f.kind = Kind::tilde_of;
  f.param = N;
  f.inner = std::make_shared<const FamilySpec>(std::move(inner));
  return f;
}

FamilySpec FamilySpec::generated_filter(std::vector<BaseSet> bases) {
  FamilySpec f;
  f.kind = Kind::generated_filter;
  f.bases = std::move(bases);
  return f;
}

namespace {

std::size_t parse_count(std::string_view s, std::string_view what) {
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("bad {} '{}'", what, s));
  }
  return v;
}

double parse_real(std::string_view s, std::string_view what) {
  double v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw ParseError(fmt::format("bad {} '{}'", what, s));
  }
  return v;
}

}  // namespace

FamilySpec parse_family(std::string_view text) {
  if (text == "infinite") return FamilySpec::infinite();
  if (text == "cofinite") return FamilySpec::cofinite();
  const auto colon = text.find(':');
  const auto head = text.substr(0, colon);
  const auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (head == "syndetic") return FamilySpec::syndetic(parse_count(rest, "syndetic gap"));
  if (head == "thick") return FamilySpec::thick(parse_count(rest, "thick length"));
  if (head == "tilde") {
    const auto c2 = rest.find(':');
    if (c2 == std::string_view::npos) throw ParseError("tilde needs tilde:<N>:<inner>");
    return FamilySpec::tilde_of(parse_family(rest.substr(c2 + 1)),
                                parse_count(rest.substr(0, c2), "tilde N"));
  }
  throw ParseError(fmt::format("unknown family '{}'", text));
}

std::string to_string(const FamilySpec& fam) {
  using K = FamilySpec::Kind;
  switch (fam.kind) {
    case K::infinite: return "infinite";
    case K::cofinite: return "cofinite";
    case K::syndetic: return fmt::format("syndetic:{}", fam.param);
    case K::thick: return fmt::format("thick:{}", fam.param);
    case K::tilde_of: return fmt::format("tilde:{}:{}", fam.param, to_string(*fam.inner));
    case K::generated_filter: return fmt::format("filter[{} bases]", fam.bases.size());
  }
  return "?";
}

std::string_view to_string(VerdictStatus s) {
  switch (s) {
    case VerdictStatus::holds: return "holds";
    case VerdictStatus::fails: return "fails";
    case VerdictStatus::inconclusive: return "inconclusive";
  }
  return "?";
}

namespace {

struct RunStats {
  std::size_t longest_missing = 0;
  std::size_t max_gap = 0;  // largest step between consecutive members, edges included
  std::optional<std::pair<std::size_t, std::size_t>> first_long_run;
};

RunStats scan(const TimeSet& A, std::size_t want_run) {
  RunStats st;
  const std::size_t H = A.horizon();
  std::size_t missing = 0;
  std::size_t run = 0;
  std::optional<std::size_t> last;
  for (std::size_t n = 0; n <= H; ++n) {
    if (A.contains(n)) {
      st.max_gap = std::max(st.max_gap, last ? n - *last : n + 1);
      last = n;
      missing = 0;
      ++run;
      if (want_run && run >= want_run && !st.first_long_run) {
        st.first_long_run = std::pair{n + 1 - want_run, n};
      }
    } else {
      run = 0;
      st.longest_missing = std::max(st.longest_missing, ++missing);
    }
  }
  st.max_gap = std::max(st.max_gap, last ? H + 1 - *last : H + 1);
  return st;
}

}  // namespace

Verdict family_verdict(const TimeSet& A, const FamilySpec& fam) {
  using K = FamilySpec::Kind;
  Verdict v;
  const std::size_t H = A.horizon();
  v.horizon = H;
  v.density = static_cast<double>(A.size()) / static_cast<double>(H + 1);
  switch (fam.kind) {
    case K::syndetic: {
      const auto st = scan(A, 0);
      v.max_gap = st.max_gap;
      if (H < fam.param) {
        v.status = VerdictStatus::inconclusive;
        v.detail = fmt::format("horizon {} shorter than one window of length {}", H, fam.param + 1);
      } else if (st.longest_missing <= fam.param) {
        v.status = VerdictStatus::holds;
        v.detail = fmt::format("every window of length {} meets the set; max gap {}",
                               fam.param + 1, st.max_gap);
      } else {
        v.status = VerdictStatus::fails;
        v.detail = fmt::format("a run of {} missing times exceeds gap {}", st.longest_missing,
                               fam.param);
      }
      break;
    }
    case K::thick: {
      const auto st = scan(A, fam.param);
      if (st.first_long_run) {
        v.status = VerdictStatus::holds;
        v.interval = st.first_long_run;
        v.detail = fmt::format("interval [{}, {}]", st.first_long_run->first,
                               st.first_long_run->second);
      } else {
        v.status = VerdictStatus::fails;
        v.detail = fmt::format("no interval of length {} up to horizon {}", fam.param, H);
      }
      break;
    }
    case K::cofinite: {
      if (A.contains(H)) {
        std::size_t m = H;
        while (m > 0 && A.contains(m - 1)) --m;
        v.status = VerdictStatus::inconclusive;
        v.tail_start = m;
        v.detail = fmt::format("contains [{}, {}]", m, H);
      } else {
        v.status = VerdictStatus::fails;
        v.detail = fmt::format("horizon {} itself is missing", H);
      }
      break;
    }
    case K::infinite: {
      const std::size_t lo = (H + 1) / 2;
      std::size_t tail = 0;
      for (std::size_t n = lo; n <= H; ++n) tail += A.contains(n) ? 1 : 0;
      if (tail == 0) {
        v.status = VerdictStatus::fails;
        v.detail = fmt::format("empty on the tail window [{}, {}]", lo, H);
      } else {
        v.status = VerdictStatus::inconclusive;
        v.detail = fmt::format("{} members in [{}, {}]; density {:.3f}", tail, lo, H, v.density);
      }
      break;
    }
    case K::tilde_of: {
      const std::size_t N = fam.param;
      if (H < N) {
        v.status = VerdictStatus::inconclusive;
        v.detail = "horizon shorter than the tilde margin";
        break;
      }
      TimeSet core(H - N);
      for (std::size_t n = 0; n + N <= H; ++n) {
        bool ok = true;
        for (std::size_t m = n >= N ? n - N : 0; m <= n + N && ok; ++m) ok = A.contains(m);
        if (ok) core.insert(n);
      }
      Verdict inner = family_verdict(core, *fam.inner);
      inner.horizon = H;
      inner.detail = fmt::format("core {} under {}: {}", to_string(core), to_string(*fam.inner),
                                 inner.detail);
      inner.density = v.density;
      return inner;
    }
    case K::generated_filter: {
      for (const auto& base : fam.bases) {
        const auto b = base.set.restricted(H);
        if ((b & A) == b) {
          v.status = VerdictStatus::inconclusive;
          v.detail = fmt::format("contains base {}", base.label);
          return v;
        }
      }
      v.status = VerdictStatus::fails;
      v.detail = "contains no base set within the horizon";
      break;
    }
  }
  return v;
}

// ---- Gamma -----------------------------------------------------------------

GammaSpec GammaSpec::constant(double c) {
  if (c == 0) throw Error("Gamma must avoid 0");
  GammaSpec g;
  g.name = c == 1.0 ? "constant" : fmt::format("const:{}", c);
  g.lambda = [c](std::size_t) { return c; };
  g.bounded = true;
  g.candidates = 1;
  return g;
}

GammaSpec GammaSpec::powers(double r, std::size_t candidates) {
  if (r == 0) throw Error("Gamma must avoid 0");
  GammaSpec g;
  g.name = fmt::format("pow:{}", r);
  g.lambda = [r](std::size_t k) { return std::pow(r, static_cast<double>(k)); };
  g.bounded = std::abs(r) <= 1.0;
  g.candidates = candidates;
  return g;
}

GammaSpec parse_gamma(std::string_view text) {
  if (text == "1" || text == "constant") return GammaSpec::constant();
  if (text.rfind("const:", 0) == 0) return GammaSpec::constant(parse_real(text.substr(6), "constant"));
  if (text.rfind("pow:", 0) == 0) return GammaSpec::powers(parse_real(text.substr(4), "ratio"));
  throw ParseError(fmt::format("unknown Gamma '{}'", text));
}

// ---- quantities ------------------------------------------------------------

double q_value(const VertexAddress& v, std::size_t n, const TreeModel& tree,
               const SpaceSpec& spec) {
  return fiber_quantity(v, n, tree, spec);
}

namespace {

// Spine quantity from its parts: |mu_w| for w = p^n(v) and q(w, n).
double spine_quantity(double mu_w, double q_w, const SpaceSpec& spec, double lambda) {
  const double a = 1.0 / std::abs(lambda * mu_w);
  if (spec.is_ell1()) return std::max(a, q_w);
  if (spec.is_c0()) return a + q_w;
  if (q_w == 0) return a;
  const double ps = spec.p_star;
  const double la = ps * std::log(a);
  const double lb = ps * std::log(q_w);
  const double top = std::max(la, lb);
  return std::exp((top + std::log(std::exp(la - top) + std::exp(lb - top))) / ps);
}

struct SpineParts {
  double mu_w = 1;
  double q_w = 0;
};

SpineParts spine_parts(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                       const SpaceSpec& spec) {
  if (tree.is_rooted()) throw RootedTree("J(F, N) is defined on unrooted trees");
  const VertexAddress w = *p_n(v, n, tree);
  return {tree.weight(w), fiber_quantity(w, n, tree, spec)};
}

}  // namespace

double j_value(const VertexAddress& v, std::size_t n, const TreeModel& tree, const SpaceSpec& spec,
               double lambda) {
  require_resolvable(v, tree);
  const auto parts = spine_parts(v, n, tree, spec);
  return spine_quantity(parts.mu_w, parts.q_w, spec, lambda);
}

TimeSet I_set(const std::vector<VertexAddress>& F, double N, const TreeModel& tree,
              const SpaceSpec& spec, std::size_t horizon) {
  TimeSet s(horizon);
  for (std::size_t n = 0; n <= horizon; ++n) {
    bool all = true;
    for (const auto& v : F) {
      if (!(q_value(v, n, tree, spec) > N)) {
        all = false;
        break;
      }
    }
    if (all) s.insert(n);
  }
  return s;
}

TimeSet J_set(const std::vector<VertexAddress>& F, double N, const TreeModel& tree,
              const SpaceSpec& spec, std::size_t horizon) {
  if (tree.is_rooted()) throw RootedTree("J(F, N) is defined on unrooted trees");
  TimeSet s(horizon);
  for (std::size_t n = 0; n <= horizon; ++n) {
    bool all = true;
    for (const auto& v : F) {
      if (!(j_value(v, n, tree, spec) > N)) {
        all = false;
        break;
      }
    }
    if (all) s.insert(n);
  }
  return s;
}

const std::vector<double>& default_ladder() {
  static const std::vector<double> ladder = [] {
    std::vector<double> l;
    for (int k = 0; k <= 12; ++k) l.push_back(std::ldexp(1.0, k));
    return l;
  }();
  return ladder;
}

std::vector<VertexAddress> default_sample_vertices(const TreeModel& tree) {
  Truncation t = tree.default_truncation();
  t.depth = 3;
  t.ancestry = 3;
  auto verts = enumerate(tree, t);
  std::sort(verts.begin(), verts.end());
  return verts;
}

std::vector<SampleSet> singleton_samples(const TreeModel& tree,
                                         const std::vector<VertexAddress>& vertices) {
  std::vector<SampleSet> out;
  for (const auto& v : vertices) out.push_back({"{" + tree.display(v) + "}", {v}});
  if (vertices.size() > 1) out.push_back({"union", vertices});
  return out;
}

// ---- dynamics --------------------------------------------------------------

namespace {

// q(v, n) and, on unrooted trees, j(v, n) for n = 0..H, cached per vertex.
class QuantityTable {
 public:
  QuantityTable(const TreeModel& tree, const SpaceSpec& spec, std::size_t H)
      : tree_(tree), spec_(spec), H_(H) {}

  const std::vector<double>& q(const VertexAddress& v) {
    auto it = q_.find(v);
    if (it != q_.end()) return it->second;
    std::vector<double> row(H_ + 1);
    for (std::size_t n = 0; n <= H_; ++n) row[n] = q_value(v, n, tree_, spec_);
    return q_.emplace(v, std::move(row)).first->second;
  }

  const std::vector<SpineParts>& spine(const VertexAddress& v) {
    auto it = spine_.find(v);
    if (it != spine_.end()) return it->second;
    std::vector<SpineParts> row(H_ + 1);
    for (std::size_t n = 0; n <= H_; ++n) row[n] = spine_parts(v, n, tree_, spec_);
    return spine_.emplace(v, std::move(row)).first->second;
  }

 private:
  const TreeModel& tree_;
  const SpaceSpec& spec_;
  std::size_t H_;
  std::map<VertexAddress, std::vector<double>> q_;
  std::map<VertexAddress, std::vector<SpineParts>> spine_;
};

std::vector<std::size_t> records(const std::vector<double>& Q) {
  std::vector<std::size_t> out;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t n = 1; n < Q.size(); ++n) {
    if (Q[n] > best) {
      best = Q[n];
      out.push_back(n);
    }
  }
  return out;
}

// Greedy ladder: n_r is the first n > n_{r-1} (n >= 1) with values[n] > rung r.
std::vector<std::size_t> climb(const std::vector<double>& values) {
  std::vector<std::size_t> out;
  std::size_t n = 1;
  for (double rung : default_ladder()) {
    while (n < values.size() && !(values[n] > rung)) ++n;
    if (n >= values.size()) break;
    out.push_back(n++);
  }
  return out;
}

}  // namespace

DynamicsReport dynamics_report(const TreeModel& tree, const SpaceSpec& spec, const FamilySpec& fam,
                               const std::vector<SampleSet>& samples, std::size_t horizon) {
  DynamicsReport rep;
  rep.horizon = horizon;
  rep.family = fam;
  rep.unrooted = !tree.is_rooted();
  QuantityTable table(tree, spec, horizon);
  for (std::size_t i = 0; i < samples.size(); ++i) {
    SampleSummary s;
    s.sample = samples[i];
    s.Q.assign(horizon + 1, std::numeric_limits<double>::infinity());
    for (const auto& v : s.sample.vertices) {
      require_resolvable(v, tree);
      const auto& q = table.q(v);
      for (std::size_t n = 0; n <= horizon; ++n) s.Q[n] = std::min(s.Q[n], q[n]);
      if (rep.unrooted) {
        const auto& sp = table.spine(v);
        for (std::size_t n = 0; n <= horizon; ++n) {
          s.Q[n] = std::min(s.Q[n], spine_quantity(sp[n].mu_w, sp[n].q_w, spec, 1.0));
        }
      }
    }
    if (s.sample.vertices.empty()) s.Q.assign(horizon + 1, 0.0);
    s.ceiling = *std::max_element(s.Q.begin(), s.Q.end());
    s.records = records(s.Q);
    s.diverges = s.ceiling > kDivergenceThreshold;
    for (double N : default_ladder()) {
      DynamicsEntry e;
      e.sample = i;
      e.N = N;
      e.set = TimeSet(horizon);
      for (std::size_t n = 0; n <= horizon; ++n) {
        if (s.Q[n] > N) e.set.insert(n);
      }
      e.verdict = family_verdict(e.set, fam);
      rep.entries.push_back(std::move(e));
    }
    rep.samples.push_back(std::move(s));
  }
  rep.satisfied = !samples.empty();
  std::size_t failing = 0;
  for (const auto& e : rep.entries) {
    if (e.verdict.status == VerdictStatus::fails) {
      rep.satisfied = false;
      ++failing;
    }
  }
  if (!rep.samples.empty() && rep.samples.back().diverges) rep.witness = rep.samples.back().records;
  rep.summary = rep.satisfied
                    ? fmt::format("criterion satisfied at horizon {} for {} sampled sets",
                                  horizon, samples.size())
                    : fmt::format("criterion fails at horizon {}: {} of {} (F, N) pairs fail",
                                  horizon, failing, rep.entries.size());
  return rep;
}

// ---- supercyclicity --------------------------------------------------------

SupercyclicityReport supercyclicity_report(const TreeModel& tree, const SpaceSpec& spec,
                                           const GammaSpec& gamma,
                                           const std::vector<VertexAddress>& sample,
                                           std::size_t horizon) {
  SupercyclicityReport rep;
  rep.horizon = horizon;
  rep.gamma = gamma.name;
  if (tree.is_rooted()) {
    if (gamma.bounded) {
      rep.mode = "rooted-bounded";
      rep.delegated = dynamics_report(tree, spec, FamilySpec::infinite(),
                                      singleton_samples(tree, sample), horizon);
      rep.satisfied = rep.delegated->satisfied;
      rep.summary = "bounded Gamma on a rooted tree: same verdict as hypercyclicity; " +
                    rep.delegated->summary;
    } else {
      rep.mode = "rooted-unbounded";
      std::optional<VertexAddress> leaf;
      Truncation t = tree.default_truncation();
      t.depth = std::min<std::size_t>(t.depth, 12);
      enumerate(tree, t, [&](const VertexAddress& v) {
        if (!leaf && tree.arity(v) == 0) leaf = v;
      });
      rep.satisfied = !leaf;
      rep.summary =
          leaf ? fmt::format("leaf {} blocks dense range, so no unbounded Gamma works",
                             tree.display(*leaf))
               : fmt::format("no leaf up to depth {}: dense range, so every unbounded Gamma works",
                             t.depth);
    }
    return rep;
  }

  rep.mode = "unrooted-search";
  QuantityTable table(tree, spec, horizon);
  for (const auto& v : sample) {
    require_resolvable(v, tree);
    table.q(v);
    table.spine(v);
  }
  std::vector<double> lambdas;
  for (std::size_t k = 1; k <= std::max<std::size_t>(gamma.candidates, 1); ++k) {
    lambdas.push_back(gamma.lambda(k));
  }
  // best joint score and its lambda for every n
  std::vector<std::pair<double, double>> best(horizon + 1, {0.0, 1.0});
  for (std::size_t n = 1; n <= horizon; ++n) {
    for (double lam : lambdas) {
      double fiber = std::numeric_limits<double>::infinity();
      double spine = std::numeric_limits<double>::infinity();
      for (const auto& v : sample) {
        fiber = std::min(fiber, std::abs(lam) * table.q(v)[n]);
        const auto& sp = table.spine(v)[n];
        spine = std::min(spine, spine_quantity(sp.mu_w, sp.q_w, spec, lam));
      }
      if (sample.empty()) fiber = spine = 0;
      rep.best_fiber = std::max(rep.best_fiber, fiber);
      rep.best_spine = std::max(rep.best_spine, spine);
      const double joint = std::min(fiber, spine);
      if (joint > best[n].first) best[n] = {joint, lam};
      rep.best_joint = std::max(rep.best_joint, joint);
    }
  }
  std::vector<double> joint(horizon + 1, 0.0);
  for (std::size_t n = 0; n <= horizon; ++n) joint[n] = best[n].first;
  const auto steps = climb(joint);
  for (std::size_t r = 0; r < steps.size(); ++r) {
    rep.ladder.push_back({default_ladder()[r], steps[r], best[steps[r]].second, joint[steps[r]]});
  }
  rep.satisfied = steps.size() == default_ladder().size();
  rep.summary = fmt::format(
      "{} at horizon {}: best fiber score {:.6g}, best spine score {:.6g}, best joint {:.6g}",
      rep.satisfied ? "satisfied" : "fails", horizon, rep.best_fiber, rep.best_spine,
      rep.best_joint);
  return rep;
}

// ---- limit points ----------------------------------------------------------

LimitPointReport limit_point_report(const TreeModel& tree, const SpaceSpec& spec,
                                    const std::vector<VertexAddress>& sample, std::size_t horizon) {
  LimitPointReport rep;
  rep.horizon = horizon;
  rep.unrooted = !tree.is_rooted();
  std::vector<VertexAddress> verts = sample;
  if (tree.is_rooted() && std::find(verts.begin(), verts.end(), VertexAddress{}) == verts.end()) {
    verts.insert(verts.begin(), VertexAddress{});
  }
  const std::size_t top = default_ladder().size();
  for (const auto& v : verts) {
    require_resolvable(v, tree);
    VertexLadder lad;
    lad.v = v;
    std::vector<double> q(horizon + 1);
    for (std::size_t n = 0; n <= horizon; ++n) q[n] = q_value(v, n, tree, spec);
    lad.best = *std::max_element(q.begin() + (horizon >= 1 ? 1 : 0), q.end());
    lad.n_k = climb(q);
    lad.reaches_top = lad.n_k.size() == top;

    std::vector<double> windowed;
    for (std::size_t n = 0; n + rep.window <= horizon; ++n) {
      windowed.push_back(*std::min_element(q.begin() + static_cast<std::ptrdiff_t>(n),
                                           q.begin() + static_cast<std::ptrdiff_t>(n + rep.window + 1)));
    }
    lad.shifted_n_k = climb(windowed);
    lad.shifted_reaches_top = lad.shifted_n_k.size() == top;

    if (rep.unrooted && lad.reaches_top) {
      const std::size_t nK = lad.n_k.back();
      for (std::size_t i = 0; i + 1 < lad.n_k.size(); ++i) {
        const auto w = p_n(v, nK - lad.n_k[i], tree);
        lad.spine.push_back(std::abs(tree.weight(*w)));
      }
      lad.spine_max = lad.spine.empty() ? 0 : *std::max_element(lad.spine.begin(), lad.spine.end());
    }
    rep.vertices.push_back(std::move(lad));
  }
  for (const auto& lad : rep.vertices) {
    if (lad.reaches_top && !rep.vertex_diverges) {
      rep.vertex_diverges = true;
      rep.diverging_vertex = lad.v;
    }
    if (lad.shifted_reaches_top) rep.shifted_diverges = true;
    if (tree.is_rooted() && lad.v.is_anchor() && lad.reaches_top) rep.root_diverges = true;
    if (rep.unrooted && lad.reaches_top) {
      rep.spine_limit = rep.spine_limit ? std::min(*rep.spine_limit, lad.spine_max) : lad.spine_max;
    }
  }
  if (rep.unrooted) {
    rep.spine_decay = rep.spine_limit && *rep.spine_limit <= 1.0 / kDivergenceThreshold;
    rep.satisfied = rep.vertex_diverges && rep.spine_decay;
    if (!rep.vertex_diverges) {
      rep.summary = fmt::format("no sampled vertex has a diverging fiber sequence up to {}", horizon);
    } else if (!rep.spine_decay) {
      rep.summary = fmt::format(
          "fiber condition holds but the spine weights along the sequence stay at {:.6g}, not 0",
          *rep.spine_limit);
    } else {
      rep.summary = "fiber divergence with decaying spine weights: a non-negative orbit has a "
                    "nonzero limit point";
    }
  } else {
    rep.satisfied = rep.vertex_diverges;
    rep.summary = rep.satisfied
                      ? fmt::format("vertex divergence {} / root divergence {} / shifted divergence {} at horizon {}",
                                    rep.vertex_diverges, rep.root_diverges, rep.shifted_diverges, horizon)
                      : fmt::format("no diverging fiber sequence up to horizon {}", horizon);
  }
  return rep;
}

}  // namespace treeshift
