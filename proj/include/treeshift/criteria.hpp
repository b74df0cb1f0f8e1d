#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "treeshift/space.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

/// Subset of [0, horizon].
class TimeSet {
 public:
  TimeSet() : bits_(1, false) {}
  explicit TimeSet(std::size_t horizon) : bits_(horizon + 1, false) {}
  static TimeSet from(std::size_t horizon, const std::vector<std::size_t>& elements);
  static TimeSet full(std::size_t horizon);

  std::size_t horizon() const { return bits_.size() - 1; }
  bool contains(std::size_t n) const { return n < bits_.size() && bits_[n]; }
  void insert(std::size_t n);
  std::size_t size() const;
  bool empty() const { return size() == 0; }
  std::vector<std::size_t> elements() const;
  /// Same elements, horizon cut down to `h`.
  TimeSet restricted(std::size_t h) const;

  friend TimeSet operator&(const TimeSet& a, const TimeSet& b);
  friend bool operator==(const TimeSet&, const TimeSet&) = default;

 private:
  std::vector<bool> bits_;
};

/// "{0,2,4}" or "{}"; long sets are written as ranges "{3..10}".
std::string to_string(const TimeSet& s);

struct BaseSet {
  std::string label;
  TimeSet set;
};

struct FamilySpec {
  enum class Kind { infinite, cofinite, syndetic, thick, tilde_of, generated_filter };
  Kind kind = Kind::infinite;
  /// gap for syndetic, length for thick, N for tilde_of.
  std::size_t param = 0;
  std::shared_ptr<const FamilySpec> inner;
  std::vector<BaseSet> bases;

  static FamilySpec infinite();
  static FamilySpec cofinite();
  static FamilySpec syndetic(std::size_t gap);
  static FamilySpec thick(std::size_t length);
  static FamilySpec tilde_of(FamilySpec inner, std::size_t N);
  static FamilySpec generated_filter(std::vector<BaseSet> bases);
};

/// "infinite", "cofinite", "syndetic:<g>", "thick:<L>", "tilde:<N>:<inner>".
FamilySpec parse_family(std::string_view text);
std::string to_string(const FamilySpec& fam);

enum class VerdictStatus { holds, fails, inconclusive };
std::string_view to_string(VerdictStatus s);

struct Verdict {
  VerdictStatus status = VerdictStatus::inconclusive;
  std::size_t horizon = 0;
  std::string detail;
  std::optional<std::size_t> max_gap;
  std::optional<std::pair<std::size_t, std::size_t>> interval;
  std::optional<std::size_t> tail_start;
  /// |A| / (horizon + 1).
  double density = 0;
};

Verdict family_verdict(const TimeSet& A, const FamilySpec& fam);

struct GammaSpec {
  std::string name = "constant";
  /// lambda_k for k >= 1.
  std::function<double(std::size_t)> lambda = [](std::size_t) { return 1.0; };
  bool bounded = true;
  /// How many lambda_k the searches try.
  std::size_t candidates = 1;

  static GammaSpec constant(double c = 1.0);
  static GammaSpec powers(double r, std::size_t candidates = 32);
};

/// "1", "const:<c>", "pow:<r>".
GammaSpec parse_gamma(std::string_view text);

/// Fiber quantity compared against N (see fiber_quantity()).
double q_value(const VertexAddress& v, std::size_t n, const TreeModel& tree, const SpaceSpec& spec);

/// Spine-augmented quantity on unrooted trees in the "compare against N"
/// scale; lambda scales the spine term as in the Gamma-supercyclicity
/// conditions. Throws RootedTree.
double j_value(const VertexAddress& v, std::size_t n, const TreeModel& tree, const SpaceSpec& spec,
               double lambda = 1.0);

TimeSet I_set(const std::vector<VertexAddress>& F, double N, const TreeModel& tree,
              const SpaceSpec& spec, std::size_t horizon);
TimeSet J_set(const std::vector<VertexAddress>& F, double N, const TreeModel& tree,
              const SpaceSpec& spec, std::size_t horizon);

/// Ladder 1, 2, 4, ..., 2^12; its top is the divergence threshold.
const std::vector<double>& default_ladder();
inline constexpr double kDivergenceThreshold = 4096.0;

/// Default sample: every vertex of the depth-3 (ancestry-3) window.
std::vector<VertexAddress> default_sample_vertices(const TreeModel& tree);

struct SampleSet {
  std::string label;
  std::vector<VertexAddress> vertices;
};

/// Singletons of each vertex plus their union.
std::vector<SampleSet> singleton_samples(const TreeModel& tree,
                                         const std::vector<VertexAddress>& vertices);

struct DynamicsEntry {
  std::size_t sample = 0;
  double N = 0;
  TimeSet set;
  Verdict verdict;
};

struct SampleSummary {
  SampleSet sample;
  /// Q(n) = min over v in F of q_value (and of j_value when unrooted).
  std::vector<double> Q;
  double ceiling = 0;
  /// Record-breaking times n >= 1 of Q.
  std::vector<std::size_t> records;
  bool diverges = false;
};

struct DynamicsReport {
  std::size_t horizon = 0;
  FamilySpec family;
  bool unrooted = false;
  std::vector<SampleSummary> samples;
  std::vector<DynamicsEntry> entries;
  bool satisfied = false;
  /// Witness n_k from the union sample when its Q diverges.
  std::vector<std::size_t> witness;
  std::string summary;
};

DynamicsReport dynamics_report(const TreeModel& tree, const SpaceSpec& spec, const FamilySpec& fam,
                               const std::vector<SampleSet>& samples, std::size_t horizon);

struct SupercyclicStep {
  double rung = 0;
  std::size_t n = 0;
  double lambda = 1;
  double score = 0;
};

struct SupercyclicityReport {
  std::size_t horizon = 0;
  std::string gamma;
  /// "unrooted-search", "rooted-bounded", "rooted-unbounded".
  std::string mode;
  bool satisfied = false;
  std::vector<SupercyclicStep> ladder;
  /// Best scores of the two conditions taken separately, and jointly.
  double best_fiber = 0;
  double best_spine = 0;
  double best_joint = 0;
  std::optional<DynamicsReport> delegated;
  std::string summary;
};

SupercyclicityReport supercyclicity_report(const TreeModel& tree, const SpaceSpec& spec,
                                           const GammaSpec& gamma,
                                           const std::vector<VertexAddress>& sample,
                                           std::size_t horizon);

struct VertexLadder {
  VertexAddress v;
  std::vector<std::size_t> n_k;
  double best = 0;
  bool reaches_top = false;
  /// Ladder for min over l <= window of q(v, n + l).
  std::vector<std::size_t> shifted_n_k;
  bool shifted_reaches_top = false;
  /// Unrooted only: |mu_{p^{n_K - n_i}(v)}| for each earlier i.
  std::vector<double> spine;
  double spine_max = 0;
};

struct LimitPointReport {
  std::size_t horizon = 0;
  bool unrooted = false;
  std::size_t window = 4;
  std::vector<VertexLadder> vertices;
  bool vertex_diverges = false;
  std::optional<VertexAddress> diverging_vertex;
  bool root_diverges = false;
  bool shifted_diverges = false;
  bool spine_decay = false;
  /// Smallest spine_max over vertices whose fiber quantity diverges.
  std::optional<double> spine_limit;
  bool satisfied = false;
  std::string summary;
};

LimitPointReport limit_point_report(const TreeModel& tree, const SpaceSpec& spec,
                                    const std::vector<VertexAddress>& sample, std::size_t horizon);

}  // namespace treeshift
