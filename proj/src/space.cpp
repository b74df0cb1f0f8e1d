#include "treeshift/space.hpp"

#include <charconv>
#include <istream>
#include <limits>
#include <ostream>

#include <fmt/format.h>

#include "treeshift/errors.hpp"

namespace treeshift {

using boost::multiprecision::cpp_int;

Rational to_rational(double x) {
  if (!std::isfinite(x)) throw InexactMode("non-finite value has no exact form");
  if (x == 0.0) return Rational(0);
  int exp = 0;
  const double mant = std::frexp(x, &exp);
  // mant in [0.5, 1): scale to a 53-bit integer.
  const auto m = static_cast<long long>(std::ldexp(mant, 53));
  exp -= 53;
  cpp_int num = m;
  if (exp >= 0) return Rational(num << exp);
  cpp_int den = 1;
  den <<= -exp;
  return Rational(num, den);
}

double to_double(const Rational& x) { return x.convert_to<double>(); }

Rational abs(const Rational& x) { return x < 0 ? Rational(-x) : x; }

Rational pow(const Rational& x, int k) {
  Rational base = k < 0 ? Rational(1 / x) : x;
  unsigned e = static_cast<unsigned>(k < 0 ? -k : k);
  Rational out = 1;
  while (e) {
    if (e & 1u) out *= base;
    base *= base;
    e >>= 1;
  }
  return out;
}

SpaceSpec SpaceSpec::ell(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) {
    throw InvalidSpace(fmt::format("exponent p = {} outside [1, inf)", p));
  }
  SpaceSpec s;
  s.kind = SpaceKind::ell_p;
  s.p = p;
  s.p_star = p == 1.0 ? std::numeric_limits<double>::infinity() : p / (p - 1.0);
  return s;
}

SpaceSpec SpaceSpec::c0() {
  SpaceSpec s;
  s.kind = SpaceKind::c_zero;
  s.p = std::numeric_limits<double>::infinity();
  s.p_star = 1.0;
  return s;
}

namespace {

std::optional<int> near_integer(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  const double r = std::round(x);
  if (std::abs(x - r) > 1e-12 * std::max(1.0, std::abs(x)) || r > 1024) return std::nullopt;
  return static_cast<int>(r);
}

}  // namespace

std::optional<int> SpaceSpec::integer_conjugate() const {
  if (kind != SpaceKind::ell_p || p == 1.0) return std::nullopt;
  return near_integer(p_star);
}

std::optional<int> SpaceSpec::integer_exponent() const {
  if (kind != SpaceKind::ell_p) return std::nullopt;
  return near_integer(p);
}

SpaceSpec parse_space(std::string_view text) {
  std::string s(text);
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (s == "c0" || s == "c_0" || s == "c-zero" || s == "czero") return SpaceSpec::c0();
  for (std::string_view prefix : {"p=", "ell", "l"}) {
    if (s.rfind(prefix, 0) == 0) {
      s.erase(0, prefix.size());
      break;
    }
  }
  double p = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), p);
  if (s.empty() || ec != std::errc{} || ptr != s.data() + s.size()) {
    throw InvalidSpace("cannot parse space '" + std::string(text) + "' (expected p >= 1 or c0)");
  }
  return SpaceSpec::ell(p);
}

std::string to_string(const SpaceSpec& spec) {
  if (spec.is_c0()) return "c0";
  return fmt::format("ell^{}", spec.p);
}

SparseVector basis(const VertexAddress& v) { return SparseVector::from_sorted({{v, 1.0}}); }

ExactVector basis_exact(const VertexAddress& v) { return ExactVector::from_sorted({{v, Rational(1)}}); }

ExactVector to_exact(const SparseVector& f) {
  std::vector<ExactVector::Entry> out;
  out.reserve(f.size());
  for (const auto& [v, x] : f) out.emplace_back(v, to_rational(x));
  return ExactVector::from_sorted(std::move(out));
}

SparseVector to_double(const ExactVector& f) {
  std::vector<SparseVector::Entry> out;
  out.reserve(f.size());
  for (const auto& [v, x] : f) out.emplace_back(v, to_double(x));
  return SparseVector::from_sorted(std::move(out));
}

double norm(const SparseVector& f, const SpaceSpec& spec, const TreeModel& tree) {
  // Scaled by the largest term so that huge or tiny weights do not overflow.
  double top = 0;
  std::vector<double> terms;
  terms.reserve(f.size());
  for (const auto& [v, x] : f) {
    require_resolvable(v, tree);
    const double t = std::abs(x * tree.weight(v));
    terms.push_back(t);
    top = std::max(top, t);
  }
  if (spec.is_c0() || top == 0 || !std::isfinite(top)) return top;
  if (spec.is_ell1()) {
    double s = 0;
    for (double t : terms) s += t;
    return s;
  }
  double s = 0;
  for (double t : terms) s += std::pow(t / top, spec.p);
  return top * std::pow(s, 1.0 / spec.p);
}

Rational norm_pow_exact(const ExactVector& f, const SpaceSpec& spec, const TreeModel& tree) {
  std::optional<int> p;
  if (!spec.is_c0()) {
    p = spec.integer_exponent();
    if (!p) throw InexactMode("exact norms need an integer exponent p or c0");
  }
  Rational acc = 0;
  for (const auto& [v, x] : f) {
    require_resolvable(v, tree);
    const Rational t = abs(x * to_rational(tree.weight(v)));
    if (spec.is_c0()) {
      if (t > acc) acc = t;
    } else {
      acc += pow(t, *p);
    }
  }
  return acc;
}

namespace {

template <class Scalar>
Scalar pairing_impl(const BasicSparseVector<Scalar>& f, const BasicSparseVector<Scalar>& g) {
  Scalar acc = 0;
  auto i = f.begin();
  auto j = g.begin();
  while (i != f.end() && j != g.end()) {
    if (i->first < j->first) {
      ++i;
    } else if (j->first < i->first) {
      ++j;
    } else {
      acc += i->second * j->second;
      ++i;
      ++j;
    }
  }
  return acc;
}

// log of the number of vertices n generations below a depth-d vertex.
double radial_log_count(const RadialProfile& r, std::size_t d, std::size_t n) {
  double acc = 0;
  for (std::size_t i = d; i < d + n; ++i) {
    const auto a = r.arity(i);
    if (a == 0) return -std::numeric_limits<double>::infinity();
    acc += std::log(static_cast<double>(a));
  }
  return acc;
}

}  // namespace

double pairing(const SparseVector& f, const SparseVector& g) { return pairing_impl(f, g); }
Rational pairing(const ExactVector& f, const ExactVector& g) { return pairing_impl(f, g); }

double fiber_quantity(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                      const SpaceSpec& spec) {
  require_resolvable(v, tree);
  if (const auto* r = tree.radial(); r && v.up == 0) {
    const std::size_t d = v.path.size();
    const double log_count = radial_log_count(*r, d, n);
    if (std::isinf(log_count)) return 0.0;
    const double log_inv_w = -std::log(std::abs(r->weight(d + n)));
    if (spec.is_ell1()) return std::exp(log_inv_w);
    const double root = spec.is_c0() ? 1.0 : spec.p_star;
    return std::exp(log_count / root + log_inv_w);
  }

  if (spec.is_ell1()) {
    double best = 0;
    for_each_in_fiber(v, n, tree, [&](const VertexAddress& u) {
      best = std::max(best, 1.0 / std::abs(tree.weight(u)));
    });
    return best;
  }
  // Log-sum-exp of p* log(1/|mu_u|), with a running maximum.
  const double root = spec.is_c0() ? 1.0 : spec.p_star;
  double top = -std::numeric_limits<double>::infinity();
  double scaled = 0;
  bool any = false;
  for_each_in_fiber(v, n, tree, [&](const VertexAddress& u) {
    const double x = -root * std::log(std::abs(tree.weight(u)));
    any = true;
    if (x > top) {
      scaled = scaled * std::exp(top - x) + 1.0;
      top = x;
    } else {
      scaled += std::exp(x - top);
    }
  });
  if (!any) return 0.0;
  return std::exp((top + std::log(scaled)) / root);
}

Rational fiber_quantity_exact(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                              const SpaceSpec& spec) {
  require_resolvable(v, tree);
  int k = 1;
  if (!spec.is_c0() && !spec.is_ell1()) {
    auto q = spec.integer_conjugate();
    if (!q) throw InexactMode("exact fiber sums need an integer conjugate exponent");
    k = *q;
  }
  if (const auto* r = tree.radial(); r && v.up == 0) {
    const std::size_t d = v.path.size();
    cpp_int count = 1;
    for (std::size_t i = d; i < d + n; ++i) count *= static_cast<unsigned long long>(r->arity(i));
    if (count == 0) return Rational(0);
    const Rational inv = 1 / abs(to_rational(r->weight(d + n)));
    if (spec.is_ell1()) return inv;
    return Rational(count) * pow(inv, k);
  }
  Rational acc = 0;
  for_each_in_fiber(v, n, tree, [&](const VertexAddress& u) {
    const Rational inv = 1 / abs(to_rational(tree.weight(u)));
    if (spec.is_ell1()) {
      if (inv > acc) acc = inv;
    } else {
      acc += pow(inv, k);
    }
  });
  return acc;
}

void write_vector(std::ostream& out, const SparseVector& f) {
  for (const auto& [v, x] : f) out << to_string(v) << '\t' << fmt::format("{:.17g}", x) << '\n';
}

SparseVector read_vector(std::istream& in, const TreeModel& tree) {
  std::vector<SparseVector::Entry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw ParseError(fmt::format("vector line {}: expected address<TAB>value", line_no));
    }
    const auto addr = tree.resolve(std::string_view(line).substr(0, tab));
    std::string value = line.substr(tab + 1);
    double x = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), x);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
      throw ParseError(fmt::format("vector line {}: bad value '{}'", line_no, value));
    }
    entries.emplace_back(addr, x);
  }
  return SparseVector::from_entries(std::move(entries));
}

}  // namespace treeshift
