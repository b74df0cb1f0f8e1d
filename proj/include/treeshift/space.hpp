#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "treeshift/address.hpp"
#include "treeshift/tree.hpp"

namespace treeshift {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double (every finite double is a dyadic rational).
Rational to_rational(double x);
double to_double(const Rational& x);
Rational abs(const Rational& x);
/// x^k for integer k (negative k inverts).
Rational pow(const Rational& x, int k);

enum class SpaceKind { ell_p, c_zero };

struct SpaceSpec {
  SpaceKind kind = SpaceKind::ell_p;
  double p = 2.0;
  /// Conjugate exponent; +inf for p = 1, unused for c0.
  double p_star = 2.0;

  static SpaceSpec ell(double p);
  static SpaceSpec c0();

  bool is_c0() const { return kind == SpaceKind::c_zero; }
  bool is_ell1() const { return kind == SpaceKind::ell_p && p == 1.0; }
  /// p* when it is an integer >= 2 (p = 2, 3/2, 4/3, ...).
  std::optional<int> integer_conjugate() const;
  /// p when it is an integer.
  std::optional<int> integer_exponent() const;
};

/// "2", "1.5", "p=3", "ell2", "c0". Throws InvalidSpace.
SpaceSpec parse_space(std::string_view text);
std::string to_string(const SpaceSpec& spec);

/// Finitely supported vector with entries kept sorted by address and no
/// stored zeros.
template <class Scalar>
class BasicSparseVector {
 public:
  using Entry = std::pair<VertexAddress, Scalar>;

  BasicSparseVector() = default;

  /// Sums duplicate addresses and drops zeros.
  static BasicSparseVector from_entries(std::vector<Entry> entries) {
    BasicSparseVector out;
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& e : entries) {
      if (!out.entries_.empty() && out.entries_.back().first == e.first) {
        out.entries_.back().second += e.second;
      } else {
        out.entries_.push_back(std::move(e));
      }
    }
    out.drop_zeros();
    return out;
  }

  /// Caller guarantees strictly increasing addresses.
  static BasicSparseVector from_sorted(std::vector<Entry> entries) {
    BasicSparseVector out;
    out.entries_ = std::move(entries);
    out.drop_zeros();
    return out;
  }

  Scalar get(const VertexAddress& v) const {
    auto it = find(v);
    return it == entries_.end() ? Scalar(0) : it->second;
  }

  void add(const VertexAddress& v, const Scalar& value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const VertexAddress& a) { return e.first < a; });
    if (it != entries_.end() && it->first == v) {
      it->second += value;
      if (it->second == Scalar(0)) entries_.erase(it);
    } else if (value != Scalar(0)) {
      entries_.insert(it, Entry{v, value});
    }
  }

  void set(const VertexAddress& v, const Scalar& value) {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const VertexAddress& a) { return e.first < a; });
    if (it != entries_.end() && it->first == v) {
      if (value == Scalar(0)) {
        entries_.erase(it);
      } else {
        it->second = value;
      }
    } else if (value != Scalar(0)) {
      entries_.insert(it, Entry{v, value});
    }
  }

  std::size_t size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }
  const std::vector<Entry>& entries() const { return entries_; }
  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }

  std::vector<VertexAddress> support() const {
    std::vector<VertexAddress> out;
    out.reserve(entries_.size());
    for (const auto& e : entries_) out.push_back(e.first);
    return out;
  }

  BasicSparseVector& operator+=(const BasicSparseVector& o) { return *this = merge(*this, o, Scalar(1)); }
  BasicSparseVector& operator-=(const BasicSparseVector& o) { return *this = merge(*this, o, Scalar(-1)); }
  BasicSparseVector& operator*=(const Scalar& c) {
    if (c == Scalar(0)) {
      entries_.clear();
    } else {
      for (auto& e : entries_) e.second *= c;
    }
    return *this;
  }

  friend BasicSparseVector operator+(BasicSparseVector a, const BasicSparseVector& b) { return a += b; }
  friend BasicSparseVector operator-(BasicSparseVector a, const BasicSparseVector& b) { return a -= b; }
  friend BasicSparseVector operator*(const Scalar& c, BasicSparseVector a) { return a *= c; }
  friend BasicSparseVector operator*(BasicSparseVector a, const Scalar& c) { return a *= c; }
  friend bool operator==(const BasicSparseVector& a, const BasicSparseVector& b) {
    return a.entries_ == b.entries_;
  }

 private:
  typename std::vector<Entry>::const_iterator find(const VertexAddress& v) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), v,
                               [](const Entry& e, const VertexAddress& a) { return e.first < a; });
    return (it != entries_.end() && it->first == v) ? it : entries_.end();
  }

  void drop_zeros() {
    entries_.erase(std::remove_if(entries_.begin(), entries_.end(),
                                  [](const Entry& e) { return e.second == Scalar(0); }),
                   entries_.end());
  }

  static BasicSparseVector merge(const BasicSparseVector& a, const BasicSparseVector& b,
                                 const Scalar& sign) {
    std::vector<Entry> out;
    out.reserve(a.size() + b.size());
    auto i = a.entries_.begin();
    auto j = b.entries_.begin();
    while (i != a.entries_.end() || j != b.entries_.end()) {
      if (j == b.entries_.end() || (i != a.entries_.end() && i->first < j->first)) {
        out.push_back(*i++);
      } else if (i == a.entries_.end() || j->first < i->first) {
        out.emplace_back(j->first, sign * j->second);
        ++j;
      } else {
        Scalar s = i->second + sign * j->second;
        if (s != Scalar(0)) out.emplace_back(i->first, std::move(s));
        ++i;
        ++j;
      }
    }
    BasicSparseVector r;
    r.entries_ = std::move(out);
    return r;
  }

  std::vector<Entry> entries_;
};

using SparseVector = BasicSparseVector<double>;
using ExactVector = BasicSparseVector<Rational>;

SparseVector basis(const VertexAddress& v);
ExactVector basis_exact(const VertexAddress& v);
ExactVector to_exact(const SparseVector& f);
SparseVector to_double(const ExactVector& f);

/// ||f||_{p,mu} or max |f(v) mu_v|. Throws InvalidAddress for unresolvable support.
double norm(const SparseVector& f, const SpaceSpec& spec, const TreeModel& tree);
/// Exact ||f||^p (integer p) or the exact sup for c0. Throws InexactMode otherwise.
Rational norm_pow_exact(const ExactVector& f, const SpaceSpec& spec, const TreeModel& tree);

double pairing(const SparseVector& f, const SparseVector& g);
Rational pairing(const ExactVector& f, const ExactVector& g);

/// The space-appropriate fiber quantity over chi_n(v, n):
///   ell^1: max 1/|mu_u|;  ell^p: (sum |mu_u|^{-p*})^{1/p*};  c0: sum 1/|mu_u|.
/// Zero for an empty fiber; may be +inf on overflow.
double fiber_quantity(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                      const SpaceSpec& spec);

/// Exact counterpart: ell^1 max 1/|mu_u|; ell^p sum |mu_u|^{-p*} (the p*-th
/// power, integer p* only); c0 sum 1/|mu_u|.
Rational fiber_quantity_exact(const VertexAddress& v, std::size_t n, const TreeModel& tree,
                              const SpaceSpec& spec);

/// Vector text format: one "address<TAB>value" line per entry.
void write_vector(std::ostream& out, const SparseVector& f);
SparseVector read_vector(std::istream& in, const TreeModel& tree);

}  // namespace treeshift
