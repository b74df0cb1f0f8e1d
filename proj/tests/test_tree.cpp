#include <algorithm>
#include <set>
#include <thread>

#include "doctest.h"
#include "treeshift/errors.hpp"
#include "treeshift/presets.hpp"
#include "treeshift/tree.hpp"
#include "treeshift/tree_spec.hpp"

using namespace treeshift;

namespace {

std::set<VertexAddress> as_set(const std::vector<VertexAddress>& v) { return {v.begin(), v.end()}; }

Truncation small(std::size_t depth, std::size_t ancestry = 0) {
  Truncation t;
  t.depth = depth;
  t.ancestry = ancestry;
  return t;
}

}  // namespace

TEST_CASE("address text form round-trips") {
  const VertexAddress a{0, {1, 0}};
  CHECK(to_string(a) == "(0; 1.0)");
  CHECK(to_string(VertexAddress{2, {}}) == "(2;)");
  CHECK(parse_address("(0; 1.0)") == a);
  CHECK(parse_address(" ( 3 ; 0.2.1 ) ") == VertexAddress{3, {0, 2, 1}});
  CHECK_THROWS_AS(parse_address("(x;)"), ParseError);
  CHECK_THROWS_AS(parse_address("0;1"), ParseError);
}

TEST_CASE("canonicalize") {
  const auto bin = presets::full_binary();
  const auto ex72 = presets::example_7_2();
  CHECK(canonicalize({0, {1, 0}}, bin) == VertexAddress{0, {1, 0}});
  CHECK(canonicalize({}, bin) == VertexAddress{});
  // one up/down pair along the spine cancels
  CHECK(canonicalize({2, {ex72.spine_child_index(2)}}, ex72) == VertexAddress{1, {}});
  CHECK(canonicalize({3, {0, 0, 0, 1}}, ex72) == VertexAddress{0, {1}});
  CHECK_THROWS_AS(canonicalize({0, {2}}, bin), InvalidAddress);
  CHECK_THROWS_AS(canonicalize({1, {}}, bin), InvalidAddress);
  CHECK_THROWS_AS(canonicalize({0, {0, 1}}, ex72), InvalidAddress);

  for (const auto& v : enumerate(ex72, small(4, 4))) {
    CHECK(canonicalize(canonicalize(v, ex72), ex72) == canonicalize(v, ex72));
    CHECK(canonicalize(v, ex72) == v);
  }
}

TEST_CASE("children and parent on the unrooted example") {
  const auto t = presets::example_7_2();
  const auto o0 = t.resolve("o0");
  CHECK(as_set(children(o0, t)) == std::set{t.resolve("u1"), t.resolve("v1")});
  CHECK(parent(o0, t) == t.resolve("o1"));
  CHECK(parent(t.resolve("u3"), t) == t.resolve("u2"));
  CHECK(children(t.resolve("o1"), t) == std::vector{o0});
  CHECK(t.display(t.resolve("o5")) == "o5");
  CHECK(t.display(t.resolve("v4")) == "v4");
}

TEST_CASE("rooted navigation") {
  const auto bin = presets::full_binary();
  CHECK_FALSE(parent({}, bin).has_value());
  CHECK(children({}, bin).size() == 2);
  CHECK(chi_n({}, 3, bin).size() == 8);
  CHECK(chi_n({0, {1}}, 0, bin) == std::vector<VertexAddress>{{0, {1}}});
  CHECK_FALSE(p_n({0, {1}}, 2, bin).has_value());
  CHECK(p_n({0, {1, 0}}, 0, bin) == VertexAddress{0, {1, 0}});

  // leaves of an explicit edge list
  const auto t = parse_tree_spec(R"({"arity": {"edges": [["ro","a"],["a","b"]]}, "weight": {"constant": 1}})");
  CHECK(children(t.resolve("b"), t).empty());
  CHECK(chi_n({}, 3, t).empty());
}

TEST_CASE("chi_n and p_n on the unrooted example") {
  const auto t = presets::example_7_2();
  CHECK(as_set(chi_n(t.resolve("o1"), 2, t)) == std::set{t.resolve("u1"), t.resolve("v1")});
  CHECK(p_n(t.resolve("u1"), 3, t) == t.resolve("o2"));
  CHECK(p_n(t.resolve("u4"), 2, t) == t.resolve("u2"));
  CHECK(as_set(chi_n(t.resolve("o3"), 3, t)) == std::set{t.resolve("o0")});
}

TEST_CASE("structural properties on every preset") {
  for (const auto& name : presets::names()) {
    CAPTURE(name);
    const auto t = presets::by_name(name);
    const auto verts = enumerate(t, small(5, 3));
    CHECK(as_set(verts).size() == verts.size());
    for (const auto& v : verts) {
      for (const auto& c : children(v, t)) CHECK(parent(c, t) == v);
      for (std::size_t n = 0; n <= 3; ++n) {
        const auto fiber = chi_n(v, n, t);
        for (const auto& u : fiber) CHECK(p_n(u, n, t) == v);
        // Chi^{n+1}(v) is the union of Chi^n over the children
        std::vector<VertexAddress> rec;
        for (const auto& c : children(v, t)) {
          auto part = chi_n(c, n, t);
          rec.insert(rec.end(), part.begin(), part.end());
        }
        CHECK(as_set(chi_n(v, n + 1, t)) == as_set(rec));
        CHECK(as_set(rec).size() == rec.size());
      }
    }
  }
}

TEST_CASE("rooted truncation equals the union of root fibers") {
  for (const auto& t : {presets::full_binary(), presets::example_4_1(), presets::unary_path()}) {
    const std::size_t D = 6;
    std::vector<VertexAddress> all;
    for (std::size_t n = 0; n <= D; ++n) {
      auto f = chi_n({}, n, t);
      all.insert(all.end(), f.begin(), f.end());
    }
    const auto trunc = enumerate(t, small(D));
    CHECK(as_set(all).size() == all.size());
    CHECK(as_set(all) == as_set(trunc));
    CHECK(trunc.size() == all.size());
  }
}

TEST_CASE("unrooted truncation window") {
  const auto t = presets::example_7_2();
  const auto verts = enumerate(t, small(2, 2));
  // o2, o1, o0, then u1, u2, v1, v2
  CHECK(verts.size() == 7);
  CHECK(truncation_apex(t, small(2, 2)) == t.resolve("o2"));
}

TEST_CASE("validate") {
  CHECK(validate(presets::example_4_1(), small(20)).ok());
  CHECK(validate(presets::example_7_2(), small(8, 8)).ok());
  CHECK(validate(presets::full_binary(), small(8)).ok());

  const auto two = parse_tree_spec(R"({"arity": {"edges": [["ro","a"],["ro","b"],["a","c"],["b","c"]]},
                                       "weight": {"constant": 1}})");
  auto rep = validate(two, small(4));
  REQUIRE_FALSE(rep.ok());
  CHECK(std::any_of(rep.violations.begin(), rep.violations.end(),
                    [](const Violation& v) { return v.kind == ViolationKind::unique_parent; }));

  const auto cyc = parse_tree_spec(R"({"arity": {"edges": [["ro","a"],["a","b"],["b","a"]]},
                                       "weight": {"constant": 1}})");
  rep = validate(cyc, small(4));
  CHECK(std::any_of(rep.violations.begin(), rep.violations.end(), [](const Violation& v) {
    return v.kind == ViolationKind::circuit || v.kind == ViolationKind::unique_parent;
  }));

  const auto zero = parse_tree_spec(R"J({"arity": {"constant": 2},
                                        "weight": {"table": {"(0; 1.0)": 0}, "default": 1}})J");
  rep = validate(zero, small(3));
  REQUIRE(rep.violations.size() == 1);
  CHECK(rep.violations[0].kind == ViolationKind::zero_weight);
  CHECK(rep.violations[0].address == "(0; 1.0)");
  CHECK(to_string(ViolationKind::zero_weight) == "ZeroWeightViolation");
}

TEST_CASE("Example 4.1 weights follow the block pattern") {
  const presets::BlockLengths pow2;
  const std::vector<int> expect{-1, -2, -1, 0, 1, 2, 3, 4, 3, 2, 1, 0, -1};
  for (std::size_t k = 1; k <= expect.size(); ++k) {
    CHECK(presets::example_4_1_exponent(pow2, k) == expect[k - 1]);
  }
  const auto t = presets::example_4_1();
  CHECK(t.weight({}) == 1.0);
  CHECK(t.weight(t.resolve("v2")) == 0.25);
  CHECK(t.weight(t.resolve("u2")) == 4.0);
  CHECK(t.weight(t.resolve("v8")) == 16.0);

  presets::BlockLengths custom{{1, 3}, "linear"};
  // block 1: -1, 0; block 2: 1, 2, 3, 2, 1, 0; block 3 (m = 3): -1, -2, -3, ...
  const std::vector<int> c{-1, 0, 1, 2, 3, 2, 1, 0, -1, -2, -3};
  for (std::size_t k = 1; k <= c.size(); ++k) {
    CHECK(presets::example_4_1_exponent(custom, k) == c[k - 1]);
  }
}

TEST_CASE("presets and labels") {
  CHECK_THROWS_AS(presets::by_name("nope"), UnknownPreset);
  const auto z = presets::unary_path(false);
  CHECK(z.resolve("z-3") == VertexAddress{3, {}});
  CHECK(z.resolve("z2") == VertexAddress{0, {0, 0}});
  CHECK(parent(z.resolve("z0"), z) == z.resolve("z-1"));
  CHECK(z.display(z.resolve("z-2")) == "z-2");
  CHECK_THROWS_AS(presets::example_7_2().resolve("w1"), InvalidAddress);
}

TEST_CASE("tree spec documents") {
  const auto t = parse_tree_spec(R"({"kind": "rooted", "arity": {"levels": [3, 2], "default": 0},
                                     "weight": {"levels": [1, 0.5, 0.25]}})");
  CHECK(chi_n({}, 1, t).size() == 3);
  CHECK(chi_n({}, 2, t).size() == 6);
  CHECK(chi_n({}, 3, t).empty());
  CHECK(t.weight({0, {2, 1}}) == 0.25);
  CHECK(t.radial() != nullptr);

  const auto u = parse_tree_spec(R"({"kind": "unrooted", "anchor": "a", "arity": {"constant": 2},
                                     "spine": {"child_index": 1}, "weight": {"constant": 3},
                                     "truncation": {"depth": 2, "ancestry": 1}})");
  CHECK(canonicalize({1, {1}}, u) == VertexAddress{});
  CHECK(enumerate(u, u.default_truncation()).size() == 15);
  CHECK(validate(u, u.default_truncation()).ok());

  const auto p = parse_tree_spec(R"({"preset": "example_4_1", "params": {"m": [2, 4]},
                                     "truncation": {"depth": 7}})");
  CHECK(p.default_truncation().depth == 7);
  CHECK(p.name() == "example_4_1");

  CHECK_THROWS_AS(parse_tree_spec("{"), ParseError);
  CHECK_THROWS_AS(parse_tree_spec(R"({"arity": {"constant": 2}})"), ParseError);
  CHECK_THROWS_AS(parse_tree_spec(R"({"preset": "mystery"})"), UnknownPreset);
  CHECK_THROWS_AS(parse_tree_spec(R"({"preset": "example_4_1", "params": {"m": [4, 2]}})"),
                  ParseError);
  CHECK(load_tree_argument("preset:full_binary").name() == "full_binary");
  CHECK_THROWS_AS(load_tree_argument("/nonexistent/tree.json"), ParseError);
}

TEST_CASE("trees are shareable between threads") {
  const auto t = presets::example_4_1();
  std::vector<std::thread> pool;
  std::vector<double> sums(4, 0.0);
  for (int i = 0; i < 4; ++i) {
    pool.emplace_back([&, i] {
      double s = 0;
      for (std::size_t n = 1; n <= 400; ++n) {
        for (const auto& u : chi_n({}, n, t)) s += t.weight(u);
      }
      sums[static_cast<std::size_t>(i)] = s;
    });
  }
  for (auto& th : pool) th.join();
  for (double s : sums) CHECK(s == sums[0]);
}
