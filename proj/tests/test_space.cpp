#include <cmath>
#include <random>
#include <sstream>

#include "doctest.h"
#include "support.hpp"
#include "treeshift/errors.hpp"
#include "treeshift/presets.hpp"

using namespace treeshift;
using namespace testing_support;

TEST_CASE("parse_space") {
  CHECK(parse_space("2").p == 2.0);
  CHECK(parse_space("p=3").p == 3.0);
  CHECK(parse_space("ell2").p_star == doctest::Approx(2.0));
  CHECK(parse_space("l1.5").p_star == doctest::Approx(3.0));
  CHECK(std::isinf(parse_space("1").p_star));
  CHECK(parse_space("c0").is_c0());
  CHECK(parse_space("1").is_ell1());
  CHECK(parse_space("1.5").integer_conjugate() == 3);
  CHECK_FALSE(parse_space("2.5").integer_conjugate().has_value());
  CHECK(parse_space("4").integer_exponent() == 4);
  CHECK(to_string(parse_space("c0")) == "c0");
  CHECK(to_string(parse_space("2")) == "ell^2");
  CHECK_THROWS_AS(parse_space("0.5"), InvalidSpace);
  CHECK_THROWS_AS(parse_space("banana"), InvalidSpace);
}

TEST_CASE("sparse vector arithmetic") {
  const VertexAddress a{0, {0}}, b{0, {1}};
  auto f = SparseVector::from_entries({{b, 1.0}, {a, 2.0}, {b, -1.0}});
  CHECK(f.size() == 1);
  CHECK(f.get(a) == 2.0);
  CHECK(f.get(b) == 0.0);
  f.add(b, 3.0);
  CHECK(f.support() == std::vector<VertexAddress>{a, b});
  f.add(a, -2.0);
  CHECK(f.size() == 1);
  f.set(b, 0.0);
  CHECK(f.empty());
  const auto g = basis(a) + 2.0 * basis(b);
  CHECK((g - g).empty());
  CHECK((g * 0.0).empty());
  CHECK(to_double(to_exact(g)) == g);
}

TEST_CASE("norms of basis vectors are the weights") {
  const auto t = presets::example_4_1();
  for (const auto& spec : sample_spaces()) {
    for (const char* lbl : {"u2", "v2", "v8"}) {
      const auto v = t.resolve(lbl);
      CHECK(norm(basis(v), spec, t) == doctest::Approx(std::abs(t.weight(v))));
    }
  }
  const auto f = basis(t.resolve("u2")) + basis(t.resolve("v2"));
  CHECK(norm(f, SpaceSpec::ell(2), t) == doctest::Approx(std::sqrt(16.0 + 1.0 / 16)));
  CHECK(norm(f, SpaceSpec::ell(1), t) == doctest::Approx(4.25));
  CHECK(norm(f, SpaceSpec::c0(), t) == doctest::Approx(4.0));
  CHECK(norm_pow_exact(to_exact(f), SpaceSpec::ell(2), t) == Rational(257, 16));
  CHECK(norm_pow_exact(to_exact(f), SpaceSpec::c0(), t) == Rational(4));
  CHECK_THROWS_AS(norm_pow_exact(to_exact(f), SpaceSpec::ell(1.5), t), InexactMode);
}

TEST_CASE("norm axioms and Hoelder on random vectors") {
  std::mt19937_64 rng(7);
  for (const auto& name : presets::names()) {
    CAPTURE(name);
    const auto t = presets::by_name(name);
    const auto pool = enumerate(t, window(4, 2));
    for (const auto& spec : sample_spaces()) {
      CAPTURE(to_string(spec));
      for (int i = 0; i < 40; ++i) {
        const auto f = random_vector(rng, pool, 5);
        const auto g = random_vector(rng, pool, 5);
        const double nf = norm(f, spec, t), ng = norm(g, spec, t);
        CHECK(norm(f + g, spec, t) <= nf + ng + 1e-12 * (1 + nf + ng));
        CHECK(norm(-2.5 * f, spec, t) == doctest::Approx(2.5 * nf));
        CHECK((nf == 0) == f.empty());
        // |<f, g>| <= ||f||_{p,mu} ||g / mu^2||_{p*,mu}
        std::vector<SparseVector::Entry> scaled;
        for (const auto& [v, x] : g) scaled.emplace_back(v, x / (t.weight(v) * t.weight(v)));
        const auto gs = SparseVector::from_entries(std::move(scaled));
        SpaceSpec dual = spec.is_c0() || spec.is_ell1()
                             ? (spec.is_c0() ? SpaceSpec::ell(1) : SpaceSpec::c0())
                             : SpaceSpec::ell(spec.p_star);
        const double pair = std::abs(pairing(f, g));
        CHECK(pair <= norm(f, spec, t) * norm(gs, dual, t) * (1 + 1e-12) + 1e-12);
      }
    }
  }
}

TEST_CASE("reverse Hoelder on a fiber: q * simplex_inf == 1") {
  const auto t = presets::example_4_1();
  for (const auto& spec : sample_spaces()) {
    for (std::size_t n : {1, 3, 5}) {
      const double q = fiber_quantity({}, n, t, spec);
      // a nonnegative g with sum 1 on the fiber has norm at least 1/q
      double s = 0;
      std::vector<SparseVector::Entry> e;
      for (const auto& u : chi_n({}, n, t)) {
        e.emplace_back(u, 1.0);
        s += 1.0;
      }
      const auto g = (1.0 / s) * SparseVector::from_entries(std::move(e));
      CHECK(norm(g, spec, t) * q >= 1.0 - 1e-12);
    }
  }
}

TEST_CASE("fiber quantities") {
  const auto bin = presets::full_binary();
  CHECK(fiber_quantity({}, 3, bin, SpaceSpec::ell(2)) == doctest::Approx(std::sqrt(8.0)));
  CHECK(fiber_quantity({}, 3, bin, SpaceSpec::ell(1)) == doctest::Approx(1.0));
  CHECK(fiber_quantity({}, 3, bin, SpaceSpec::c0()) == doctest::Approx(8.0));
  CHECK(fiber_quantity_exact({}, 3, bin, SpaceSpec::ell(2)) == Rational(8));
  CHECK(fiber_quantity({}, 0, bin, SpaceSpec::ell(2)) == doctest::Approx(1.0));

  const auto leafy = presets::unary_path(true);
  CHECK(fiber_quantity({}, 5, leafy, SpaceSpec::ell(2)) == doctest::Approx(1.0));

  // Example 4.1: the generation-2 fiber holds u2, v2 with weights 4 and 1/4
  const auto t = presets::example_4_1();
  CHECK(fiber_quantity({}, 2, t, SpaceSpec::ell(2)) ==
        doctest::Approx(std::sqrt(1.0 / 16 + 16)).epsilon(1e-12));
  CHECK(fiber_quantity(t.resolve("v2"), 1, t, SpaceSpec::ell(2)) == doctest::Approx(2.0));
  // fast radial path agrees with direct enumeration
  const auto direct = presets::full_binary(1.0, 0.5);
  for (const auto& spec : sample_spaces()) {
    double s = 0;
    for (const auto& u : chi_n({}, 6, direct)) {
      const double w = std::abs(direct.weight(u));
      s = spec.is_ell1() ? std::max(s, 1 / w) : spec.is_c0() ? s + 1 / w : s + std::pow(w, -spec.p_star);
    }
    if (!spec.is_ell1() && !spec.is_c0()) s = std::pow(s, 1 / spec.p_star);
    CHECK(fiber_quantity({}, 6, direct, spec) == doctest::Approx(s));
  }
}

TEST_CASE("vector text format round-trips") {
  const auto t = presets::example_7_2();
  const auto f = 0.1 * basis(t.resolve("u3")) - 3.0 * basis(t.resolve("o2"));
  std::stringstream ss;
  write_vector(ss, f);
  std::stringstream in("# comment\n" + ss.str() + "\n");
  CHECK(read_vector(in, t) == f);
  std::stringstream bad("(0; 7)\t1\n");
  CHECK_THROWS_AS(read_vector(bad, t), Error);
  std::stringstream junk("(0;)\tx\n");
  CHECK_THROWS_AS(read_vector(junk, t), ParseError);
}

TEST_CASE("exact rational helpers") {
  CHECK(to_rational(0.375) == Rational(3, 8));
  CHECK(to_rational(-1024.0) == Rational(-1024));
  CHECK(pow(Rational(2), -3) == Rational(1, 8));
  CHECK(to_double(Rational(1, 3)) == doctest::Approx(1.0 / 3));
}
