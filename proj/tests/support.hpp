#pragma once

#include <random>
#include <vector>

#include "treeshift/space.hpp"
#include "treeshift/tree.hpp"

namespace testing_support {

using namespace treeshift;

inline Truncation window(std::size_t depth, std::size_t ancestry = 0) {
  Truncation t;
  t.depth = depth;
  t.ancestry = ancestry;
  return t;
}

/// Random vector on up to `k` vertices drawn from `pool`, dyadic values in [-4, 4].
inline SparseVector random_vector(std::mt19937_64& rng, const std::vector<VertexAddress>& pool,
                                  std::size_t k) {
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_int_distribution<int> val(-64, 64);
  std::vector<SparseVector::Entry> e;
  for (std::size_t i = 0; i < k; ++i) e.emplace_back(pool[pick(rng)], val(rng) / 16.0);
  return SparseVector::from_entries(std::move(e));
}

inline std::vector<SpaceSpec> sample_spaces() {
  return {SpaceSpec::ell(1), SpaceSpec::ell(1.5), SpaceSpec::ell(2), SpaceSpec::ell(3),
          SpaceSpec::c0()};
}

}  // namespace testing_support
