#pragma once

#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "fdhomog/curves.hpp"
#include "fdhomog/error.hpp"

namespace fdhomog::testing {

#define EXPECT_ERROR_CODE(stmt, expected)                                   \
  do {                                                                      \
    try {                                                                   \
      stmt;                                                                 \
      ADD_FAILURE() << "expected " << ::fdhomog::to_string(expected);       \
    } catch (const ::fdhomog::Error& e) {                                   \
      EXPECT_EQ(e.code(), expected) << e.what();                            \
    }                                                                       \
  } while (0)

inline FunctionalSample constant_curves(const Grid& grid, const std::vector<double>& levels) {
  std::vector<std::vector<double>> rows;
  for (double v : levels) rows.emplace_back(grid.size(), v);
  return FunctionalSample::from_rows(grid, rows);
}

// Values on a dyadic lattice (multiples of 1/64) so that sums and shifts are exact.
inline FunctionalSample dyadic_sample(std::size_t n, std::size_t grid_size, std::mt19937_64& rng, int spread = 256) {
  std::uniform_int_distribution<int> dist(-spread, spread);
  std::vector<double> values(n * grid_size);
  for (double& v : values) v = dist(rng) / 64.0;
  return FunctionalSample(make_grid(0.0, 1.0, grid_size), std::move(values));
}

}  // namespace fdhomog::testing
