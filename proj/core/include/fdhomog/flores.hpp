#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fdhomog/curves.hpp"
#include "fdhomog/ddplot.hpp"
#include "fdhomog/depth.hpp"

namespace fdhomog {

// Depth-based statistics comparing the most representative curves of two
// samples. d_F(g) denotes the depth of g in the sample F with g appended.
struct FloresStats {
  double p1 = 0.0;  // d_F of the deepest curve of G within G
  double p2 = 0.0;  // P1(F, F) - P1(F, G)
  double p3 = 0.0;  // d_F of the curve of G deepest within F
  double p4 = 0.0;  // |P3(F, G) - P1(F, F)| * |P3(F, G) - P1(G, G)|
  std::size_t deepest_in_g = 0;
  std::size_t deepest_of_g_in_f = 0;
};

double depth_in_augmented(std::span<const double> g_curve, const FunctionalSample& f, const DepthSpec& spec);

/// d_F(g) for every curve g of `g`, each computed against f with that g appended.
std::vector<double> augmented_depths(const FunctionalSample& g, const FunctionalSample& f, const DepthSpec& spec);

/// Argmax ties resolve to the lowest curve index.
FloresStats flores_statistics(const FunctionalSample& f, const FunctionalSample& g, const DepthSpec& spec);

struct FloresOptions {
  DepthSpec depth = DepthSpec::fm();
  double alpha = 0.05;
  std::size_t num_boot = 500;
  RngSeed seed{};
};

/// Bootstrap test on P4: both samples are redrawn with replacement from the
/// pooled curves; p = #{P4* >= P4} / B; reject iff p < alpha.
TestResult flores_test(const FunctionalSample& f, const FunctionalSample& g, const FloresOptions& options);

}  // namespace fdhomog
