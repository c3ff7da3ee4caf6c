#include "pestctl/simulator.hpp"

#include <gtest/gtest.h>

#include <numbers>

using namespace pestctl;

namespace {

SimState solve(std::size_t n) {
  SimConfig c;
  c.resolution = n;
  c.t_end = 6 * std::numbers::pi;
  c.monitors = false;
  return run(c).final_state;
}

} // namespace

// Successive-resolution differences shrink: |R w_256 - w_128| > |R w_512 - w_256|,
// with R the conservative 2x2 restriction.
TEST(SelfConvergence, DifferencesShrinkUnderRefinement) {
  const SimState s128 = solve(128), s256 = solve(256), s512 = solve(512);
  const double coarse_gap = l1_norm(restrict_conservative(s256.w) - s128.w);
  const double fine_gap = l1_norm(restrict_conservative(s512.w) - s256.w);
  RecordProperty("coarse_gap", std::to_string(coarse_gap));
  RecordProperty("fine_gap", std::to_string(fine_gap));
  EXPECT_GT(coarse_gap, fine_gap) << coarse_gap << " vs " << fine_gap;
}
