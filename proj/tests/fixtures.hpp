#pragma once

#include <cmath>
#include <random>
#include <vector>

#include "nehari/convex_body.hpp"

namespace fixtures {

using nehari::ConvexBody;
using nehari::Vec;
using nehari::vec2;

inline ConvexBody disc() { return ConvexBody::ball(vec2(0, 0), 1.0); }

inline ConvexBody square() { return ConvexBody::box(vec2(-1, -1), vec2(1, 1)); }

inline ConvexBody square_v() { return ConvexBody::vpolytope({vec2(-1, -1), vec2(1, -1), vec2(1, 1), vec2(-1, 1)}); }

/// [-2,0] x [-1,1] glued to the right unit half-disc.
inline ConvexBody stadium() { return ConvexBody::convex_hull(ConvexBody::box(vec2(-2, -1), vec2(0, 1)), disc()); }

inline std::vector<Vec> random_directions(int count, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> nd;
  std::vector<Vec> out;
  while (static_cast<int>(out.size()) < count) {
    Vec a = vec2(nd(gen), nd(gen));
    if (a.norm() > 1e-3) out.push_back(a);
  }
  return out;
}

}  // namespace fixtures
