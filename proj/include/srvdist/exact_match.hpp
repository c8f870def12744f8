#pragma once

#include "srvdist/matching.hpp"

namespace srvdist {

struct ShapeDistanceResult;

// Maximum-energy monotone path over the full edge set: all strictly
// diagonal jumps (i,j)->(k,l) with k>i, l>j, plus weight-0 unit
// horizontal/vertical steps realizing gamma'=0 intervals. Diagonal edges
// whose open segment passes through another grid node are pruned
// (splitting them is energy-neutral). Attains the true quotient matching
// energy for piecewise-linear curves.
MatchingPath precise_match(const SrvFunction& q1, const SrvFunction& q2);

// Quotient distance between open PL curves; with_rotation runs seeded
// alternation between precise_match and the Procrustes rotation step.
ShapeDistanceResult exact_distance_open(const Curve& c1, const Curve& c2, bool with_rotation);

}  // namespace srvdist
