#pragma once

#include "densekit/graph.hpp"

namespace densekit {

// Greedy size reduction: repeatedly remove the lowest-degree vertex of G[S]
// (ties broken by smallest id) until floor(beta*|S|) vertices remain.
// Requires 2/|S| < beta <= 1. The surviving set S' keeps
//   |E(S')| * k * (k-1) >= floor(beta*k) * (floor(beta*k)-1) * |E(S)|
// with k = |S|; this exact product bound is asserted on every call.
VertexSet peel_to_size(const Graph& g, const VertexSet& s, double beta);

// Greedy edge-budget reduction: peel lowest-degree vertices until the induced
// edge count drops to at most h. Requires |E(S)| >= h. The result satisfies
// ceil(h/3) <= |E(S')| <= h; for h <= 3 returns a single adjacent pair.
VertexSet peel_to_edge_budget(const Graph& g, const VertexSet& s, long h);

// Same peeling loop without a ratio guarantee: remove lowest-degree vertices
// until exactly `target` remain. Requires 0 <= target <= |S|.
VertexSet peel_to_count(const Graph& g, const VertexSet& s, long target);

}  // namespace densekit
