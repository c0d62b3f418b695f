#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "densekit/graph.hpp"
#include "densekit/lp_pipeline.hpp"
#include "densekit/oracles.hpp"
#include "densekit/profile.hpp"
#include "densekit/rng.hpp"

namespace densekit {

// Balanced-cut and threshold configuration for the GP<->MBCS reductions.
struct CutProfile {
    Profile base;                 // polylog exponents
    double gamma = 0.875;         // balance constant, in (3/4, 1)
    int exact_cut_limit = 18;     // exact enumeration below this vertex count
    int heuristic_restarts = 4;
    double case1_constant = 16.0;  // C* >= case1_constant * n * alpha * log^e7 n
    double prune_constant = 4.0;   // c' in h'' <= c' h' alpha log^e8 n
    double density_pre_constant = 1.0;  // |E(H)| >= const * N * log^e6 N precondition

    static CutProfile desk() { return {Profile::desk()}; }
    static CutProfile paper() {
        CutProfile p{Profile::paper()};
        p.density_pre_constant = 4.0;
        return p;
    }
};

struct BalancedCut {
    VertexSet side_a, side_b;  // partition of the piece's vertices
    long value = 0;            // crossing edges
};

// Minimum gamma-balanced cut: exact enumeration below the vertex limit,
// otherwise a seeded repair-and-improve heuristic. Both sides' internal
// edge counts stay at most gamma * |E|. Throws if no balanced cut exists.
BalancedCut balanced_cut(const Subgraph& piece, const CutProfile& profile, Rng& rng);

// Upper bound on the crossing number: forests and unicyclic components are
// planar (0), any other component is bounded by |E|^2.
long crossing_upper_bound(const Subgraph& h);

// A good GP solution: every piece carries between h/2 and h edges.
struct GoodGpSolution {
    long r = 0, h = 0;
    std::vector<Subgraph> pieces;
};
void validate_good_solution(const GoodGpSolution& sol);

// Geometric regrouping by edge count (groups [2^(i-1), 2^i)); returns the
// group with the most total edges as a good solution with h* = 2^i.
GoodGpSolution regroup_equal_size(const std::vector<Subgraph>& pieces, long n);

// Iterative balanced-cut splitting of a bounded-crossing subgraph into a
// good GP solution over its dense pieces (Lemma WGP_BCS shape). Splitting is
// stopped by the cut-size test and, additionally, by the global deletion
// budget |E(H)|/2, which keeps the post-split retention invariant at every
// profile. Threshold inequalities that fail under the active profile are
// returned in `violations` rather than asserted.
struct DecomposeResult {
    long r = 0, h = 0;
    GoodGpSolution good;
    std::vector<Subgraph> post_split_family;
    long post_split_edges = 0;
    std::vector<std::string> violations;
};
DecomposeResult decompose_bounded_crossing(const Graph& g, long big_l, const Subgraph& h_sub,
                                           const CutProfile& profile, Rng& rng);

// MBCS via a GP oracle: spanning forest fallback, eligible (r, h) trials with
// per-piece thinning, surrogate crossing certificate on the union.
Subgraph mbcs_via_gp(const Graph& g, long big_l, const GpSolver& gp, const CutProfile& profile,
                     Rng& rng, nlohmann::json* report = nullptr);

// Greedy maximal forest with maximum degree <= h, edges in canonical order.
Subgraph maximal_bounded_forest(const Graph& g, long h);

// Leaf-subtree peeling of a tree into pieces of at most delta edges, then
// greedy merging of undersized pieces to at least ceil(delta/2) edges (at
// most one leftover dropped). Keeps at least half the tree's edges.
std::vector<Subgraph> cut_tree(const Subgraph& tree, long delta);

// While more than r pieces remain, union the two smallest-edge pieces.
// Requires every piece <= h/2 edges and total <= r*h/2; no output piece
// exceeds h edges.
std::vector<Subgraph> merge_clusters(std::vector<Subgraph> pieces, long r, long h);

// GP via an MBCS oracle: guesses C* over powers of two (plus |E|), Case 1
// (decompose + trim + merge) above the profile threshold, forest cutting
// below it, one recursion onto G[S] in Case 2b.
GpSolution gp_via_mbcs(const Graph& g, long r, long h, const MbcsSolver& mbcs,
                       const CutProfile& profile, Rng& rng, nlohmann::json* report = nullptr);

// Exact MBCS under the surrogate crossing bound, by edge-subset enumeration.
Subgraph solve_mbcs_exact(const Graph& g, long big_l, long ceiling = 1L << 20);
MbcsSolver make_exact_mbcs_solver(long ceiling = 1L << 20);

}  // namespace densekit
