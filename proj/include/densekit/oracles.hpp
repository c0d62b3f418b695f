#pragma once

#include <functional>
#include <string>
#include <vector>

#include "densekit/graph.hpp"
#include "densekit/rng.hpp"

namespace densekit {

enum class ProblemKind { DkS, BDkS, DkC, GP, MBCS };

// Declared contract of a pluggable sub-solver. alpha is the approximation
// factor the caller may rely on, as a function of instance size; exact modes
// have alpha = 1 and a ceiling on the enumeration work they will attempt.
struct OracleDescriptor {
    ProblemKind problem = ProblemKind::DkS;
    std::function<double(long)> alpha = [](long) { return 1.0; };
    long exact_ceiling = 0;  // 0 if not an exact mode
    std::string name = "exact";

    double alpha_at(long n) const { return alpha ? alpha(n) : 1.0; }
};

using DksFn = std::function<VertexSet(const Graph&, int, Rng&)>;
using BdksFn = std::function<BipartiteSet(const BipartiteGraph&, int, int, Rng&)>;
using DkcFn = std::function<std::vector<VertexSet>(const Graph&, int, Rng&)>;
using GpFn = std::function<std::vector<Subgraph>(const Graph&, long, long, Rng&)>;
using MbcsFn = std::function<Subgraph(const Graph&, long, Rng&)>;

struct DksSolver {
    OracleDescriptor info;
    DksFn fn;
};
struct BdksSolver {
    OracleDescriptor info;
    BdksFn fn;
};
struct DkcSolver {
    OracleDescriptor info;
    DkcFn fn;
};
struct GpSolver {
    OracleDescriptor info;
    GpFn fn;
};
struct MbcsSolver {
    OracleDescriptor info;
    MbcsFn fn;
};

inline constexpr long kDefaultExactCeiling = 50'000'000;

// Exact DkS by subset enumeration; ties resolved to the lexicographically
// smallest k-set. Throws CeilingError when C(n,k) exceeds the ceiling.
VertexSet solve_dks_exact(const Graph& g, int k, long ceiling = kDefaultExactCeiling);

// Exact BDkS: optimum of |E(S)| over |S cap A| = k1, |S cap B| = k2.
BipartiteSet solve_bdks_exact(const BipartiteGraph& g, int k1, int k2,
                              long ceiling = kDefaultExactCeiling);

// Exact DkC by enumerating partitions of V into n/k blocks of size k.
std::vector<VertexSet> solve_dkc_exact(const Graph& g, int k,
                                       long ceiling = kDefaultExactCeiling);

// Exact GP by enumerating assignments of vertices to r pieces (or none);
// each piece keeps min(m(piece), h) induced edges, dropped canonically.
std::vector<Subgraph> solve_gp_exact(const Graph& g, long r, long h,
                                     long ceiling = kDefaultExactCeiling);

// Feasibility-only baseline: peel lowest-degree vertices down to k.
VertexSet greedy_dks(const Graph& g, int k);

// BDkS via a DkS oracle: copy blow-up graph, oracle call with
// k = min(2*k1*k2, |V(H)|), interleaved-partition recovery, padding to exact
// side quotas. Value is at least ceil(oracle value / (4*k1*k2)).
BipartiteSet bdks_via_dks(const BipartiteGraph& g, int k1, int k2, const DksSolver& dks,
                          Rng& rng);

// DkS via a BDkS oracle: doubled bipartite graph, projection, peel to k.
VertexSet dks_via_bdks(const Graph& g, int k, const BdksSolver& bdks, Rng& rng);

// Convenience constructors for the stock oracles.
DksSolver make_exact_dks_solver(long ceiling = kDefaultExactCeiling);
DksSolver make_greedy_dks_solver();
BdksSolver make_exact_bdks_solver(long ceiling = kDefaultExactCeiling);
DkcSolver make_exact_dkc_solver(long ceiling = kDefaultExactCeiling);
GpSolver make_exact_gp_solver(long ceiling = kDefaultExactCeiling);

}  // namespace densekit
