#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "densekit/graph.hpp"
#include "densekit/oracles.hpp"
#include "densekit/profile.hpp"
#include "densekit/rng.hpp"

namespace densekit {

// Parameters of the auxiliary-graph construction. The modulus M is a prime
// in [N^(c_exp*q), 2*N^(c_exp*q)]; the paper works at (5, ceil(log N)), the
// desk preset at (2, 1) so M stays near N^2.
struct InflationConfig {
    int c_exp = 2;
    int q = 1;
    std::string profile = "desk";
    long size_ceiling = 200'000;      // max allowed M
    long ensemble_ceiling = 5'000'000;  // max ensembles has_bad_ensemble may scan
    int bad_event_retries = 3;

    static InflationConfig desk() { return {}; }
    static InflationConfig paper() { return {5, 0, "paper", 200'000, 5'000'000, 3}; }  // q = ceil(log N) at build time
};

// The auxiliary graph H on vertices u_0..u_{M-1}: every G-edge (v_i, v_j)
// contributes all M shifts (u_{f(i)+t}, u_{f(j)+t}). Duplicate productions
// merge into one H-edge carrying several origin records.
struct InflatedGraph {
    long modulus = 0;                 // prime M
    std::vector<long> mapping;        // f : [N] -> [M]
    Graph host;                       // H
    // origins[e] lists (origin edge index in G, shift t) for host edge e,
    // aligned with host.edges().
    std::vector<std::vector<std::pair<int, long>>> origins;
    Graph source;                     // G, for origin lookups
};

// Ensemble of at most 2q indices with nonzero coefficients in [-q, q]; bad
// when sum x_i * f(i) == 0 (mod M).
struct Ensemble {
    std::vector<int> indices;
    std::vector<int> coefficients;
};

// Smallest prime in [lo, hi] by deterministic scan; throws if none.
long find_prime_in(long lo, long hi);

InflatedGraph build_inflated_graph(const Graph& g, const InflationConfig& cfg, Rng& rng);

// Deterministic variant with a pinned modulus and mapping; the randomized
// builder delegates here, and tests drive specific f values through it.
InflatedGraph build_inflated_graph_with(const Graph& g, long modulus, std::vector<long> mapping);

// First bad ensemble in enumeration order (sizes ascending, index tuples
// lexicographic, coefficient tuples lexicographic over -q..-1,1..q), or
// nullopt. Throws CeilingError if the ensemble space is too large.
std::optional<Ensemble> has_bad_ensemble(const std::vector<long>& mapping, long modulus, int q,
                                         long ceiling = 5'000'000);

// Origin graph R(H') of a host subgraph: requires every edge to have a
// unique origin record; multi-origin edges raise BadEventError.
Subgraph origin_graph(const Subgraph& host_sub, const InflatedGraph& inflated);

// Planted shifted copies of an optimal DkS set (Claim disjoint-copies):
// r = floor(M / (k log k)) random shifts, cross-copy collisions removed,
// only edges originating inside E_G(S_opt) kept.
std::vector<Subgraph> planted_copies(const Graph& g, int k, const VertexSet& s_opt,
                                     const InflatedGraph& inflated, Rng& rng);

struct InflateReport {
    nlohmann::json json;
};

// DkS via a DkC oracle on the inflated graph: pad H to a multiple of k, take
// the oracle's best block, check origin uniqueness, pull back, peel to k.
// Re-samples f up to cfg.bad_event_retries times on multi-origin events.
VertexSet dks_via_dkc(const Graph& g, int k, const DkcSolver& dkc, const InflationConfig& cfg,
                      Rng& rng, nlohmann::json* report = nullptr);

// DkS via a GP oracle: loops the edge-budget estimate h over powers of two,
// keeps small pieces (<= 100 * alpha * k * log k vertices), pulls back the
// best one per h and returns the best set overall.
VertexSet dks_via_gp(const Graph& g, int k, const GpSolver& gp, const InflationConfig& cfg,
                     Rng& rng, nlohmann::json* report = nullptr);

// Greedy block/piece oracles used by the inflated drivers at desk scale,
// where exact enumeration on H is far past any ceiling.
DkcSolver make_greedy_dkc_solver();
GpSolver make_greedy_gp_solver();

}  // namespace densekit
