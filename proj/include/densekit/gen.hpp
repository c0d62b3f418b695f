#pragma once

#include "densekit/csp.hpp"
#include "densekit/graph.hpp"
#include "densekit/rng.hpp"

namespace densekit {

// G(n, p): every pair independently an edge.
Graph gen_gnp(int n, double p, Rng& rng);

// Sparse background plus a dense planted k-set.
Graph gen_planted_dense(int n, int k, double p_in, double p_out, Rng& rng);

// `count` disjoint cliques of `size` vertices each.
Graph gen_disjoint_cliques(int count, int size);

// Random bipartite graph.
BipartiteGraph gen_bipartite_gnp(int n_a, int n_b, double p, Rng& rng);

// Planted YES instance: a hidden assignment satisfies at least half of the
// constraints; per-value degrees stay at most 2 (a 2-to-2 instance).
Csp2Instance gen_planted_csp(int num_x, int num_y, int alphabet, int num_constraints,
                             Rng& rng);

// All constraint tables empty: nothing is satisfiable.
Csp2Instance gen_empty_tables_csp(int num_x, int num_y, int alphabet, int num_constraints,
                                  Rng& rng);

}  // namespace densekit
