#include "densekit/gen.hpp"

#include <algorithm>

#include "densekit/errors.hpp"

namespace densekit {

Graph gen_gnp(int n, double p, Rng& rng) {
    if (n < 0) throw PreconditionError("gen_gnp: negative n");
    if (p < 0.0 || p > 1.0) throw PreconditionError("gen_gnp: p outside [0, 1]");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
            if (rng.chance(p)) edges.push_back({u, v});
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_planted_dense(int n, int k, double p_in, double p_out, Rng& rng) {
    if (k < 0 || k > n) throw PreconditionError("gen_planted_dense: k out of range");
    if (p_in < 0 || p_in > 1 || p_out < 0 || p_out > 1)
        throw PreconditionError("gen_planted_dense: probability outside [0, 1]");
    std::vector<Edge> edges;
    for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v) {
            const double p = (u < k && v < k) ? p_in : p_out;
            if (rng.chance(p)) edges.push_back({u, v});
        }
    return Graph::from_edges(n, std::move(edges));
}

Graph gen_disjoint_cliques(int count, int size) {
    if (count < 0 || size < 0) throw PreconditionError("gen_disjoint_cliques: negative sizes");
    std::vector<Edge> edges;
    for (int c = 0; c < count; ++c) {
        const int base = c * size;
        for (int u = 0; u < size; ++u)
            for (int v = u + 1; v < size; ++v) edges.push_back({base + u, base + v});
    }
    return Graph::from_edges(count * size, std::move(edges));
}

BipartiteGraph gen_bipartite_gnp(int n_a, int n_b, double p, Rng& rng) {
    if (n_a < 0 || n_b < 0) throw PreconditionError("gen_bipartite_gnp: negative side");
    if (p < 0.0 || p > 1.0) throw PreconditionError("gen_bipartite_gnp: p outside [0, 1]");
    std::vector<Edge> edges;
    for (int a = 0; a < n_a; ++a)
        for (int b = 0; b < n_b; ++b)
            if (rng.chance(p)) edges.push_back({a, b});
    return BipartiteGraph::from_edges(n_a, n_b, std::move(edges));
}

namespace {

std::vector<std::pair<int, int>> distinct_variable_pairs(int num_x, int num_y, int count,
                                                         Rng& rng) {
    const long all = static_cast<long>(num_x) * num_y;
    if (count > all) throw PreconditionError("gen csp: more constraints than (x, y) pairs");
    std::vector<long> codes(all);
    for (long i = 0; i < all; ++i) codes[i] = i;
    // Partial Fisher-Yates for the first `count` entries.
    for (int i = 0; i < count; ++i) {
        long j = i + static_cast<long>(rng.below(all - i));
        std::swap(codes[i], codes[j]);
    }
    std::vector<std::pair<int, int>> out;
    for (int i = 0; i < count; ++i)
        out.push_back({static_cast<int>(codes[i] / num_y), static_cast<int>(codes[i] % num_y)});
    return out;
}

}  // namespace

Csp2Instance gen_planted_csp(int num_x, int num_y, int alphabet, int num_constraints,
                             Rng& rng) {
    if (alphabet < 2) throw PreconditionError("gen csp: alphabet must be >= 2");
    Assignment hidden(num_x + num_y);
    for (auto& v : hidden) v = static_cast<int>(rng.below(alphabet));

    auto pairs = distinct_variable_pairs(num_x, num_y, num_constraints, rng);
    const int planted = (num_constraints + 1) / 2;
    std::vector<CspConstraint> constraints;
    for (int i = 0; i < num_constraints; ++i) {
        CspConstraint c;
        c.x = pairs[i].first;
        c.y = pairs[i].second;
        if (i < planted) c.pairs.push_back({hidden[c.x], hidden[num_x + c.y]});
        // One extra random pair, kept only while per-value degrees stay <= 2.
        std::pair<int, int> extra{static_cast<int>(rng.below(alphabet)),
                                  static_cast<int>(rng.below(alphabet))};
        bool degree_ok = true;
        int left = 0, right = 0;
        for (const auto& [a, b] : c.pairs) {
            if (a == extra.first) ++left;
            if (b == extra.second) ++right;
        }
        degree_ok = left < 2 && right < 2;
        if (degree_ok &&
            std::find(c.pairs.begin(), c.pairs.end(), extra) == c.pairs.end())
            c.pairs.push_back(extra);
        if (c.pairs.empty()) c.pairs.push_back({hidden[c.x], hidden[num_x + c.y]});
        constraints.push_back(std::move(c));
    }
    return Csp2Instance::make(num_x, num_y, alphabet, std::move(constraints));
}

Csp2Instance gen_empty_tables_csp(int num_x, int num_y, int alphabet, int num_constraints,
                                  Rng& rng) {
    auto pairs = distinct_variable_pairs(num_x, num_y, num_constraints, rng);
    std::vector<CspConstraint> constraints;
    for (const auto& [x, y] : pairs) constraints.push_back({x, y, {}});
    return Csp2Instance::make(num_x, num_y, alphabet, std::move(constraints));
}

}  // namespace densekit
