#include "densekit/peel.hpp"

#include <algorithm>
#include <cmath>

#include "densekit/errors.hpp"

namespace densekit {

namespace {

// Incremental peeling state over G[S]: degrees maintained under removals.
struct Peeler {
    const Graph& g;
    std::vector<char> alive;    // indexed by vertex id of g
    std::vector<int> degree;    // degree within the surviving set
    std::vector<int> survivors; // current members of S, sorted
    long edge_count = 0;

    Peeler(const Graph& graph, const VertexSet& s) : g(graph) {
        alive.assign(g.vertex_count(), 0);
        degree.assign(g.vertex_count(), 0);
        for (int v : s) alive[v] = 1;
        survivors = s;
        for (int v : s)
            for (int w : g.neighbors(v))
                if (alive[w]) {
                    ++degree[v];
                    if (w > v) ++edge_count;
                }
    }

    // Removes the lowest-degree survivor, smallest id on ties.
    void remove_min() {
        int best = -1;
        for (int v : survivors)
            if (best < 0 || degree[v] < degree[best]) best = v;
        alive[best] = 0;
        edge_count -= degree[best];
        for (int w : g.neighbors(best))
            if (alive[w]) --degree[w];
        survivors.erase(std::find(survivors.begin(), survivors.end(), best));
    }
};

}  // namespace

VertexSet peel_to_size(const Graph& g, const VertexSet& s, double beta) {
    validate_vertex_set(g.vertex_count(), s);
    if (s.empty()) throw PreconditionError("peel_to_size: S must be nonempty");
    const long k = static_cast<long>(s.size());
    if (!(beta > 2.0 / static_cast<double>(k)) || beta > 1.0)
        throw PreconditionError("peel_to_size: beta must lie in (2/|S|, 1]");
    const long target = static_cast<long>(std::floor(beta * static_cast<double>(k)));

    Peeler peeler(g, s);
    const long before = peeler.edge_count;
    while (static_cast<long>(peeler.survivors.size()) > target) peeler.remove_min();

    // Exact telescoping bound from the removal of lowest-degree vertices.
    const long after = peeler.edge_count;
    if (after * k * (k - 1) < target * (target - 1) * before)
        throw NumericError("peel_to_size: product bound violated");
    return peeler.survivors;
}

VertexSet peel_to_edge_budget(const Graph& g, const VertexSet& s, long h) {
    validate_vertex_set(g.vertex_count(), s);
    if (h <= 0) throw PreconditionError("peel_to_edge_budget: h must be positive");
    Peeler peeler(g, s);
    if (peeler.edge_count < h)
        throw PreconditionError("peel_to_edge_budget: |E(S)| below budget h");

    if (h <= 3) {
        // Any adjacent pair: first edge of G[S] in canonical order.
        for (int v : s)
            for (int w : g.neighbors(v))
                if (w > v && std::binary_search(s.begin(), s.end(), w))
                    return {v, w};
    }

    while (peeler.edge_count > h) peeler.remove_min();
    // One removal cuts the count by at most factor (1 - 2/i), so landing
    // below h/3 from above h is impossible; ceil for integrality.
    if (peeler.edge_count < (h + 2) / 3)
        throw NumericError("peel_to_edge_budget: window bound violated");
    return peeler.survivors;
}

VertexSet peel_to_count(const Graph& g, const VertexSet& s, long target) {
    validate_vertex_set(g.vertex_count(), s);
    if (target < 0 || target > static_cast<long>(s.size()))
        throw PreconditionError("peel_to_count: target out of range");
    Peeler peeler(g, s);
    while (static_cast<long>(peeler.survivors.size()) > target) peeler.remove_min();
    return peeler.survivors;
}

}  // namespace densekit
