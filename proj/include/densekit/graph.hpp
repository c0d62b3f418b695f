#pragma once

#include <string>
#include <utility>
#include <vector>

namespace densekit {

using Edge = std::pair<int, int>;  // normalized: first < second

// Sorted list of distinct vertex ids.
using VertexSet = std::vector<int>;

// Immutable simple undirected graph on vertices 0..n-1.
// Edges are stored normalized (u < v) and lexicographically sorted; this is
// also the canonical serialization order.
class Graph {
  public:
    Graph() = default;

    // Validates: endpoints in range, no self-loops, no duplicates.
    static Graph from_edges(int n, std::vector<Edge> edges);

    int vertex_count() const { return n_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors(int v) const { return adj_[v]; }
    int degree(int v) const { return static_cast<int>(adj_[v].size()); }
    bool has_edge(int u, int v) const;

    // Subgraph induced by S (S must be a valid vertex set).
    Graph induced(const VertexSet& s) const;

  private:
    int n_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_;
};

// Immutable simple bipartite graph; sides indexed 0..nA-1 and 0..nB-1.
class BipartiteGraph {
  public:
    BipartiteGraph() = default;
    static BipartiteGraph from_edges(int n_a, int n_b, std::vector<Edge> edges);

    int side_a() const { return na_; }
    int side_b() const { return nb_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const std::vector<Edge>& edges() const { return edges_; }
    const std::vector<int>& neighbors_of_a(int a) const { return adj_a_[a]; }
    const std::vector<int>& neighbors_of_b(int b) const { return adj_b_[b]; }

  private:
    int na_ = 0, nb_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> adj_a_, adj_b_;
};

// A solution to a bipartite problem: chosen vertices on each side, sorted.
struct BipartiteSet {
    std::vector<int> a;
    std::vector<int> b;
};

// Subgraph of some parent graph: explicit vertex and edge subsets. Edges need
// not be induced (GP pieces keep only some of the induced edges).
struct Subgraph {
    std::vector<int> vertices;  // sorted
    std::vector<Edge> edges;    // sorted, endpoints inside `vertices`

    int edge_count() const { return static_cast<int>(edges.size()); }
    bool empty() const { return vertices.empty() && edges.empty(); }
};

// Builds a subgraph from an edge list plus any extra isolated vertices.
Subgraph make_subgraph(std::vector<Edge> edges, std::vector<int> extra_vertices = {});

// Throws PreconditionError unless sub's edges all exist in g and lie inside
// sub.vertices.
void validate_subgraph(const Graph& g, const Subgraph& sub);

// Throws PreconditionError unless s is strictly increasing with ids < n.
void validate_vertex_set(int n, const VertexSet& s);

// --- file formats -----------------------------------------------------------
// Edge list: header "n m" then m lines "u v".
// Bipartite: header "nA nB m" then m lines "a b".
Graph parse_graph(const std::string& text);
std::string serialize_graph(const Graph& g);
BipartiteGraph parse_bipartite(const std::string& text);
std::string serialize_bipartite(const BipartiteGraph& g);

// --- basic queries ----------------------------------------------------------
// m(S) = |E_G(S)|, the number of edges with both endpoints in S.
long induced_edge_count(const Graph& g, const VertexSet& s);

// vol_G(S) = sum of degrees of S in G.
long volume(const Graph& g, const VertexSet& s);

// Number of edges of g with both endpoints inside the given bipartite set.
long bipartite_edge_count(const BipartiteGraph& g, const BipartiteSet& s);

// Maximal connected pieces with their induced edges; isolated vertices become
// singleton components. Components ordered by smallest vertex id.
std::vector<Subgraph> connected_components(const Graph& g);

// Connected components of a subgraph of g (uses only sub's own edges).
std::vector<Subgraph> subgraph_components(const Subgraph& sub);

// Spanning forest of g (BFS from each unvisited vertex, canonical order).
Subgraph spanning_forest(const Graph& g);

// Union of vertex-disjoint subgraphs.
Subgraph union_subgraphs(const std::vector<Subgraph>& parts);

}  // namespace densekit
