#include "densekit/graph.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <sstream>

#include "densekit/errors.hpp"

namespace densekit {

namespace {

Edge normalized(int u, int v) { return u < v ? Edge{u, v} : Edge{v, u}; }

}  // namespace

Graph Graph::from_edges(int n, std::vector<Edge> edges) {
    if (n < 0) throw PreconditionError("vertex count must be nonnegative");
    Graph g;
    g.n_ = n;
    for (auto& e : edges) {
        if (e.first == e.second)
            throw PreconditionError("self-loop at vertex " + std::to_string(e.first));
        if (e.first < 0 || e.second < 0 || e.first >= n || e.second >= n)
            throw PreconditionError("edge endpoint out of range");
        e = normalized(e.first, e.second);
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw PreconditionError("duplicate edge");
    g.edges_ = std::move(edges);
    g.adj_.assign(n, {});
    for (const auto& [u, v] : g.edges_) {
        g.adj_[u].push_back(v);
        g.adj_[v].push_back(u);
    }
    for (auto& nb : g.adj_) std::sort(nb.begin(), nb.end());
    return g;
}

bool Graph::has_edge(int u, int v) const {
    if (u < 0 || v < 0 || u >= n_ || v >= n_) return false;
    const auto& nb = adj_[u];
    return std::binary_search(nb.begin(), nb.end(), v);
}

Graph Graph::induced(const VertexSet& s) const {
    validate_vertex_set(n_, s);
    std::vector<int> pos(n_, -1);
    for (size_t i = 0; i < s.size(); ++i) pos[s[i]] = static_cast<int>(i);
    std::vector<Edge> sub;
    for (const auto& [u, v] : edges_)
        if (pos[u] >= 0 && pos[v] >= 0) sub.push_back({pos[u], pos[v]});
    return Graph::from_edges(static_cast<int>(s.size()), std::move(sub));
}

BipartiteGraph BipartiteGraph::from_edges(int n_a, int n_b, std::vector<Edge> edges) {
    if (n_a < 0 || n_b < 0) throw PreconditionError("side sizes must be nonnegative");
    BipartiteGraph g;
    g.na_ = n_a;
    g.nb_ = n_b;
    for (const auto& [a, b] : edges) {
        if (a < 0 || a >= n_a) throw PreconditionError("a-index out of range");
        if (b < 0 || b >= n_b) throw PreconditionError("b-index out of range");
    }
    std::sort(edges.begin(), edges.end());
    if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
        throw PreconditionError("duplicate edge");
    g.edges_ = std::move(edges);
    g.adj_a_.assign(n_a, {});
    g.adj_b_.assign(n_b, {});
    for (const auto& [a, b] : g.edges_) {
        g.adj_a_[a].push_back(b);
        g.adj_b_[b].push_back(a);
    }
    return g;
}

void validate_vertex_set(int n, const VertexSet& s) {
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] < 0 || s[i] >= n) throw PreconditionError("vertex id out of range");
        if (i > 0 && s[i] <= s[i - 1])
            throw PreconditionError("vertex set must be strictly increasing");
    }
}

Subgraph make_subgraph(std::vector<Edge> edges, std::vector<int> extra_vertices) {
    Subgraph sub;
    for (auto& e : edges) e = normalized(e.first, e.second);
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
    std::vector<int> verts = std::move(extra_vertices);
    for (const auto& [u, v] : edges) {
        verts.push_back(u);
        verts.push_back(v);
    }
    std::sort(verts.begin(), verts.end());
    verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
    sub.vertices = std::move(verts);
    sub.edges = std::move(edges);
    return sub;
}

void validate_subgraph(const Graph& g, const Subgraph& sub) {
    validate_vertex_set(g.vertex_count(), sub.vertices);
    for (const auto& [u, v] : sub.edges) {
        if (!g.has_edge(u, v)) throw PreconditionError("subgraph edge not in parent graph");
        if (!std::binary_search(sub.vertices.begin(), sub.vertices.end(), u) ||
            !std::binary_search(sub.vertices.begin(), sub.vertices.end(), v))
            throw PreconditionError("subgraph edge endpoint outside vertex subset");
    }
}

namespace {

// Shared scanner for the two edge-list formats.
struct LineReader {
    std::istringstream in;
    int lineno = 0;
    explicit LineReader(const std::string& text) : in(text) {}

    bool next_fields(std::vector<long>& out) {
        std::string line;
        while (std::getline(in, line)) {
            ++lineno;
            std::istringstream ls(line);
            out.clear();
            long x;
            while (ls >> x) out.push_back(x);
            std::string rest;
            if (ls.clear(), ls >> rest)
                throw ParseError("line " + std::to_string(lineno) + ": non-numeric token");
            if (!out.empty()) return true;
        }
        return false;
    }
};

}  // namespace

Graph parse_graph(const std::string& text) {
    LineReader rd(text);
    std::vector<long> f;
    if (!rd.next_fields(f) || f.size() != 2)
        throw ParseError("expected header \"n m\"");
    const long n = f[0], m = f[1];
    if (n < 0 || m < 0) throw ParseError("negative header field");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (long i = 0; i < m; ++i) {
        if (!rd.next_fields(f) || f.size() != 2)
            throw ParseError("expected edge line \"u v\" (edge " + std::to_string(i) + ")");
        const long u = f[0], v = f[1];
        if (u < 0 || v < 0 || u >= n || v >= n)
            throw ParseError("line " + std::to_string(rd.lineno) + ": vertex id out of range");
        if (u == v) throw ParseError("line " + std::to_string(rd.lineno) + ": self-loop");
        edges.push_back({static_cast<int>(u), static_cast<int>(v)});
    }
    if (rd.next_fields(f)) throw ParseError("trailing data after edge list");
    try {
        return Graph::from_edges(static_cast<int>(n), std::move(edges));
    } catch (const PreconditionError& e) {
        throw ParseError(e.what());
    }
}

std::string serialize_graph(const Graph& g) {
    std::ostringstream out;
    out << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (const auto& [u, v] : g.edges()) out << u << ' ' << v << '\n';
    return out.str();
}

BipartiteGraph parse_bipartite(const std::string& text) {
    LineReader rd(text);
    std::vector<long> f;
    if (!rd.next_fields(f) || f.size() != 3)
        throw ParseError("expected header \"nA nB m\"");
    const long na = f[0], nb = f[1], m = f[2];
    if (na < 0 || nb < 0 || m < 0) throw ParseError("negative header field");
    std::vector<Edge> edges;
    edges.reserve(m);
    for (long i = 0; i < m; ++i) {
        if (!rd.next_fields(f) || f.size() != 2)
            throw ParseError("expected edge line \"a b\" (edge " + std::to_string(i) + ")");
        const long a = f[0], b = f[1];
        if (a < 0 || a >= na || b < 0 || b >= nb)
            throw ParseError("line " + std::to_string(rd.lineno) + ": index out of range");
        edges.push_back({static_cast<int>(a), static_cast<int>(b)});
    }
    if (rd.next_fields(f)) throw ParseError("trailing data after edge list");
    try {
        return BipartiteGraph::from_edges(static_cast<int>(na), static_cast<int>(nb),
                                          std::move(edges));
    } catch (const PreconditionError& e) {
        throw ParseError(e.what());
    }
}

std::string serialize_bipartite(const BipartiteGraph& g) {
    std::ostringstream out;
    out << g.side_a() << ' ' << g.side_b() << ' ' << g.edge_count() << '\n';
    for (const auto& [a, b] : g.edges()) out << a << ' ' << b << '\n';
    return out.str();
}

long induced_edge_count(const Graph& g, const VertexSet& s) {
    validate_vertex_set(g.vertex_count(), s);
    std::vector<char> in(g.vertex_count(), 0);
    for (int v : s) in[v] = 1;
    long count = 0;
    for (int v : s)
        for (int w : g.neighbors(v))
            if (w > v && in[w]) ++count;
    return count;
}

long volume(const Graph& g, const VertexSet& s) {
    validate_vertex_set(g.vertex_count(), s);
    long total = 0;
    for (int v : s) total += g.degree(v);
    return total;
}

long bipartite_edge_count(const BipartiteGraph& g, const BipartiteSet& s) {
    std::vector<char> in_b(g.side_b(), 0);
    for (int b : s.b) {
        if (b < 0 || b >= g.side_b()) throw PreconditionError("b-index out of range");
        in_b[b] = 1;
    }
    long count = 0;
    for (int a : s.a) {
        if (a < 0 || a >= g.side_a()) throw PreconditionError("a-index out of range");
        for (int b : g.neighbors_of_a(a))
            if (in_b[b]) ++count;
    }
    return count;
}

std::vector<Subgraph> connected_components(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<int> comp(n, -1);
    int components = 0;
    for (int start = 0; start < n; ++start) {
        if (comp[start] >= 0) continue;
        const int id = components++;
        std::queue<int> bfs;
        bfs.push(start);
        comp[start] = id;
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int w : g.neighbors(v))
                if (comp[w] < 0) {
                    comp[w] = id;
                    bfs.push(w);
                }
        }
    }
    std::vector<Subgraph> out(components);
    for (int v = 0; v < n; ++v) out[comp[v]].vertices.push_back(v);
    for (const auto& e : g.edges()) out[comp[e.first]].edges.push_back(e);
    return out;
}

std::vector<Subgraph> subgraph_components(const Subgraph& sub) {
    // Union-find over sub's vertices using only sub's edges.
    std::vector<int> verts = sub.vertices;
    auto index_of = [&](int v) {
        return static_cast<int>(std::lower_bound(verts.begin(), verts.end(), v) - verts.begin());
    };
    std::vector<int> parent(verts.size());
    for (size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& [u, v] : sub.edges) parent[find(index_of(u))] = find(index_of(v));

    std::vector<int> root_order;  // roots in order of first appearance
    std::vector<int> root_slot(verts.size(), -1);
    std::vector<Subgraph> out;
    for (size_t i = 0; i < verts.size(); ++i) {
        int r = find(static_cast<int>(i));
        if (root_slot[r] < 0) {
            root_slot[r] = static_cast<int>(out.size());
            out.emplace_back();
        }
        out[root_slot[r]].vertices.push_back(verts[i]);
    }
    for (const auto& e : sub.edges)
        out[root_slot[find(index_of(e.first))]].edges.push_back(e);
    return out;
}

Subgraph spanning_forest(const Graph& g) {
    const int n = g.vertex_count();
    std::vector<char> seen(n, 0);
    std::vector<Edge> tree;
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        seen[start] = 1;
        std::queue<int> bfs;
        bfs.push(start);
        while (!bfs.empty()) {
            int v = bfs.front();
            bfs.pop();
            for (int w : g.neighbors(v))
                if (!seen[w]) {
                    seen[w] = 1;
                    tree.push_back(v < w ? Edge{v, w} : Edge{w, v});
                    bfs.push(w);
                }
        }
    }
    std::vector<int> all(n);
    for (int v = 0; v < n; ++v) all[v] = v;
    return make_subgraph(std::move(tree), std::move(all));
}

Subgraph union_subgraphs(const std::vector<Subgraph>& parts) {
    std::vector<Edge> edges;
    std::vector<int> verts;
    for (const auto& p : parts) {
        edges.insert(edges.end(), p.edges.begin(), p.edges.end());
        verts.insert(verts.end(), p.vertices.begin(), p.vertices.end());
    }
    return make_subgraph(std::move(edges), std::move(verts));
}

}  // namespace densekit
