#include "densekit/inflate.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "densekit/errors.hpp"
#include "densekit/peel.hpp"

namespace densekit {

namespace {

bool is_prime(long x) {
    if (x < 2) return false;
    for (long d = 2; d * d <= x; ++d)
        if (x % d == 0) return false;
    return true;
}

// log k clamped to >= 1 (the k log k denominators degenerate at k <= 2).
double clog_k(int k) { return std::max(1.0, std::log2(std::max(k, 2))); }

long power_long(long base, int exp, long cap) {
    long result = 1;
    for (int i = 0; i < exp; ++i) {
        if (result > cap / std::max(base, 1L)) return cap + 1;
        result *= base;
    }
    return result;
}

}  // namespace

long find_prime_in(long lo, long hi) {
    if (lo < 2 || lo > hi) throw PreconditionError("find_prime_in: need 2 <= lo <= hi");
    for (long x = lo; x <= hi; ++x)
        if (is_prime(x)) return x;
    throw PreconditionError("find_prime_in: no prime in range");
}

InflatedGraph build_inflated_graph(const Graph& g, const InflationConfig& cfg, Rng& rng) {
    const long n = g.vertex_count();
    if (n < 2) throw PreconditionError("build_inflated_graph: need at least 2 vertices");
    const int q = cfg.q > 0 ? cfg.q : static_cast<int>(std::ceil(std::log2(std::max(n, 2L))));
    const long lo = power_long(n, cfg.c_exp * q, cfg.size_ceiling);
    if (lo > cfg.size_ceiling)
        throw CeilingError("build_inflated_graph: N^(c_exp*q) exceeds the size ceiling");
    const long hi = std::min(2 * lo, cfg.size_ceiling);
    const long m = find_prime_in(std::max(lo, 2L), hi);

    std::vector<long> mapping(n);
    for (long i = 0; i < n; ++i) mapping[i] = static_cast<long>(rng.below(m));
    return build_inflated_graph_with(g, m, std::move(mapping));
}

InflatedGraph build_inflated_graph_with(const Graph& g, long modulus,
                                        std::vector<long> mapping) {
    if (static_cast<long>(mapping.size()) != g.vertex_count())
        throw PreconditionError("build_inflated_graph_with: |f| != |V(G)|");
    for (long v : mapping)
        if (v < 0 || v >= modulus)
            throw PreconditionError("build_inflated_graph_with: f value out of range");
    const long m = modulus;
    InflatedGraph out;
    out.modulus = m;
    out.mapping = std::move(mapping);

    // Collect shifted edges; identical productions merge with all origins.
    std::map<Edge, std::vector<std::pair<int, long>>> produced;
    const auto& src_edges = g.edges();
    for (size_t ei = 0; ei < src_edges.size(); ++ei) {
        const long fi = out.mapping[src_edges[ei].first];
        const long fj = out.mapping[src_edges[ei].second];
        for (long t = 0; t < m; ++t) {
            long a = (fi + t) % m;
            long b = (fj + t) % m;
            if (a == b) continue;  // f(i) == f(j): the whole shift family is self-loops
            Edge e{static_cast<int>(std::min(a, b)), static_cast<int>(std::max(a, b))};
            produced[e].push_back({static_cast<int>(ei), t});
        }
    }
    std::vector<Edge> host_edges;
    host_edges.reserve(produced.size());
    out.origins.reserve(produced.size());
    for (auto& [e, origin_list] : produced) {
        host_edges.push_back(e);
        out.origins.push_back(std::move(origin_list));
    }
    out.host = Graph::from_edges(static_cast<int>(m), std::move(host_edges));
    out.source = g;
    return out;
}

std::optional<Ensemble> has_bad_ensemble(const std::vector<long>& mapping, long modulus, int q,
                                         long ceiling) {
    if (q < 1) throw PreconditionError("has_bad_ensemble: q must be >= 1");
    const int n = static_cast<int>(mapping.size());
    const int max_size = 2 * q;

    // Work estimate: sum over t <= 2q of C(n,t) * (2q)^t.
    double work = 0;
    double choose = 1;
    for (int t = 1; t <= std::min(max_size, n); ++t) {
        choose = choose * (n - t + 1) / t;
        work += choose * std::pow(2.0 * q, t);
        if (work > static_cast<double>(ceiling))
            throw CeilingError("has_bad_ensemble: ensemble space exceeds ceiling");
    }

    // Coefficient values in enumeration order.
    std::vector<int> coeff_values;
    for (int c = -q; c <= q; ++c)
        if (c != 0) coeff_values.push_back(c);

    std::vector<int> indices, coeffs;
    std::optional<Ensemble> found;

    std::function<void(int, long)> assign_coeffs = [&](int pos, long sum) {
        if (found) return;
        if (pos == static_cast<int>(indices.size())) {
            long residue = sum % modulus;
            if (residue < 0) residue += modulus;
            if (residue == 0) found = Ensemble{indices, coeffs};
            return;
        }
        for (int c : coeff_values) {
            coeffs.push_back(c);
            assign_coeffs(pos + 1, sum + static_cast<long>(c) * mapping[indices[pos]]);
            coeffs.pop_back();
            if (found) return;
        }
    };

    // Sizes ascending so the reported ensemble is minimal under the order.
    for (int t = 1; t <= std::min(max_size, n) && !found; ++t) {
        std::function<void(int, int)> pick = [&](int start, int remaining) {
            if (found) return;
            if (remaining == 0) {
                assign_coeffs(0, 0);
                return;
            }
            for (int i = start; i + remaining <= n && !found; ++i) {
                indices.push_back(i);
                pick(i + 1, remaining - 1);
                indices.pop_back();
            }
        };
        pick(0, t);
    }
    return found;
}

Subgraph origin_graph(const Subgraph& host_sub, const InflatedGraph& inflated) {
    std::vector<Edge> pulled;
    for (const auto& e : host_sub.edges) {
        const auto& host_edges = inflated.host.edges();
        auto it = std::lower_bound(host_edges.begin(), host_edges.end(), e);
        if (it == host_edges.end() || *it != e)
            throw PreconditionError("origin_graph: edge not in the inflated graph");
        const auto& records = inflated.origins[it - host_edges.begin()];
        int first_origin = records.front().first;
        for (const auto& [oe, t] : records)
            if (oe != first_origin)
                throw BadEventError("origin_graph: edge has multiple origin edges");
        pulled.push_back(inflated.source.edges()[first_origin]);
    }
    return make_subgraph(std::move(pulled));
}

std::vector<Subgraph> planted_copies(const Graph& g, int k, const VertexSet& s_opt,
                                     const InflatedGraph& inflated, Rng& rng) {
    if (static_cast<int>(s_opt.size()) != k)
        throw PreconditionError("planted_copies: |S_opt| must equal k");
    validate_vertex_set(g.vertex_count(), s_opt);
    const long m = inflated.modulus;
    const long r = static_cast<long>(std::floor(static_cast<double>(m) / (k * clog_k(k))));
    if (r <= 0) return {};

    std::vector<long> shifts(r);
    for (long j = 0; j < r; ++j) shifts[j] = static_cast<long>(rng.below(m));

    // Copy vertex sets T'_j and the collision counts across copies.
    std::vector<std::vector<long>> copies(r);
    std::vector<int> hits(m, 0);
    for (long j = 0; j < r; ++j) {
        for (int v : s_opt) {
            long u = (inflated.mapping[v] + shifts[j]) % m;
            copies[j].push_back(u);
            ++hits[u];
        }
    }

    // Edges of E_G(S_opt), by source edge index.
    std::vector<int> planted_edge_ids;
    const auto& src_edges = g.edges();
    for (size_t ei = 0; ei < src_edges.size(); ++ei)
        if (std::binary_search(s_opt.begin(), s_opt.end(), src_edges[ei].first) &&
            std::binary_search(s_opt.begin(), s_opt.end(), src_edges[ei].second))
            planted_edge_ids.push_back(static_cast<int>(ei));

    std::vector<Subgraph> out;
    for (long j = 0; j < r; ++j) {
        std::vector<int> survivors;
        for (long u : copies[j])
            if (hits[u] == 1) survivors.push_back(static_cast<int>(u));
        std::sort(survivors.begin(), survivors.end());
        std::vector<Edge> kept;
        for (int ei : planted_edge_ids) {
            long a = (inflated.mapping[src_edges[ei].first] + shifts[j]) % m;
            long b = (inflated.mapping[src_edges[ei].second] + shifts[j]) % m;
            if (a == b) continue;
            int lo = static_cast<int>(std::min(a, b)), hi = static_cast<int>(std::max(a, b));
            if (std::binary_search(survivors.begin(), survivors.end(), lo) &&
                std::binary_search(survivors.begin(), survivors.end(), hi))
                kept.push_back({lo, hi});
        }
        Subgraph piece = make_subgraph(std::move(kept), std::move(survivors));
        out.push_back(std::move(piece));
    }
    return out;
}

namespace {

// Returns at most k vertices spanning the densest part of a pulled-back
// origin graph, padded to exactly k with unused ids.
VertexSet settle_to_k(const Graph& g, Subgraph origin, int k) {
    VertexSet verts = origin.vertices;
    if (static_cast<int>(verts.size()) > k) verts = peel_to_count(g, verts, k);
    std::vector<char> used(g.vertex_count(), 0);
    for (int v : verts) used[v] = 1;
    for (int v = 0; v < g.vertex_count() && static_cast<int>(verts.size()) < k; ++v)
        if (!used[v]) {
            verts.push_back(v);
            used[v] = 1;
        }
    std::sort(verts.begin(), verts.end());
    return verts;
}

}  // namespace

VertexSet dks_via_dkc(const Graph& g, int k, const DkcSolver& dkc, const InflationConfig& cfg,
                      Rng& rng, nlohmann::json* report) {
    if (k < 1 || k > g.vertex_count()) throw PreconditionError("dks_via_dkc: k out of range");
    int retries_used = 0;
    for (int attempt = 0; attempt <= cfg.bad_event_retries; ++attempt) {
        InflatedGraph inflated = build_inflated_graph(g, cfg, rng);
        // Pad H with isolated vertices to the next multiple of k.
        long n_host = inflated.host.vertex_count();
        const long padded_n = ((n_host + k - 1) / k) * k;
        Graph host = padded_n == n_host
                         ? inflated.host
                         : Graph::from_edges(static_cast<int>(padded_n), inflated.host.edges());

        std::vector<VertexSet> blocks = dkc.fn(host, k, rng);
        long best_value = -1;
        const VertexSet* best_block = nullptr;
        for (const auto& block : blocks) {
            VertexSet trimmed;  // drop padding vertices
            for (int v : block)
                if (v < n_host) trimmed.push_back(v);
            long value = induced_edge_count(inflated.host, trimmed);
            if (value > best_value) {
                best_value = value;
                best_block = &block;
            }
        }
        if (!best_block) throw OracleError("dks_via_dkc: oracle returned no blocks");

        VertexSet u;
        for (int v : *best_block)
            if (v < n_host) u.push_back(v);
        std::vector<Edge> block_edges;
        for (const auto& [a, b] : inflated.host.edges())
            if (std::binary_search(u.begin(), u.end(), a) &&
                std::binary_search(u.begin(), u.end(), b))
                block_edges.push_back({a, b});
        try {
            Subgraph w = origin_graph(make_subgraph(std::move(block_edges), u), inflated);
            VertexSet result = settle_to_k(g, std::move(w), k);
            if (report)
                *report = {{"modulus", inflated.modulus},
                           {"oracle_block_value", best_value},
                           {"bad_event_retries", retries_used},
                           {"value", induced_edge_count(g, result)}};
            return result;
        } catch (const BadEventError&) {
            ++retries_used;  // re-sample f and retry
        }
    }
    throw BadEventError("dks_via_dkc: multi-origin events persisted through retries");
}

VertexSet dks_via_gp(const Graph& g, int k, const GpSolver& gp, const InflationConfig& cfg,
                     Rng& rng, nlohmann::json* report) {
    if (k < 1 || k > g.vertex_count()) throw PreconditionError("dks_via_gp: k out of range");
    VertexSet best;
    long best_value = -1;
    nlohmann::json per_h = nlohmann::json::array();

    for (long h = 1; h <= std::max(1, g.edge_count()); h *= 2) {
        int retries_used = 0;
        for (int attempt = 0; attempt <= cfg.bad_event_retries; ++attempt) {
            InflatedGraph inflated = build_inflated_graph(g, cfg, rng);
            const long n_host = inflated.host.vertex_count();
            const long r =
                std::max(1L, static_cast<long>(std::floor(n_host / (k * clog_k(k)))));
            std::vector<Subgraph> pieces = gp.fn(inflated.host, r, h, rng);

            // Keep small pieces only; alpha comes from the oracle's descriptor.
            const double alpha = gp.info.alpha_at(n_host);
            const double small_cap = 100.0 * alpha * k * clog_k(k);
            const Subgraph* star = nullptr;
            for (const auto& piece : pieces) {
                if (static_cast<double>(piece.vertices.size()) > small_cap) continue;
                if (!star || piece.edge_count() > star->edge_count()) star = &piece;
            }
            if (!star || star->edge_count() == 0) break;  // nothing usable at this h

            try {
                Subgraph w = origin_graph(*star, inflated);
                VertexSet cand = settle_to_k(g, std::move(w), k);
                long value = induced_edge_count(g, cand);
                per_h.push_back({{"h", h}, {"value", value}, {"retries", retries_used}});
                if (value > best_value) {
                    best_value = value;
                    best = std::move(cand);
                }
                break;
            } catch (const BadEventError&) {
                ++retries_used;
                if (attempt == cfg.bad_event_retries)
                    throw BadEventError(
                        "dks_via_gp: multi-origin events persisted through retries");
            }
        }
    }
    if (best.empty()) {
        // Edgeless input or no usable pieces: any k vertices are optimal.
        best = settle_to_k(g, Subgraph{}, k);
    }
    if (report) *report = {{"per_h", per_h}, {"value", induced_edge_count(g, best)}};
    return best;
}

DkcSolver make_greedy_dkc_solver() {
    return {{ProblemKind::DkC,
             [](long n) { return std::max<double>(1.0, static_cast<double>(n)); }, 0, "greedy"},
            [](const Graph& g, int k, Rng&) {
                const int n = g.vertex_count();
                if (k <= 0 || n % k != 0)
                    throw PreconditionError("greedy dkc: n must be a multiple of k");
                std::vector<VertexSet> blocks;
                std::vector<int> remaining(n);
                for (int v = 0; v < n; ++v) remaining[v] = v;
                while (!remaining.empty()) {
                    // Densest-k greedy block inside the remaining graph.
                    Graph sub = g.induced(remaining);
                    VertexSet local = greedy_dks(sub, k);
                    VertexSet block;
                    for (int idx : local) block.push_back(remaining[idx]);
                    std::sort(block.begin(), block.end());
                    blocks.push_back(block);
                    std::vector<int> next;
                    for (int v : remaining)
                        if (!std::binary_search(block.begin(), block.end(), v))
                            next.push_back(v);
                    remaining = std::move(next);
                }
                return blocks;
            }};
}

GpSolver make_greedy_gp_solver() {
    return {{ProblemKind::GP,
             [](long n) { return std::max<double>(1.0, static_cast<double>(n)); }, 0, "greedy"},
            [](const Graph& g, long r, long h, Rng&) {
                std::vector<Subgraph> pieces;
                std::vector<int> remaining(g.vertex_count());
                for (int v = 0; v < g.vertex_count(); ++v) remaining[v] = v;
                for (long i = 0; i < r; ++i) {
                    if (remaining.empty()) break;
                    Graph sub = g.induced(remaining);
                    if (sub.edge_count() == 0) break;
                    // Densest component, optionally peeled to the edge budget.
                    auto comps = connected_components(sub);
                    const Subgraph* densest = &comps.front();
                    for (const auto& c : comps)
                        if (c.edge_count() > densest->edge_count()) densest = &c;
                    VertexSet chosen = densest->vertices;
                    if (densest->edge_count() > h) chosen = peel_to_edge_budget(sub, chosen, h);
                    std::vector<Edge> kept;
                    for (const auto& [u, v] : sub.edges())
                        if (std::binary_search(chosen.begin(), chosen.end(), u) &&
                            std::binary_search(chosen.begin(), chosen.end(), v) &&
                            static_cast<long>(kept.size()) < h)
                            kept.push_back({remaining[u], remaining[v]});
                    std::vector<int> piece_verts;
                    for (int idx : chosen) piece_verts.push_back(remaining[idx]);
                    pieces.push_back(make_subgraph(std::move(kept), std::move(piece_verts)));
                    std::vector<int> next;
                    std::vector<char> gone(g.vertex_count(), 0);
                    for (const auto& pv : pieces.back().vertices) gone[pv] = 1;
                    for (int v : remaining)
                        if (!gone[v]) next.push_back(v);
                    remaining = std::move(next);
                }
                while (static_cast<long>(pieces.size()) < r) pieces.emplace_back();
                return pieces;
            }};
}

}  // namespace densekit
