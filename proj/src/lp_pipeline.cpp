#include "densekit/lp_pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "densekit/errors.hpp"

namespace densekit {

double pow2_above(double x) {
    double p = 1.0;
    while (p <= x) p *= 2.0;
    return p;
}

NormalizedDual normalize_dual(double z, const std::vector<double>& y, double family_base) {
    if (z < 0) throw PreconditionError("normalize_dual: negative z");
    NormalizedDual out;
    out.z2 = 2.0 * z;
    out.y2.resize(y.size());
    const double value_cap = 4.0 * family_base;
    for (size_t i = 0; i < y.size(); ++i) {
        const double yv = y[i];
        if (yv < 0) throw PreconditionError("normalize_dual: negative y");
        if (yv < 0.25) {
            out.y2[i] = 0.0;
        } else if (yv > family_base) {
            out.y2[i] = family_base;
        } else {
            out.y2[i] = std::min(pow2_above(4.0 * yv), value_cap);
        }
    }
    return out;
}

namespace {

// Bucket index of a normalized value: 0 for zero, else log2(y') + 1.
int bucket_of(double y2) {
    if (y2 == 0.0) return 0;
    return static_cast<int>(std::lround(std::log2(y2))) + 1;
}

struct BucketedSplit {
    std::vector<std::vector<int>> a_buckets, b_buckets;  // vertex ids per bucket
};

BucketedSplit random_bucketed_split(const NormalizedDual& nd, int n, int q, Rng& rng) {
    BucketedSplit out;
    out.a_buckets.assign(q + 1, {});
    out.b_buckets.assign(q + 1, {});
    for (int v = 0; v < n; ++v) {
        int b = bucket_of(nd.y2[v]);
        if (b > q) b = q;  // cap guard; normalized values fit q by construction
        (rng.chance(0.5) ? out.a_buckets : out.b_buckets)[b].push_back(v);
    }
    return out;
}

// Bipartite graph between two vertex groups of g, with id maps back to g.
struct PairGraph {
    BipartiteGraph graph;
    const std::vector<int>* a_ids;
    const std::vector<int>* b_ids;
};

PairGraph pair_graph(const Graph& g, const std::vector<int>& side_a,
                     const std::vector<int>& side_b) {
    std::vector<int> b_pos(g.vertex_count(), -1);
    for (size_t i = 0; i < side_b.size(); ++i) b_pos[side_b[i]] = static_cast<int>(i);
    std::vector<Edge> edges;
    for (size_t i = 0; i < side_a.size(); ++i)
        for (int w : g.neighbors(side_a[i]))
            if (b_pos[w] >= 0) edges.push_back({static_cast<int>(i), b_pos[w]});
    return {BipartiteGraph::from_edges(static_cast<int>(side_a.size()),
                                       static_cast<int>(side_b.size()), std::move(edges)),
            &side_a, &side_b};
}

double normalized_sum(const NormalizedDual& nd, const VertexSet& s) {
    double sum = nd.z2;
    for (int v : s) sum += nd.y2[v];
    return sum;
}

}  // namespace

std::optional<Column> separation_oracle_dkc(const DualPoint& p, const Graph& g, int k,
                                            const BdksSolver& bdks, Rng& rng) {
    const int n = g.vertex_count();
    const double m_hat = pow2_above(static_cast<double>(g.edge_count()));
    const NormalizedDual nd = normalize_dual(p.z, p.y, m_hat);
    const int q = static_cast<int>(std::ceil(std::log2(8.0 * m_hat)));
    const BucketedSplit split = random_bucketed_split(nd, n, q, rng);

    // Among the successful quadruples, keep the one with the most edges; the
    // deeper the violated constraint, the stronger the cut and the column.
    std::optional<VertexSet> best;
    long best_m = -1;
    for (int i = 0; i <= q; ++i) {
        const auto& ai = split.a_buckets[i];
        if (ai.empty()) continue;
        for (int j = 0; j <= q; ++j) {
            const auto& bj = split.b_buckets[j];
            if (bj.empty()) continue;
            PairGraph pg = pair_graph(g, ai, bj);
            const int k1_max = std::min<int>(static_cast<int>(ai.size()), k);
            for (int k1 = 0; k1 <= k1_max; ++k1) {
                const int k2_max = std::min<int>(static_cast<int>(bj.size()), k - k1);
                for (int k2 = (k1 == 0 ? 1 : 0); k2 <= k2_max; ++k2) {
                    BipartiteSet sol = bdks.fn(pg.graph, k1, k2, rng);
                    const long m_ij = bipartite_edge_count(pg.graph, sol);
                    VertexSet s;
                    for (int a : sol.a) s.push_back((*pg.a_ids)[a]);
                    for (int b : sol.b) s.push_back((*pg.b_ids)[b]);
                    std::sort(s.begin(), s.end());
                    if (!(normalized_sum(nd, s) < static_cast<double>(m_ij))) continue;
                    if (m_ij > best_m) {
                        best_m = m_ij;
                        best = std::move(s);
                    }
                }
            }
        }
    }
    if (!best) return std::nullopt;

    // Success. Drop vertices with no neighbor inside S, then the constraint
    // is violated in the original coordinates.
    const VertexSet& s = *best;
    VertexSet kept;
    for (int v : s) {
        bool has_inner_neighbor = false;
        for (int w : g.neighbors(v))
            if (std::binary_search(s.begin(), s.end(), w)) {
                has_inner_neighbor = true;
                break;
            }
        if (has_inner_neighbor) kept.push_back(v);
    }
    Column col{kept, {}, induced_edge_count(g, kept)};
    if (column_slack(col, p) >= 0)
        throw OracleError("separation_oracle_dkc: cleanup not violated");
    return col;
}

std::optional<Column> separation_oracle_gp(const DualPoint& p, const Graph& g, long h,
                                           const BdksSolver& bdks, Rng& rng) {
    const int n = g.vertex_count();
    const double h_pow = pow2_above(static_cast<double>(h));
    const NormalizedDual nd = normalize_dual(p.z, p.y, h_pow);
    const int q = static_cast<int>(std::ceil(std::log2(8.0 * h_pow)));
    const BucketedSplit split = random_bucketed_split(nd, n, q, rng);

    std::optional<VertexSet> best;
    long best_m = -1;
    for (int i = 0; i <= q; ++i) {
        const auto& ai = split.a_buckets[i];
        if (ai.empty()) continue;
        for (int j = 0; j <= q; ++j) {
            const auto& bj = split.b_buckets[j];
            if (bj.empty()) continue;
            PairGraph pg = pair_graph(g, ai, bj);
            const int k1_max = static_cast<int>(ai.size());
            for (int k1 = 0; k1 <= k1_max; ++k1) {
                const int k2_max = static_cast<int>(bj.size());
                for (int k2 = (k1 == 0 ? 1 : 0); k2 <= k2_max; ++k2) {
                    if (k1 + k2 > n) break;
                    BipartiteSet sol = bdks.fn(pg.graph, k1, k2, rng);
                    const long m_ij = bipartite_edge_count(pg.graph, sol);
                    VertexSet s;
                    for (int a : sol.a) s.push_back((*pg.a_ids)[a]);
                    for (int b : sol.b) s.push_back((*pg.b_ids)[b]);
                    std::sort(s.begin(), s.end());
                    const double cap = std::min<double>(static_cast<double>(h),
                                                        static_cast<double>(m_ij));
                    if (!(normalized_sum(nd, s) < cap)) continue;
                    if (std::min<long>(m_ij, h) > best_m) {
                        best_m = std::min<long>(m_ij, h);
                        best = std::move(s);
                    }
                }
            }
        }
    }
    if (!best) return std::nullopt;

    // Success: induced subgraph, trimmed to exactly h edges if oversized,
    // then isolated vertices dropped.
    const VertexSet& s = *best;
    std::vector<Edge> kept;
    for (const auto& [u, v] : g.edges())
        if (std::binary_search(s.begin(), s.end(), u) &&
            std::binary_search(s.begin(), s.end(), v) && static_cast<long>(kept.size()) < h)
            kept.push_back({u, v});
    Subgraph piece = make_subgraph(std::move(kept));
    Column col{piece.vertices, piece.edges, static_cast<long>(piece.edges.size())};
    if (column_slack(col, p) >= 0)
        throw OracleError("separation_oracle_gp: cleanup not violated");
    return col;
}

void validate_dkc_solution(const Graph& g, int k, const DkcSolution& sol) {
    const int n = g.vertex_count();
    if (n % k != 0) throw PreconditionError("dkc solution: k does not divide n");
    if (static_cast<int>(sol.blocks.size()) != n / k)
        throw PreconditionError("dkc solution: wrong block count");
    std::vector<char> seen(n, 0);
    long value = 0;
    for (const auto& block : sol.blocks) {
        if (static_cast<int>(block.size()) != k)
            throw PreconditionError("dkc solution: block size != k");
        validate_vertex_set(n, block);
        for (int v : block) {
            if (seen[v]) throw PreconditionError("dkc solution: vertex in two blocks");
            seen[v] = 1;
        }
        value += induced_edge_count(g, block);
    }
    for (int v = 0; v < n; ++v)
        if (!seen[v]) throw PreconditionError("dkc solution: uncovered vertex");
    if (value != sol.value) throw PreconditionError("dkc solution: stale value");
}

void validate_gp_solution(const Graph& g, long r, long h, const GpSolution& sol) {
    if (static_cast<long>(sol.pieces.size()) != r)
        throw PreconditionError("gp solution: wrong piece count");
    std::vector<char> seen(g.vertex_count(), 0);
    long value = 0;
    for (const auto& piece : sol.pieces) {
        validate_subgraph(g, piece);
        if (piece.edge_count() > h) throw PreconditionError("gp solution: piece exceeds h");
        for (int v : piece.vertices) {
            if (seen[v]) throw PreconditionError("gp solution: pieces share a vertex");
            seen[v] = 1;
        }
        value += piece.edge_count();
    }
    if (value != sol.value) throw PreconditionError("gp solution: stale value");
}

namespace {

// Sampled collection with the three bad events of the rounding claims.
struct SampledFamily {
    std::vector<int> chosen;  // indices into columns
    bool bad = false;
    std::string why;
};

SampledFamily sample_family(const std::vector<Column>& columns, const std::vector<double>& x,
                            int n, double count_cap, double per_vertex_cap, double c_total,
                            Rng& rng) {
    SampledFamily fam;
    std::vector<int> load(n, 0);
    double mass = 0.0;
    for (size_t j = 0; j < columns.size(); ++j) {
        if (x[j] <= 0) continue;
        if (!rng.chance(std::min(1.0, x[j]))) continue;
        fam.chosen.push_back(static_cast<int>(j));
        mass += static_cast<double>(columns[j].m);
        for (int v : columns[j].vertices) ++load[v];
    }
    if (static_cast<double>(fam.chosen.size()) > count_cap) {
        fam.bad = true;
        fam.why = "E2:family-too-large";
        return fam;
    }
    for (int v = 0; v < n; ++v)
        if (static_cast<double>(load[v]) > per_vertex_cap) {
            fam.bad = true;
            fam.why = "E1:vertex-overloaded";
            return fam;
        }
    if (mass < c_total / 8.0) {
        fam.bad = true;
        fam.why = "E3:too-little-mass";
    }
    return fam;
}

void note(std::vector<std::string>* events, const std::string& what) {
    if (!events) return;
    if (std::find(events->begin(), events->end(), what) == events->end())
        events->push_back(what);
}

}  // namespace

DkcSolution round_dkc(const Graph& g, int k, const std::vector<Column>& columns,
                      const std::vector<double>& x, Rng& rng, const RoundOptions& opt,
                      std::vector<std::string>* events) {
    const int n = g.vertex_count();
    if (k <= 0 || n % k != 0) throw PreconditionError("round_dkc: n must be a multiple of k");
    if (columns.size() != x.size()) throw PreconditionError("round_dkc: |x| != |columns|");
    const int num_blocks = n / k;
    const double logn = Profile::clog2(n);

    double c_total = 0.0;
    for (size_t j = 0; j < columns.size(); ++j)
        c_total += static_cast<double>(columns[j].m) * x[j];

    auto complete_blocks = [&](std::vector<VertexSet> partial) {
        std::vector<char> used(n, 0);
        for (const auto& block : partial)
            for (int v : block) used[v] = 1;
        partial.resize(num_blocks);
        int v = 0;
        for (auto& block : partial) {
            while (static_cast<int>(block.size()) < k) {
                while (v < n && used[v]) ++v;
                block.push_back(v);
                used[v] = 1;
            }
            std::sort(block.begin(), block.end());
        }
        DkcSolution sol;
        sol.blocks = std::move(partial);
        for (const auto& block : sol.blocks) sol.value += induced_edge_count(g, block);
        return sol;
    };

    const long attempts = opt.max_attempts > 0 ? opt.max_attempts
                                               : std::max(1L, static_cast<long>(n) * n);
    DkcSolution best = complete_blocks({});

    // Heavy-set shortcut: one set already carries the rounding guarantee.
    // Kept as a candidate; the sampling attempts below may beat it.
    if (opt.enable_heavy_shortcut) {
        const double threshold = c_total / (300.0 * logn * logn * logn);
        int heavy = -1;
        for (size_t j = 0; j < columns.size(); ++j)
            if (x[j] > 0 && static_cast<double>(columns[j].m) >= threshold &&
                (heavy < 0 || columns[j].m > columns[heavy].m))
                heavy = static_cast<int>(j);
        if (heavy >= 0) {
            note(events, "heavy-set-shortcut");
            DkcSolution cand = complete_blocks({columns[heavy].vertices});
            if (cand.value > best.value) best = std::move(cand);
        }
    }
    for (long attempt = 0; attempt < attempts; ++attempt) {
        SampledFamily fam =
            sample_family(columns, x, n, 5.0 * num_blocks * logn, 5.0 * logn, c_total, rng);
        if (fam.bad) {
            note(events, fam.why);
            continue;
        }
        // Top N/k sets by m, then random per-vertex ownership.
        std::sort(fam.chosen.begin(), fam.chosen.end(), [&](int a, int b) {
            if (columns[a].m != columns[b].m) return columns[a].m > columns[b].m;
            return a < b;
        });
        if (static_cast<int>(fam.chosen.size()) > num_blocks) fam.chosen.resize(num_blocks);

        std::vector<std::vector<int>> owners(n);
        for (size_t slot = 0; slot < fam.chosen.size(); ++slot)
            for (int v : columns[fam.chosen[slot]].vertices)
                owners[v].push_back(static_cast<int>(slot));
        std::vector<VertexSet> blocks(fam.chosen.size());
        for (int v = 0; v < n; ++v) {
            if (owners[v].empty()) continue;
            blocks[owners[v][rng.below(owners[v].size())]].push_back(v);
        }
        DkcSolution cand = complete_blocks(std::move(blocks));
        if (cand.value > best.value) best = std::move(cand);
    }
    return best;
}

GpSolution round_gp(const Graph& g, long r, long h, const std::vector<Column>& columns,
                    const std::vector<double>& x, Rng& rng, const RoundOptions& opt,
                    std::vector<std::string>* events) {
    const int n = g.vertex_count();
    if (r < 1 || h < 1) throw PreconditionError("round_gp: r and h must be positive");
    if (columns.size() != x.size()) throw PreconditionError("round_gp: |x| != |columns|");
    const double logn = Profile::clog2(n);

    double c_total = 0.0;
    for (size_t j = 0; j < columns.size(); ++j)
        c_total += static_cast<double>(columns[j].m) * x[j];

    auto padded = [&](std::vector<Subgraph> pieces) {
        GpSolution sol;
        while (static_cast<long>(pieces.size()) < r) pieces.emplace_back();
        sol.pieces = std::move(pieces);
        for (const auto& piece : sol.pieces) sol.value += piece.edge_count();
        return sol;
    };

    const long attempts = opt.max_attempts > 0 ? opt.max_attempts
                                               : std::max(1L, static_cast<long>(n) * n);
    GpSolution best = padded({});

    if (opt.enable_heavy_shortcut) {
        const double threshold = c_total / (300.0 * logn * logn * logn);
        int heavy = -1;
        for (size_t j = 0; j < columns.size(); ++j)
            if (x[j] > 0 && static_cast<double>(columns[j].m) >= threshold &&
                (heavy < 0 || columns[j].m > columns[heavy].m))
                heavy = static_cast<int>(j);
        if (heavy >= 0 && columns[heavy].m > 0) {
            note(events, "heavy-set-shortcut");
            GpSolution cand = padded({make_subgraph(columns[heavy].edges)});
            if (cand.value > best.value) best = std::move(cand);
        }
    }
    for (long attempt = 0; attempt < attempts; ++attempt) {
        SampledFamily fam =
            sample_family(columns, x, n, 5.0 * static_cast<double>(r) * logn, 5.0 * logn,
                          c_total, rng);
        if (fam.bad) {
            note(events, fam.why);
            continue;
        }
        std::sort(fam.chosen.begin(), fam.chosen.end(), [&](int a, int b) {
            if (columns[a].m != columns[b].m) return columns[a].m > columns[b].m;
            return a < b;
        });
        if (static_cast<long>(fam.chosen.size()) > r) fam.chosen.resize(r);

        std::vector<std::vector<int>> owners(n);
        for (size_t slot = 0; slot < fam.chosen.size(); ++slot)
            for (int v : columns[fam.chosen[slot]].vertices)
                owners[v].push_back(static_cast<int>(slot));
        std::vector<int> owner_of(n, -1);
        for (int v = 0; v < n; ++v)
            if (!owners[v].empty()) owner_of[v] = owners[v][rng.below(owners[v].size())];

        std::vector<Subgraph> pieces;
        for (size_t slot = 0; slot < fam.chosen.size(); ++slot) {
            const Column& col = columns[fam.chosen[slot]];
            std::vector<Edge> kept;
            for (const auto& [u, v] : col.edges)
                if (owner_of[u] == static_cast<int>(slot) &&
                    owner_of[v] == static_cast<int>(slot))
                    kept.push_back({u, v});
            if (!kept.empty()) pieces.push_back(make_subgraph(std::move(kept)));
        }
        GpSolution cand = padded(std::move(pieces));
        if (cand.value > best.value) best = std::move(cand);
    }
    return best;
}

namespace {

Graph pad_to_multiple(const Graph& g, int k, int* padded_n) {
    const int n = g.vertex_count();
    const int target = (n % k == 0) ? n : n + (k - n % k);
    *padded_n = target;
    if (target == n) return g;
    return Graph::from_edges(target, g.edges());
}

}  // namespace

DkcPipelineResult approx_dkc(const Graph& g, int k, const BdksSolver& bdks,
                             const Profile& profile, Rng& rng, const EllipsoidConfig& ecfg) {
    if (k < 1) throw PreconditionError("approx_dkc: k must be positive");
    int n_padded = 0;
    Graph padded = pad_to_multiple(g, k, &n_padded);
    const long n = n_padded;
    const double beta = profile.beta(n, bdks.info.alpha_at(n * n));

    Rng oracle_rng = rng.split(1);
    SeparationFn oracle = [&](const DualPoint& p) {
        return separation_oracle_dkc(p, padded, k, bdks, oracle_rng);
    };
    DualScanResult scan = maximize_via_binary_search(
        static_cast<int>(n), static_cast<double>(n) / k, padded.edge_count(), beta, oracle,
        ecfg);

    RestrictedPrimal primal =
        solve_restricted_primal(scan.columns, static_cast<int>(n), static_cast<double>(n) / k);

    std::vector<std::string> events;
    Rng round_rng = rng.split(2);
    DkcSolution sol = round_dkc(padded, k, scan.columns, primal.x, round_rng, {}, &events);
    validate_dkc_solution(padded, k, sol);

    nlohmann::json report{{"problem", "dkc"},
                          {"profile", profile.name},
                          {"n", n},
                          {"k", k},
                          {"beta", beta},
                          {"dual_value", scan.value},
                          {"c_star", scan.c_star},
                          {"columns", scan.columns.size()},
                          {"primal_value", primal.value},
                          {"borderline", scan.borderline},
                          {"rounding_events", events},
                          {"value", sol.value}};
    return {std::move(sol), std::move(report)};
}

GpPipelineResult approx_gp(const Graph& g, long r, long h, const BdksSolver& bdks,
                           const Profile& profile, Rng& rng, const EllipsoidConfig& ecfg) {
    if (r < 1 || h < 1) throw PreconditionError("approx_gp: r and h must be positive");
    const long n = g.vertex_count();
    const double beta = profile.beta(n, bdks.info.alpha_at(n * n));

    Rng oracle_rng = rng.split(1);
    SeparationFn oracle = [&](const DualPoint& p) {
        return separation_oracle_gp(p, g, h, bdks, oracle_rng);
    };
    DualScanResult scan = maximize_via_binary_search(static_cast<int>(n),
                                                     static_cast<double>(r), g.edge_count(),
                                                     beta, oracle, ecfg);

    RestrictedPrimal primal =
        solve_restricted_primal(scan.columns, static_cast<int>(n), static_cast<double>(r));

    std::vector<std::string> events;
    Rng round_rng = rng.split(2);
    GpSolution sol = round_gp(g, r, h, scan.columns, primal.x, round_rng, {}, &events);
    validate_gp_solution(g, r, h, sol);

    nlohmann::json report{{"problem", "gp"},
                          {"profile", profile.name},
                          {"n", n},
                          {"r", r},
                          {"h", h},
                          {"beta", beta},
                          {"dual_value", scan.value},
                          {"c_star", scan.c_star},
                          {"columns", scan.columns.size()},
                          {"primal_value", primal.value},
                          {"borderline", scan.borderline},
                          {"rounding_events", events},
                          {"value", sol.value}};
    return {std::move(sol), std::move(report)};
}

}  // namespace densekit
