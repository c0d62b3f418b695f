#include "densekit/oracles.hpp"

#include <algorithm>
#include <numeric>

#include "densekit/errors.hpp"
#include "densekit/peel.hpp"

namespace densekit {

namespace {

long binomial_capped(long n, long k, long cap) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long result = 1;
    for (long i = 1; i <= k; ++i) {
        result = result * (n - k + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

// Visits all k-subsets of {0..n-1} in lexicographic order.
template <typename Visit>
void for_each_subset(int n, int k, Visit&& visit) {
    std::vector<int> pick(k);
    std::iota(pick.begin(), pick.end(), 0);
    if (k > n) return;
    while (true) {
        visit(pick);
        int i = k - 1;
        while (i >= 0 && pick[i] == n - k + i) --i;
        if (i < 0) break;
        ++pick[i];
        for (int j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
    }
}

std::vector<int> pad_with_unused(std::vector<int> chosen, int n, int target) {
    std::vector<char> used(n, 0);
    for (int v : chosen) used[v] = 1;
    for (int v = 0; v < n && static_cast<int>(chosen.size()) < target; ++v)
        if (!used[v]) chosen.push_back(v);
    std::sort(chosen.begin(), chosen.end());
    return chosen;
}

}  // namespace

VertexSet solve_dks_exact(const Graph& g, int k, long ceiling) {
    const int n = g.vertex_count();
    if (k < 0 || k > n) throw PreconditionError("solve_dks_exact: k out of range");
    if (binomial_capped(n, k, ceiling) > ceiling)
        throw CeilingError("solve_dks_exact: C(n,k) exceeds enumeration ceiling");
    VertexSet best;
    long best_value = -1;
    for_each_subset(n, k, [&](const std::vector<int>& pick) {
        long value = induced_edge_count(g, pick);
        if (value > best_value) {
            best_value = value;
            best = pick;
        }
    });
    return best;
}

BipartiteSet solve_bdks_exact(const BipartiteGraph& g, int k1, int k2, long ceiling) {
    if (k1 < 0 || k1 > g.side_a()) throw PreconditionError("solve_bdks_exact: k1 out of range");
    if (k2 < 0 || k2 > g.side_b()) throw PreconditionError("solve_bdks_exact: k2 out of range");
    const long combos = binomial_capped(g.side_a(), k1, ceiling);
    if (combos > ceiling || binomial_capped(g.side_b(), k2, ceiling) > ceiling / std::max(combos, 1L))
        throw CeilingError("solve_bdks_exact: enumeration ceiling exceeded");
    BipartiteSet best;
    long best_value = -1;
    for_each_subset(g.side_a(), k1, [&](const std::vector<int>& pick_a) {
        for_each_subset(g.side_b(), k2, [&](const std::vector<int>& pick_b) {
            long value = bipartite_edge_count(g, {pick_a, pick_b});
            if (value > best_value) {
                best_value = value;
                best = {pick_a, pick_b};
            }
        });
    });
    if (best_value < 0) best = {std::vector<int>{}, std::vector<int>{}};
    return best;
}

std::vector<VertexSet> solve_dkc_exact(const Graph& g, int k, long ceiling) {
    const int n = g.vertex_count();
    if (k <= 0 || n % k != 0)
        throw PreconditionError("solve_dkc_exact: n must be a positive multiple of k");

    // Recursive enumeration: the smallest unassigned vertex anchors each new
    // block, which kills permutations of equal blocks.
    std::vector<VertexSet> blocks, best;
    long best_value = -1;
    long visited = 0;
    std::vector<char> assigned(n, 0);
    std::vector<int> current;

    std::function<void(int, long)> recurse = [&](int remaining, long value) {
        if (++visited > ceiling)
            throw CeilingError("solve_dkc_exact: enumeration ceiling exceeded");
        if (remaining == 0) {
            if (value > best_value) {
                best_value = value;
                best = blocks;
            }
            return;
        }
        int anchor = 0;
        while (assigned[anchor]) ++anchor;
        assigned[anchor] = 1;
        std::vector<int> free_ids;
        for (int v = anchor + 1; v < n; ++v)
            if (!assigned[v]) free_ids.push_back(v);
        for_each_subset(static_cast<int>(free_ids.size()), k - 1, [&](const std::vector<int>& pick) {
            VertexSet block{anchor};
            for (int idx : pick) block.push_back(free_ids[idx]);
            for (int idx : pick) assigned[free_ids[idx]] = 1;
            blocks.push_back(block);
            recurse(remaining - k, value + induced_edge_count(g, block));
            blocks.pop_back();
            for (int idx : pick) assigned[free_ids[idx]] = 0;
        });
        assigned[anchor] = 0;
    };
    recurse(n, 0);
    return best;
}

std::vector<Subgraph> solve_gp_exact(const Graph& g, long r, long h, long ceiling) {
    const int n = g.vertex_count();
    if (r < 1 || h < 1) throw PreconditionError("solve_gp_exact: r and h must be positive");
    const long labels = std::min<long>(r, n) + 1;
    double combos = 1;
    for (int i = 0; i < n; ++i) combos *= static_cast<double>(labels);
    if (combos > static_cast<double>(ceiling))
        throw CeilingError("solve_gp_exact: enumeration ceiling exceeded");

    const long rr = labels - 1;  // usable piece labels
    std::vector<int> label(n, 0);
    std::vector<int> best_label;
    long best_value = -1;
    std::function<void(int)> recurse = [&](int v) {
        if (v == n) {
            std::vector<VertexSet> groups(rr);
            for (int u = 0; u < n; ++u)
                if (label[u] > 0) groups[label[u] - 1].push_back(u);
            long value = 0;
            for (const auto& grp : groups)
                value += std::min<long>(induced_edge_count(g, grp), h);
            if (value > best_value) {
                best_value = value;
                best_label = label;
            }
            return;
        }
        for (int c = 0; c <= rr; ++c) {
            label[v] = c;
            recurse(v + 1);
        }
        label[v] = 0;
    };
    recurse(0);

    std::vector<Subgraph> pieces;
    std::vector<VertexSet> groups(rr);
    for (int u = 0; u < n; ++u)
        if (best_label[u] > 0) groups[best_label[u] - 1].push_back(u);
    for (const auto& grp : groups) {
        if (grp.empty()) continue;
        std::vector<Edge> kept;
        for (const auto& [u, v] : g.edges())
            if (std::binary_search(grp.begin(), grp.end(), u) &&
                std::binary_search(grp.begin(), grp.end(), v) &&
                static_cast<long>(kept.size()) < h)
                kept.push_back({u, v});
        if (!kept.empty()) pieces.push_back(make_subgraph(std::move(kept)));
    }
    std::sort(pieces.begin(), pieces.end(), [](const Subgraph& a, const Subgraph& b) {
        return a.edge_count() > b.edge_count();
    });
    while (static_cast<long>(pieces.size()) > r) pieces.pop_back();
    while (static_cast<long>(pieces.size()) < r) pieces.emplace_back();
    return pieces;
}

VertexSet greedy_dks(const Graph& g, int k) {
    const int n = g.vertex_count();
    if (k < 0 || k > n) throw PreconditionError("greedy_dks: k out of range");
    VertexSet all(n);
    std::iota(all.begin(), all.end(), 0);
    return peel_to_count(g, all, k);
}

BipartiteSet bdks_via_dks(const BipartiteGraph& g, int k1, int k2, const DksSolver& dks,
                          Rng& rng) {
    if (k1 < 1 || k1 > g.side_a()) throw PreconditionError("bdks_via_dks: k1 out of range");
    if (k2 < 1 || k2 > g.side_b()) throw PreconditionError("bdks_via_dks: k2 out of range");

    // Blow-up graph H: k2 copies of every A-vertex, k1 copies of every
    // B-vertex, complete bipartite join between copy groups of each edge.
    // Copies of one vertex get consecutive ids, A-side first.
    const int na = g.side_a(), nb = g.side_b();
    const long a_copies = static_cast<long>(na) * k2;
    const long total = a_copies + static_cast<long>(nb) * k1;
    if (total > 1'000'000) throw CeilingError("bdks_via_dks: blow-up graph too large");
    auto a_copy_id = [&](int u, int c) { return u * k2 + c; };
    auto b_copy_id = [&](int v, int c) { return static_cast<long>(a_copies) + v * k1 + c; };

    std::vector<Edge> blowup_edges;
    blowup_edges.reserve(static_cast<size_t>(g.edge_count()) * k1 * k2);
    for (const auto& [u, v] : g.edges())
        for (int cu = 0; cu < k2; ++cu)
            for (int cv = 0; cv < k1; ++cv)
                blowup_edges.push_back({static_cast<int>(a_copy_id(u, cu)),
                                        static_cast<int>(b_copy_id(v, cv))});
    Graph blowup = Graph::from_edges(static_cast<int>(total), std::move(blowup_edges));

    const int k = static_cast<int>(std::min<long>(2L * k1 * k2, total));
    VertexSet w = dks.fn(blowup, k, rng);
    const long oracle_value = induced_edge_count(blowup, w);

    // Interleaved partition of the chosen copies: positions mod 2*k2 on the
    // A side (so the k2 copies of one vertex land in distinct groups), and
    // mod 2*k1 on the B side.
    std::vector<int> wa, wb;
    for (int x : w)
        (x < a_copies ? wa : wb).push_back(x);
    const int ga = 2 * k2, gb = 2 * k1;
    std::vector<std::vector<int>> groups_a(ga), groups_b(gb);
    for (size_t pos = 0; pos < wa.size(); ++pos) groups_a[pos % ga].push_back(wa[pos]);
    for (size_t pos = 0; pos < wb.size(); ++pos) groups_b[pos % gb].push_back(wb[pos]);

    auto originals_a = [&](const std::vector<int>& copies) {
        std::vector<int> out;
        for (int x : copies) out.push_back(x / k2);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    auto originals_b = [&](const std::vector<int>& copies) {
        std::vector<int> out;
        for (int x : copies) out.push_back(static_cast<int>((x - a_copies) / k1));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };

    long best_value = -1;
    BipartiteSet best;
    for (int i = 0; i < ga; ++i)
        for (int j = 0; j < gb; ++j) {
            BipartiteSet cand{originals_a(groups_a[i]), originals_b(groups_b[j])};
            long value = bipartite_edge_count(g, cand);
            if (value > best_value) {
                best_value = value;
                best = std::move(cand);
            }
        }

    if (best_value * 4L * k1 * k2 < oracle_value)
        throw NumericError("bdks_via_dks: recovery fell below the 1/(4 k1 k2) bound");
    best.a = pad_with_unused(std::move(best.a), na, k1);
    best.b = pad_with_unused(std::move(best.b), nb, k2);
    return best;
}

VertexSet dks_via_bdks(const Graph& g, int k, const BdksSolver& bdks, Rng& rng) {
    const int n = g.vertex_count();
    if (k < 0 || k > n) throw PreconditionError("dks_via_bdks: k out of range");
    if (k == 0) return {};

    // Doubled bipartite graph: both sides are V(G); each edge (u,v) appears
    // as (u,v) and (v,u).
    std::vector<Edge> doubled;
    doubled.reserve(2 * g.edge_count());
    for (const auto& [u, v] : g.edges()) {
        doubled.push_back({u, v});
        doubled.push_back({v, u});
    }
    BipartiteGraph h = BipartiteGraph::from_edges(n, n, std::move(doubled));
    BipartiteSet sol = bdks.fn(h, k, k, rng);

    VertexSet u;
    u.insert(u.end(), sol.a.begin(), sol.a.end());
    u.insert(u.end(), sol.b.begin(), sol.b.end());
    std::sort(u.begin(), u.end());
    u.erase(std::unique(u.begin(), u.end()), u.end());

    VertexSet result = static_cast<long>(u.size()) > k ? peel_to_count(g, u, k) : std::move(u);
    return pad_with_unused(std::move(result), n, k);
}

namespace {
std::function<double(long)> unit_alpha() {
    return [](long) { return 1.0; };
}
}  // namespace

DksSolver make_exact_dks_solver(long ceiling) {
    return {{ProblemKind::DkS, unit_alpha(), ceiling, "exact"},
            [ceiling](const Graph& g, int k, Rng&) { return solve_dks_exact(g, k, ceiling); }};
}

DksSolver make_greedy_dks_solver() {
    // Feasibility-only baseline; the declared factor is the trivial bound.
    return {{ProblemKind::DkS, [](long n) { return std::max<double>(1.0, static_cast<double>(n)); },
             0, "greedy"},
            [](const Graph& g, int k, Rng&) { return greedy_dks(g, k); }};
}

BdksSolver make_exact_bdks_solver(long ceiling) {
    return {{ProblemKind::BDkS, unit_alpha(), ceiling, "exact"},
            [ceiling](const BipartiteGraph& g, int k1, int k2, Rng&) {
                return solve_bdks_exact(g, k1, k2, ceiling);
            }};
}

DkcSolver make_exact_dkc_solver(long ceiling) {
    return {{ProblemKind::DkC, unit_alpha(), ceiling, "exact"},
            [ceiling](const Graph& g, int k, Rng&) { return solve_dkc_exact(g, k, ceiling); }};
}

GpSolver make_exact_gp_solver(long ceiling) {
    return {{ProblemKind::GP, unit_alpha(), ceiling, "exact"},
            [ceiling](const Graph& g, long r, long h, Rng&) {
                return solve_gp_exact(g, r, h, ceiling);
            }};
}

}  // namespace densekit
