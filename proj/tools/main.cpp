// Command-line front end: instance generation, solver/reduction dispatch,
// profile selection, seeded reproducibility, JSON reporting.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "densekit/csp.hpp"
#include "densekit/ellipsoid.hpp"
#include "densekit/errors.hpp"
#include "densekit/gen.hpp"
#include "densekit/gp_mbcs.hpp"
#include "densekit/graph.hpp"
#include "densekit/inflate.hpp"
#include "densekit/lp_pipeline.hpp"
#include "densekit/oracles.hpp"
#include "densekit/peel.hpp"
#include "densekit/profile.hpp"

using nlohmann::json;
using namespace densekit;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

uint64_t fnv1a(const std::string& s) {
    uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex64(uint64_t x) {
    std::ostringstream out;
    out << std::hex << x;
    return out.str();
}

json vertex_set_json(const VertexSet& s) { return json(s); }

json subgraph_json(const Subgraph& sub) {
    json edges = json::array();
    for (const auto& [u, v] : sub.edges) edges.push_back({u, v});
    return {{"vertices", sub.vertices}, {"edges", edges}};
}

json dkc_json(const DkcSolution& sol) {
    json blocks = json::array();
    for (const auto& b : sol.blocks) blocks.push_back(b);
    return {{"blocks", blocks}, {"value", sol.value}};
}

json gp_json(const GpSolution& sol) {
    json pieces = json::array();
    for (const auto& p : sol.pieces) pieces.push_back(subgraph_json(p));
    return {{"pieces", pieces}, {"value", sol.value}};
}

std::vector<int> parse_int_list(const std::string& text) {
    std::vector<int> out;
    std::istringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ',')) {
        if (tok.empty()) continue;
        out.push_back(std::stoi(tok));
    }
    return out;
}

struct OracleChoice {
    std::string spec;

    bool is(const std::string& name) const { return spec == name; }
};

BdksSolver bdks_from_spec(const std::string& spec) {
    if (spec == "exact") return make_exact_bdks_solver();
    throw ParseError("unknown BDkS oracle spec: " + spec);
}

DksSolver dks_from_spec(const std::string& spec) {
    if (spec == "exact") return make_exact_dks_solver();
    if (spec == "greedy") return make_greedy_dks_solver();
    throw ParseError("unknown DkS oracle spec: " + spec);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"densekit: dense-subgraph reductions toolkit"};
    app.set_help_flag("--help", "print help");  // frees -h/--h for the GP edge budget
    app.require_subcommand(1);

    std::string graph_path, instance_path, out_path, oracle_spec = "exact";
    std::string profile_name = "desk", route, action, ids_text, assignment_text, kind;
    uint64_t seed = 0;
    int k = 1, k1 = 1, k2 = 1;
    long r = 1, h = 1, big_l = 0;
    int gen_n = 8, gen_k = 3, gen_x = 4, gen_y = 4, gen_a = 2, gen_c = 8, gen_count = 2,
        gen_size = 3;
    double gen_p = 0.5, gen_p_in = 0.9, gen_p_out = 0.1;

    auto* solve = app.add_subcommand("solve", "solve one problem instance");
    solve->set_help_flag("--help");
    solve->require_subcommand(1);
    auto add_common = [&](CLI::App* cmd, bool with_graph = true) {
        if (with_graph) cmd->add_option("--graph", graph_path, "instance file")->required();
        cmd->add_option("--oracle", oracle_spec, "oracle spec");
        cmd->add_option("--profile", profile_name, "paper|desk");
        cmd->add_option("--seed", seed, "random seed");
    };
    auto* solve_dks = solve->add_subcommand("dks", "densest k-subgraph");
    solve_dks->set_help_flag("--help");
    solve_dks->add_option("--k", k)->required();
    add_common(solve_dks);
    auto* solve_bdks = solve->add_subcommand("bdks", "bipartite densest (k1,k2)-subgraph");
    solve_bdks->set_help_flag("--help");
    solve_bdks->add_option("--k1", k1)->required();
    solve_bdks->add_option("--k2", k2)->required();
    add_common(solve_bdks);
    auto* solve_dkc = solve->add_subcommand("dkc", "dense k-coloring");
    solve_dkc->set_help_flag("--help");
    solve_dkc->add_option("--k", k)->required();
    add_common(solve_dkc);
    auto* solve_gp = solve->add_subcommand("gp", "(r,h)-graph partitioning");
    solve_gp->set_help_flag("--help");
    solve_gp->add_option("--r", r)->required();
    solve_gp->add_option("--h", h)->required();
    add_common(solve_gp);
    auto* solve_mbcs = solve->add_subcommand("mbcs", "maximum bounded-crossing subgraph");
    solve_mbcs->set_help_flag("--help");
    solve_mbcs->add_option("--L", big_l)->required();
    add_common(solve_mbcs);

    auto* reduce = app.add_subcommand("reduce", "run one named reduction");
    reduce->set_help_flag("--help");
    reduce->add_option("route", route, "reduction route")->required();
    reduce->add_option("--graph", graph_path, "instance file");
    reduce->add_option("--k", k);
    reduce->add_option("--k1", k1);
    reduce->add_option("--k2", k2);
    reduce->add_option("--r", r);
    reduce->add_option("--h", h);
    reduce->add_option("--L", big_l);
    reduce->add_option("--oracle", oracle_spec);
    reduce->add_option("--profile", profile_name);
    reduce->add_option("--seed", seed);

    auto* csp = app.add_subcommand("csp", "2-CSP decomposition engine");
    csp->set_help_flag("--help");
    csp->add_option("action", action, "decide|decompose|verify-bad|verify-good")->required();
    csp->add_option("--instance", instance_path)->required();
    csp->add_option("--ids", ids_text, "comma-separated constraint ids");
    csp->add_option("--assignment", assignment_text, "comma-separated 1-based values");
    csp->add_option("--profile", profile_name);
    csp->add_option("--seed", seed);

    auto* gen = app.add_subcommand("gen", "generate instances");
    gen->set_help_flag("--help");
    gen->add_option("kind", kind, "gnp|planted-dense|planted-csp|disjoint-cliques")->required();
    gen->add_option("--n", gen_n);
    gen->add_option("--k", gen_k);
    gen->add_option("--p", gen_p);
    gen->add_option("--p-in", gen_p_in);
    gen->add_option("--p-out", gen_p_out);
    gen->add_option("--x", gen_x);
    gen->add_option("--y", gen_y);
    gen->add_option("--a", gen_a);
    gen->add_option("--c", gen_c);
    gen->add_option("--count", gen_count);
    gen->add_option("--size", gen_size);
    gen->add_option("--seed", seed);
    gen->add_option("--out", out_path, "output file (content embedded when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        std::cerr << e.what() << "\n";
        return 2;
    }

    json report{{"schema", 1}, {"seed", seed}, {"profile", profile_name}};
    Rng rng(seed);

    try {
        const Profile profile = profile_by_name(profile_name);

        if (solve_dks->parsed()) {
            Graph g = parse_graph(read_file(graph_path));
            DksSolver solver = dks_from_spec(oracle_spec);
            VertexSet s = solver.fn(g, k, rng);
            report["problem"] = "dks";
            report["oracle"] = solver.info.name;
            report["solution"] = vertex_set_json(s);
            report["value"] = induced_edge_count(g, s);
        } else if (solve_bdks->parsed()) {
            BipartiteGraph g = parse_bipartite(read_file(graph_path));
            if (oracle_spec != "exact") throw ParseError("bdks supports --oracle exact");
            BipartiteSet s = solve_bdks_exact(g, k1, k2);
            report["problem"] = "bdks";
            report["solution"] = {{"a", s.a}, {"b", s.b}};
            report["value"] = bipartite_edge_count(g, s);
        } else if (solve_dkc->parsed()) {
            Graph g = parse_graph(read_file(graph_path));
            report["problem"] = "dkc";
            if (oracle_spec == "exact") {
                auto blocks = solve_dkc_exact(g, k);
                DkcSolution sol{blocks, 0};
                for (const auto& b : blocks) sol.value += induced_edge_count(g, b);
                validate_dkc_solution(g, k, sol);
                report["solution"] = dkc_json(sol);
                report["value"] = sol.value;
            } else if (oracle_spec == "greedy") {
                DkcSolver solver = make_greedy_dkc_solver();
                auto blocks = solver.fn(g, k, rng);
                DkcSolution sol{blocks, 0};
                for (const auto& b : blocks) sol.value += induced_edge_count(g, b);
                validate_dkc_solution(g, k, sol);
                report["solution"] = dkc_json(sol);
                report["value"] = sol.value;
            } else if (oracle_spec == "lp:exact-bdks") {
                auto res = approx_dkc(g, k, make_exact_bdks_solver(), profile, rng);
                report["solution"] = dkc_json(res.solution);
                report["value"] = res.solution.value;
                report["pipeline"] = res.report;
            } else {
                throw ParseError("unknown DkC oracle spec: " + oracle_spec);
            }
            report["oracle"] = oracle_spec;
        } else if (solve_gp->parsed()) {
            Graph g = parse_graph(read_file(graph_path));
            report["problem"] = "gp";
            if (oracle_spec == "exact") {
                auto pieces = solve_gp_exact(g, r, h);
                GpSolution sol{pieces, 0};
                for (const auto& p : pieces) sol.value += p.edge_count();
                validate_gp_solution(g, r, h, sol);
                report["solution"] = gp_json(sol);
                report["value"] = sol.value;
            } else if (oracle_spec == "greedy") {
                GpSolver solver = make_greedy_gp_solver();
                auto pieces = solver.fn(g, r, h, rng);
                GpSolution sol{pieces, 0};
                for (const auto& p : pieces) sol.value += p.edge_count();
                validate_gp_solution(g, r, h, sol);
                report["solution"] = gp_json(sol);
                report["value"] = sol.value;
            } else if (oracle_spec == "lp:exact-bdks") {
                auto res = approx_gp(g, r, h, make_exact_bdks_solver(), profile, rng);
                report["solution"] = gp_json(res.solution);
                report["value"] = res.solution.value;
                report["pipeline"] = res.report;
            } else {
                throw ParseError("unknown GP oracle spec: " + oracle_spec);
            }
            report["oracle"] = oracle_spec;
        } else if (solve_mbcs->parsed()) {
            Graph g = parse_graph(read_file(graph_path));
            if (oracle_spec != "exact") throw ParseError("mbcs supports --oracle exact");
            Subgraph sol = solve_mbcs_exact(g, big_l);
            validate_subgraph(g, sol);
            report["problem"] = "mbcs";
            report["solution"] = subgraph_json(sol);
            report["value"] = sol.edge_count();
            report["certificate"] = crossing_upper_bound(sol);
        } else if (reduce->parsed()) {
            report["route"] = route;
            if (route == "bdks-from-dks") {
                BipartiteGraph g = parse_bipartite(read_file(graph_path));
                BipartiteSet s = bdks_via_dks(g, k1, k2, dks_from_spec(oracle_spec), rng);
                report["solution"] = {{"a", s.a}, {"b", s.b}};
                report["value"] = bipartite_edge_count(g, s);
            } else if (route == "dks-from-bdks") {
                Graph g = parse_graph(read_file(graph_path));
                VertexSet s = dks_via_bdks(g, k, bdks_from_spec("exact"), rng);
                report["solution"] = vertex_set_json(s);
                report["value"] = induced_edge_count(g, s);
            } else if (route == "dkc-from-bdks") {
                Graph g = parse_graph(read_file(graph_path));
                auto res = approx_dkc(g, k, make_exact_bdks_solver(), profile, rng);
                report["solution"] = dkc_json(res.solution);
                report["value"] = res.solution.value;
                report["pipeline"] = res.report;
            } else if (route == "gp-from-bdks") {
                Graph g = parse_graph(read_file(graph_path));
                auto res = approx_gp(g, r, h, make_exact_bdks_solver(), profile, rng);
                report["solution"] = gp_json(res.solution);
                report["value"] = res.solution.value;
                report["pipeline"] = res.report;
            } else if (route == "dks-from-dkc") {
                Graph g = parse_graph(read_file(graph_path));
                InflationConfig icfg = profile_name == "paper" ? InflationConfig::paper()
                                                               : InflationConfig::desk();
                DkcSolver solver = make_greedy_dkc_solver();
                json trace;
                VertexSet s = dks_via_dkc(g, k, solver, icfg, rng, &trace);
                report["solution"] = vertex_set_json(s);
                report["value"] = induced_edge_count(g, s);
                report["inflation"] = trace;
            } else if (route == "dks-from-gp") {
                Graph g = parse_graph(read_file(graph_path));
                InflationConfig icfg = profile_name == "paper" ? InflationConfig::paper()
                                                               : InflationConfig::desk();
                GpSolver solver = make_greedy_gp_solver();
                json trace;
                VertexSet s = dks_via_gp(g, k, solver, icfg, rng, &trace);
                report["solution"] = vertex_set_json(s);
                report["value"] = induced_edge_count(g, s);
                report["inflation"] = trace;
            } else if (route == "mbcs-from-gp") {
                Graph g = parse_graph(read_file(graph_path));
                CutProfile cp = profile_name == "paper" ? CutProfile::paper()
                                                        : CutProfile::desk();
                GpSolver solver =
                    oracle_spec == "exact" ? make_exact_gp_solver() : make_greedy_gp_solver();
                json trace;
                Subgraph sol = mbcs_via_gp(g, big_l, solver, cp, rng, &trace);
                validate_subgraph(g, sol);
                report["solution"] = subgraph_json(sol);
                report["value"] = sol.edge_count();
                report["trace"] = trace;
            } else if (route == "gp-from-mbcs") {
                Graph g = parse_graph(read_file(graph_path));
                CutProfile cp = profile_name == "paper" ? CutProfile::paper()
                                                        : CutProfile::desk();
                json trace;
                GpSolution sol = gp_via_mbcs(g, r, h, make_exact_mbcs_solver(), cp, rng, &trace);
                report["solution"] = gp_json(sol);
                report["value"] = sol.value;
                report["trace"] = trace;
            } else {
                std::cerr << "unknown route: " << route << "\n";
                return 2;
            }
        } else if (csp->parsed()) {
            Csp2Instance inst = parse_csp(read_file(instance_path));
            CspConfig cfg = profile_name == "paper" ? CspConfig::paper() : CspConfig::desk();
            if (action == "decide") {
                json detail;
                CspVerdict verdict =
                    decide_yes_no(inst, make_exact_bdks_solver(), cfg, rng, &detail);
                std::cout << (verdict == CspVerdict::YES ? "YES" : "NO") << "\n";
                report["verdict"] = verdict == CspVerdict::YES ? "YES" : "NO";
                report["detail"] = detail;
            } else if (action == "decompose") {
                MainDecomposition dec =
                    main_decompose(inst, make_exact_bdks_solver(), cfg, rng);
                json rounds = json::array();
                for (const auto& ids : dec.round_ids) rounds.push_back(ids);
                json witnesses = json::array();
                for (size_t i = 0; i < dec.round_ids.size(); ++i)
                    if (!dec.round_ids[i].empty())
                        witnesses.push_back({{"round", i},
                                             {"assignment", dec.witnesses[i].witness},
                                             {"satisfied", dec.witnesses[i].satisfied}});
                report["bad_ids"] = dec.bad_ids;
                report["rounds"] = rounds;
                report["witnesses"] = witnesses;
            } else if (action == "verify-bad") {
                bool ok = verify_bad_set(inst, parse_int_list(ids_text), cfg.gamma,
                                         cfg.verify_ceiling);
                std::cout << (ok ? "true" : "false") << "\n";
                report["verdict"] = ok;
            } else if (action == "verify-good") {
                Assignment a;
                for (int v : parse_int_list(assignment_text)) a.push_back(v - 1);
                if (static_cast<int>(a.size()) != inst.num_x + inst.num_y)
                    throw ParseError("assignment length mismatch");
                bool ok = verify_good_witness(inst, parse_int_list(ids_text), a,
                                              cfg.beta_at(inst.size()));
                std::cout << (ok ? "true" : "false") << "\n";
                report["verdict"] = ok;
            } else {
                std::cerr << "unknown csp action: " << action << "\n";
                return 2;
            }
        } else if (gen->parsed()) {
            std::string content;
            if (kind == "gnp") {
                content = serialize_graph(gen_gnp(gen_n, gen_p, rng));
            } else if (kind == "planted-dense") {
                content = serialize_graph(gen_planted_dense(gen_n, gen_k, gen_p_in, gen_p_out, rng));
            } else if (kind == "disjoint-cliques") {
                content = serialize_graph(gen_disjoint_cliques(gen_count, gen_size));
            } else if (kind == "planted-csp") {
                content = serialize_csp(gen_planted_csp(gen_x, gen_y, gen_a, gen_c, rng));
            } else {
                std::cerr << "unknown gen kind: " << kind << "\n";
                return 2;
            }
            report["kind"] = kind;
            report["digest"] = hex64(fnv1a(content));
            if (out_path.empty())
                report["content"] = content;
            else
                write_file(out_path, content);
        }
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const CeilingError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }

    std::cout << report.dump(2) << "\n";
    return 0;
}
