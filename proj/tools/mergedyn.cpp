// Command-line front end for the Merge workspace dynamics library.
//
// Exit codes: 0 success, 1 check failure, 2 usage or cap errors.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mergedyn/contraction.hpp"
#include "mergedyn/cost.hpp"
#include "mergedyn/forest.hpp"
#include "mergedyn/merge_graph.hpp"
#include "mergedyn/partition_chain.hpp"
#include "mergedyn/simulate.hpp"
#include "mergedyn/spectral.hpp"
#include "mergedyn/tropical.hpp"
#include "mergedyn/verify.hpp"

using namespace mergedyn;

namespace {

int env_cap() {
    if (const char* v = std::getenv("MERGEDYN_CAP")) return std::atoi(v);
    return 7;
}

struct RunConfig {
    int n = 4;
    std::string labels_csv;
    std::string kinds = "em,im,sm";
    std::string sister_cut = "allow";
    std::string edge_mode = "simple";
    std::string cost = "total";
    double t = 1e-4;
    double beta = 1.0;
    double tol = 1e-12;
    long long steps = 1000000;
    long long burn_in = 1000;
    unsigned long long seed = 42;
    int replicas = 1;
    std::string out, dot, graph_file, weights_file, t_pair = "1e-6,1e-8";
    std::string config_file;

    // flat key=value text; explicitly passed flags keep priority
    void load_file(const CLI::App* sub) {
        std::ifstream is(config_file);
        if (!is) throw Error("cannot read config " + config_file);
        std::string line;
        while (std::getline(is, line)) {
            size_t h = line.find('#');
            if (h != std::string::npos) line = line.substr(0, h);
            size_t eq = line.find('=');
            if (eq == std::string::npos) continue;
            auto trim = [](std::string s) {
                size_t a = s.find_first_not_of(" \t");
                size_t b = s.find_last_not_of(" \t");
                return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
            };
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            if (key.empty()) continue;
            const CLI::Option* opt = sub->get_option_no_throw("--" + key);
            if (opt && opt->count() > 0) continue; // explicit flag wins
            if (key == "n") n = std::stoi(value);
            else if (key == "labels") labels_csv = value;
            else if (key == "kinds") kinds = value;
            else if (key == "sister-cut") sister_cut = value;
            else if (key == "edge-mode") edge_mode = value;
            else if (key == "cost") cost = value;
            else if (key == "t") t = std::stod(value);
            else if (key == "beta") beta = std::stod(value);
            else if (key == "tol") tol = std::stod(value);
            else if (key == "steps") steps = std::stoll(value);
            else if (key == "burn-in") burn_in = std::stoll(value);
            else if (key == "seed") seed = std::stoull(value);
            else if (key == "replicas") replicas = std::stoi(value);
            else if (key == "out") out = value;
            else if (key == "dot") dot = value;
            else if (key == "graph") graph_file = value;
            else if (key == "weights") weights_file = value;
            else if (key == "t-pair") t_pair = value;
            else throw Error("unknown config key: " + key);
        }
    }
    std::string dump() const {
        std::ostringstream os;
        os << "n=" << n << "\nlabels=" << labels_csv << "\nkinds=" << kinds
           << "\nsister-cut=" << sister_cut << "\nedge-mode=" << edge_mode << "\ncost=" << cost
           << "\nt=" << t << "\nbeta=" << beta << "\ntol=" << tol << "\nsteps=" << steps
           << "\nburn-in=" << burn_in << "\nseed=" << seed << "\nreplicas=" << replicas
           << "\nout=" << out << "\ndot=" << dot << "\ngraph=" << graph_file
           << "\nweights=" << weights_file << "\nt-pair=" << t_pair << "\n";
        return os.str();
    }

    std::vector<std::string> labels() const {
        if (labels_csv.empty()) return default_labels(n);
        std::vector<std::string> out_labels;
        std::stringstream ss(labels_csv);
        std::string item;
        while (std::getline(ss, item, ',')) out_labels.push_back(item);
        return out_labels;
    }
    GraphConfig graph_config() const {
        GraphConfig c;
        c.sister_cut = sister_cut != "forbid";
        c.edge_mode = edge_mode == "ops" ? EdgeMode::Ops : EdgeMode::Simple;
        c.cap = env_cap();
        return c;
    }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream os(path);
    if (!os) throw Error("cannot write " + path);
    os << content;
}

MergeGraph load_or_build(const RunConfig& cfg) {
    if (!cfg.graph_file.empty()) {
        std::ifstream is(cfg.graph_file);
        if (!is) throw Error("cannot read " + cfg.graph_file);
        std::stringstream buf;
        buf << is.rdbuf();
        return graph_from_json(buf.str());
    }
    return build_merge_graph(cfg.labels(), kinds_from_string(cfg.kinds), cfg.graph_config());
}

int cmd_enumerate(const RunConfig& cfg) {
    auto labels = cfg.labels();
    int n = static_cast<int>(labels.size());
    std::cout << "n = " << n << ", labels:";
    for (const auto& l : labels) std::cout << " " << l;
    std::cout << "\n";
    nlohmann::ordered_json j;
    j["n"] = n;
    nlohmann::ordered_json fibers = nlohmann::ordered_json::array();
    for (const auto& p : partitions_without_all_ones(n)) {
        Counting c = counting(n, p);
        std::cout << "  " << p.str() << ": mu=" << c.mu.str() << " upsilon=" << c.upsilon.str()
                  << " lambda=" << c.lambda.str() << "\n";
        nlohmann::ordered_json e;
        e["partition"] = p.str();
        e["mu"] = c.mu.str();
        e["upsilon"] = c.upsilon.str();
        e["lambda"] = c.lambda.str();
        fibers.push_back(e);
    }
    j["fibers"] = fibers;
    j["total"] = forest_count(n).str();
    std::cout << "total workspaces: " << forest_count(n).str() << "\n";
    if (n <= env_cap()) {
        auto forests = enumerate_forests(labels);
        std::cout << "enumerated: " << forests.size() << "\n";
        if (forest_count(n).to_u64() != forests.size()) {
            std::cerr << "enumeration disagrees with the closed form\n";
            return 1;
        }
    }
    if (!cfg.out.empty()) write_file(cfg.out, j.dump(2) + "\n");
    return 0;
}

int cmd_graph(const RunConfig& cfg) {
    MergeGraph g = build_merge_graph(cfg.labels(), kinds_from_string(cfg.kinds), cfg.graph_config());
    std::cout << "vertices: " << g.vertices.size() << ", edge classes: " << g.edges.size() << "\n";
    if (!cfg.out.empty()) write_file(cfg.out, graph_to_json(g));
    if (!cfg.dot.empty()) write_file(cfg.dot, graph_to_dot(g));
    return 0;
}

int cmd_analyze(const RunConfig& cfg) {
    MergeGraph g = load_or_build(cfg);
    Digraph d = g.support();
    Condensation cond = strongly_connected_components(d);
    std::cout << "strongly connected components: " << cond.scc_count << "\n";
    if (cond.scc_count == 1) std::cout << "period: " << period(d) << "\n";
    std::cout << "density: " << density(g.support(EdgeMode::Simple)) << "\n";
    MergeGraph ops_graph = g;
    if (g.config.edge_mode != EdgeMode::Ops) {
        GraphConfig c = g.config;
        c.edge_mode = EdgeMode::Ops;
        c.cap = env_cap();
        ops_graph = build_merge_graph(g.labels, kinds_from_string(cfg.kinds), c);
    }
    DegreeReport rep = verify_degrees(ops_graph);
    std::cout << "degree formulas: " << (rep.asserted_pass ? "match" : "MISMATCH") << " over "
              << rep.vertices_checked << " vertices; printed SM-in form flagged at "
              << rep.sm_in_mismatches.size() << " vertices\n";
    return rep.asserted_pass ? 0 : 1;
}

int cmd_spectral(const RunConfig& cfg) {
    MergeGraph g = load_or_build(cfg);
    SparseMatrix K = adjacency_matrix(g);
    if (!cfg.weights_file.empty()) {
        // per-edge energies: {"edges":[{"src":i,"dst":j,"w":x}, ...]}
        std::ifstream is(cfg.weights_file);
        if (!is) throw Error("cannot read " + cfg.weights_file);
        auto j = nlohmann::json::parse(is);
        std::map<std::pair<int, int>, double> w;
        for (const auto& e : j.at("edges"))
            w[{e.at("src").get<int>(), e.at("dst").get<int>()}] = e.at("w").get<double>();
        SparseMatrix Kw(K.n);
        for (int i = 0; i < K.n; ++i)
            for (const auto& [col, v] : K.rows[static_cast<size_t>(i)]) {
                auto it = w.find({i, col});
                Kw.add(i, col, v * std::exp(-cfg.beta * (it == w.end() ? 0.0 : it->second)));
            }
        K = Kw;
    } else if (cfg.beta != 1.0) {
        CostKind kind = cost_kind_from_string(cfg.cost);
        WeightedMatrix wm = weighted_matrix(g, kind, std::exp(-cfg.beta));
        K = wm.matrix;
    }
    PFResult pf = perron_frobenius(K, cfg.tol);
    MarkovChain chain = to_markov(K, pf);
    Distribution pi = stationary(chain);
    nlohmann::ordered_json j;
    j["lambda"] = pf.lambda;
    j["residual"] = std::max(pf.residual_left, pf.residual_right);
    j["normalization"] = pf.mode == PFNorm::Pairing ? "pairing" : "unit";
    std::cout << j.dump(2) << "\n";
    if (!cfg.out.empty()) {
        std::ostringstream csv;
        csv << "vertex,eta,psi,pi\n";
        for (size_t v = 0; v < g.vertices.size(); ++v)
            csv << g.vertices[v].encoding() << "," << pf.eta[v] << "," << pf.psi[v] << "," << pi[v]
                << "\n";
        write_file(cfg.out, csv.str());
    }
    return 0;
}

int cmd_project(const RunConfig& cfg) {
    MergeGraph g = load_or_build(cfg);
    ProjectionData d = project(g);
    ProjectionReport rep = verify_p_symmetry(g);
    std::ostringstream csv;
    csv << "partition";
    for (const auto& p : d.fibers) csv << "," << p.str();
    csv << "\n";
    for (size_t a = 0; a < d.fibers.size(); ++a) {
        csv << d.fibers[a].str();
        for (size_t b = 0; b < d.fibers.size(); ++b) csv << "," << d.KYR[a][b];
        csv << "\n";
    }
    std::cout << csv.str();
    std::cout << "fiber symmetry: out " << (rep.out_pass ? "exact" : "FAILED") << ", in "
              << (rep.in_pass ? "exact" : "varies (expected on shape-mixed fibers)") << "\n";
    for (const auto& f : rep.out_failures) std::cout << "  " << f << "\n";
    for (const auto& f : rep.in_failures) std::cout << "  " << f << "\n";
    if (!cfg.out.empty()) {
        write_file(cfg.out, csv.str());
        nlohmann::ordered_json j;
        j["out_constant"] = rep.out_pass;
        j["in_constant"] = rep.in_pass;
        j["out_failures"] = rep.out_failures;
        j["in_failures"] = rep.in_failures;
        write_file(cfg.out + ".symmetry.json", j.dump(2) + "\n");
    }
    return rep.out_pass ? 0 : 1;
}

int cmd_weight(const RunConfig& cfg) {
    CostKind kind = cost_kind_from_string(cfg.cost);
    PartitionGraph pg = build_partition_graph(cfg.n, cfg.graph_config().edge_mode, all_kinds(),
                                              cfg.graph_config());
    std::ostringstream csv;
    csv << "cost,op,ki,kj,value\n";
    for (const auto& e : pg.edges)
        csv << cfg.cost << "," << kind_name(e.kind) << "," << e.ki << "," << e.kj << ","
            << op_cost(e.kind, e.ki, e.kj, pg.vertices[static_cast<size_t>(e.src)], kind) << "\n";
    std::cout << csv.str();
    auto values = fiber_stationary_values(pg, kind, cfg.t);
    std::cout << "stationary fiber values at t=" << cfg.t << ":\n";
    for (size_t i = 0; i < values.size(); ++i)
        std::cout << "  " << pg.vertices[i].str() << ": " << values[i] << " (x"
                  << pg.fiber_sizes[i] << ")\n";
    if (!cfg.out.empty()) write_file(cfg.out, csv.str());
    return 0;
}

int cmd_tropical(const RunConfig& cfg) {
    CostKind kind = cost_kind_from_string(cfg.cost);
    PartitionGraph pg = build_partition_graph(cfg.n, EdgeMode::Simple, all_kinds(), cfg.graph_config());
    AsymptoticOrder ord = predicted_orders(pg, kind);
    double t1, t2;
    if (std::sscanf(cfg.t_pair.c_str(), "%lf,%lf", &t1, &t2) != 2)
        throw Error("bad --t-pair, expected e.g. 1e-6,1e-8");
    auto v1 = fiber_stationary_values(pg, kind, t1);
    auto v2 = fiber_stationary_values(pg, kind, t2);
    auto slopes = slope_estimate(v1, v2, t1, t2);
    nlohmann::ordered_json j;
    j["rho_min"] = ord.rho_min;
    nlohmann::ordered_json crit = nlohmann::ordered_json::array();
    for (int v : ord.critical) crit.push_back(pg.vertices[static_cast<size_t>(v)].str());
    j["critical"] = crit;
    nlohmann::ordered_json exps, slps;
    for (size_t i = 0; i < pg.vertices.size(); ++i) {
        if (ord.unique_critical) exps[pg.vertices[i].str()] = ord.exponent[i];
        slps[pg.vertices[i].str()] = slopes[i];
    }
    if (!ord.unique_critical) {
        std::cerr << "warning: several critical classes; exponents reported per basis root\n";
        nlohmann::ordered_json basis = nlohmann::ordered_json::array();
        for (size_t b = 0; b < ord.per_basis.size(); ++b) {
            nlohmann::ordered_json col;
            for (size_t i = 0; i < pg.vertices.size(); ++i)
                col[pg.vertices[i].str()] = ord.per_basis[b][i];
            basis.push_back(col);
        }
        j["exponent_basis"] = basis;
    } else {
        j["exponents"] = exps;
    }
    j["slopes"] = slps;
    std::cout << j.dump(2) << "\n";
    if (!cfg.out.empty()) write_file(cfg.out, j.dump(2) + "\n");
    return 0;
}

int cmd_simulate(const RunConfig& cfg) {
    MergeGraph g = load_or_build(cfg);
    SparseMatrix K = adjacency_matrix(g);
    PFResult pf = perron_frobenius(K, cfg.tol);
    MarkovChain chain = to_markov(K, pf);
    Distribution pi = stationary(chain);
    ChainSampler sampler(chain, "hamc-n" + std::to_string(g.n));
    Trajectory t = sampler.run_replicas(0, cfg.steps / std::max(1, cfg.replicas), cfg.seed,
                                        std::max(1, cfg.replicas), cfg.burn_in);
    Distribution emp = empirical_distribution(t);
    std::cout << "steps: " << t.steps << ", TV to exact stationary: " << tv_distance(emp, pi)
              << "\n";
    if (!cfg.out.empty()) {
        std::ostringstream csv;
        csv << "vertex,frequency,exact_pi,abs_error\n";
        for (size_t v = 0; v < emp.size(); ++v)
            csv << g.vertices[v].encoding() << "," << emp[v] << "," << pi[v] << ","
                << std::abs(emp[v] - pi[v]) << "\n";
        write_file(cfg.out, csv.str());
    }
    return 0;
}

int cmd_contraction_check(const RunConfig& cfg) {
    if (cfg.n > 5) {
        std::cerr << "contraction check supports n <= 5\n";
        return 2;
    }
    ContractionCheck check = contraction_identity_check(cfg.n, cfg.graph_config());
    std::cout << "workspaces: " << check.workspaces << ", operations: " << check.ops << "\n";
    if (!check.pass) {
        std::cout << "MISMATCH at:";
        for (const auto& m : check.mismatches) std::cout << " " << m;
        std::cout << "\n";
        return 1;
    }
    std::cout << "trace projection identity holds exactly\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    VerifyOptions opt;
    opt.max_n = cfg.n;
    opt.sister_cut = cfg.sister_cut != "forbid";
    auto results = run_acceptance(opt);
    bool ok = print_results(results, std::cout);
    if (!cfg.out.empty()) write_file(cfg.out, results_to_json(results));
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Merge workspace dynamics: enumeration, spectra, tropical asymptotics"};
    app.require_subcommand(1);

    RunConfig cfg;
    bool dump_config = false;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", cfg.config_file, "flat key=value file; explicit flags win");
        sub->add_flag("--dump-config", dump_config, "print the effective configuration and exit");
        sub->add_option("--n", cfg.n, "number of leaves");
        sub->add_option("--labels", cfg.labels_csv, "comma separated leaf labels");
        sub->add_option("--kinds", cfg.kinds, "em,im,sm subsets");
        sub->add_option("--sister-cut", cfg.sister_cut, "allow|forbid")
            ->check(CLI::IsMember({"allow", "forbid"}));
        sub->add_option("--edge-mode", cfg.edge_mode, "ops|simple")
            ->check(CLI::IsMember({"ops", "simple"}));
        sub->add_option("--out", cfg.out, "output file");
        return sub;
    };

    auto* s_enum = add_common(app.add_subcommand("enumerate", "count and list workspace fibers"));
    auto* s_graph = add_common(app.add_subcommand("graph", "build and export the Merge graph"));
    s_graph->add_option("--dot", cfg.dot, "DOT export path");
    auto* s_analyze = add_common(app.add_subcommand("analyze", "connectivity, period, degrees"));
    s_analyze->add_option("--graph", cfg.graph_file, "graph JSON input");
    auto* s_spec = add_common(app.add_subcommand("spectral", "eigendata and stationary law"));
    s_spec->add_option("--graph", cfg.graph_file, "graph JSON input");
    s_spec->add_option("--tol", cfg.tol, "iteration tolerance");
    s_spec->add_option("--weights", cfg.weights_file, "edge weight JSON");
    s_spec->add_option("--beta", cfg.beta, "inverse temperature");
    s_spec->add_option("--cost", cfg.cost, "cost kind for --beta weighting");
    auto* s_project = add_common(app.add_subcommand("project", "reduce onto partitions"));
    s_project->add_option("--graph", cfg.graph_file, "graph JSON input");
    auto* s_weight = add_common(app.add_subcommand("weight", "cost tables and weighted chains"));
    s_weight->add_option("--cost", cfg.cost, "total|shannon|total+shannon");
    s_weight->add_option("--t", cfg.t, "weight parameter in (0,1]");
    auto* s_trop = add_common(app.add_subcommand("tropical", "min-plus asymptotics"));
    s_trop->add_option("--cost", cfg.cost, "total|shannon|total+shannon");
    s_trop->add_option("--t-pair", cfg.t_pair, "two t values for slope fitting");
    auto* s_sim = add_common(app.add_subcommand("simulate", "sample the conjugated chain"));
    s_sim->add_option("--graph", cfg.graph_file, "graph JSON input");
    s_sim->add_option("--steps", cfg.steps, "total steps");
    s_sim->add_option("--burn-in", cfg.burn_in, "discarded prefix");
    s_sim->add_option("--seed", cfg.seed, "RNG seed");
    s_sim->add_option("--replicas", cfg.replicas, "independent replicas");
    auto* s_contr = add_common(app.add_subcommand("contraction-check", "trace projection identity"));
    auto* s_verify = add_common(app.add_subcommand("verify", "run the acceptance battery"));
    (void)s_enum;
    (void)s_contr;
    (void)s_verify;

    CLI11_PARSE(app, argc, argv);

    try {
        if (!cfg.config_file.empty()) cfg.load_file(app.get_subcommands().front());
        if (dump_config) {
            std::cout << cfg.dump();
            return 0;
        }
        if (cfg.n > env_cap() || cfg.n < 2) {
            std::cerr << "n=" << cfg.n << " outside the supported range (cap " << env_cap()
                      << ", override with MERGEDYN_CAP)\n";
            return 2;
        }
        if (app.got_subcommand("enumerate")) return cmd_enumerate(cfg);
        if (app.got_subcommand("graph")) return cmd_graph(cfg);
        if (app.got_subcommand("analyze")) return cmd_analyze(cfg);
        if (app.got_subcommand("spectral")) return cmd_spectral(cfg);
        if (app.got_subcommand("project")) return cmd_project(cfg);
        if (app.got_subcommand("weight")) return cmd_weight(cfg);
        if (app.got_subcommand("tropical")) return cmd_tropical(cfg);
        if (app.got_subcommand("simulate")) return cmd_simulate(cfg);
        if (app.got_subcommand("contraction-check")) return cmd_contraction_check(cfg);
        if (app.got_subcommand("verify")) return cmd_verify(cfg);
    } catch (const CapExceededError& e) {
        std::cerr << "cap error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
