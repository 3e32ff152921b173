// calfsbm: generate / fit / select-k / evaluate / simulate driver
#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <numeric>

#include "calf/clustering.hpp"
#include "calf/datagen.hpp"
#include "calf/io.hpp"
#include "calf/metrics.hpp"
#include "calf/posterior.hpp"

namespace fs = std::filesystem;
using namespace calf;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    bool seed_set = false;
};

struct McmcOpts {
    std::string preset = "desk";
    int chains = -1, burn_in = -1, iters = -1, thin = -1;

    McmcConfig resolve(std::uint64_t seed) const {
        McmcConfig cfg = preset == "paper" ? McmcConfig::paper_preset()
                                           : McmcConfig::desk_preset();
        if (chains > 0) cfg.n_chains = chains;
        if (burn_in >= 0) cfg.burn_in = burn_in;
        if (iters > 0) cfg.iterations = iters;
        if (thin > 0) cfg.thin = thin;
        cfg.seed = seed;
        return cfg;
    }
};

// --config JSON supplies defaults; explicit flags win
nlohmann::json load_config_json(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--config") {
            std::ifstream f(argv[i + 1]);
            if (!f) throw std::runtime_error(std::string("cannot open config: ") + argv[i + 1]);
            return nlohmann::json::parse(f);
        }
    return nlohmann::json::object();
}

template <typename T>
void cfg_default(const nlohmann::json& j, const std::string& key, T& var) {
    if (j.contains(key)) var = j.at(key).get<T>();
}

void require_seed(const CommonOpts& c) {
    if (!c.seed_set)
        throw CLI::ValidationError("--seed", "a seed is required for stochastic commands");
}

void ensure_out(const std::string& dir) { fs::create_directories(dir); }

NodeData load_node_data(const std::string& covariates_path) {
    return io::node_data_from_table(io::load_covariates(covariates_path));
}

std::map<std::string, std::string> echo_base(const CommonOpts& c) {
    return {{"seed", std::to_string(c.seed)}, {"out", c.out_dir}};
}

struct MethodScore {
    std::string method;
    bool available = true;
    double ari_score = 0.0;
    double nmi_score = 0.0;
};

std::vector<MethodScore> score_baselines(const Network& net, const NodeData& nd,
                                         int K, std::span<const int> truth,
                                         Rng& rng,
                                         const std::vector<int>* calf_labels) {
    std::vector<MethodScore> rows;
    auto add = [&](const std::string& name, const std::vector<int>& labels) {
        rows.push_back({name, true, ari(labels, truth), nmi(labels, truth)});
    };
    if (calf_labels) add("calf-sbm", *calf_labels);
    Rng r1 = rng.split(1), r2 = rng.split(2), r3 = rng.split(3);
    add("kmeans", kmeans(nd.covariates, nd.n, nd.p, K, r1).labels);
    add("kmedians", kmedians(nd.covariates, nd.n, nd.p, K, r2).labels);
    add("spectral", spectral_clustering(net, K, r3));
    rows.push_back({"casc", false, 0.0, 0.0});  // third-party slot, not bundled
    return rows;
}

void write_comparison(std::ostream& f, int replicate,
                      const std::vector<MethodScore>& rows) {
    for (const auto& r : rows) {
        f << replicate << ',' << r.method << ',';
        if (r.available)
            f << io::format_double(r.ari_score) << ',' << io::format_double(r.nmi_score);
        else
            f << "NA,NA";
        f << '\n';
    }
}

int cmd_generate(const CommonOpts& common, const GenConfig& gen) {
    ensure_out(common.out_dir);
    GenConfig cfg = gen;
    cfg.seed = common.seed;
    const auto syn = generate(cfg);
    const fs::path out(common.out_dir);
    io::save_edge_list((out / "edges.csv").string(), syn.network);
    io::save_covariates((out / "covariates.csv").string(), syn.node_data);
    io::save_truth((out / "truth.csv").string(), syn.true_membership, syn.true_theta);
    auto echo = echo_base(common);
    echo["command"] = "generate";
    echo["n"] = std::to_string(cfg.n);
    echo["K"] = std::to_string(cfg.K);
    echo["p"] = std::to_string(cfg.p);
    echo["omega"] = io::format_double(cfg.omega);
    echo["beta0"] = io::format_double(cfg.beta0);
    echo["beta_within_lo"] = io::format_double(cfg.beta_within_range.first);
    echo["beta_within_hi"] = io::format_double(cfg.beta_within_range.second);
    echo["beta_between"] = io::format_double(cfg.beta_between);
    echo["theta_variance"] = io::format_double(cfg.theta_variance);
    io::save_config_echo((out / "config.txt").string(), echo);
    std::cout << "wrote " << (out / "edges.csv").string() << " ("
              << syn.network.num_edges() << " edges)\n";
    return 0;
}

int cmd_fit(const CommonOpts& common, const std::string& edges,
            const std::string& covariates, int K, const McmcOpts& mopts,
            bool write_draws) {
    ensure_out(common.out_dir);
    const Network net = io::load_network(edges);
    const NodeData nd = load_node_data(covariates);
    if (nd.n != net.n)
        throw std::runtime_error("covariate row count does not match network size");
    const McmcConfig cfg = mopts.resolve(common.seed);
    const auto chains = run_chains(net, nd, K, PriorConfig{}, cfg, InitConfig{});
    const FitReport rep = summarize(chains, K);
    const fs::path out(common.out_dir);
    io::save_fit_report((out / "fit.json").string(), rep);
    if (write_draws) {
        std::vector<ChainDraws> rel;
        for (const auto& c : chains) rel.push_back(relabel(c).draws);
        io::save_draws_csv((out / "draws.csv").string(), rel);
    }
    auto echo = echo_base(common);
    echo["command"] = "fit";
    echo["K"] = std::to_string(K);
    echo["burn_in"] = std::to_string(cfg.burn_in);
    echo["iterations"] = std::to_string(cfg.iterations);
    echo["thin"] = std::to_string(cfg.thin);
    echo["n_chains"] = std::to_string(cfg.n_chains);
    io::save_config_echo((out / "config.txt").string(), echo);
    std::cout << "K=" << K << " waic=" << rep.waic.waic
              << " accept(beta)=" << rep.accept_rate_beta
              << " accept(theta)=" << rep.accept_rate_theta << '\n';
    return 0;
}

int cmd_select_k(const CommonOpts& common, const std::string& edges,
                 const std::string& covariates, int k_min, int k_max,
                 const McmcOpts& mopts) {
    ensure_out(common.out_dir);
    const Network net = io::load_network(edges);
    const NodeData nd = load_node_data(covariates);
    const McmcConfig cfg = mopts.resolve(common.seed);
    std::vector<int> range;
    for (int k = k_min; k <= k_max; ++k) range.push_back(k);
    const KSelection sel = select_K(net, nd, range, PriorConfig{}, cfg, InitConfig{});

    nlohmann::json j;
    j["best_K"] = sel.best_K;
    j["per_K"] = nlohmann::json::array();
    for (std::size_t t = 0; t < sel.ks.size(); ++t)
        j["per_K"].push_back({{"K", sel.ks[t]},
                              {"waic", sel.reports[t].waic.waic},
                              {"lppd", sel.reports[t].waic.lppd},
                              {"p_waic", sel.reports[t].waic.p_waic}});
    j["failed_K"] = sel.failed;
    const fs::path out(common.out_dir);
    {
        std::ofstream f(out / "selectk.json");
        f << j.dump(2) << '\n';
    }
    for (std::size_t t = 0; t < sel.ks.size(); ++t)
        if (sel.ks[t] == sel.best_K)
            io::save_fit_report((out / "fit.json").string(), sel.reports[t]);
    auto echo = echo_base(common);
    echo["command"] = "select-k";
    echo["k_min"] = std::to_string(k_min);
    echo["k_max"] = std::to_string(k_max);
    io::save_config_echo((out / "config.txt").string(), echo);
    std::cout << "best K = " << sel.best_K << '\n';
    return 0;
}

int cmd_evaluate(const CommonOpts& common, const std::string& edges,
                 const std::string& covariates, const std::string& truth_path,
                 const std::string& fit_path, int K) {
    ensure_out(common.out_dir);
    const Network net = io::load_network(edges);
    const NodeData nd = load_node_data(covariates);
    std::vector<int> truth;
    std::vector<double> true_theta;
    io::load_truth(truth_path, truth, true_theta);
    if (int(truth.size()) != net.n)
        throw std::runtime_error("truth row count does not match network size");

    std::vector<int> calf_labels;
    const std::vector<int>* calf_ptr = nullptr;
    if (!fit_path.empty()) {
        std::ifstream f(fit_path);
        if (!f) throw std::runtime_error("cannot open fit report: " + fit_path);
        const auto j = nlohmann::json::parse(f);
        for (int lab : j.at("hard_membership")) calf_labels.push_back(lab - 1);
        calf_ptr = &calf_labels;
    }
    Rng rng(common.seed, 77);
    const auto rows = score_baselines(net, nd, K, truth, rng, calf_ptr);
    const fs::path out(common.out_dir);
    std::ofstream f(out / "comparison.csv");
    f << "replicate,method,ari,nmi\n";
    write_comparison(f, 0, rows);
    auto echo = echo_base(common);
    echo["command"] = "evaluate";
    echo["K"] = std::to_string(K);
    io::save_config_echo((out / "config.txt").string(), echo);
    for (const auto& r : rows)
        if (r.available)
            std::cout << r.method << ": ari=" << r.ari_score << " nmi=" << r.nmi_score << '\n';
    return 0;
}

struct ParamTruth {
    std::string name;
    double truth;
};

int cmd_simulate(const CommonOpts& common, GenConfig gen, int replicates,
                 const McmcOpts& mopts) {
    ensure_out(common.out_dir);
    const fs::path out(common.out_dir);
    std::ofstream cmp(out / "comparison.csv");
    cmp << "replicate,method,ari,nmi\n";
    std::ofstream est(out / "estimates.csv");
    est << "replicate,param,truth,estimate,lower,upper,covered,rhat\n";
    std::ofstream failures(out / "failures.csv");
    failures << "replicate,stage,error\n";

    const auto within = within_coefficients(gen.K, gen.beta_within_range.first,
                                            gen.beta_within_range.second);
    std::vector<ParamTruth> params;
    params.push_back({"beta0", gen.beta0});
    {
        BlockCoefficients idx(gen.K);
        for (int k = 0; k < gen.K; ++k)
            for (int l = k; l < gen.K; ++l)
                params.push_back({"beta_" + std::to_string(k + 1) + "_" + std::to_string(l + 1),
                                  k == l ? within[k] : gen.beta_between});
    }

    struct Agg {
        double bias_sum = 0.0;
        std::vector<double> estimates;
        int covered = 0, total = 0;
    };
    std::map<std::string, Agg> agg;

    Rng root(common.seed);
    int done = 0;
    for (int rep = 0; rep < replicates; ++rep) {
        try {
            GenConfig g = gen;
            g.seed = Rng(common.seed, std::uint64_t(rep + 1)).next_u64();
            const auto syn = generate(g);
            McmcConfig cfg = mopts.resolve(Rng(common.seed, std::uint64_t(rep + 1000)).next_u64());
            const auto chains = run_chains(syn.network, syn.node_data, gen.K,
                                           PriorConfig{}, cfg, InitConfig{});
            const FitReport fit = summarize(chains, gen.K);

            // parameter rows; relabeling has sorted the diagonal, matching the
            // nondecreasing true within-block grid
            auto emit = [&](const std::string& name, double truth, const ScalarSummary& s) {
                const bool covered = truth >= s.lower && truth <= s.upper;
                est << rep << ',' << name << ',' << io::format_double(truth) << ','
                    << io::format_double(s.mean) << ',' << io::format_double(s.lower)
                    << ',' << io::format_double(s.upper) << ',' << (covered ? 1 : 0)
                    << ',' << io::format_double(s.rhat) << '\n';
                auto& a = agg[name];
                a.bias_sum += s.mean - truth;
                a.estimates.push_back(s.mean);
                a.covered += covered;
                a.total += 1;
            };
            emit("beta0", gen.beta0, fit.beta0);
            {
                std::size_t t = 0;
                BlockCoefficients idx(gen.K);
                for (int k = 0; k < gen.K; ++k)
                    for (int l = k; l < gen.K; ++l, ++t)
                        emit(params[1 + idx.index(k, l)].name,
                             params[1 + idx.index(k, l)].truth, fit.beta_upper[t]);
            }
            emit("sigma2", gen.theta_variance, fit.sigma2);

            Rng eval_rng = root.split(std::uint64_t(5000 + rep));
            auto rows = score_baselines(syn.network, syn.node_data, gen.K,
                                        syn.true_membership, eval_rng, &fit.hard_labels);
            write_comparison(cmp, rep, rows);
            ++done;
        } catch (const std::exception& e) {
            failures << rep << ",fit," << e.what() << '\n';
        }
    }

    std::ofstream aggf(out / "aggregate.csv");
    aggf << "param,bias,esd,cp\n";
    for (auto& [name, a] : agg) {
        const double mean_est =
            std::accumulate(a.estimates.begin(), a.estimates.end(), 0.0) / a.total;
        double esd = 0.0;
        for (double e : a.estimates) esd += (e - mean_est) * (e - mean_est);
        esd = a.total > 1 ? std::sqrt(esd / (a.total - 1)) : 0.0;
        aggf << name << ',' << io::format_double(a.bias_sum / a.total) << ','
             << io::format_double(esd) << ','
             << io::format_double(100.0 * a.covered / a.total) << '\n';
    }

    auto echo = echo_base(common);
    echo["command"] = "simulate";
    echo["replicates"] = std::to_string(replicates);
    echo["n"] = std::to_string(gen.n);
    echo["K"] = std::to_string(gen.K);
    echo["omega"] = io::format_double(gen.omega);
    echo["preset"] = mopts.preset;
    io::save_config_echo((out / "config.txt").string(), echo);
    std::cout << done << "/" << replicates << " replicates succeeded\n";
    return done > 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"CALF-SBM: covariate-assisted latent factor stochastic block model"};
    app.require_subcommand(1);

    nlohmann::json cj;
    try {
        cj = load_config_json(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }

    CommonOpts common;
    cfg_default(cj, "out", common.out_dir);
    if (cj.contains("seed")) {
        common.seed = cj["seed"].get<std::uint64_t>();
        common.seed_set = true;
    }

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", common.config_path, "JSON config supplying defaults");
        sub->add_option("--out", common.out_dir, "output directory");
        sub->add_option("--seed", common.seed, "RNG seed")
            ->each([&](const std::string&) { common.seed_set = true; });
    };

    GenConfig gen;
    cfg_default(cj, "n", gen.n);
    cfg_default(cj, "K", gen.K);
    cfg_default(cj, "p", gen.p);
    cfg_default(cj, "omega", gen.omega);
    cfg_default(cj, "beta0", gen.beta0);
    cfg_default(cj, "beta_between", gen.beta_between);
    cfg_default(cj, "theta_variance", gen.theta_variance);

    McmcOpts mopts;
    cfg_default(cj, "preset", mopts.preset);
    cfg_default(cj, "chains", mopts.chains);
    cfg_default(cj, "burn_in", mopts.burn_in);
    cfg_default(cj, "iters", mopts.iters);
    cfg_default(cj, "thin", mopts.thin);

    auto add_mcmc = [&](CLI::App* sub) {
        sub->add_option("--preset", mopts.preset, "MCMC preset")
            ->check(CLI::IsMember({"paper", "desk"}));
        sub->add_option("--chains", mopts.chains, "number of chains");
        sub->add_option("--burn-in", mopts.burn_in, "burn-in sweeps");
        sub->add_option("--iters", mopts.iters, "post-burn-in sweeps");
        sub->add_option("--thin", mopts.thin, "thinning interval");
    };

    std::string edges, covariates, truth_path, fit_path;
    cfg_default(cj, "edges", edges);
    cfg_default(cj, "covariates", covariates);
    cfg_default(cj, "truth", truth_path);
    int K = gen.K, k_min = 2, k_max = 5, replicates = 10;
    cfg_default(cj, "k_min", k_min);
    cfg_default(cj, "k_max", k_max);
    cfg_default(cj, "replicates", replicates);
    bool write_draws = false;

    auto* g = app.add_subcommand("generate", "generate a synthetic network");
    add_common(g);
    g->add_option("--n", gen.n, "node count");
    g->add_option("--k", gen.K, "community count");
    g->add_option("--p", gen.p, "covariate dimension");
    g->add_option("--omega", gen.omega, "signal strength");
    g->add_option("--beta0", gen.beta0, "intercept");
    g->add_option("--theta-var", gen.theta_variance, "latent factor variance");

    auto* f = app.add_subcommand("fit", "fit the model for a fixed K");
    add_common(f);
    add_mcmc(f);
    f->add_option("--edges", edges, "edge-list CSV")->required();
    f->add_option("--covariates", covariates, "covariate CSV")->required();
    f->add_option("--k", K, "community count")->required();
    f->add_flag("--draws", write_draws, "also stream relabeled draws to CSV");

    auto* s = app.add_subcommand("select-k", "fit a range of K and pick by WAIC");
    add_common(s);
    add_mcmc(s);
    s->add_option("--edges", edges, "edge-list CSV")->required();
    s->add_option("--covariates", covariates, "covariate CSV")->required();
    s->add_option("--k-min", k_min, "smallest K");
    s->add_option("--k-max", k_max, "largest K");

    auto* e = app.add_subcommand("evaluate", "score clusterings against a known truth");
    add_common(e);
    e->add_option("--edges", edges, "edge-list CSV")->required();
    e->add_option("--covariates", covariates, "covariate CSV")->required();
    e->add_option("--truth", truth_path, "truth CSV")->required();
    e->add_option("--fit", fit_path, "fit report JSON with hard membership");
    e->add_option("--k", K, "community count")->required();

    auto* sim = app.add_subcommand("simulate", "replicate study: generate, fit, score");
    add_common(sim);
    add_mcmc(sim);
    sim->add_option("--n", gen.n, "node count");
    sim->add_option("--k", gen.K, "community count");
    sim->add_option("--omega", gen.omega, "signal strength");
    sim->add_option("--replicates", replicates, "replicate count");

    CLI11_PARSE(app, argc, argv);

    try {
        if (g->parsed()) {
            require_seed(common);
            return cmd_generate(common, gen);
        }
        if (f->parsed()) {
            require_seed(common);
            return cmd_fit(common, edges, covariates, K, mopts, write_draws);
        }
        if (s->parsed()) {
            require_seed(common);
            return cmd_select_k(common, edges, covariates, k_min, k_max, mopts);
        }
        if (e->parsed()) {
            require_seed(common);
            return cmd_evaluate(common, edges, covariates, truth_path, fit_path, K);
        }
        if (sim->parsed()) {
            require_seed(common);
            return cmd_simulate(common, gen, replicates, mopts);
        }
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return 1;
    }
    return 0;
}
