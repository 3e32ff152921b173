#include "calf/io.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "calf/similarity.hpp"

namespace calf::io {

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

std::string trim(std::string s) {
    auto issp = [](unsigned char c) { return std::isspace(c); };
    while (!s.empty() && issp(s.front())) s.erase(s.begin());
    while (!s.empty() && issp(s.back())) s.pop_back();
    return s;
}

bool parse_double(const std::string& s, double& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtod(t.c_str(), &end);
    return end == t.c_str() + t.size();
}

bool parse_int(const std::string& s, long& out) {
    const std::string t = trim(s);
    if (t.empty()) return false;
    char* end = nullptr;
    out = std::strtol(t.c_str(), &end, 10);
    return end == t.c_str() + t.size();
}

std::ofstream open_out(const std::string& path) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    return f;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open: " + path);
    return f;
}

}  // namespace

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void save_edge_list(const std::string& path, const Network& net) {
    auto f = open_out(path);
    f << "i,j\n";
    for (int i = 0; i < net.n; ++i)
        for (int j = i + 1; j < net.n; ++j)
            if (net.at(i, j)) f << i << ',' << j << '\n';
}

Network load_network(const std::string& path, int n_hint, bool require_mutual) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty edge list: " + path);
    // header optional: skip if first line is not numeric
    std::vector<std::pair<int, int>> raw;
    long a, b;
    {
        const auto fields = split_csv(line);
        if (fields.size() == 2 && parse_int(fields[0], a) && parse_int(fields[1], b))
            raw.emplace_back(int(a), int(b));
    }
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2 || !parse_int(fields[0], a) || !parse_int(fields[1], b))
            throw std::runtime_error(path + ": malformed row " + std::to_string(lineno));
        raw.emplace_back(int(a), int(b));
    }
    int n = n_hint;
    for (auto [i, j] : raw) {
        if (i < 0 || j < 0) throw std::runtime_error(path + ": negative node index");
        if (i == j)
            throw std::runtime_error(path + ": self-loop at node " + std::to_string(i));
        n = std::max(n, std::max(i, j) + 1);
    }
    if (n_hint >= 0)
        for (auto [i, j] : raw)
            if (i >= n_hint || j >= n_hint)
                throw std::runtime_error(path + ": node index out of range");
    if (n <= 0) throw std::runtime_error(path + ": no nodes");

    Network net(n);
    if (require_mutual) {
        std::set<std::pair<int, int>> directed(raw.begin(), raw.end());
        for (auto [i, j] : directed)
            if (i < j && directed.count({j, i})) net.set_edge(i, j, true);
    } else {
        for (auto [i, j] : raw) net.set_edge(std::min(i, j), std::max(i, j), true);
    }
    return net;
}

CovariateTable load_covariates(const std::string& path) {
    auto f = open_in(path);
    std::string line;
    if (!std::getline(f, line)) throw std::runtime_error("empty covariate file: " + path);
    CovariateTable t;
    const auto header = split_csv(line);
    const int p = int(header.size());
    std::vector<int> slot(p);  // index into the per-kind column arrays
    std::vector<std::unordered_map<std::string, int>> levels;
    for (int c = 0; c < p; ++c) {
        std::string name = trim(header[c]);
        ColumnKind kind = ColumnKind::numeric;
        if (name.rfind("cat:", 0) == 0) {
            kind = ColumnKind::categorical;
            name = name.substr(4);
        } else if (name.rfind("num:", 0) == 0) {
            name = name.substr(4);
        }
        t.names.push_back(name);
        t.kinds.push_back(kind);
        if (kind == ColumnKind::numeric) {
            slot[c] = int(t.numeric_cols.size());
            t.numeric_cols.emplace_back();
        } else {
            slot[c] = int(t.categorical_cols.size());
            t.categorical_cols.emplace_back();
            levels.emplace_back();
        }
    }
    int lineno = 1;
    while (std::getline(f, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (int(fields.size()) != p)
            throw std::runtime_error(path + ": row " + std::to_string(lineno) +
                                     " has " + std::to_string(fields.size()) +
                                     " fields, expected " + std::to_string(p));
        for (int c = 0; c < p; ++c) {
            if (trim(fields[c]).empty())
                throw std::runtime_error(path + ": missing cell at row " +
                                         std::to_string(lineno) + ", column " +
                                         t.names[c]);
            if (t.kinds[c] == ColumnKind::numeric) {
                double v;
                if (!parse_double(fields[c], v))
                    throw std::runtime_error(path + ": non-numeric value at row " +
                                             std::to_string(lineno) + ", column " +
                                             t.names[c]);
                t.numeric_cols[slot[c]].push_back(v);
            } else {
                auto& lv = levels[slot[c]];
                const auto [it, ins] = lv.try_emplace(trim(fields[c]), int(lv.size()));
                t.categorical_cols[slot[c]].push_back(it->second);
            }
        }
        ++t.n;
    }
    return t;
}

NodeData node_data_from_table(const CovariateTable& table) {
    const int n = table.n;
    if (n == 0) throw std::runtime_error("covariate table is empty");
    const int pn = table.num_numeric();
    const int pc = table.num_categorical();

    std::vector<double> Xnum(std::size_t(n) * std::max(pn, 0));
    for (int c = 0; c < pn; ++c)
        for (int i = 0; i < n; ++i) Xnum[std::size_t(i) * pn + c] = table.numeric_cols[c][i];
    std::vector<int> Xcat(std::size_t(n) * std::max(pc, 0));
    for (int c = 0; c < pc; ++c)
        for (int i = 0; i < n; ++i) Xcat[std::size_t(i) * pc + c] = table.categorical_cols[c][i];

    if (pn > 0 && pc == 0) {
        auto S = euclidean_similarity(Xnum, n, pn);
        return make_node_data(std::move(Xnum), n, pn, std::move(S),
                              SimilarityKind::euclidean);
    }
    if (pc > 0 && pn == 0) {
        auto S = match_average_similarity(Xcat, n, pc);
        std::vector<double> Xas(Xcat.begin(), Xcat.end());
        return make_node_data(std::move(Xas), n, pc, std::move(S),
                              SimilarityKind::match_average);
    }
    if (pn > 0 && pc > 0) {
        std::vector<std::vector<double>> comps;
        comps.push_back(euclidean_similarity(Xnum, n, pn));
        comps.push_back(match_average_similarity(Xcat, n, pc));
        auto S = combined_scaled_similarity(comps, n);
        std::vector<double> X(std::size_t(n) * (pn + pc));
        for (int i = 0; i < n; ++i) {
            for (int c = 0; c < pn; ++c) X[std::size_t(i) * (pn + pc) + c] = Xnum[std::size_t(i) * pn + c];
            for (int c = 0; c < pc; ++c)
                X[std::size_t(i) * (pn + pc) + pn + c] = Xcat[std::size_t(i) * pc + c];
        }
        return make_node_data(std::move(X), n, pn + pc, std::move(S),
                              SimilarityKind::combined_scaled);
    }
    throw std::runtime_error("covariate table has no columns");
}

void save_covariates(const std::string& path, const NodeData& nd) {
    auto f = open_out(path);
    for (int c = 0; c < nd.p; ++c) f << (c ? "," : "") << "num:x" << (c + 1);
    f << '\n';
    for (int i = 0; i < nd.n; ++i) {
        for (int c = 0; c < nd.p; ++c) f << (c ? "," : "") << format_double(nd.x(i, c));
        f << '\n';
    }
}

void save_truth(const std::string& path, const std::vector<int>& membership,
                const std::vector<double>& theta) {
    auto f = open_out(path);
    f << "membership,theta\n";
    for (std::size_t i = 0; i < membership.size(); ++i)
        f << (membership[i] + 1) << ',' << format_double(theta[i]) << '\n';
}

void load_truth(const std::string& path, std::vector<int>& membership,
                std::vector<double>& theta) {
    auto f = open_in(path);
    std::string line;
    std::getline(f, line);  // header
    membership.clear();
    theta.clear();
    while (std::getline(f, line)) {
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        long lab;
        double th;
        if (fields.size() != 2 || !parse_int(fields[0], lab) || !parse_double(fields[1], th))
            throw std::runtime_error(path + ": malformed truth row");
        membership.push_back(int(lab) - 1);
        theta.push_back(th);
    }
}

void save_config_echo(const std::string& path,
                      const std::map<std::string, std::string>& kv) {
    auto f = open_out(path);
    for (const auto& [k, v] : kv) f << k << " = " << v << '\n';
}

void save_draws_csv(const std::string& path, std::span<const ChainDraws> chains) {
    auto f = open_out(path);
    if (chains.empty() || chains[0].states.empty())
        throw std::invalid_argument("no draws to write");
    const auto& first = chains[0].states[0];
    const int K = first.K;
    const int tri = BlockCoefficients::tri_size(K);
    const int n = first.n();
    f << "chain,draw,beta0";
    for (int k = 0; k < K; ++k)
        for (int l = k; l < K; ++l) f << ",beta_" << (k + 1) << '_' << (l + 1);
    f << ",sigma2";
    for (int i = 0; i < n; ++i) f << ",theta_" << i;
    for (int i = 0; i < n; ++i) f << ",z_" << i;
    f << '\n';
    for (std::size_t c = 0; c < chains.size(); ++c) {
        for (std::size_t s = 0; s < chains[c].states.size(); ++s) {
            const auto& st = chains[c].states[s];
            f << c << ',' << s << ',' << format_double(st.coefficients.beta0);
            for (int t = 0; t < tri; ++t) f << ',' << format_double(st.coefficients.upper[t]);
            f << ',' << format_double(st.sigma2);
            for (int i = 0; i < n; ++i) f << ',' << format_double(st.theta[i]);
            for (int i = 0; i < n; ++i) f << ',' << (st.membership[i] + 1);
            f << '\n';
        }
    }
}

namespace {

nlohmann::json scalar_json(const ScalarSummary& s) {
    nlohmann::json j;
    j["mean"] = s.mean;
    j["median"] = s.median;
    j["ci95"] = {s.lower, s.upper};
    if (std::isfinite(s.rhat)) j["rhat"] = s.rhat;
    return j;
}

}  // namespace

std::string fit_report_to_json(const FitReport& rep) {
    nlohmann::json j;
    j["K"] = rep.K;
    j["n_chains"] = rep.n_chains;
    j["draws_per_chain"] = rep.draws_per_chain;
    j["beta0"] = scalar_json(rep.beta0);
    j["beta_upper"] = nlohmann::json::array();
    for (const auto& s : rep.beta_upper) j["beta_upper"].push_back(scalar_json(s));
    j["sigma2"] = scalar_json(rep.sigma2);
    j["sigma_mean"] = rep.sigma_mean;
    j["theta_mean"] = rep.theta_mean;
    j["theta_ci95_lower"] = rep.theta_lower;
    j["theta_ci95_upper"] = rep.theta_upper;
    nlohmann::json labels = nlohmann::json::array();
    for (int lab : rep.hard_labels) labels.push_back(lab + 1);  // 1-based in reports
    j["hard_membership"] = labels;
    j["waic"] = {{"lppd", rep.waic.lppd},
                 {"p_waic", rep.waic.p_waic},
                 {"waic", rep.waic.waic}};
    j["accept_rate_beta"] = rep.accept_rate_beta;
    j["accept_rate_theta"] = rep.accept_rate_theta;
    return j.dump(2);
}

void save_fit_report(const std::string& path, const FitReport& rep) {
    auto f = open_out(path);
    f << fit_report_to_json(rep) << '\n';
}

}  // namespace calf::io
