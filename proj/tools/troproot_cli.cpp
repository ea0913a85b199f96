#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "troproot/network.hpp"
#include "troproot/report.hpp"
#include "troproot/tropfan.hpp"
#include "troproot/vsys.hpp"

using namespace troproot;
using nlohmann::json;

namespace {

constexpr int kExitError = 1;
constexpr int kExitInput = 2;
constexpr int kExitBudget = 3;

struct Config {
    std::string system_path;
    std::string network_path;
    std::string family;
    std::size_t k = 0;
    std::size_t k_max = 0;
    std::uint64_t seed = 0;
    bool seed_given = false;
    std::size_t attempts = 32;
    std::string strategy = "auto";
    bool json_out = false;
    std::string dump_fan;
    unsigned threads = 0;
    std::string exponent_matrix;
    std::string witness_b;
    std::string witness_h;
    bool separate = false;
    std::string search = "circuits";
    std::size_t flag_budget = kDefaultFlagBudget;
    std::size_t max_retries = 8;
    std::size_t node_budget = 1000000;
};

struct Input {
    VerticalSystem sys;
    std::string label;
    json raw;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Input load_input(const Config& cfg) {
    int given = !cfg.system_path.empty() + !cfg.network_path.empty() + !cfg.family.empty();
    if (given != 1) throw ParseError("give exactly one of --system, --network, --family");
    Input in;
    if (!cfg.family.empty()) {
        if (cfg.family != "ksite") throw ParseError("unknown family '" + cfg.family + "'");
        if (cfg.k == 0) throw ParseError("--family ksite needs --k or --k-max");
        in.sys = steady_state_system(k_site_network(cfg.k)).sys;
        in.label = "ksite:" + std::to_string(cfg.k);
        return in;
    }
    if (!cfg.network_path.empty()) {
        in.sys = steady_state_system(parse_network(read_file(cfg.network_path))).sys;
        in.label = cfg.network_path;
        return in;
    }
    std::string text = read_file(cfg.system_path);
    in.label = cfg.system_path;
    in.raw = json::parse(text, nullptr, false);
    if (!in.raw.is_discarded() && in.raw.is_object() && in.raw.contains("network")) {
        if (!in.raw["network"].is_string()) throw ParseError("\"network\" must be a string");
        in.sys = steady_state_system(parse_network(in.raw["network"].get<std::string>())).sys;
        return in;
    }
    in.sys = parse_system_json(text);
    return in;
}

IntMatrix parse_int_matrix(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array()) throw ParseError("exponent matrix must be a list of rows");
    IntMatrix a(j.size(), j[0].size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_array() || j[i].size() != a.cols()) throw ParseError("exponent matrix rows differ in length");
        for (std::size_t k = 0; k < a.cols(); ++k) {
            if (!j[i][k].is_number_integer()) throw ParseError("exponent matrix entries must be integers");
            a(i, k) = j[i][k].get<long>();
        }
    }
    return a;
}

IntMatrix exponent_matrix(const Config& cfg, const Input& in) {
    if (cfg.exponent_matrix.empty()) {
        if (in.raw.is_object() && in.raw.contains("A")) return parse_int_matrix(in.raw["A"]);
        throw ParseError("toric needs --exponent-matrix or an \"A\" entry in the system file");
    }
    std::string text = std::filesystem::exists(cfg.exponent_matrix) ? read_file(cfg.exponent_matrix) : cfg.exponent_matrix;
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError("exponent matrix is not valid JSON");
    if (j.is_object() && j.contains("A")) return parse_int_matrix(j["A"]);
    return parse_int_matrix(j);
}

RatVec parse_rat_list(const std::string& text) {
    RatVec out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            Rat v(tok);
            v.canonicalize();
            out.push_back(v);
        } catch (const std::invalid_argument&) {
            throw ParseError("bad rational '" + tok + "'");
        }
    }
    return out;
}

RatVec rat_list(const json& j) {
    RatVec out;
    for (const auto& v : j) out.emplace_back(v.is_string() ? v.get<std::string>() : std::to_string(v.get<long>()));
    for (auto& v : out) v.canonicalize();
    return out;
}

VsysOptions make_options(const Config& cfg) {
    VsysOptions o;
    o.flag_budget = cfg.flag_budget;
    o.max_retries = cfg.max_retries;
    o.node_budget = cfg.node_budget;
    o.separate_parameters = cfg.separate;
    o.search = cfg.search == "flags" ? IntersectSearch::Flags : IntersectSearch::Circuits;
    if (const char* env = std::getenv("TROPROOT_BUDGET")) {
        std::size_t b = 0;
        try {
            b = std::stoull(env);
        } catch (const std::exception&) {
            throw ParseError(std::string("TROPROOT_BUDGET is not a number: ") + env);
        }
        o.flag_budget = o.node_budget = o.cotransversal_budget = o.mv_node_budget = o.minor_budget = b;
    }
    return o;
}

json budgets_json(const VsysOptions& o) {
    return {{"flag_budget", o.flag_budget},   {"node_budget", o.node_budget},
            {"max_retries", o.max_retries},   {"cotransversal_budget", o.cotransversal_budget},
            {"mv_node_budget", o.mv_node_budget}, {"minor_budget", o.minor_budget}};
}

void emit(const Config& cfg, const json& j, const std::string& text) {
    if (cfg.json_out)
        std::cout << j.dump(2) << "\n";
    else
        std::cout << text;
}

void dump_fan(const Config& cfg, const VerticalSystem& sys, const json& cert, const VsysOptions& opts) {
    if (cfg.dump_fan.empty()) return;
    const json* src = &cert;
    if (cert.contains("witness")) src = &cert["witness"];
    RatVec a = src->contains("a") ? rat_list((*src)["a"]) : RatVec(sys.m(), Rat(1));
    RatVec b;
    if (src->contains("b"))
        b = rat_list((*src)["b"]);
    else if (cert.contains("linear_part"))
        b = rat_list(cert["linear_part"]["b"]);
    if (a.size() != sys.m() || b.size() != sys.d()) {
        std::cerr << "warning: no reembedding in the certificate, fan not written\n";
        return;
    }
    std::ofstream out(cfg.dump_fan);
    if (!out) throw Error("cannot write " + cfg.dump_fan);
    out << fan_to_json(reembedded_fan(sys, a, b, opts)) << "\n";
}

RootCountReport run_count(const Config& cfg, const VerticalSystem& sys, std::mt19937_64& rng, const VsysOptions& o) {
    if (cfg.strategy == "auto") return auto_root_count(sys, rng, o);
    if (cfg.strategy == "stable") return grc_stable(sys, rng, o);
    if (cfg.strategy == "purely-vertical") return grc_purely_vertical(sys, rng, o);
    auto rep = try_cotransversal(sys, rng, o);
    if (!rep) throw Error("no cotransversal presentation found; try --strategy stable");
    return *rep;
}

int cmd_count(const Config& cfg, const ReportContext& ctx, const VsysOptions& o) {
    std::mt19937_64 rng(cfg.seed);
    if (cfg.k_max > 0) {
        if (cfg.family != "ksite") throw ParseError("--k-max needs --family ksite");
        std::vector<KSiteRow> rows;
        for (std::size_t k = 1; k <= cfg.k_max; ++k) {
            auto t0 = std::chrono::steady_clock::now();
            auto net = k_site_network(k);
            auto ss = steady_state_system(net);
            KSiteRow row;
            row.k = k;
            row.variables = ss.sys.n();
            row.parameters = ss.sys.m() + ss.sys.d();
            row.degree = run_count(cfg, ss.sys, rng, o);
            row.positive = positive_lower_bound(ss.sys, cfg.attempts, rng, o);
            row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            rows.push_back(row);
        }
        emit(cfg, ksite_json(rows, ctx), ksite_table(rows) + "seed: " + std::to_string(cfg.seed) + "\n");
        return 0;
    }
    Input in = load_input(cfg);
    ReportContext c = ctx;
    c.input = in.label;
    auto rep = run_count(cfg, in.sys, rng, o);
    dump_fan(cfg, in.sys, rep.certificate, o);
    emit(cfg, report_json(rep, c), report_text(rep, c));
    return 0;
}

int cmd_positive(const Config& cfg, const ReportContext& ctx, const VsysOptions& o) {
    Input in = load_input(cfg);
    ReportContext c = ctx;
    c.input = in.label;
    std::mt19937_64 rng(cfg.seed);
    auto rep = positive_lower_bound(in.sys, cfg.attempts, rng, o);
    dump_fan(cfg, in.sys, rep.certificate, o);
    emit(cfg, report_json(rep, c), report_text(rep, c));
    return 0;
}

int cmd_toric(const Config& cfg, const ReportContext& ctx, const VsysOptions& o) {
    Input in = load_input(cfg);
    ReportContext c = ctx;
    c.input = in.label;
    IntMatrix a = exponent_matrix(cfg, in);
    std::mt19937_64 rng(cfg.seed);
    auto tb = toric_bounds(in.sys, a, cfg.attempts, rng, o);
    json j = toric_report_json(tb, c);
    std::string text = toric_report_text(tb, c);
    if (!cfg.witness_b.empty() || !cfg.witness_h.empty()) {
        RatVec b = parse_rat_list(cfg.witness_b);
        RatVec h = parse_rat_list(cfg.witness_h);
        auto at = toric_lower_at(in.sys, a, b, h);
        json w = {{"b", cfg.witness_b}, {"h", cfg.witness_h}};
        if (at) {
            w["positive_points"] = *at;
            text += "positive points at the given witness: " + std::to_string(*at) + "\n";
        } else {
            w["positive_points"] = nullptr;
            text += "the given witness is not transverse\n";
        }
        j["given_witness"] = w;
    }
    emit(cfg, j, text);
    return 0;
}

int cmd_degree(const Config& cfg, const ReportContext& ctx, const VsysOptions& o) {
    Input in = load_input(cfg);
    ReportContext c = ctx;
    c.input = in.label;
    std::mt19937_64 rng(cfg.seed);
    auto rep = generic_degree(in.sys.cbar, in.sys.mbar, rng, o);
    emit(cfg, report_json(rep, c), report_text(rep, c));
    return 0;
}

void add_common(CLI::App* sub, Config& cfg) {
    sub->add_option("--system", cfg.system_path, "system JSON file (or a {\"network\": ...} envelope)");
    sub->add_option("--network", cfg.network_path, "reaction network text file");
    sub->add_option("--family", cfg.family, "built-in family, currently only ksite");
    sub->add_option("--k", cfg.k, "member of the family");
    sub->add_option("--seed", cfg.seed, "random seed, drawn when absent")->each([&](const std::string&) {
        cfg.seed_given = true;
    });
    sub->add_option("--attempts", cfg.attempts, "positive bound attempts");
    sub->add_flag("--json", cfg.json_out, "JSON output");
    sub->add_option("--threads", cfg.threads, "worker threads, 0 for all cores");
    sub->add_flag("--separate-parameters", cfg.separate, "one monomial column per parameter");
    sub->add_option("--search", cfg.search, "intersection search: circuits or flags")
        ->check(CLI::IsMember({"circuits", "flags"}));
    sub->add_option("--flag-budget", cfg.flag_budget, "cap on enumerated flags");
    sub->add_option("--max-retries", cfg.max_retries, "redraws of a non-generic shift");
    sub->add_option("--node-budget", cfg.node_budget, "cap on intersection search nodes");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generic and positive root counts of vertically parametrized systems"};
    app.require_subcommand(1);
    Config cfg;

    auto* count = app.add_subcommand("count", "generic root count");
    add_common(count, cfg);
    count->add_option("--strategy", cfg.strategy, "auto, stable, cotransversal or purely-vertical")
        ->check(CLI::IsMember({"auto", "stable", "cotransversal", "purely-vertical"}));
    count->add_option("--k-max", cfg.k_max, "summary table for k = 1..K of the family");
    count->add_option("--dump-fan", cfg.dump_fan, "write the tropical linear space as JSON");

    auto* positive = app.add_subcommand("positive", "lower bound on positive roots");
    add_common(positive, cfg);
    positive->add_option("--dump-fan", cfg.dump_fan, "write the best witness's tropical linear space");

    auto* toric = app.add_subcommand("toric", "toric root bounds");
    add_common(toric, cfg);
    toric->add_option("--exponent-matrix", cfg.exponent_matrix, "path or inline JSON; else \"A\" in the system file");
    toric->add_option("--witness-b", cfg.witness_b, "comma separated b for an explicit lower bound");
    toric->add_option("--witness-h", cfg.witness_h, "comma separated shift h for an explicit lower bound");

    auto* degree = app.add_subcommand("degree", "generic degree of the vertical part");
    add_common(degree, cfg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitInput;
    }

    if (!cfg.seed_given) cfg.seed = (std::uint64_t(std::random_device{}()) << 32) | std::random_device{}();
    if (cfg.k_max > 0 && cfg.k == 0) cfg.k = cfg.k_max;
    set_worker_threads(cfg.threads);

    ReportContext ctx;
    ctx.command = app.get_subcommands().front()->get_name();
    ctx.seed = cfg.seed;
    VsysOptions opts;
    try {
        opts = make_options(cfg);
        if (count->parsed()) return cmd_count(cfg, ctx, opts);
        if (positive->parsed()) return cmd_positive(cfg, ctx, opts);
        if (toric->parsed()) return cmd_toric(cfg, ctx, opts);
        return cmd_degree(cfg, ctx, opts);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const PreconditionError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const BudgetExceeded& e) {
        json partial = {{"strategy", cfg.strategy}, {"budgets", budgets_json(opts)}};
        if (cfg.json_out)
            std::cout << failure_json(e.what(), partial, ctx).dump(2) << "\n";
        else
            std::cout << "budget exhausted: " << e.what() << "\nseed: " << cfg.seed
                      << "\npartial certificate: " << partial.dump() << "\n";
        std::cerr << "error: " << e.what() << "\n";
        return kExitBudget;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
