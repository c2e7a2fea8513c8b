// Command-line front end: trap spaces, minimal trap spaces, marker
// reprogramming, network synthesis, QDIMACS export, oracle differential
// checks, and a benchmark harness.
//
// Exit codes: 0 answer produced (SAT where applicable), 10 UNSAT,
// 20 timeout/resource limit, 1 usage or input error.

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "mts/bn.hpp"
#include "mts/cegar.hpp"
#include "mts/oracle.hpp"
#include "mts/qdimacs.hpp"
#include "mts/subcube.hpp"
#include "mts/trapspace.hpp"

using json = nlohmann::json;
using namespace mts;

namespace {

constexpr int kExitAnswer = 0;
constexpr int kExitUnsat = 10;
constexpr int kExitTimeout = 20;
constexpr int kExitUsage = 1;

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

BooleanNetwork load_bnet(const std::string& path) {
    return BooleanNetwork::parse_bnet(read_file(path));
}

PartialAssignment parse_marker(const std::string& text,
                               const std::vector<std::string>& names) {
    json j = json::parse(text);
    if (!j.is_object())
        throw std::runtime_error("marker must be a JSON object");
    PartialAssignment m;
    for (auto& [name, value] : j.items()) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it == names.end())
            throw std::runtime_error("unknown component in marker: " + name);
        int b = value.get<int>();
        if (b != 0 && b != 1)
            throw std::runtime_error("marker values must be 0 or 1");
        m[static_cast<int>(it - names.begin())] = b != 0;
    }
    return m;
}

/// Lines `source -> target +|-`; node set and order from first mention.
std::pair<InfluenceGraph, std::vector<std::string>> load_graph(
    const std::string& path) {
    std::istringstream in(read_file(path));
    std::vector<std::string> names;
    auto index = [&](const std::string& name) {
        auto it = std::find(names.begin(), names.end(), name);
        if (it != names.end())
            return static_cast<int>(it - names.begin());
        names.push_back(name);
        return static_cast<int>(names.size()) - 1;
    };
    std::vector<std::tuple<int, int, bool>> edges;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string src, arrow, dst, sign;
        if (!(ls >> src))
            continue;  // blank line
        if (src[0] == '#')
            continue;
        if (!(ls >> arrow >> dst >> sign) || arrow != "->" ||
            (sign != "+" && sign != "-"))
            throw std::runtime_error("graph line " + std::to_string(lineno) +
                                     ": expected `source -> target +|-`");
        edges.emplace_back(index(src), index(dst), sign == "+");
    }
    InfluenceGraph g;
    g.n = static_cast<int>(names.size());
    for (auto& [s, d, pos] : edges)
        (pos ? g.pos_edges : g.neg_edges).insert({s, d});
    return {g, names};
}

Configuration parse_config(const std::string& text, int n) {
    if (static_cast<int>(text.size()) != n)
        throw std::runtime_error("configuration length mismatch");
    Configuration x(n);
    for (int i = 0; i < n; ++i) {
        if (text[i] != '0' && text[i] != '1')
            throw std::runtime_error("configuration must be over {0,1}");
        x[i] = text[i] == '1';
    }
    return x;
}

json perturbation_json(const PartialAssignment& p,
                       const std::vector<std::string>& names) {
    json out = json::object();
    for (const auto& [i, b] : p)
        out[names[i]] = b ? 1 : 0;
    return out;
}

json stats_json(const cegar::CegarStats& s, const char* status) {
    return json{{"status", status},
                {"counter_examples", s.counter_examples},
                {"refinements", s.refinements},
                {"candidate_solves", s.candidate_solves},
                {"ce_solves", s.ce_solves},
                {"time_ms", json{{"candidate", s.candidate_ms},
                                 {"counter_example", s.ce_ms}}}};
}

std::set<int> name_set_to_indices(const std::vector<std::string>& csv,
                                  const std::vector<std::string>& names) {
    std::set<int> out;
    for (const auto& entry : csv) {
        std::istringstream ss(entry);
        std::string name;
        while (std::getline(ss, name, ',')) {
            auto it = std::find(names.begin(), names.end(), name);
            if (it == names.end())
                throw std::runtime_error("unknown component: " + name);
            out.insert(static_cast<int>(it - names.begin()));
        }
    }
    return out;
}

int status_exit(cegar::Status st) {
    switch (st) {
        case cegar::Status::Sat: return kExitAnswer;
        case cegar::Status::Unsat: return kExitUnsat;
        default: return kExitTimeout;
    }
}

struct BenchRow {
    int index = 0;
    std::string network;
    std::string status = "error";
    double first_ms = 0, enum_ms = 0;
    int n_solutions = 0, n_counter_examples = 0;
    std::string message;
};

int run_bench(const std::string& manifest_path, int workers,
              const std::string& csv_path, const std::string& json_path) {
    json manifest = json::parse(read_file(manifest_path));
    if (!manifest.is_array())
        throw std::runtime_error("manifest must be a JSON array");
    std::vector<BenchRow> rows(manifest.size());

    std::atomic<size_t> next{0};
    auto worker = [&]() {
        while (true) {
            size_t idx = next.fetch_add(1);
            if (idx >= manifest.size())
                return;
            const json& item = manifest[idx];
            BenchRow& row = rows[idx];
            row.index = static_cast<int>(idx);
            try {
                row.network = item.at("network").get<std::string>();
                BooleanNetwork f = load_bnet(row.network);
                PartialAssignment m;
                if (item.contains("marker_file"))
                    m = parse_marker(
                        read_file(item["marker_file"].get<std::string>()),
                        f.names());
                else
                    m = parse_marker(item.at("marker").dump(), f.names());
                int k = item.at("k").get<int>();
                cegar::Options opts;
                opts.variant = static_cast<cegar::RefinementVariant>(
                    item.value("variant", 2));
                if (item.contains("timeout"))
                    opts.timeout = std::chrono::milliseconds(
                        static_cast<int64_t>(item["timeout"].get<double>() * 1000));
                opts.forbid_marker_nodes =
                    !item.value("allow_marker_nodes", false);

                auto first = cegar::solve_reprogramming(f, m, k, opts);
                row.first_ms =
                    first.stats.candidate_ms + first.stats.ce_ms;
                auto full = cegar::enumerate_reprogramming(f, m, k, opts);
                row.enum_ms = full.stats.candidate_ms + full.stats.ce_ms;
                row.n_solutions = static_cast<int>(full.solutions.size());
                row.n_counter_examples = full.stats.counter_examples;
                row.status = full.status == cegar::Status::Timeout
                                 ? "timeout"
                                 : "done";
            } catch (const std::exception& e) {
                row.status = "error";
                row.message = e.what();
            }
        }
    };
    std::vector<std::thread> pool;
    for (int w = 0; w < std::max(1, workers); ++w)
        pool.emplace_back(worker);
    for (auto& t : pool)
        t.join();

    json out = json::array();
    std::ostringstream csv;
    csv << "index,network,status,first_ms,enum_ms,n_solutions,"
           "n_counter_examples\n";
    for (const auto& r : rows) {
        out.push_back(json{{"index", r.index},
                           {"network", r.network},
                           {"status", r.status},
                           {"first_ms", r.first_ms},
                           {"enum_ms", r.enum_ms},
                           {"n_solutions", r.n_solutions},
                           {"n_counter_examples", r.n_counter_examples},
                           {"message", r.message}});
        csv << r.index << "," << r.network << "," << r.status << ","
            << r.first_ms << "," << r.enum_ms << "," << r.n_solutions << ","
            << r.n_counter_examples << "\n";
    }
    if (!csv_path.empty())
        std::ofstream(csv_path) << csv.str();
    if (!json_path.empty())
        std::ofstream(json_path) << out.dump(2) << "\n";
    std::cout << out.dump(2) << std::endl;
    return kExitAnswer;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"universal marker properties over minimal trap spaces"};
    app.require_subcommand(1);

    std::string bnet_path, config_text, marker_text, graph_path;
    std::string manifest_path, out_path, csv_path, json_path;
    std::vector<std::string> uncontrollable;
    int k = 0, variant = 2, clauses = 32;
    double timeout_s = 0;
    bool allow_marker_nodes = false, enumerate = false, first = false;
    std::string mode = "exact";

    auto* ts_cmd = app.add_subcommand("ts", "smallest trap space of a configuration");
    ts_cmd->add_option("bnet", bnet_path)->required();
    ts_cmd->add_option("config", config_text)->required();

    auto* mts_cmd = app.add_subcommand("mts", "enumerate minimal trap spaces");
    mts_cmd->add_option("bnet", bnet_path)->required();

    auto* rep = app.add_subcommand("reprogram",
                                   "perturbations making every minimal trap "
                                   "space match the marker");
    rep->add_option("bnet", bnet_path)->required();
    rep->add_option("--marker", marker_text, "JSON object name -> 0/1")->required();
    rep->add_option("--k", k, "max perturbation size")->required();
    rep->add_option("--variant", variant, "refinement variant 0|1|2 (default 2)");
    rep->add_option("--uncontrollable", uncontrollable,
                    "comma-separated component names");
    rep->add_flag("--allow-marker-nodes", allow_marker_nodes,
                  "permit perturbing marker components (default: denied)");
    rep->add_flag("--first", first, "stop at the first solution (default)");
    rep->add_flag("--enumerate", enumerate, "all subset-minimal solutions");
    rep->add_option("--timeout", timeout_s, "wall-clock limit in seconds");

    auto* syn = app.add_subcommand("synthesize",
                                   "network over a signed influence graph "
                                   "whose minimal trap spaces match the marker");
    syn->add_option("graph", graph_path, "lines `source -> target +|-`")->required();
    syn->add_option("--marker", marker_text)->required();
    syn->add_option("--mode", mode, "exact|subset (default exact)");
    syn->add_option("--clauses", clauses, "DNF clause budget (default 32)");
    syn->add_option("--variant", variant);
    syn->add_option("--timeout", timeout_s);

    auto* exp = app.add_subcommand("export-qdimacs",
                                   "emit the monolithic quantified formula");
    exp->add_option("bnet", bnet_path)->required();
    exp->add_option("--marker", marker_text)->required();
    exp->add_option("--k", k)->required();
    exp->add_option("--uncontrollable", uncontrollable);
    exp->add_flag("--allow-marker-nodes", allow_marker_nodes);
    exp->add_option("-o,--output", out_path, "file instead of stdout");

    auto* ora = app.add_subcommand("oracle-check",
                                   "differential run against the brute-force "
                                   "oracle");
    ora->add_option("bnet", bnet_path)->required();
    ora->add_option("--marker", marker_text);
    ora->add_option("--k", k);

    auto* bench = app.add_subcommand("bench", "batch harness over a manifest");
    bench->add_option("manifest", manifest_path)->required();
    int workers = 0;
    bench->add_option("--workers", workers,
                      "worker pool width (default: MTSOLVE_WORKERS or 1)");
    bench->add_option("--csv", csv_path, "CSV report path");
    bench->add_option("--json", json_path, "JSON report path");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ts_cmd) {
            BooleanNetwork f = load_bnet(bnet_path);
            Configuration x = parse_config(config_text, f.size());
            std::vector<Subcube> trace;
            Subcube h = ts_of(f, x, &trace);
            json jt = json::array();
            for (const auto& t : trace)
                jt.push_back(t.str());
            std::cout << json{{"trap_space", h.str()}, {"trace", jt}}.dump()
                      << std::endl;
            return kExitAnswer;
        }
        if (*mts_cmd) {
            BooleanNetwork f = load_bnet(bnet_path);
            auto cubes = enumerate_mts(f);
            std::sort(cubes.begin(), cubes.end());
            json out = json::array();
            for (const auto& c : cubes)
                out.push_back(c.str());
            std::cout << out.dump() << std::endl;
            return kExitAnswer;
        }
        if (*rep) {
            if (variant < 0 || variant > 2)
                throw std::runtime_error("variant must be 0, 1 or 2");
            BooleanNetwork f = load_bnet(bnet_path);
            PartialAssignment m = parse_marker(marker_text, f.names());
            cegar::Options opts;
            opts.variant = static_cast<cegar::RefinementVariant>(variant);
            opts.uncontrollable = name_set_to_indices(uncontrollable, f.names());
            opts.forbid_marker_nodes = !allow_marker_nodes;
            if (timeout_s > 0)
                opts.timeout = std::chrono::milliseconds(
                    static_cast<int64_t>(timeout_s * 1000));
            auto res = enumerate
                           ? cegar::enumerate_reprogramming(f, m, k, opts)
                           : cegar::solve_reprogramming(f, m, k, opts);
            json sols = json::array();
            for (const auto& p : res.solutions)
                sols.push_back(perturbation_json(p, f.names()));
            std::cout << json{{"solutions", sols},
                              {"stats", stats_json(res.stats,
                                                   cegar::status_name(res.status))}}
                             .dump()
                      << std::endl;
            return status_exit(res.status);
        }
        if (*syn) {
            if (mode != "exact" && mode != "subset")
                throw std::runtime_error("mode must be exact or subset");
            auto [g, names] = load_graph(graph_path);
            PartialAssignment m = parse_marker(marker_text, names);
            cegar::Options opts;
            opts.variant = static_cast<cegar::RefinementVariant>(variant);
            if (timeout_s > 0)
                opts.timeout = std::chrono::milliseconds(
                    static_cast<int64_t>(timeout_s * 1000));
            auto res = cegar::solve_synthesis(
                g, names,
                mode == "exact" ? enc::SynthMode::Exact : enc::SynthMode::Subset,
                clauses, m, opts);
            json out{{"stats", stats_json(res.stats,
                                          cegar::status_name(res.status))}};
            if (res.witness)
                out["network"] = res.witness->to_bnet();
            std::cout << out.dump() << std::endl;
            return status_exit(res.status);
        }
        if (*exp) {
            BooleanNetwork f = load_bnet(bnet_path);
            PartialAssignment m = parse_marker(marker_text, f.names());
            qbf::ExportOptions opts;
            opts.uncontrollable = name_set_to_indices(uncontrollable, f.names());
            opts.forbid_marker_nodes = !allow_marker_nodes;
            std::string text = qbf::to_text(
                qbf::build_reprogramming_qbf(f, m, k, opts));
            if (out_path.empty())
                std::cout << text;
            else
                std::ofstream(out_path) << text;
            return kExitAnswer;
        }
        if (*ora) {
            BooleanNetwork f = load_bnet(bnet_path);
            json report;
            auto a = enumerate_mts(f);
            auto b = oracle::brute_mts(f);
            std::sort(a.begin(), a.end());
            std::sort(b.begin(), b.end());
            bool ok = a == b;
            report["mts_agree"] = ok;
            bool ts_ok = true;
            for (uint32_t c = 0; c < (uint32_t(1) << f.size()); ++c) {
                Configuration x(f.size());
                for (int i = 0; i < f.size(); ++i)
                    x[i] = (c >> i) & 1;
                if (!(ts_of(f, x) == oracle::brute_ts(f, x))) {
                    ts_ok = false;
                    break;
                }
            }
            report["ts_agree"] = ts_ok;
            ok = ok && ts_ok;
            if (!marker_text.empty()) {
                PartialAssignment m = parse_marker(marker_text, f.names());
                auto want = oracle::brute_reprogramming(f, m, k);
                auto got = cegar::enumerate_reprogramming(f, m, k).solutions;
                std::sort(want.begin(), want.end());
                std::sort(got.begin(), got.end());
                report["reprogramming_agree"] = got == want;
                ok = ok && got == want;
            }
            std::cout << report.dump() << std::endl;
            return ok ? kExitAnswer : kExitUsage;
        }
        if (*bench) {
            if (workers <= 0) {
                if (const char* env = std::getenv("MTSOLVE_WORKERS"))
                    workers = std::atoi(env);
                if (workers <= 0)
                    workers = 1;
            }
            return run_bench(manifest_path, workers, csv_path, json_path);
        }
    } catch (const std::exception& e) {
        std::cerr << json{{"error", e.what()}}.dump() << std::endl;
        return kExitUsage;
    }
    return kExitUsage;
}
