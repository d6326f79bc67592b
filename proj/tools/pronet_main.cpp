#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pronet/builtin_scenarios.hpp"
#include "pronet/metrics.hpp"
#include "pronet/scenario.hpp"
#include "pronet/simulation.hpp"

namespace fs = std::filesystem;
using namespace pronet;

namespace {

int logLevel() {
    const char* v = std::getenv("PRONET_LOG");
    if (!v) return 1;
    std::string s(v);
    if (s == "quiet" || s == "0") return 0;
    if (s == "debug" || s == "2") return 2;
    return 1;
}

void write_file(const fs::path& p, const std::string& text) {
    std::ofstream out(p);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

// Runs a parsed scenario, writes CSVs, evaluates expectations.
// Returns the number of failed expectations.
int run_and_report(const Scenario& sc, const std::string& outDir) {
    fs::create_directories(outDir);
    MetricsLog log = run_scenario(sc);
    write_file(fs::path(outDir) / "metrics.csv", log.metricsCsv());
    write_file(fs::path(outDir) / "fct.csv", log.fctCsv());
    write_file(fs::path(outDir) / "coordinator.csv", log.coordinatorCsv());
    int failed = 0;
    for (const auto& e : sc.expects) {
        CheckResult r = evaluate_check(log, e.raw);
        if (!r.pass) ++failed;
        if (logLevel() >= 1)
            std::cout << (r.pass ? "PASS " : "FAIL ") << r.kind
                      << " measured=" << r.measured << "  " << r.detail << "\n";
    }
    if (logLevel() >= 1) {
        std::cout << sc.name << ": " << (sc.expects.size() - failed) << "/"
                  << sc.expects.size() << " checks passed, output in " << outDir
                  << "\n";
    }
    return failed;
}

BandwidthFunction load_bf(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open BF file: " + path);
    nlohmann::json j;
    try {
        in >> j;
        std::vector<BfPoint> pts;
        for (const auto& p : j.at("breakpoints"))
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        return BandwidthFunction(pts);
    } catch (const std::exception& e) {
        throw std::runtime_error("malformed BF file " + path + ": " + e.what());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ProNet protocol library and network simulator"};
    app.require_subcommand(1);

    // run ------------------------------------------------------------
    std::string scenarioPath, outDir = "out";
    std::vector<std::string> overrides;
    long long seedOverride = -1;
    auto* run = app.add_subcommand("run", "run a scenario file");
    run->add_option("scenario", scenarioPath, "scenario JSON file")->required();
    run->add_option("--out", outDir, "output directory");
    run->add_option("--seed", seedOverride, "override the scenario seed");
    run->add_option("--set", overrides, "override, e.g. pronet.alpha=0.0");

    // reproduce -------------------------------------------------------
    std::string figureId, repOut = "out";
    long long repSeed = -1;
    auto* rep = app.add_subcommand("reproduce", "run a bundled experiment");
    rep->add_option("figure", figureId, "one of fig7 fig8 fig9 fig10a fig10b fig12 fig13")
        ->required();
    rep->add_option("--out", repOut, "output directory");
    rep->add_option("--seed", repSeed, "override the scenario seed");
    bool repDump = false;
    rep->add_flag("--dump", repDump, "print the scenario JSON and exit");

    // bf ---------------------------------------------------------------
    std::string bfOp;
    std::vector<std::string> bfArgs;
    auto* bf = app.add_subcommand("bf", "bandwidth-function utilities");
    bf->add_option("op", bfOp, "aggregate | eval | inverse")->required();
    bf->add_option("args", bfArgs, "operation arguments");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            std::ifstream in(scenarioPath);
            if (!in) throw std::runtime_error("cannot open " + scenarioPath);
            std::stringstream ss;
            ss << in.rdbuf();
            std::string text = ss.str();
            if (seedOverride >= 0)
                overrides.push_back("seed=" + std::to_string(seedOverride));
            if (!overrides.empty()) text = apply_overrides(text, overrides);
            return run_and_report(parse_scenario(text), outDir) == 0 ? 0 : 1;
        }
        if (*rep) {
            std::string text = builtin_scenario(figureId);
            if (repDump) {
                std::cout << text << "\n";
                return 0;
            }
            if (repSeed >= 0)
                text = apply_overrides(text, {"seed=" + std::to_string(repSeed)});
            return run_and_report(parse_scenario(text),
                                  (fs::path(repOut) / figureId).string()) == 0
                       ? 0
                       : 1;
        }
        // bf
        if (bfOp == "eval" || bfOp == "inverse") {
            if (bfArgs.size() != 2)
                throw std::runtime_error("usage: pronet bf " + bfOp + " FILE VALUE");
            auto fn = load_bf(bfArgs[0]);
            double v = std::stod(bfArgs[1]);
            std::cout.precision(12);
            std::cout << (bfOp == "eval" ? fn.eval(v) : fn.inverse(v)) << "\n";
            return 0;
        }
        if (bfOp == "aggregate") {
            if (bfArgs.size() < 2)
                throw std::runtime_error(
                    "usage: pronet bf aggregate TENANT.bf FLOW.bf [FLOW.bf ...]");
            BandwidthFunction tenant = load_bf(bfArgs[0]);
            std::vector<BandwidthFunction> flows;
            for (size_t i = 1; i < bfArgs.size(); ++i)
                flows.push_back(load_bf(bfArgs[i]));
            auto aggs = bf_aggregate(flows, tenant);
            double worst = 0;
            for (int i = 0; i <= 1000; ++i) {
                double s = tenant.maxFairShare() * i / 1000.0;
                double sum = 0;
                for (const auto& a : aggs) sum += a.eval(s);
                double want = tenant.eval(s);
                worst = std::max(worst, std::abs(sum - want) /
                                            std::max({sum, want, 1e-9}));
            }
            for (size_t i = 0; i < aggs.size(); ++i) {
                std::string path = bfArgs[i + 1] + ".agg";
                write_file(path, bf_to_json(aggs[i]) + "\n");
                if (logLevel() >= 1) std::cout << "wrote " << path << "\n";
            }
            std::cout << "max residual " << worst << "\n";
            return 0;
        }
        throw std::runtime_error("unknown bf op: " + bfOp);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
