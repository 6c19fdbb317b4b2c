// thinlab run <config.json> [--out DIR] [--jobs N] [--strict]
//
// exit: 0 pass, 1 threshold failure, 2 config error, 3 numerical failure

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "thinlab/experiments.hpp"

namespace fs = std::filesystem;
using namespace thinlab;

namespace {

void write_file(const fs::path& p, const std::string& text)
{
    std::ofstream out(p, std::ios::binary);
    if (!out)
        throw Error(ErrorKind::Config, "cannot write " + p.string());
    out << text;
}

int run(const std::string& path, std::string out_dir, int jobs, bool strict)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorKind::Config, "cannot open config " + path);
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::Config, std::string("parse error: ") + e.what());
    }
    const ExperimentConfig cfg = parse_config(j);

    if (out_dir.empty()) {
        const char* env = std::getenv("THINLAB_OUT");
        out_dir = env && *env ? env : cfg.output;
    }
    const fs::path dir = fs::path(out_dir) / cfg.name;
    fs::create_directories(dir);

    Outcome o = run_experiment(cfg, jobs);
    for (std::size_t i = 0; i < o.runs.size(); ++i) {
        json r = o.runs[i].report;
        r["sigma"] = o.runs[i].sigma;
        r["index"] = i;
        json row = json::object();
        for (const auto& [k, v] : o.runs[i].row)
            row[k] = v;
        r["row"] = row;
        r["warnings"] = o.runs[i].warnings;
        char name[32];
        std::snprintf(name, sizeof name, "run_%02zu.json", i);
        write_file(dir / name, r.dump(2) + "\n");
    }
    write_file(dir / "aggregate.csv", aggregate_csv(o));
    json summary = o.summary;
    summary["strict"] = strict;
    write_file(dir / "summary.json", summary.dump(2) + "\n");

    std::cout << cfg.name << " (" << cfg.kind << "): " << o.runs.size() << " sub-runs -> " << dir.string() << "\n";
    for (const auto& f : o.failures)
        std::cout << "  FAIL " << f << "\n";
    for (const auto& w : o.warnings)
        std::cout << "  warn " << w << "\n";
    if (!o.passed)
        return 1;
    if (strict && !o.warnings.empty())
        return 1;
    std::cout << "  pass\n";
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"thin crescent Schauder laboratory"};
    app.require_subcommand(1);
    auto* sub = app.add_subcommand("run", "run an experiment config");
    std::string config, out;
    int jobs = 1;
    bool strict = false;
    sub->add_option("config", config, "experiment config (JSON)")->required();
    sub->add_option("--out", out, "output directory (default: THINLAB_OUT, then the config's output)");
    sub->add_option("--jobs", jobs, "worker threads for sub-runs")->check(CLI::PositiveNumber);
    sub->add_flag("--strict", strict, "treat validation warnings as failures");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    try {
        return run(config, out, jobs, strict);
    } catch (const Error& e) {
        std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
        return e.kind() == ErrorKind::Config ? 2 : 3;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
