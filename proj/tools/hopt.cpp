// hopt: run law suites from the command line or from .hopt programs.

#include "hopt/runner.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::optional<std::string> slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        return std::nullopt;
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct Options {
    hopt::RunConfig config;
    std::optional<std::uint64_t> seed;
    std::string replay;
};

void add_common(CLI::App* app, Options& o)
{
    app->add_option("--max-size", o.config.max_size, "largest atom carrier in suite inventories")
        ->check(CLI::PositiveNumber);
    app->add_option("--depth", o.config.depth, "closure depth, and layers of the default tower")
        ->check(CLI::PositiveNumber);
    app->add_option("--seed", o.seed, "sampling seed (falls back to HOPT_SEED, then 0)");
    app->add_option("--samples", o.config.samples, "MATQ samples per hom-set")->check(CLI::PositiveNumber);
    app->add_option("--per-carrier", o.config.per_carrier, "Karoubi idempotents per carrier")
        ->check(CLI::PositiveNumber);
    app->add_option("--format", o.config.format, "report format")->check(CLI::IsMember({"json", "text"}));
    app->add_flag("--strict-bounds", o.config.strict_bounds, "treat skipped cases as failures (exit 3)");
    app->add_option("--replay", o.replay, "rerun violation CASE of a JSON report: FILE#CASE");
    app->add_flag("--timing", o.config.timing, "record elapsed_ms (breaks byte-identical reports)");
    app->add_option("--jobs", o.config.jobs, "check statements run in parallel")->check(CLI::PositiveNumber);
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag)
{
    if (flag)
        return *flag;
    if (const char* env = std::getenv("HOPT_SEED")) {
        try {
            return std::stoull(env);
        } catch (const std::exception&) {
            std::cerr << "hopt: ignoring non-numeric HOPT_SEED\n";
        }
    }
    return 0;
}

int emit(const hopt::RunResult& r, const hopt::RunConfig& config, const std::string& source)
{
    if (r.fatal)
        std::cerr << "hopt: " << *r.fatal << "\n";
    std::cout << (config.format == "text" ? hopt::report_text(r, config) : hopt::report_json(r, config, source));
    return r.exit_code;
}

int replay(const Options& o)
{
    const auto hash = o.replay.rfind('#');
    if (hash == std::string::npos) {
        std::cerr << "hopt: --replay expects FILE#CASE\n";
        return hopt::kExitParse;
    }
    const auto text = slurp(o.replay.substr(0, hash));
    if (!text) {
        std::cerr << "hopt: cannot read " << o.replay.substr(0, hash) << "\n";
        return hopt::kExitParse;
    }
    hopt::ReplayRequest req;
    try {
        req = hopt::load_replay(*text, std::stoull(o.replay.substr(hash + 1)));
    } catch (const std::exception& e) {
        std::cerr << "hopt: " << e.what() << "\n";
        return hopt::kExitParse;
    }
    req.config.format = o.config.format;
    req.config.timing = o.config.timing;
    const auto r = hopt::run_source(req.source, req.config, req.target);
    bool reproduced = false;
    for (const auto& s : r.suites)
        for (const auto& v : s.report.violations)
            if (v.law == req.target.law && v.instance == req.target.instance && v.lhs == req.lhs && v.rhs == req.rhs)
                reproduced = true;
    std::cerr << "hopt: replay " << req.target.law << " at " << req.target.instance << ": "
              << (reproduced ? "reproduced" : "NOT reproduced") << "\n";
    return emit(r, req.config, req.source);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"hopt: higher-order process theories over finite models"};
    app.require_subcommand(1);

    Options check_opts;
    std::string suite;
    auto* check = app.add_subcommand("check", "run one suite on a standard model");
    check->add_option("--model", check_opts.config.model, "finset, finrel, matq or finset_corrupt")
        ->check(CLI::IsMember({"finset", "finrel", "matq", "finset_corrupt"}));
    check->add_option("--suite", suite, "enriched, insertion, faithful, linked, closed, pm, karoubi, combs, tower, causlite");
    add_common(check, check_opts);

    Options file_opts;
    std::string file;
    auto* eval_file = app.add_subcommand("eval-file", "run the check statements of a .hopt program");
    eval_file->add_option("file", file, ".hopt source");
    add_common(eval_file, file_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : hopt::kExitParse;
    }

    Options& o = check->parsed() ? check_opts : file_opts;
    o.config.seed = resolve_seed(o.seed);
    if (!o.replay.empty())
        return replay(o);

    std::string source;
    if (check->parsed()) {
        if (suite.empty()) {
            std::cerr << "hopt: check needs --suite (or --replay)\n";
            return hopt::kExitParse;
        }
        source = "model " + o.config.model + ";\ncheck " + suite + ";\n";
    } else {
        if (file.empty()) {
            std::cerr << "hopt: eval-file needs a file (or --replay)\n";
            return hopt::kExitParse;
        }
        const auto text = slurp(file);
        if (!text) {
            std::cerr << "hopt: cannot read " << file << "\n";
            return hopt::kExitParse;
        }
        source = *text;
    }
    return emit(hopt::run_source(source, o.config), o.config, source);
}
