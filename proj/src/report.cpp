#include "hopt/runner.hpp"

#include <json.hpp>

#include <sstream>

namespace hopt {

using ordered_json = nlohmann::ordered_json;

namespace {

ordered_json config_json(const RunConfig& c, const std::string& source)
{
    ordered_json j;
    j["max_size"] = c.max_size;
    j["samples"] = c.samples;
    j["depth"] = c.depth;
    j["per_carrier"] = c.per_carrier;
    j["strict_bounds"] = c.strict_bounds;
    j["model"] = c.model;
    j["program"] = source;
    return j;
}

ordered_json suite_json(const SuiteResult& s, bool timing)
{
    const LawReport& r = s.report;
    ordered_json j;
    j["statement"] = s.statement;
    j["source"] = s.source;
    j["suite"] = r.suite;
    j["model"] = r.model;
    ordered_json bounds = ordered_json::object();
    for (const auto& [k, v] : r.bounds)
        bounds[k] = v;
    j["bounds"] = bounds;
    j["cases_total"] = r.cases_total;
    j["cases_failed"] = r.cases_failed;
    j["cases_skipped"] = r.cases_skipped;
    ordered_json violations = ordered_json::array();
    for (const auto& v : r.violations) {
        ordered_json x;
        x["law"] = v.law;
        x["instance"] = v.instance;
        x["lhs"] = v.lhs;
        x["rhs"] = v.rhs;
        if (!v.trace.empty())
            x["trace"] = v.trace;
        violations.push_back(std::move(x));
    }
    j["violations"] = violations;
    if (!r.traces.empty()) {
        ordered_json traces = ordered_json::array();
        for (const auto& [inst, t] : r.traces)
            traces.push_back({{"instance", inst}, {"trace", t}});
        j["traces"] = traces;
    }
    if (s.error)
        j["error"] = *s.error;
    j["elapsed_ms"] = timing && r.elapsed_ms ? ordered_json(*r.elapsed_ms) : ordered_json(nullptr);
    return j;
}

} // namespace

std::string report_json(const RunResult& r, const RunConfig& config, const std::string& source)
{
    ordered_json j;
    j["version"] = kReportVersion;
    j["seed"] = config.seed;
    j["config"] = config_json(config, source);
    ordered_json suites = ordered_json::array();
    for (const auto& s : r.suites)
        suites.push_back(suite_json(s, config.timing));
    j["suites"] = suites;
    if (r.fatal)
        j["error"] = *r.fatal;
    j["exit_code"] = r.exit_code;
    return j.dump(2) + "\n";
}

std::string report_text(const RunResult& r, const RunConfig& config)
{
    std::ostringstream out;
    out << "hopt report " << kReportVersion << "  seed " << config.seed << "\n";
    if (r.fatal)
        out << "error: " << *r.fatal << "\n";
    for (const auto& s : r.suites) {
        const LawReport& rep = s.report;
        out << "\n[" << s.statement << "] " << s.source << "\n";
        if (s.error) {
            out << "  ERROR " << *s.error << "\n";
            continue;
        }
        out << "  " << (rep.passed() ? "PASS" : "FAIL") << "  " << rep.suite << " on " << rep.model << ": "
            << rep.cases_total << " cases, " << rep.cases_failed << " failed, " << rep.cases_skipped
            << " skipped";
        if (config.timing && rep.elapsed_ms)
            out << ", " << static_cast<long long>(*rep.elapsed_ms) << " ms";
        out << "\n  bounds:";
        for (const auto& [k, v] : rep.bounds)
            out << " " << k << "=" << v;
        out << "\n";
        for (const auto& v : rep.violations) {
            out << "  " << v.law << " at " << v.instance << "\n    lhs " << v.lhs << "\n    rhs " << v.rhs << "\n";
            if (!v.trace.empty())
                out << "    trace " << v.trace << "\n";
        }
        for (const auto& [inst, t] : rep.traces)
            out << "  trace " << inst << ": " << t << "\n";
    }
    out << "\nexit " << r.exit_code << "\n";
    return out.str();
}

ReplayRequest load_replay(const std::string& text, std::size_t index)
{
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report is not JSON: ") + e.what(), 1, 1);
    }
    ReplayRequest req;
    try {
        const auto& c = j.at("config");
        req.config.max_size = c.at("max_size").get<std::uint64_t>();
        req.config.samples = c.at("samples").get<std::size_t>();
        req.config.depth = c.at("depth").get<std::size_t>();
        req.config.per_carrier = c.at("per_carrier").get<std::size_t>();
        req.config.strict_bounds = c.at("strict_bounds").get<bool>();
        req.config.model = c.at("model").get<std::string>();
        req.config.seed = j.at("seed").get<std::uint64_t>();
        req.source = c.at("program").get<std::string>();
        std::size_t seen = 0;
        for (const auto& s : j.at("suites"))
            for (const auto& v : s.at("violations")) {
                if (seen++ != index)
                    continue;
                req.target.statement = s.at("statement").get<std::size_t>();
                req.target.law = v.at("law").get<std::string>();
                req.target.instance = v.at("instance").get<std::string>();
                req.lhs = v.at("lhs").get<std::string>();
                req.rhs = v.at("rhs").get<std::string>();
                return req;
            }
        throw ResolutionError("report has " + std::to_string(seen) + " violations, no case #" +
                              std::to_string(index));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("report lacks replay data: ") + e.what(), 1, 1);
    }
}

} // namespace hopt
