#include "hopt/law.hpp"

#include <sstream>

namespace hopt {

namespace {

constexpr std::size_t kPayloadLimit = 2048;

} // namespace

void LawReport::merge(const LawReport& other)
{
    cases_total += other.cases_total;
    cases_failed += other.cases_failed;
    cases_skipped += other.cases_skipped;
    violations.insert(violations.end(), other.violations.begin(), other.violations.end());
    traces.insert(traces.end(), other.traces.begin(), other.traces.end());
    if (other.elapsed_ms)
        elapsed_ms = elapsed_ms.value_or(0.0) + *other.elapsed_ms;
}

Instance parse_instance(const std::string& text)
{
    Instance out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty())
            continue;
        auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0)
            throw ResolutionError("malformed instance entry '" + item + "'");
        out.emplace_back(item.substr(0, eq), item.substr(eq + 1));
    }
    return out;
}

std::string render_instance(const Instance& inst)
{
    std::string out;
    for (const auto& [k, v] : inst) {
        if (!out.empty())
            out += ',';
        out += k + "=" + v;
    }
    return out;
}

bool LawRecorder::selected(const std::string& law, const Instance& inst) const
{
    if (!config_.wants(law))
        return false;
    if (!config_.replay)
        return true;
    return render_instance(inst) == *config_.replay;
}

bool LawRecorder::may_match(const Instance& partial) const
{
    if (!config_.replay)
        return true;
    const Instance target = parse_instance(*config_.replay);
    for (const auto& [k, v] : partial) {
        bool found = false;
        for (const auto& [tk, tv] : target)
            if (tk == k) {
                if (tv != v)
                    return false;
                found = true;
            }
        if (!found)
            return false;
    }
    return true;
}

void LawRecorder::check(const std::string& law, const Instance& inst, const Morphism& lhs, const Morphism& rhs,
                        const std::string& trace)
{
    ++report_.cases_total;
    if (lhs == rhs)
        return;
    ++report_.cases_failed;
    if (report_.violations.size() < config_.max_violations)
        report_.violations.push_back({law, render_instance(inst), render_payload(lhs), render_payload(rhs), trace});
}

void LawRecorder::check_bool(const std::string& law, const Instance& inst, bool ok, const std::string& lhs,
                             const std::string& rhs, const std::string& trace)
{
    ++report_.cases_total;
    if (ok)
        return;
    ++report_.cases_failed;
    if (report_.violations.size() < config_.max_violations)
        report_.violations.push_back({law, render_instance(inst), lhs, rhs, trace});
}

void LawRecorder::skip(const std::string&, const Instance&) { ++report_.cases_skipped; }

std::string render_payload(const Morphism& m)
{
    std::string s = m.describe();
    if (s.size() > kPayloadLimit)
        s = s.substr(0, kPayloadLimit) + "...";
    return s;
}

std::vector<ObjectExpr> suite_objects(const Category& c, const LawConfig& config)
{
    if (!config.objects.empty())
        return config.objects;
    return c.inventory(config.max_size);
}

} // namespace hopt
