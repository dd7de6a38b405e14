#pragma once

// Law reports and the small amount of bookkeeping shared by every suite.

#include "hopt/kernel.hpp"

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace hopt {

struct Violation {
    std::string law;
    std::string instance; // replayable, e.g. "A=n2,B=n2,C=n2,f=1,g=3"
    std::string lhs;
    std::string rhs;
    std::string trace; // optional construction trace
};

struct LawReport {
    std::string suite;
    std::string model;
    std::vector<std::pair<std::string, std::string>> bounds;
    std::uint64_t cases_total = 0;
    std::uint64_t cases_failed = 0;
    std::uint64_t cases_skipped = 0; // instances beyond kernel bounds
    std::vector<Violation> violations;
    /// Construction traces of passing membership cases, by instance.
    std::vector<std::pair<std::string, std::string>> traces;
    std::optional<double> elapsed_ms;

    bool passed() const { return cases_failed == 0; }
    void merge(const LawReport& other);
};

struct LawConfig {
    std::uint64_t max_size = 2;
    /// When non-empty, replaces the category's inventory.
    std::vector<ObjectExpr> objects;
    HomBounds homs;
    std::set<std::string> only;
    std::size_t max_violations = 100;
    /// Replay: restrict to a single instance (object and hom assignments).
    std::optional<std::string> replay;

    bool wants(const std::string& law) const { return only.empty() || only.count(law) > 0; }
};

/// Parsed instance "K=v,K=v". Object values are rendered objects, hom values
/// are enumeration indices.
using Instance = std::vector<std::pair<std::string, std::string>>;

Instance parse_instance(const std::string& text);
std::string render_instance(const Instance& inst);

/// Records cases into a report and enforces the replay filter.
class LawRecorder {
public:
    LawRecorder(LawReport& report, const LawConfig& config) : report_(report), config_(config) {}

    /// Whether this instance should be evaluated (law filter and replay).
    bool selected(const std::string& law, const Instance& inst) const;
    /// Whether `inst` is a prefix-compatible partial assignment of the replay
    /// target; lets suites prune enumeration early.
    bool may_match(const Instance& partial) const;

    void check(const std::string& law, const Instance& inst, const Morphism& lhs, const Morphism& rhs,
               const std::string& trace = {});
    void check_bool(const std::string& law, const Instance& inst, bool ok, const std::string& lhs,
                    const std::string& rhs, const std::string& trace = {});
    void skip(const std::string& law, const Instance& inst);

    /// Runs body, turning BoundExceeded into a skipped case.
    template <class F>
    void guarded(const std::string& law, const Instance& inst, F&& body)
    {
        if (!selected(law, inst))
            return;
        try {
            body();
        } catch (const BoundExceeded&) {
            skip(law, inst);
        }
    }

    const LawConfig& config() const { return config_; }
    LawReport& report() { return report_; }

private:
    LawReport& report_;
    const LawConfig& config_;
};

/// Payload rendering for reports, truncated so huge tables stay readable.
std::string render_payload(const Morphism& m);

/// Object inventory for a suite: the override list or the category's own.
std::vector<ObjectExpr> suite_objects(const Category& c, const LawConfig& config);

} // namespace hopt
