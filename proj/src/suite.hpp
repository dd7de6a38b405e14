#pragma once

// Helpers shared by the law suites.

#include "hopt/law.hpp"

#include <string>
#include <utility>
#include <vector>

namespace hopt::detail {

inline void begin_report(LawReport& r, const std::string& suite, const std::string& model, const LawConfig& c)
{
    r.suite = suite;
    r.model = model;
    r.bounds = {{"max_size", std::to_string(c.max_size)},
                {"objects", std::to_string(c.objects.size())},
                {"samples", std::to_string(c.homs.samples)},
                {"max_homs", std::to_string(c.homs.max_homs)}};
}

// Runs body for one object-level instance, turning BoundExceeded into a skip.
template <class F>
void at(LawRecorder& rec, const std::string& law, const Instance& inst, F&& body)
{
    if (!rec.config().wants(law) || !rec.may_match(inst))
        return;
    try {
        body();
    } catch (const BoundExceeded&) {
        rec.skip(law, inst);
    }
}

inline Instance with(Instance base, const std::string& k, std::size_t v)
{
    base.emplace_back(k, std::to_string(v));
    return base;
}

inline Instance with2(const Instance& base, const std::string& k1, std::size_t v1, const std::string& k2,
                      std::size_t v2)
{
    return with(with(base, k1, v1), k2, v2);
}

using Pairs = std::vector<std::pair<std::size_t, std::size_t>>;

// All pairs for enumerated hom-sets; for sampled ones, every generator pair
// plus the i-th sample matched with the i-th sample.
inline Pairs index_pairs(const HomSet& x, const HomSet& y)
{
    Pairs out;
    if (!x.sampled && !y.sampled) {
        for (std::size_t i = 0; i < x.items.size(); ++i)
            for (std::size_t j = 0; j < y.items.size(); ++j)
                out.emplace_back(i, j);
        return out;
    }
    for (std::size_t i = 0; i < x.generator_count; ++i)
        for (std::size_t j = 0; j < y.generator_count; ++j)
            out.emplace_back(i, j);
    const std::size_t sx = x.items.size() - x.generator_count;
    const std::size_t sy = y.items.size() - y.generator_count;
    for (std::size_t k = 0; k < std::min(sx, sy); ++k)
        out.emplace_back(x.generator_count + k, y.generator_count + k);
    return out;
}

} // namespace hopt::detail
