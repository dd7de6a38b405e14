#include "hopt/runner.hpp"

#include "hopt/causlite.hpp"
#include "hopt/closure.hpp"
#include "hopt/combs.hpp"
#include "hopt/towers.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <future>
#include <map>
#include <sstream>

namespace hopt {

namespace {

using dsl::MorAst;
using dsl::ObjAst;
using dsl::Stmt;

const std::vector<std::string> kModels{"finset", "finrel", "matq", "finset_corrupt"};

Backend backend_of(const std::string& kind)
{
    if (kind == "finrel")
        return Backend::finrel;
    if (kind == "matq")
        return Backend::matq;
    return Backend::finset;
}

std::string at(const dsl::Pos& p, const std::string& what)
{
    return "line " + std::to_string(p.line) + ", column " + std::to_string(p.column) + ": " + what;
}

// Declarations seen so far. Models are rebuilt whenever an object is added;
// morphisms only depend on atoms, so they survive the rebuild.
class Env {
public:
    Env(std::string kind, std::uint64_t standard_atoms) : kind_(std::move(kind)), standard_(standard_atoms) {}

    void set_model(const std::string& kind, const dsl::Pos& pos)
    {
        if (std::find(kModels.begin(), kModels.end(), kind) == kModels.end())
            throw ResolutionError(at(pos, "unknown model '" + kind + "' (finset, finrel, matq, finset_corrupt)"));
        kind_ = kind;
        atoms_.clear();
        morphisms_.clear();
        invalidate();
    }

    void add_object(const Stmt& s)
    {
        if (atoms_.count(s.name) || morphisms_.count(s.name) || s.name == "I" || is_standard(s.name))
            throw ResolutionError(at(s.pos, "'" + s.name + "' is already declared"));
        AtomSpec spec;
        if (s.dim) {
            spec.size = *s.dim;
        } else {
            spec.size = s.elements.size();
            spec.labels = s.elements;
            std::vector<std::string> sorted = s.elements;
            std::sort(sorted.begin(), sorted.end());
            if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
                throw TypeMismatch(at(s.pos, "object '" + s.name + "' repeats an element"));
        }
        if (spec.size == 0)
            throw TypeMismatch(at(s.pos, "object '" + s.name + "' is empty"));
        atoms_.emplace(s.name, std::move(spec));
        invalidate();
    }

    ModelPtr model()
    {
        if (!model_) {
            std::map<std::string, AtomSpec> gens = Model::standard(backend(), standard_)->generators();
            for (const auto& [n, spec] : atoms_)
                gens[n] = spec;
            model_ = std::make_shared<Model>(backend(), to_string(backend()), std::move(gens));
        }
        return model_;
    }

    EnrichedPtr enrichment()
    {
        if (!e_) {
            if (kind_ == "finset" || kind_ == "finset_corrupt") {
                e_ = finset_self(model());
                if (kind_ == "finset_corrupt") {
                    // one wrong output of seq_{n2,n2,n2}: id ; id goes to the constant 0
                    const auto n2 = model()->object({"n2"});
                    const Morphism id = identity(Backend::finset, n2);
                    e_ = corrupt_seq(e_, id, id, Morphism(Backend::finset, n2, n2, FunctionTable{0, 0}));
                }
            } else {
                e_ = compact_self(model());
            }
        }
        return e_;
    }

    Backend backend() const { return backend_of(kind_); }
    const std::string& kind() const { return kind_; }

    ObjectExpr object(const ObjAst& o)
    {
        switch (o.kind) {
        case ObjAst::Kind::unit:
            return ObjectExpr::unit();
        case ObjAst::Kind::name:
            try {
                return model()->object({o.name});
            } catch (const ResolutionError&) {
                throw ResolutionError(at(o.pos, "unknown object '" + o.name + "'"));
            }
        case ObjAst::Kind::tensor: {
            ObjectExpr out;
            for (const auto& p : o.parts)
                out = out * object(p);
            return out;
        }
        case ObjAst::Kind::hom:
            return enrichment()->hom(object(o.parts[0]), object(o.parts[1]));
        }
        return {};
    }

    ObjectExpr object_name(const std::string& name, const dsl::Pos& pos)
    {
        if (name == "I")
            return ObjectExpr::unit();
        ObjAst o;
        o.kind = ObjAst::Kind::name;
        o.name = name;
        o.pos = pos;
        return object(o);
    }

    void add_morphism(const Stmt& s)
    {
        if (atoms_.count(s.name) || morphisms_.count(s.name) || is_standard(s.name))
            throw ResolutionError(at(s.pos, "'" + s.name + "' is already declared"));
        const ObjectExpr dom = object(*s.dom);
        const ObjectExpr cod = object(*s.cod);
        Morphism m = s.body->kind == MorAst::Kind::literal ? literal(*s.body, dom, cod) : eval(*s.body);
        if (!(m.dom() == dom) || !(m.cod() == cod))
            throw TypeMismatch(at(s.pos, "morphism '" + s.name + "' is declared " + dom.render() + " -> " +
                                             cod.render() + " but its body has type " + m.dom().render() + " -> " +
                                             m.cod().render()));
        morphisms_.emplace(s.name, std::move(m));
    }

    const Morphism& morphism(const std::string& name, const dsl::Pos& pos) const
    {
        auto it = morphisms_.find(name);
        if (it == morphisms_.end())
            throw ResolutionError(at(pos, "unknown morphism '" + name + "'"));
        return it->second;
    }

    Morphism eval(const MorAst& m)
    {
        switch (m.kind) {
        case MorAst::Kind::name:
            return morphism(m.name, m.pos);
        case MorAst::Kind::then: {
            const Morphism f = eval(m.parts[0]);
            const Morphism g = eval(m.parts[1]);
            if (!(f.cod() == g.dom()))
                throw TypeMismatch(at(m.pos, "in composite " + dsl::render(m) + ": codomain " + f.cod().render() +
                                                 " of " + dsl::render(m.parts[0]) + " does not match domain " +
                                                 g.dom().render() + " of " + dsl::render(m.parts[1])));
            return compose(g, f);
        }
        case MorAst::Kind::tensor:
            return tensor(eval(m.parts[0]), eval(m.parts[1]));
        case MorAst::Kind::id:
            return hopt::identity(backend(), object(m.objects[0]));
        case MorAst::Kind::braid:
            return hopt::braid(backend(), object(m.objects[0]), object(m.objects[1]));
        case MorAst::Kind::kappa:
            return enrichment()->kappa(eval(m.parts[0]));
        case MorAst::Kind::seq:
            return enrichment()->seq(object(m.objects[0]), object(m.objects[1]), object(m.objects[2]));
        case MorAst::Kind::par:
            return enrichment()->par(object(m.objects[0]), object(m.objects[1]), object(m.objects[2]),
                                     object(m.objects[3]));
        case MorAst::Kind::curry: {
            const Morphism f = eval(m.parts[0]);
            ObjectExpr a;
            if (!m.objects.empty())
                a = object(m.objects[0]);
            else if (!f.dom().is_unit())
                a = ObjectExpr({f.dom().atoms().front()});
            try {
                return curry(standard_linking(enrichment()), a, f);
            } catch (const TypeMismatch& e) {
                throw TypeMismatch(at(m.pos, std::string("in ") + dsl::render(m) + ": " + e.what()));
            }
        }
        case MorAst::Kind::eval:
            return eval_morphism(standard_linking(enrichment()), object(m.objects[0]), object(m.objects[1]));
        case MorAst::Kind::literal:
            throw TypeMismatch(at(m.pos, "a literal table must be the whole body of a morphism declaration"));
        }
        throw TypeMismatch(at(m.pos, "unsupported expression"));
    }

    const std::map<std::string, Morphism>& morphisms() const { return morphisms_; }

private:
    bool is_standard(const std::string& name) const
    {
        return name.size() > 1 && name[0] == 'n' &&
               std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; });
    }

    void invalidate()
    {
        model_.reset();
        e_.reset();
    }

    // Element token of an object: its label when the object is a single
    // labelled atom, otherwise a numeric index into the carrier.
    std::uint64_t element(const ObjectExpr& o, const std::string& token, const dsl::Pos& pos)
    {
        if (o.length() == 1) {
            const auto& gens = model()->generators();
            auto it = gens.find(o.atoms().front().name);
            if (it != gens.end() && !it->second.labels.empty()) {
                const auto& labels = it->second.labels;
                auto l = std::find(labels.begin(), labels.end(), token);
                if (l != labels.end())
                    return static_cast<std::uint64_t>(l - labels.begin());
            }
        }
        const bool numeric = !token.empty() && std::all_of(token.begin(), token.end(), [](char c) {
            return c >= '0' && c <= '9';
        });
        if (numeric && token.size() < 19 && std::stoull(token) < o.carrier())
            return std::stoull(token);
        throw TypeMismatch(at(pos, "'" + token + "' is not an element of " + o.render()));
    }

    Morphism literal(const MorAst& m, const ObjectExpr& dom, const ObjectExpr& cod)
    {
        const auto& lit = m.literal;
        const Backend b = backend();
        if (lit.matrix) {
            if (b != Backend::matq)
                throw TypeMismatch(at(m.pos, "matrix literal in a " + to_string(b) + " model"));
            if (lit.rows.size() != cod.carrier())
                throw TypeMismatch(at(m.pos, "matrix has " + std::to_string(lit.rows.size()) + " rows, " +
                                                 cod.render() + " needs " + std::to_string(cod.carrier())));
            std::vector<std::vector<Rational>> rows;
            for (const auto& row : lit.rows) {
                if (row.size() != dom.carrier())
                    throw TypeMismatch(at(m.pos, "matrix row has " + std::to_string(row.size()) + " entries, " +
                                                     dom.render() + " needs " + std::to_string(dom.carrier())));
                std::vector<Rational> r;
                for (const auto& x : row)
                    r.push_back(Rational::parse(x));
                rows.push_back(std::move(r));
            }
            return from_dense(dom, cod, rows);
        }
        if (b == Backend::matq)
            throw TypeMismatch(at(m.pos, "table literal in a matq model"));
        if (b == Backend::finset) {
            std::vector<std::optional<std::uint64_t>> table(dom.carrier());
            for (const auto& [x, y] : lit.pairs) {
                auto& slot = table[element(dom, x, m.pos)];
                if (slot)
                    throw TypeMismatch(at(m.pos, "'" + x + "' is mapped twice"));
                slot = element(cod, y, m.pos);
            }
            FunctionTable t;
            for (std::size_t i = 0; i < table.size(); ++i) {
                if (!table[i])
                    throw TypeMismatch(at(m.pos, "function is undefined on element " + std::to_string(i) + " of " +
                                                     dom.render()));
                t.push_back(*table[i]);
            }
            return Morphism(b, dom, cod, std::move(t));
        }
        Relation r;
        for (const auto& [x, y] : lit.pairs)
            r.pairs.emplace_back(element(dom, x, m.pos), element(cod, y, m.pos));
        std::sort(r.pairs.begin(), r.pairs.end());
        r.pairs.erase(std::unique(r.pairs.begin(), r.pairs.end()), r.pairs.end());
        return Morphism(b, dom, cod, std::move(r));
    }

    std::string kind_;
    std::uint64_t standard_;
    std::map<std::string, AtomSpec> atoms_;
    std::map<std::string, Morphism> morphisms_;
    ModelPtr model_;
    EnrichedPtr e_;
};

std::vector<std::string> split_list(const std::string& s)
{
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty())
            out.push_back(item);
    return out;
}

std::uint64_t positive(const Stmt& s, const std::string& key, const std::string& value)
{
    const bool ok = !value.empty() && value.size() < 19 &&
                    std::all_of(value.begin(), value.end(), [](char c) { return c >= '0' && c <= '9'; });
    if (!ok)
        throw TypeMismatch(at(s.pos, "option " + key + " expects a number, got '" + value + "'"));
    return std::stoull(value);
}

std::string statement_source(const Stmt& s)
{
    std::string out = "check " + s.name;
    for (const auto& [k, v] : s.options)
        out += " " + k + "=" + v;
    return out;
}

const std::vector<std::string> kSuites{"enriched", "insertion", "faithful", "linked", "closed",
                                       "pm",       "karoubi",   "combs",    "tower",  "causlite"};
const std::vector<std::string> kOptions{"max_size", "seed",  "samples", "depth",  "per_carrier",
                                        "only",     "objects", "tower",  "member", "max_homs"};

using Task = std::function<LawReport()>;

struct Prepared {
    std::size_t statement;
    std::string source;
    Task task;
};

LawReport named(LawReport r, const std::string& suite, const std::string& model)
{
    r.suite = suite;
    r.model = model;
    return r;
}

LawReport timed(const std::function<LawReport()>& body)
{
    const auto start = std::chrono::steady_clock::now();
    LawReport r = body();
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
    return r;
}

// Resolves a check statement against the current environment. Everything
// that can fail as a type or resolution error happens here, before any
// suite runs.
Task prepare(const Stmt& s, Env& env, const std::map<std::string, std::vector<EnrichedPtr>>& towers,
             const RunConfig& cfg, const std::optional<ReplayTarget>& replay)
{
    if (std::find(kSuites.begin(), kSuites.end(), s.name) == kSuites.end())
        throw ResolutionError(at(s.pos, "unknown suite '" + s.name + "'"));
    std::map<std::string, std::string> opt;
    for (const auto& [k, v] : s.options) {
        if (std::find(kOptions.begin(), kOptions.end(), k) == kOptions.end())
            throw ResolutionError(at(s.pos, "unknown option '" + k + "'"));
        opt[k] = v;
    }
    auto num = [&](const std::string& k, std::uint64_t fallback) {
        return opt.count(k) ? positive(s, k, opt[k]) : fallback;
    };

    LawConfig c;
    c.max_size = num("max_size", cfg.max_size);
    c.homs.samples = num("samples", cfg.samples);
    c.homs.seed = num("seed", cfg.seed);
    if (opt.count("max_homs"))
        c.homs.max_homs = num("max_homs", 0);
    if (c.max_size == 0 || c.homs.samples == 0)
        throw TypeMismatch(at(s.pos, "bounds must be positive"));
    if (opt.count("only"))
        for (const auto& law : split_list(opt["only"]))
            c.only.insert(law);
    if (opt.count("objects"))
        for (const auto& name : split_list(opt["objects"]))
            c.objects.push_back(env.object_name(name, s.pos));
    if (replay) {
        c.only = {replay->law};
        c.replay = replay->instance;
    }
    const std::size_t depth = num("depth", cfg.depth);
    const std::size_t per_carrier = num("per_carrier", cfg.per_carrier);
    if (depth == 0 || per_carrier == 0)
        throw TypeMismatch(at(s.pos, "bounds must be positive"));

    const EnrichedPtr e = env.enrichment();
    const std::string model = env.kind();

    if (s.name == "enriched")
        return [e, c] { return check_enriched_laws(*e, c); };
    if (s.name == "insertion")
        return [e, c] { return check_partial_insertion(*e, c); };
    if (s.name == "faithful")
        return [e, c] { return check_faithful(*e, c); };
    if (s.name == "linked")
        return [e, c] { return check_linked(standard_linking(e), c); };
    if (s.name == "closed")
        return [e, c] { return check_couniversal(standard_linking(e), c); };
    if (s.name == "pm")
        return [e, c, model] {
            const PmFunctor g = gamma_layer(e, e);
            LawReport r = check_pm(g, c);
            r.merge(is_fully_faithful(g, c));
            return named(std::move(r), "pm", model);
        };
    if (s.name == "karoubi")
        return [e, c, model, per_carrier] {
            const KaroubiResult k = karoubi(e, per_carrier);
            LawReport r = check_enriched_laws(*k.envelope, c);
            r.merge(check_faithful(*k.envelope, c));
            r.merge(check_pm(k.embedding, c));
            r.merge(is_fully_faithful(k.embedding, c));
            r.bounds.emplace_back("per_carrier", std::to_string(per_carrier));
            return named(std::move(r), "karoubi", model);
        };
    if (s.name == "combs") {
        ClosureOptions o;
        o.depth = depth;
        o.homs = c.homs;
        std::optional<std::pair<std::string, Morphism>> member;
        if (opt.count("member"))
            member.emplace(opt["member"], env.morphism(opt["member"], s.pos));
        std::vector<ObjectExpr> objects = c.objects;
        if (objects.empty())
            for (const auto& x : e->lower()->inventory(c.max_size))
                if (!x.is_unit())
                    objects.push_back(x);
        return [e, c, o, member, objects, model] {
            LawReport r = check_combs(e, c, o);
            if (member) {
                LawRecorder rec(r, c);
                const Instance inst{{"m", member->first}};
                if (rec.selected("MEMBER", inst)) {
                    const CombVerdict v = is_comb(e, objects, member->second, o);
                    rec.check_bool("MEMBER", inst, v.found, v.found ? "member" : "not found",
                                   "member within depth " + std::to_string(o.depth));
                    if (v.found)
                        r.traces.emplace_back(member->first, v.trace);
                }
            }
            return named(std::move(r), "combs", model);
        };
    }
    if (s.name == "tower") {
        std::vector<EnrichedPtr> layers;
        if (opt.count("tower")) {
            auto it = towers.find(opt["tower"]);
            if (it == towers.end())
                throw ResolutionError(at(s.pos, "unknown tower '" + opt["tower"] + "'"));
            layers = it->second;
        } else {
            layers.assign(depth, e);
        }
        return [layers, c, model] {
            const FiniteMerger m = trivial_merger(build_tower(layers));
            LawReport r = check_merger(m, c);
            for (std::size_t i = 1; i + 2 <= m.tower.top(); ++i)
                r.merge(check_mu_condition(m, i, c));
            r.merge(check_apex_closed(m, c));
            r.bounds.emplace_back("depth", std::to_string(m.tower.depth()));
            return named(std::move(r), "tower", model);
        };
    }
    return [c] { return check_causlite(c); };
}

std::uint64_t largest_size(const dsl::Program& p, const RunConfig& cfg)
{
    std::uint64_t out = std::max<std::uint64_t>(cfg.max_size, 4);
    for (const auto& s : p.stmts)
        for (const auto& [k, v] : s.options)
            if (k == "max_size" && !v.empty() && v.size() < 6 &&
                std::all_of(v.begin(), v.end(), [](char ch) { return ch >= '0' && ch <= '9'; }))
                out = std::max<std::uint64_t>(out, std::stoull(v));
    return out;
}

} // namespace

RunResult run(const dsl::Program& program, const RunConfig& config, const std::optional<ReplayTarget>& replay)
{
    RunResult result;
    Env env(config.model, largest_size(program, config));
    std::map<std::string, std::vector<EnrichedPtr>> towers;
    std::map<std::string, EnrichedPtr> by_kind;
    std::vector<Prepared> prepared;

    try {
        for (std::size_t i = 0; i < program.stmts.size(); ++i) {
            const Stmt& s = program.stmts[i];
            switch (s.kind) {
            case Stmt::Kind::model:
                env.set_model(s.name, s.pos);
                break;
            case Stmt::Kind::object:
                env.add_object(s);
                break;
            case Stmt::Kind::morphism:
                env.add_morphism(s);
                break;
            case Stmt::Kind::tower: {
                // layer names are model kinds; repeated kinds share one enrichment
                std::vector<EnrichedPtr> layers;
                for (const auto& kind : s.layers) {
                    if (!by_kind.count(kind)) {
                        Env layer_env(config.model, largest_size(program, config));
                        layer_env.set_model(kind, s.pos);
                        by_kind[kind] = layer_env.enrichment();
                    }
                    layers.push_back(by_kind[kind]);
                }
                for (std::size_t k = 1; k < layers.size(); ++k)
                    if (layers[k - 1]->upper()->name() != layers[k]->lower()->name() ||
                        layers[k - 1]->upper()->backend() != layers[k]->lower()->backend())
                        throw ChainMismatch(at(s.pos, "layer " + std::to_string(k + 1) + " of tower '" + s.name +
                                                          "' does not start where layer " + std::to_string(k) +
                                                          " ends"));
                towers[s.name] = std::move(layers);
                break;
            }
            case Stmt::Kind::check:
                if (replay && replay->statement != i)
                    break;
                prepared.push_back({i, statement_source(s), prepare(s, env, towers, config, replay)});
                break;
            }
        }
    } catch (const ParseError& e) {
        result.fatal = e.what();
    } catch (const TypeMismatch& e) {
        result.fatal = e.what();
    } catch (const ResolutionError& e) {
        result.fatal = e.what();
    } catch (const ChainMismatch& e) {
        result.fatal = e.what();
    } catch (const Error& e) {
        result.fatal = e.what();
    } catch (const std::exception& e) {
        result.fatal = e.what();
    }
    if (result.fatal) {
        result.exit_code = kExitParse;
        return result;
    }

    result.suites.resize(prepared.size());
    auto execute = [&](std::size_t k) {
        SuiteResult& out = result.suites[k];
        out.statement = prepared[k].statement;
        out.source = prepared[k].source;
        try {
            out.report = timed(prepared[k].task);
        } catch (const BoundExceeded& e) {
            out.error = e.what();
            out.bound_error = true;
        } catch (const std::exception& e) {
            out.error = e.what();
        }
    };
    const std::size_t jobs = std::max<std::size_t>(config.jobs, 1);
    for (std::size_t k = 0; k < prepared.size(); k += jobs) {
        std::vector<std::future<void>> batch;
        for (std::size_t j = k; j < std::min(prepared.size(), k + jobs); ++j)
            batch.push_back(std::async(jobs == 1 ? std::launch::deferred : std::launch::async, execute, j));
        for (auto& f : batch)
            f.get();
    }

    bool failed = false;
    bool bounded = false;
    for (const auto& s : result.suites) {
        if (s.report.cases_failed > 0 || (s.error && !s.bound_error))
            failed = true;
        if (s.report.cases_skipped > 0 || s.bound_error)
            bounded = true;
    }
    result.exit_code = failed ? kExitFail : (bounded && config.strict_bounds ? kExitBounds : kExitPass);
    return result;
}

RunResult run_source(const std::string& source, const RunConfig& config, const std::optional<ReplayTarget>& replay)
{
    dsl::Program p;
    try {
        p = dsl::parse(source);
    } catch (const ParseError& e) {
        RunResult r;
        r.fatal = e.what();
        r.exit_code = kExitParse;
        return r;
    }
    return run(p, config, replay);
}

} // namespace hopt
