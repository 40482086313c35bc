#include "xinflate/inflate.hpp"

#include "xinflate/error.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace xinflate {

std::string_view to_string(SearchStrategy s) { return s == SearchStrategy::binary ? "binary" : "linear"; }

SearchStrategy parse_strategy(std::string_view name)
{
    if (name == "linear") return SearchStrategy::linear;
    if (name == "binary") return SearchStrategy::binary;
    throw ValidationError("unknown search strategy '" + std::string(name) + "'");
}

void check_config(const InflationConfig& cfg)
{
    if (cfg.delta <= 0) throw ValidationError("delta must be positive");
    if (!cfg.beta) return;
    if (cfg.strategy == SearchStrategy::binary) throw ValidationError("beta applies to linear search only");
    if (*cfg.beta <= cfg.delta) throw ValidationError("beta must exceed delta");
    if (!is_integral(Rational(*cfg.beta / cfg.delta))) throw ValidationError("beta must be a multiple of delta");
}

namespace {

bool probe(const ExplanationProblem& p, Assignment& current, FeatureIndex j, const ValueSet& candidate,
           std::vector<Probe>* log, const ValueSet* step = nullptr)
{
    auto it = current.find(j);
    std::optional<ValueSet> saved;
    if (it != current.end()) saved = it->second;
    current.insert_or_assign(j, candidate);
    const bool ok = holds_sufficiency(p, current);
    if (saved) current.insert_or_assign(j, std::move(*saved));
    else current.erase(j);
    if (log) log->push_back(Probe{j, candidate, step ? *step : candidate, ok});
    return ok;
}

Rational grid_step(const Domain& d, const Rational& delta)
{
    if (!d.is_integer()) return delta;
    Rational s = ceil_rat(delta);
    return s < 1 ? Rational(1) : s;
}

std::int64_t to_steps(const Rational& span, const Rational& step)
{
    Integer k = ceil_int(Rational(span / step));
    if (k > std::numeric_limits<std::int32_t>::max()) throw ValidationError("delta is too small for this domain");
    return k.convert_to<std::int64_t>();
}

// Grid index search. Index 0 is known to pass and `count` (the domain
// bound) to fail; passing is downward closed. Returns the last passing index.
std::int64_t last_passing(std::int64_t count, const InflationConfig& cfg, const std::function<bool(std::int64_t)>& pass)
{
    std::int64_t lo = 0;
    std::int64_t hi = count;
    if (cfg.strategy == SearchStrategy::binary) {
        while (hi - lo > 1) {
            const std::int64_t mid = lo + (hi - lo) / 2;
            if (pass(mid)) lo = mid;
            else hi = mid;
        }
        return lo;
    }
    if (cfg.beta) {
        const auto coarse = to_steps(*cfg.beta, cfg.delta);
        for (std::int64_t k = coarse; k < count; k += coarse) {
            if (!pass(k)) {
                hi = k;
                break;
            }
            lo = k;
        }
    }
    for (std::int64_t k = lo + 1; k < hi; ++k) {
        if (!pass(k)) break;
        lo = k;
    }
    return lo;
}

} // namespace

ValueSet inflate_categorical(const ExplanationProblem& p, FeatureIndex j, ValueSet e, Assignment current,
                             std::vector<Probe>* log)
{
    const auto& d = p.space().domain(j);
    if (!d.is_categorical()) throw ValidationError("feature " + p.space()[j].name + " is not categorical");
    for (std::uint32_t u = 0; u < d.label_count(); ++u) {
        if (e.contains(LabelId{u})) continue;
        const ValueSet value(CatSet({LabelId{u}}));
        ValueSet candidate = e.unite(value);
        if (probe(p, current, j, candidate, log, &value)) e = std::move(candidate);
    }
    return e;
}

Rational expand_sup(const ExplanationProblem& p, FeatureIndex j, const Interval& interval, Assignment current,
                    const InflationConfig& cfg, std::vector<Probe>* log)
{
    check_config(cfg);
    const auto& d = p.space().domain(j);
    const auto& mu = d.ordinal().hi;
    const Rational base = interval.hi;
    if (base >= mu) return base;
    const Rational step = grid_step(d, cfg.delta);
    auto point = [&](std::int64_t k) { return std::min<Rational>(base + step * k, mu); };
    const auto count = to_steps(mu - base, step);
    const auto k = last_passing(count, cfg, [&](std::int64_t i) {
        Interval cand{interval.lo, point(i), interval.lo_open, false};
        return probe(p, current, j, ValueSet(cand), log);
    });
    return point(k);
}

Rational expand_inf(const ExplanationProblem& p, FeatureIndex j, const Interval& interval, Assignment current,
                    const InflationConfig& cfg, std::vector<Probe>* log)
{
    check_config(cfg);
    const auto& d = p.space().domain(j);
    const auto& lambda = d.ordinal().lo;
    const Rational base = interval.lo;
    if (base <= lambda) return base;
    const Rational step = grid_step(d, cfg.delta);
    auto point = [&](std::int64_t k) { return std::max<Rational>(base - step * k, lambda); };
    const auto count = to_steps(base - lambda, step);
    const auto k = last_passing(count, cfg, [&](std::int64_t i) {
        Interval cand{point(i), interval.hi, false, interval.hi_open};
        return probe(p, current, j, ValueSet(cand), log);
    });
    return point(k);
}

ValueSet inflate_ordinal(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                         const InflationConfig& cfg, std::vector<Probe>* log)
{
    const auto& d = p.space().domain(j);
    if (!d.is_ordinal()) throw ValidationError("feature " + p.space()[j].name + " is not ordinal");
    if (!e.is_singleton(d) || !e.contains(p.value(j)))
        throw ValidationError("ordinal inflation starts from the instance value");
    const Rational v = std::get<Rational>(p.value(j));
    const auto& o = d.ordinal();
    Rational sup = v;
    Rational inf = v;
    if (v < o.hi) {
        if (probe(p, current, j, ValueSet(Interval::closed(v, o.hi)), log)) sup = o.hi;
        else sup = expand_sup(p, j, Interval::point(v), current, cfg, log);
    }
    if (o.lo < v) {
        if (probe(p, current, j, ValueSet(Interval::closed(o.lo, sup)), log)) inf = o.lo;
        else inf = expand_inf(p, j, Interval::closed(v, sup), current, cfg, log);
    }
    return ValueSet(Interval::closed(inf, sup));
}

ValueSet inflate_ordinal_tree(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                              std::vector<Probe>* log)
{
    const auto* cells = p.oracle().discretization();
    if (!cells) throw ValidationError("cell inflation needs a tree model or decision list");
    if (!p.space().domain(j).is_ordinal()) throw ValidationError("feature " + p.space()[j].name + " is not ordinal");
    const auto n = static_cast<std::int64_t>(cells->cell_count(j));
    const auto home = static_cast<std::int64_t>(cells->cell_of(j, p.value(j)));
    auto seed = cells->cells_meeting(j, e);
    std::vector<bool> in(static_cast<std::size_t>(n), false);
    for (auto k : seed) in[k] = true;
    auto as_set = [&](const std::vector<bool>& mask) {
        std::vector<std::uint32_t> ks;
        for (std::int64_t k = 0; k < n; ++k)
            if (mask[static_cast<std::size_t>(k)]) ks.push_back(static_cast<std::uint32_t>(k));
        return cells->cells_to_set(j, ks);
    };
    for (std::int64_t dist = 1; dist < n; ++dist) {
        for (std::int64_t k : {home + dist, home - dist}) {
            if (k < 0 || k >= n || in[static_cast<std::size_t>(k)]) continue;
            auto trial = in;
            trial[static_cast<std::size_t>(k)] = true;
            const ValueSet cell(cells->cell(j, static_cast<std::uint32_t>(k)));
            if (probe(p, current, j, as_set(trial), log, &cell)) in = std::move(trial);
        }
    }
    return as_set(in);
}

namespace {

bool cell_based(const ExplanationProblem& p) { return p.oracle().discretization() != nullptr; }

} // namespace

ValueSet grow_set(const ExplanationProblem& p, FeatureIndex j, const ValueSet& e, Assignment current,
                  const InflationConfig& cfg, std::vector<Probe>* log)
{
    check_config(cfg);
    const auto& d = p.space().domain(j);
    if (d.is_categorical()) return inflate_categorical(p, j, e, std::move(current), log);
    if (cell_based(p)) return inflate_ordinal_tree(p, j, e, std::move(current), log);

    // Monotone: the hull is exactly as sufficient as the set itself.
    const auto& parts = e.intervals().parts();
    const auto& o = d.ordinal();
    Interval h{parts.front().lo, parts.back().hi, parts.front().lo_open, parts.back().hi_open};
    if (h.hi < o.hi || h.hi_open) {
        Interval top{h.lo, o.hi, h.lo_open, false};
        if (probe(p, current, j, ValueSet(top), log)) {
            h = top;
        } else {
            const Rational sup = expand_sup(p, j, h, current, cfg, log);
            if (sup > h.hi) {
                h.hi = sup;
                h.hi_open = false;
            }
        }
    }
    if (h.lo > o.lo || h.lo_open) {
        Interval bottom{o.lo, h.hi, false, h.hi_open};
        if (probe(p, current, j, ValueSet(bottom), log)) {
            h = bottom;
        } else {
            const Rational inf = expand_inf(p, j, h, current, cfg, log);
            if (inf < h.lo) {
                h.lo = inf;
                h.lo_open = false;
            }
        }
    }
    return ValueSet(h);
}

InflatedExplanation inflate_axp(const ExplanationProblem& p, const FeatureSet& axp, const InflationConfig& cfg)
{
    check_config(cfg);
    if (axp.empty()) throw ValidationError("cannot inflate an empty feature set");
    const auto m = p.feature_count();
    for (auto j : axp)
        if (j >= m) throw ValidationError("feature " + std::to_string(j + 1) + " out of range");
    if (cfg.validate_input && !is_waxp(p, axp)) throw ValidationError(to_string(axp) + " is not a weak AXp");

    InflatedExplanation out;
    out.kind = ExplanationKind::abductive;
    out.features = axp;
    for (auto j : resolve_order(cfg.order, m, axp))
        if (contains(axp, j)) out.probe_order.push_back(j);

    Assignment current = p.pinned(axp);
    bool stepped = false;
    for (auto j : out.probe_order) {
        const auto& d = p.space().domain(j);
        const ValueSet e = current.at(j);
        ValueSet grown;
        if (d.is_categorical()) {
            grown = inflate_categorical(p, j, e, current, &out.probes);
        } else if (cell_based(p)) {
            grown = inflate_ordinal_tree(p, j, e, current, &out.probes);
        } else {
            grown = inflate_ordinal(p, j, e, current, cfg, &out.probes);
            stepped = true;
        }
        current.insert_or_assign(j, std::move(grown));
    }
    for (auto& [j, s] : current) out.sets.emplace(j, std::move(s));
    out.delta = stepped ? cfg.delta : Rational(0);
    return out;
}

InflatedExplanation inflate_from_full(const ExplanationProblem& p, const InflationConfig& cfg)
{
    FeatureSet all(p.feature_count());
    for (std::size_t j = 0; j < all.size(); ++j) all[j] = j;
    InflationConfig c = cfg;
    c.validate_input = false; // fixing every feature always forces the class
    InflatedExplanation out = inflate_axp(p, all, c);
    FeatureSet kept;
    for (auto j : out.features) {
        if (out.sets.at(j).covers(p.space().domain(j))) out.sets.erase(j);
        else kept.push_back(j);
    }
    out.features = std::move(kept);
    return out;
}

// ---------------------------------------------------------------- shrinking

Assignment contrastive_box(const ExplanationProblem& p, const std::map<FeatureIndex, ValueSet>& sets)
{
    Assignment box;
    for (std::size_t j = 0; j < p.feature_count(); ++j) {
        auto it = sets.find(j);
        if (it != sets.end()) box.emplace(j, it->second);
        else box.emplace(j, ValueSet::singleton(p.space().domain(j), p.value(j)));
    }
    return box;
}

std::vector<ValueSet> shrink_pieces(const ExplanationProblem& p, FeatureIndex j, const ValueSet& g)
{
    const auto& d = p.space().domain(j);
    std::vector<ValueSet> out;
    if (d.is_categorical()) {
        for (auto l : g.cat().labels()) out.emplace_back(CatSet({l}));
        return out;
    }
    if (const auto* cells = p.oracle().discretization()) {
        for (auto k : cells->cells_meeting(j, g)) {
            auto piece = ValueSet(cells->cell(j, k)).intersect(g);
            if (piece && piece->inhabited(d)) out.push_back(std::move(*piece));
        }
        return out;
    }
    // Monotone: open interiors first, then the closed endpoints, so a
    // counterexample settles on a domain extreme when one exists.
    std::vector<ValueSet> ends;
    for (const auto& part : g.intervals().parts()) {
        if (part.is_point()) {
            ends.emplace_back(part);
            continue;
        }
        Interval interior{part.lo, part.hi, true, true};
        if (interior.inhabited(d.ordinal())) out.emplace_back(interior);
        if (!part.lo_open) ends.emplace_back(Interval::point(part.lo));
        if (!part.hi_open) ends.emplace_back(Interval::point(part.hi));
    }
    out.insert(out.end(), ends.begin(), ends.end());
    return out;
}

namespace {

ValueSet unite_all(const std::vector<ValueSet>& pieces, const std::vector<bool>& keep)
{
    std::optional<ValueSet> acc;
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        if (!keep[i]) continue;
        acc = acc ? acc->unite(pieces[i]) : pieces[i];
    }
    return *acc;
}

} // namespace

InflatedExplanation shrink_from(const ExplanationProblem& p, const std::map<FeatureIndex, ValueSet>& start,
                                std::span<const FeatureIndex> order)
{
    if (start.empty()) throw ValidationError("a contrastive explanation needs at least one feature");
    const auto m = p.feature_count();
    FeatureSet y;
    for (const auto& [j, g] : start) {
        if (j >= m) throw ValidationError("feature " + std::to_string(j + 1) + " out of range");
        check_within(g, p.space().domain(j));
        if (g.contains(p.value(j)))
            throw ValidationError("set for feature " + p.space()[j].name + " contains the instance value");
        y.push_back(j);
    }

    InflatedExplanation out;
    out.kind = ExplanationKind::contrastive;
    out.features = y;
    for (auto j : resolve_order(order, m, y))
        if (contains(y, j)) out.probe_order.push_back(j);

    std::map<FeatureIndex, ValueSet> sets = start;
    p.count_call();
    if (!p.oracle().find_counterexample(contrastive_box(p, sets), p.class_id()))
        throw ValidationError("no counterexample with " + to_string(y) + " restricted to the given sets");

    for (auto j : out.probe_order) {
        const auto pieces = shrink_pieces(p, j, sets.at(j));
        std::vector<bool> keep(pieces.size(), true);
        std::size_t left = pieces.size();
        for (std::size_t i = 0; i < pieces.size() && left > 1; ++i) {
            keep[i] = false;
            ValueSet candidate = unite_all(pieces, keep);
            auto trial = sets;
            trial.insert_or_assign(j, candidate);
            p.count_call();
            const bool ok = p.oracle().find_counterexample(contrastive_box(p, trial), p.class_id()).has_value();
            out.probes.push_back(Probe{j, candidate, pieces[i], ok});
            if (ok) {
                --left;
                sets = std::move(trial);
            } else {
                keep[i] = true;
            }
        }
    }
    out.sets = std::move(sets);
    return out;
}

InflatedExplanation shrink_cxp(const ExplanationProblem& p, const FeatureSet& cxp, std::span<const FeatureIndex> order)
{
    if (cxp.empty()) throw ValidationError("the empty set admits no counterexample");
    std::map<FeatureIndex, ValueSet> start;
    for (auto j : cxp) {
        if (j >= p.feature_count()) throw ValidationError("feature " + std::to_string(j + 1) + " out of range");
        const auto& d = p.space().domain(j);
        ValueSet home = ValueSet::singleton(d, p.value(j));
        if (const auto* cells = p.oracle().discretization(); cells && d.is_ordinal())
            home = cells->cells_to_set(j, std::vector<std::uint32_t>{cells->cell_of(j, p.value(j))});
        auto rest = complement(home, d);
        if (!rest) throw ValidationError("feature " + p.space()[j].name + " has no other value to move to");
        start.emplace(j, std::move(*rest));
    }
    return shrink_from(p, start, order);
}

} // namespace xinflate
