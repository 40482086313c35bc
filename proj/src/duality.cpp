#include "xinflate/duality.hpp"

#include "xinflate/error.hpp"

#include <algorithm>

namespace xinflate {

namespace {

std::optional<FeatureIndex> first_hit(const InflatedExplanation& iaxp, const InflatedExplanation& icxp,
                                      const FeatureSpace* space)
{
    if (iaxp.kind != ExplanationKind::abductive || icxp.kind != ExplanationKind::contrastive)
        throw ValidationError("check_hits takes an abductive and a contrastive explanation");
    for (auto j : iaxp.features) {
        if (!contains(icxp.features, j)) continue;
        const auto& e = iaxp.sets.at(j);
        const auto& g = icxp.sets.at(j);
        if (e.is_categorical() != g.is_categorical())
            throw ValidationError("feature " + std::to_string(j + 1) + " has sets of different kinds");
        const auto common = e.intersect(g);
        if (!common || (space && !common->inhabited(space->domain(j)))) return j;
    }
    return std::nullopt;
}

} // namespace

std::optional<FeatureIndex> check_hits(const InflatedExplanation& iaxp, const InflatedExplanation& icxp)
{
    return first_hit(iaxp, icxp, nullptr);
}

std::optional<FeatureIndex> check_hits(const ExplanationProblem& p, const InflatedExplanation& iaxp,
                                       const InflatedExplanation& icxp)
{
    auto check = [&](const InflatedExplanation& x, bool inside) {
        for (auto j : x.features) {
            if (j >= p.feature_count()) throw ValidationError("explanation refers to a missing feature");
            auto it = x.sets.find(j);
            if (it == x.sets.end()) throw ValidationError("explanation lacks a set for feature " + std::to_string(j + 1));
            check_within(it->second, p.space().domain(j));
            if (it->second.contains(p.value(j)) != inside)
                throw ValidationError("explanation does not belong to this instance");
        }
    };
    check(iaxp, true);
    check(icxp, false);
    return first_hit(iaxp, icxp, &p.space());
}

namespace {

std::optional<ValueSet> intersect_all(const std::vector<ValueSet>& sets)
{
    std::optional<ValueSet> acc = sets.front();
    for (std::size_t i = 1; i < sets.size() && acc; ++i) acc = acc->intersect(sets[i]);
    return acc;
}

// For each selected feature, the complements of the given sets.
std::map<FeatureIndex, std::vector<ValueSet>> gather(const ExplanationProblem& p,
                                                     const std::vector<InflatedExplanation>& family,
                                                     std::span<const FeatureIndex> selection, ExplanationKind kind,
                                                     InflatedExplanation& candidate)
{
    if (family.empty()) throw ValidationError("the construction needs a nonempty list of explanations");
    if (selection.size() != family.size()) throw ValidationError("one selected feature per explanation is required");
    std::map<FeatureIndex, std::vector<ValueSet>> parts;
    for (std::size_t i = 0; i < family.size(); ++i) {
        const auto& x = family[i];
        if (x.kind != kind) throw ValidationError("explanation list mixes kinds");
        const auto j = selection[i];
        if (!contains(x.features, j))
            throw ValidationError("selected feature " + std::to_string(j + 1) + " is not in explanation " +
                                  to_string(x.features));
        auto rest = complement(x.sets.at(j), p.space().domain(j));
        if (!rest) {
            candidate.features.push_back(j);
            throw ConstructionError("feature " + p.space()[j].name + " has a full-domain set", candidate);
        }
        parts[j].push_back(std::move(*rest));
    }
    return parts;
}

bool inhabited_in(const ExplanationProblem& p, FeatureIndex j, const std::optional<ValueSet>& s)
{
    return s && s->inhabited(p.space().domain(j));
}

bool counterexample(const ExplanationProblem& p, const std::map<FeatureIndex, ValueSet>& sets)
{
    p.count_call();
    return p.oracle().find_counterexample(contrastive_box(p, sets), p.class_id()).has_value();
}

} // namespace

InflatedExplanation icxp_from_iaxps(const ExplanationProblem& p, const std::vector<InflatedExplanation>& iaxps,
                                    std::span<const FeatureIndex> theta)
{
    InflatedExplanation cand;
    cand.kind = ExplanationKind::contrastive;
    auto parts = gather(p, iaxps, theta, ExplanationKind::abductive, cand);
    for (auto& [j, list] : parts) {
        cand.features.push_back(j);
        auto g = intersect_all(list);
        if (!inhabited_in(p, j, g)) throw ConstructionError("empty set for feature " + p.space()[j].name, cand);
        cand.sets.emplace(j, std::move(*g));
    }
    cand.probe_order = cand.features;
    if (!counterexample(p, cand.sets)) throw ConstructionError("the constructed sets admit no counterexample", cand);
    for (auto j : cand.probe_order) {
        if (cand.sets.size() == 1) break;
        auto trial = cand.sets;
        trial.erase(j);
        if (counterexample(p, trial)) {
            cand.sets = std::move(trial);
            cand.features.erase(std::find(cand.features.begin(), cand.features.end(), j));
        }
    }
    return cand;
}

InflatedExplanation iaxp_from_icxps(const ExplanationProblem& p, const std::vector<InflatedExplanation>& icxps,
                                    std::span<const FeatureIndex> phi, const InflationConfig& cfg)
{
    check_config(cfg);
    InflatedExplanation cand;
    cand.kind = ExplanationKind::abductive;
    auto parts = gather(p, icxps, phi, ExplanationKind::contrastive, cand);
    Assignment current;
    for (auto& [j, list] : parts) {
        cand.features.push_back(j);
        auto e = intersect_all(list);
        if (!inhabited_in(p, j, e)) throw ConstructionError("empty set for feature " + p.space()[j].name, cand);
        current.emplace(j, std::move(*e));
    }
    cand.sets = current;
    cand.probe_order = cand.features;
    if (!holds_sufficiency(p, current)) throw ConstructionError("the constructed sets do not force the class", cand);
    bool stepped = false;
    for (auto j : cand.probe_order) {
        current.insert_or_assign(j, grow_set(p, j, current.at(j), current, cfg, &cand.probes));
        stepped = stepped || (!p.space().domain(j).is_categorical() && !p.oracle().discretization());
    }
    cand.sets = std::move(current);
    cand.delta = stepped ? cfg.delta : Rational(0);
    return cand;
}

namespace {

template <typename Build>
SelectionResult by_selection(const std::vector<InflatedExplanation>& family, std::uint64_t max_selections,
                             Build&& build)
{
    if (family.empty()) throw ValidationError("the construction needs a nonempty list of explanations");
    std::uint64_t total = 1;
    for (const auto& x : family) {
        if (x.features.empty()) throw ValidationError("explanation with no features");
        total *= x.features.size();
        if (total > max_selections) throw ValidationError("too many selections to try exhaustively");
    }
    SelectionResult out;
    std::vector<InflatedExplanation> valid;
    std::vector<std::size_t> pos(family.size(), 0);
    std::vector<FeatureIndex> sel(family.size());
    for (std::uint64_t n = 0; n < total; ++n) {
        for (std::size_t i = 0; i < family.size(); ++i) sel[i] = family[i].features[pos[i]];
        try {
            valid.push_back(build(sel));
        } catch (const ConstructionError& e) {
            out.failures.push_back(ConstructionFailure{sel, e.candidate(), e.what()});
        }
        for (std::size_t i = family.size(); i-- > 0;) {
            if (++pos[i] < family[i].features.size()) break;
            pos[i] = 0;
        }
    }
    for (std::size_t a = 0; a < valid.size(); ++a) {
        bool keep = true;
        for (std::size_t b = 0; b < valid.size() && keep; ++b) {
            if (a == b) continue;
            const auto& fa = valid[a].features;
            const auto& fb = valid[b].features;
            if (is_subset(fb, fa) && fb != fa) keep = false;
        }
        for (const auto& m : out.minimal)
            if (m.features == valid[a].features && m.sets == valid[a].sets) keep = false;
        if (keep) out.minimal.push_back(valid[a]);
    }
    return out;
}

} // namespace

SelectionResult icxps_by_selection(const ExplanationProblem& p, const std::vector<InflatedExplanation>& iaxps,
                                   std::uint64_t max_selections)
{
    return by_selection(iaxps, max_selections, [&](const std::vector<FeatureIndex>& theta) {
        return icxp_from_iaxps(p, iaxps, theta);
    });
}

SelectionResult iaxps_by_selection(const ExplanationProblem& p, const std::vector<InflatedExplanation>& icxps,
                                   const InflationConfig& cfg, std::uint64_t max_selections)
{
    return by_selection(icxps, max_selections, [&](const std::vector<FeatureIndex>& phi) {
        return iaxp_from_icxps(p, icxps, phi, cfg);
    });
}

ExplanationSets enumerate_inflated(const ExplanationProblem& p, const InflationConfig& cfg,
                                   const EnumerationLimits& limits)
{
    const auto all = enumerate_all(p, limits);
    ExplanationSets out;
    InflationConfig c = cfg;
    c.validate_input = false;
    for (const auto& x : all.axps) out.iaxps.push_back(inflate_axp(p, x, c));
    for (const auto& y : all.cxps) out.icxps.push_back(shrink_cxp(p, y, cfg.order));
    out.complete = all.complete;
    return out;
}

std::vector<InflatedExplanation> atomic_icxps(const ExplanationProblem& p, const std::vector<FeatureSet>& cxps,
                                              std::uint64_t max_candidates)
{
    const auto* cells = p.oracle().discretization();
    std::vector<InflatedExplanation> out;
    std::uint64_t tried = 0;
    for (const auto& y : cxps) {
        std::vector<std::vector<ValueSet>> choices;
        for (auto j : y) {
            const auto& d = p.space().domain(j);
            if (d.is_ordinal() && !cells) throw ValidationError("atomic explanations need finite domains or cells");
            ValueSet home = ValueSet::singleton(d, p.value(j));
            if (cells && d.is_ordinal())
                home = cells->cells_to_set(j, std::vector<std::uint32_t>{cells->cell_of(j, p.value(j))});
            auto rest = complement(home, d);
            if (!rest) throw ValidationError("feature " + p.space()[j].name + " has no other value");
            choices.push_back(shrink_pieces(p, j, *rest));
        }
        std::vector<std::size_t> pos(y.size(), 0);
        for (bool done = y.empty(); !done;) {
            if (++tried > max_candidates) throw ValidationError("too many atomic candidates");
            std::map<FeatureIndex, ValueSet> sets;
            for (std::size_t i = 0; i < y.size(); ++i) sets.emplace(y[i], choices[i][pos[i]]);
            if (counterexample(p, sets)) {
                InflatedExplanation x;
                x.kind = ExplanationKind::contrastive;
                x.features = y;
                x.probe_order = y;
                x.sets = std::move(sets);
                out.push_back(std::move(x));
            }
            for (std::size_t i = y.size();;) {
                if (i == 0) {
                    done = true;
                    break;
                }
                --i;
                if (++pos[i] < choices[i].size()) break;
                pos[i] = 0;
            }
        }
    }
    return out;
}

bool holds_plain_icxp(const ExplanationProblem& p, const InflatedExplanation& iaxp, const FeatureSet& y)
{
    Assignment box;
    for (auto j : iaxp.features)
        if (!contains(y, j)) box.emplace(j, iaxp.sets.at(j));
    return !holds_sufficiency(p, box);
}

std::vector<HitViolation> hit_violations(const ExplanationProblem& p, const ExplanationSets& sets)
{
    std::vector<HitViolation> out;
    for (std::size_t a = 0; a < sets.iaxps.size(); ++a)
        for (std::size_t c = 0; c < sets.icxps.size(); ++c)
            if (!check_hits(p, sets.iaxps[a], sets.icxps[c])) out.push_back({a, c});
    return out;
}

} // namespace xinflate
