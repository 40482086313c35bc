#include "xinflate/discretization.hpp"

#include "xinflate/error.hpp"

#include <algorithm>

namespace xinflate {

Discretization::Discretization(const FeatureSpace& space, std::vector<FeatureCells> features)
    : space_(&space), features_(std::move(features))
{
}

std::size_t Discretization::cell_count(FeatureIndex j) const
{
    const auto& f = features_.at(j);
    return f.categorical ? f.label_count : f.cells.size();
}

std::size_t Discretization::total_cells() const
{
    std::size_t n = 0;
    for (FeatureIndex j = 0; j < features_.size(); ++j) n += cell_count(j);
    return n;
}

std::uint32_t Discretization::cell_of(FeatureIndex j, const Value& v) const
{
    const auto& f = features_.at(j);
    if (f.categorical) return std::get<LabelId>(v).index;
    const auto& x = std::get<Rational>(v);
    return static_cast<std::uint32_t>(std::upper_bound(f.splits.begin(), f.splits.end(), x) - f.splits.begin());
}

std::uint32_t Discretization::split_cell(FeatureIndex j, const Rational& d) const
{
    const auto& f = features_.at(j);
    const Rational eff = space_->domain(j).is_integer() ? ceil_rat(d) : d;
    auto it = std::lower_bound(f.splits.begin(), f.splits.end(), eff);
    if (it == f.splits.end() || *it != eff) throw Error("split value missing from discretization");
    return static_cast<std::uint32_t>(it - f.splits.begin()) + 1;
}

Value Discretization::representative(FeatureIndex j, std::uint32_t k) const
{
    const auto& f = features_.at(j);
    if (f.categorical) return LabelId{k};
    const auto& c = f.cells.at(k);
    if (space_->domain(j).is_integer()) return c.lo;
    return Rational((c.lo + c.hi) / 2);
}

std::optional<Value> Discretization::member(FeatureIndex j, std::uint32_t k, const ValueSet* within) const
{
    const auto& f = features_.at(j);
    if (f.categorical) {
        if (within && !within->cat().contains(LabelId{k})) return std::nullopt;
        return LabelId{k};
    }
    Value rep = representative(j, k);
    if (!within || within->contains(rep)) return rep;
    const auto& o = space_->domain(j).ordinal();
    const auto& c = f.cells.at(k);
    for (const auto& p : within->intervals().parts()) {
        auto x = p.intersect(c);
        if (!x) continue;
        if (o.kind == OrdinalKind::integer) {
            if (auto lo = lowest_member(*x, o)) return lo->value;
            continue;
        }
        return Rational((x->lo + x->hi) / 2);
    }
    return std::nullopt;
}

std::vector<std::uint32_t> Discretization::cells_meeting(FeatureIndex j, const ValueSet& s) const
{
    const auto& f = features_.at(j);
    std::vector<std::uint32_t> out;
    if (f.categorical) {
        for (auto l : s.cat().labels()) out.push_back(l.index);
        return out;
    }
    const auto& o = space_->domain(j).ordinal();
    const auto& parts = s.intervals().parts();
    for (std::uint32_t k = 0; k < f.cells.size(); ++k) {
        for (const auto& p : parts) {
            if (p.lo > f.cells[k].hi) break;
            auto x = p.intersect(f.cells[k]);
            if (x && x->inhabited(o)) {
                out.push_back(k);
                break;
            }
        }
    }
    return out;
}

ValueSet Discretization::cells_to_set(FeatureIndex j, std::span<const std::uint32_t> cells) const
{
    const auto& f = features_.at(j);
    if (f.categorical) {
        std::vector<LabelId> labels;
        for (auto k : cells) labels.push_back(LabelId{k});
        return CatSet(std::move(labels));
    }
    std::vector<Interval> parts;
    for (auto k : cells) parts.push_back(f.cells.at(k));
    return IntervalUnion(std::move(parts));
}

namespace {

void harvest_tree(const Model& m, const DecisionTree& t, std::vector<std::vector<Rational>>& splits)
{
    for (const auto& n : t.nodes()) {
        if (n.kind != DecisionTree::NodeKind::ordinal_split) continue;
        const auto& o = m.space.domain(n.feature).ordinal();
        if (!(o.lo < n.threshold && n.threshold < o.hi))
            throw ValidationError("split " + format_rational(n.threshold) + " on feature '" +
                                  m.space[n.feature].name + "' is outside its domain");
        splits[n.feature].push_back(n.threshold);
    }
}

void harvest_list(const Model& m, const DecisionList& dl, std::vector<std::vector<Rational>>& splits)
{
    for (const auto& r : dl.rules) {
        for (const auto& lit : r.conditions) {
            const Domain& d = m.space.domain(lit.feature);
            if (d.is_categorical()) continue;
            const auto& o = d.ordinal();
            for (const auto& p : lit.allowed.intervals().parts()) {
                if (p.lo > o.lo) splits[lit.feature].push_back(p.lo);
                if (p.hi < o.hi) splits[lit.feature].push_back(p.hi);
            }
        }
    }
}

} // namespace

Discretization discretize(const Model& model)
{
    const auto& space = model.space;
    std::vector<std::vector<Rational>> splits(space.size());
    if (const auto* t = std::get_if<DecisionTree>(&model.classifier)) {
        harvest_tree(model, *t, splits);
    } else if (const auto* e = std::get_if<TreeEnsemble>(&model.classifier)) {
        for (const auto& tree : e->trees) harvest_tree(model, tree, splits);
    } else if (const auto* dl = std::get_if<DecisionList>(&model.classifier)) {
        harvest_list(model, *dl, splits);
    } else {
        throw ValidationError("monotonic models have no finite discretization");
    }

    std::vector<Discretization::FeatureCells> features(space.size());
    for (FeatureIndex j = 0; j < space.size(); ++j) {
        const Domain& d = space.domain(j);
        auto& f = features[j];
        if (d.is_categorical()) {
            f.categorical = true;
            f.label_count = d.label_count();
            continue;
        }
        const auto& o = d.ordinal();
        auto& v = splits[j];
        if (o.kind == OrdinalKind::integer)
            for (auto& s : v) s = ceil_rat(s);
        std::sort(v.begin(), v.end());
        v.erase(std::unique(v.begin(), v.end()), v.end());
        f.splits = v;
        Rational lo = o.lo;
        for (const auto& s : v) {
            f.cells.push_back(Interval::left_closed(lo, s));
            lo = s;
        }
        f.cells.push_back(Interval::closed(lo, o.hi));
    }
    return Discretization(space, std::move(features));
}

} // namespace xinflate
