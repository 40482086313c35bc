#include "xinflate/oracle.hpp"

#include "xinflate/error.hpp"
#include "xinflate/kernels.hpp"

#include <algorithm>

namespace xinflate {

std::string_view to_string(OracleBackend b)
{
    switch (b) {
    case OracleBackend::box_search: return "box";
    case OracleBackend::exhaustive_serial: return "exhaustive";
    case OracleBackend::exhaustive_parallel: return "exhaustive-omp";
    }
    return "box";
}

OracleBackend parse_backend(std::string_view name)
{
    for (auto b : {OracleBackend::box_search, OracleBackend::exhaustive_serial, OracleBackend::exhaustive_parallel})
        if (to_string(b) == name) return b;
    throw ValidationError("unknown oracle backend '" + std::string(name) + "'");
}

namespace {

void check_assignment(const FeatureSpace& space, const Assignment& a)
{
    for (const auto& [j, s] : a) {
        if (j >= space.size()) throw ValidationError("feature index " + std::to_string(j + 1) + " out of range");
        check_within(s, space.domain(j));
        if (!s.inhabited(space.domain(j)))
            throw ValidationError("empty value set for feature " + space[j].name);
    }
}

struct Corner {
    Rational score = 0;
    bool attained = true;
};

// Monotone reasoning on the extremes of every set. Exact: the score is
// linear with nonnegative weights, so the lowest and highest members of each
// set give the score extremes, and the class is monotone in the score.
std::optional<Point> monotone_counterexample(const MonotonicClassifier& mc, const FeatureSpace& space,
                                             const Assignment& a, ClassIndex c)
{
    const std::size_t m = space.size();
    // Witnesses approach an open extreme from inside its own part.
    std::vector<Interval> bottom_part(m), top_part(m);
    std::vector<Extreme> low(m), high(m);
    Corner bottom, top;
    for (std::size_t j = 0; j < m; ++j) {
        const auto& od = space.domain(j).ordinal();
        auto it = a.find(j);
        if (it == a.end()) {
            bottom_part[j] = top_part[j] = Interval::closed(od.lo, od.hi);
        } else {
            const auto& parts = it->second.intervals().parts();
            bottom_part[j] = parts.front();
            top_part[j] = parts.back();
        }
        auto lo = lowest_member(bottom_part[j], od);
        auto hi = highest_member(top_part[j], od);
        if (!lo || !hi) throw ValidationError("empty value set for feature " + space[j].name);
        low[j] = *lo;
        high[j] = *hi;
        const auto& w = mc.weights[j];
        if (w == 0) continue;
        bottom.score += w * low[j].value;
        top.score += w * high[j].value;
        bottom.attained = bottom.attained && low[j].attained;
        top.attained = top.attained && high[j].attained;
    }

    const auto& t = mc.thresholds;
    const ClassIndex class_bottom = mc.class_of_score(bottom.score);
    const ClassIndex class_top = top.attained
                                     ? mc.class_of_score(top.score)
                                     : static_cast<ClassIndex>(std::lower_bound(t.begin(), t.end(), top.score) - t.begin());

    auto approach = [&](bool upward, ClassIndex target) -> Point {
        // Move every non-attained coordinate toward its extreme until the
        // prediction settles on the limit class.
        Rational eps = Rational(1, 2);
        for (int iter = 0; iter < 4096; ++iter, eps /= 2) {
            Point p(m);
            for (std::size_t j = 0; j < m; ++j) {
                const Extreme& e = upward ? high[j] : low[j];
                if (e.attained) {
                    p[j] = e.value;
                } else if (upward) {
                    p[j] = e.value - eps * (e.value - top_part[j].lo);
                } else {
                    p[j] = e.value + eps * (bottom_part[j].hi - e.value);
                }
            }
            if (mc.class_of_score(mc.score(p)) == target) return p;
        }
        throw Error("monotone witness search did not converge");
    };

    if (class_bottom != c) return approach(false, class_bottom);
    if (class_top != c) return approach(true, class_top);
    return std::nullopt;
}

} // namespace

Oracle::Oracle(std::shared_ptr<const Model> model, OracleBackend backend)
    : model_(std::move(model)), backend_(backend)
{
    if (!model_) throw Error("null model");
    validate_model(*model_);
    if (const auto* mc = std::get_if<MonotonicClassifier>(&model_->classifier)) {
        Point lo, hi;
        for (const auto& f : space().features()) {
            lo.emplace_back(f.domain.ordinal().lo);
            hi.emplace_back(f.domain.ordinal().hi);
        }
        constant_ = mc->class_of_score(mc->score(lo)) == mc->class_of_score(mc->score(hi));
        return;
    }
    cells_.emplace(discretize(*model_));
    cell_model_.emplace(*model_, *cells_);
    CellBox full;
    for (std::size_t j = 0; j < space().size(); ++j)
        full.emplace_back(static_cast<std::uint32_t>(cells_->cell_count(j)), true);
    CellPoint origin(space().size(), 0);
    constant_ = !cell_model_->search(full, cell_model_->eval(origin)).has_value();
}

std::shared_ptr<const Oracle> Oracle::create(Model model, OracleBackend backend)
{
    return std::make_shared<const Oracle>(std::make_shared<const Model>(std::move(model)), backend);
}

CellBox Oracle::to_cells(const Assignment& box) const
{
    if (!cells_) throw Error("model has no cell view");
    CellBox out;
    out.reserve(space().size());
    for (std::size_t j = 0; j < space().size(); ++j) {
        const auto n = static_cast<std::uint32_t>(cells_->cell_count(j));
        auto it = box.find(j);
        if (it == box.end()) {
            out.emplace_back(n, true);
        } else {
            auto cells = cells_->cells_meeting(j, it->second);
            out.push_back(CellSet::of(n, cells));
        }
    }
    return out;
}

std::optional<Point> Oracle::cell_search(const Assignment& box, ClassIndex c) const
{
    const CellBox cb = to_cells(box);
    std::optional<CellPoint> hit;
    switch (backend_) {
    case OracleBackend::box_search: hit = cell_model_->search(cb, c); break;
    case OracleBackend::exhaustive_serial: hit = exhaustive_serial(*cell_model_, cb, c); break;
    case OracleBackend::exhaustive_parallel: hit = exhaustive_parallel(*cell_model_, cb, c); break;
    }
    if (!hit) return std::nullopt;
    Point p;
    p.reserve(hit->size());
    for (std::size_t j = 0; j < hit->size(); ++j) {
        auto it = box.find(j);
        auto v = cells_->member(j, (*hit)[j], it == box.end() ? nullptr : &it->second);
        if (!v) throw Error("cell witness outside its value set");
        p.push_back(std::move(*v));
    }
    return p;
}

std::optional<Point> Oracle::monotone_search(const Assignment& box, ClassIndex c) const
{
    return monotone_counterexample(std::get<MonotonicClassifier>(model_->classifier), space(), box, c);
}

std::optional<Point> Oracle::find_counterexample(const Assignment& box, ClassIndex c) const
{
    check_assignment(space(), box);
    if (c >= model_->classes.size()) throw ValidationError("class index out of range");
    return model_->is_monotonic() ? monotone_search(box, c) : cell_search(box, c);
}

ExplanationProblem ExplanationProblem::create(std::shared_ptr<const Oracle> oracle, Point v,
                                              std::optional<ClassIndex> c)
{
    if (!oracle) throw Error("null oracle");
    const Model& m = oracle->model();
    const ClassIndex predicted = predict(m, v);
    if (c && *c != predicted) {
        const auto name = [&](ClassIndex k) { return k < m.classes.size() ? m.classes[k] : std::to_string(k); };
        throw ValidationError("instance is classified as " + name(predicted) + ", not " + name(*c));
    }
    if (oracle->is_constant()) throw ValidationError("the classifier is constant");
    return ExplanationProblem(std::move(oracle), Instance{std::move(v), predicted});
}

Assignment ExplanationProblem::pinned(const FeatureSet& fixed) const
{
    Assignment a;
    for (auto j : fixed) a.emplace(j, ValueSet::singleton(space().domain(j), value(j)));
    return a;
}

std::optional<Point> find_counterexample(const ExplanationProblem& p, const Assignment& a)
{
    p.count_call();
    return p.oracle().find_counterexample(a, p.class_id());
}

bool holds_sufficiency(const ExplanationProblem& p, const Assignment& a) { return !find_counterexample(p, a); }

bool exists_counterexample(const ExplanationProblem& p, const Assignment& fixed, const Assignment& roam)
{
    const auto& space = p.space();
    Assignment box = roam;
    for (const auto& [j, s] : fixed) {
        if (roam.count(j)) throw ValidationError("feature " + space[j].name + " is both fixed and free");
        if (j >= space.size()) throw ValidationError("feature index " + std::to_string(j + 1) + " out of range");
        if (!s.is_singleton(space.domain(j)))
            throw ValidationError("fixed feature " + space[j].name + " is not pinned to one value");
        box.emplace(j, s);
    }
    for (std::size_t j = 0; j < space.size(); ++j)
        if (!box.count(j)) throw ValidationError("feature " + space[j].name + " is neither fixed nor free");
    return find_counterexample(p, box).has_value();
}

bool monotone_box_check(const MonotonicClassifier& mc, const FeatureSpace& space, const Assignment& a,
                        ClassIndex c)
{
    check_assignment(space, a);
    for (const auto& [j, s] : a) {
        if (s.is_categorical() || s.piece_count() != 1)
            throw ValidationError("monotone box for feature " + space[j].name + " is not a single interval");
    }
    return !monotone_counterexample(mc, space, a, c);
}

} // namespace xinflate
