#include "xinflate/explain.hpp"

#include "xinflate/error.hpp"
#include "xinflate/parallel.hpp"

#include <algorithm>
#include <exception>

namespace xinflate {

std::vector<FeatureIndex> resolve_order(std::span<const FeatureIndex> order, std::size_t feature_count,
                                        const FeatureSet& required)
{
    std::vector<FeatureIndex> out;
    if (order.empty()) {
        out.resize(feature_count);
        for (std::size_t j = 0; j < feature_count; ++j) out[j] = j;
        return out;
    }
    std::vector<bool> seen(feature_count, false);
    for (auto j : order) {
        if (j >= feature_count) throw ValidationError("feature " + std::to_string(j + 1) + " out of range in order");
        if (seen[j]) throw ValidationError("feature " + std::to_string(j + 1) + " repeated in order");
        seen[j] = true;
        out.push_back(j);
    }
    for (auto j : required)
        if (j >= feature_count || !seen[j])
            throw ValidationError("order is missing feature " + std::to_string(j + 1));
    return out;
}

namespace {

FeatureSet all_features(std::size_t m)
{
    FeatureSet f(m);
    for (std::size_t j = 0; j < m; ++j) f[j] = j;
    return f;
}

FeatureSet complement_of(const FeatureSet& s, std::size_t m)
{
    FeatureSet out;
    for (std::size_t j = 0; j < m; ++j)
        if (!contains(s, j)) out.push_back(j);
    return out;
}

FeatureSet without(const FeatureSet& s, FeatureIndex j)
{
    FeatureSet out;
    for (auto k : s)
        if (k != j) out.push_back(k);
    return out;
}

} // namespace

bool is_waxp(const ExplanationProblem& p, const FeatureSet& x) { return holds_sufficiency(p, p.pinned(x)); }

bool is_wcxp(const ExplanationProblem& p, const FeatureSet& y)
{
    return !holds_sufficiency(p, p.pinned(complement_of(y, p.feature_count())));
}

FeatureSet find_axp(const ExplanationProblem& p, std::span<const FeatureIndex> order)
{
    const auto m = p.feature_count();
    const auto seq = resolve_order(order, m, all_features(m));
    if (seq.size() != m) throw ValidationError("order must list every feature");
    FeatureSet x = all_features(m);
    for (auto j : seq) {
        auto trial = without(x, j);
        if (is_waxp(p, trial)) x = std::move(trial);
    }
    return x;
}

FeatureSet find_cxp(const ExplanationProblem& p, std::span<const FeatureIndex> order)
{
    const auto m = p.feature_count();
    const auto seq = resolve_order(order, m, all_features(m));
    if (seq.size() != m) throw ValidationError("order must list every feature");
    // Freeing everything changes the class because the model is not constant.
    FeatureSet y = all_features(m);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
        auto trial = without(y, *it);
        if (is_wcxp(p, trial)) y = std::move(trial);
    }
    return y;
}

namespace {

// Calls f(subset) for every k-subset of {0..m-1} in lexicographic order.
template <typename F>
void for_each_subset(std::size_t m, std::size_t k, F&& f)
{
    std::vector<FeatureIndex> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    for (;;) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == m - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t t = i; t < k; ++t) idx[t] = idx[t - 1] + 1;
    }
}

bool has_subset_in(const std::vector<FeatureSet>& found, const FeatureSet& s)
{
    return std::any_of(found.begin(), found.end(), [&](const FeatureSet& f) { return is_subset(f, s); });
}

template <typename Check>
std::vector<char> evaluate(const std::vector<FeatureSet>& candidates, Check&& check)
{
    std::vector<char> ok(candidates.size(), 0);
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(candidates.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(worker_count())
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            ok[static_cast<std::size_t>(i)] = check(candidates[static_cast<std::size_t>(i)]) ? 1 : 0;
        } catch (...) {
#pragma omp critical(xinflate_enum_error)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    return ok;
}

} // namespace

Enumeration enumerate_all(const ExplanationProblem& p, const EnumerationLimits& limits)
{
    const auto m = p.feature_count();
    if (m > limits.max_features)
        throw BudgetExceeded("too many features to enumerate (" + std::to_string(m) + ")", Enumeration{{}, {}, false});
    Enumeration out;
    std::uint64_t checks = 0;
    for (std::size_t k = 0; k <= m; ++k) {
        std::vector<FeatureSet> ax, cx;
        for_each_subset(m, k, [&](const std::vector<FeatureIndex>& s) {
            if (!has_subset_in(out.axps, s)) ax.push_back(s);
            if (!has_subset_in(out.cxps, s)) cx.push_back(s);
        });
        if (ax.empty() && cx.empty()) break;
        checks += ax.size() + cx.size();
        if (checks > limits.max_checks) {
            out.complete = false;
            throw BudgetExceeded("enumeration budget of " + std::to_string(limits.max_checks) + " checks exceeded",
                                 out);
        }
        auto ax_ok = evaluate(ax, [&](const FeatureSet& s) { return is_waxp(p, s); });
        auto cx_ok = evaluate(cx, [&](const FeatureSet& s) { return is_wcxp(p, s); });
        for (std::size_t i = 0; i < ax.size(); ++i)
            if (ax_ok[i]) out.axps.push_back(ax[i]);
        for (std::size_t i = 0; i < cx.size(); ++i)
            if (cx_ok[i]) out.cxps.push_back(cx[i]);
    }
    return out;
}

std::vector<FeatureSet> minimal_hitting_sets(const std::vector<FeatureSet>& family)
{
    if (family.empty()) throw ValidationError("hitting sets of an empty family");
    FeatureSet universe;
    for (const auto& s : family) {
        if (s.empty()) throw ValidationError("family contains the empty set, which cannot be hit");
        universe.insert(universe.end(), s.begin(), s.end());
    }
    universe = make_feature_set(std::move(universe));
    const auto n = universe.size();
    auto hits = [&](const FeatureSet& h) {
        for (const auto& s : family) {
            bool any = false;
            for (auto j : s)
                if (contains(h, j)) {
                    any = true;
                    break;
                }
            if (!any) return false;
        }
        return true;
    };
    std::vector<FeatureSet> out;
    for (std::size_t k = 1; k <= n; ++k) {
        for_each_subset(n, k, [&](const std::vector<FeatureIndex>& idx) {
            FeatureSet h;
            for (auto i : idx) h.push_back(universe[i]);
            if (!has_subset_in(out, h) && hits(h)) out.push_back(std::move(h));
        });
    }
    return out;
}

} // namespace xinflate
