#include "xinflate/model_core.hpp"

#include "xinflate/error.hpp"

#include <algorithm>
#include <set>

namespace xinflate {

FeatureSet make_feature_set(std::vector<FeatureIndex> features)
{
    std::sort(features.begin(), features.end());
    features.erase(std::unique(features.begin(), features.end()), features.end());
    return features;
}

bool contains(const FeatureSet& s, FeatureIndex j)
{
    return std::binary_search(s.begin(), s.end(), j);
}

bool is_subset(const FeatureSet& a, const FeatureSet& b)
{
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

std::string to_string(const FeatureSet& s)
{
    std::string out = "{";
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) out += ",";
        out += std::to_string(s[i] + 1);
    }
    return out + "}";
}

FeatureSpace::FeatureSpace(std::vector<Feature> features) : features_(std::move(features))
{
    if (features_.empty()) throw ValidationError("feature space needs at least one feature");
    std::set<std::string> names;
    for (const auto& f : features_) {
        if (f.name.empty()) throw ValidationError("feature with empty name");
        if (!names.insert(f.name).second) throw ValidationError("duplicate feature name '" + f.name + "'");
    }
}

FeatureIndex FeatureSpace::index_of(std::string_view name) const
{
    for (FeatureIndex j = 0; j < features_.size(); ++j)
        if (features_[j].name == name) return j;
    throw ValidationError("unknown feature '" + std::string(name) + "'");
}

void check_point(const FeatureSpace& space, const Point& p)
{
    if (p.size() != space.size())
        throw ValidationError("instance has " + std::to_string(p.size()) + " values, model expects " +
                              std::to_string(space.size()));
    for (FeatureIndex j = 0; j < p.size(); ++j)
        if (!space.domain(j).contains(p[j]))
            throw ValidationError("value of feature '" + space[j].name + "' outside its domain");
}

std::size_t InflatedExplanation::added(FeatureIndex j) const
{
    return static_cast<std::size_t>(
        std::count_if(probes.begin(), probes.end(), [j](const Probe& p) { return p.feature == j && p.accepted; }));
}

std::size_t InflatedExplanation::total_added() const
{
    return static_cast<std::size_t>(
        std::count_if(probes.begin(), probes.end(), [](const Probe& p) { return p.accepted; }));
}

std::size_t InflatedExplanation::probe_count(FeatureIndex j) const
{
    return static_cast<std::size_t>(
        std::count_if(probes.begin(), probes.end(), [j](const Probe& p) { return p.feature == j; }));
}

} // namespace xinflate
