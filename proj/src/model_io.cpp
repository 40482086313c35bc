#include "xinflate/model_io.hpp"

#include "xinflate/error.hpp"

#include "json.hpp"

#include <fstream>
#include <sstream>

namespace xinflate {

using Json = nlohmann::ordered_json;

namespace {

constexpr const char* format_tag = "xinflate-model";
constexpr int format_version = 1;

struct Reader {
    const Json& node() const { return *ptr; }
    const Json* ptr;
    std::string at;

    [[noreturn]] void fail(const std::string& what) const { throw ParseError(at.empty() ? "/" : at, what); }

    Reader child(const std::string& key) const
    {
        if (!ptr->is_object()) fail("expected an object");
        auto it = ptr->find(key);
        if (it == ptr->end()) fail("missing \"" + key + "\"");
        return Reader{&*it, at + "/" + key};
    }
    bool has(const std::string& key) const { return ptr->is_object() && ptr->contains(key); }
    Reader item(std::size_t i) const { return Reader{&ptr->at(i), at + "/" + std::to_string(i)}; }
    std::size_t size() const
    {
        if (!ptr->is_array()) fail("expected an array");
        return ptr->size();
    }
    std::string str() const
    {
        if (!ptr->is_string()) fail("expected a string");
        return ptr->get<std::string>();
    }
    Rational rational() const
    {
        if (ptr->is_number_integer()) return Rational(ptr->get<long long>());
        try {
            return parse_rational(str());
        } catch (const ValidationError& e) {
            fail(std::string("bad number: ") + e.what());
        }
    }
};

Feature read_feature(const Reader& r)
{
    const auto name = r.child("name").str();
    const auto type = r.child("type").str();
    if (type == "categorical") {
        auto labels = r.child("labels");
        std::vector<std::string> names;
        for (std::size_t i = 0; i < labels.size(); ++i) names.push_back(labels.item(i).str());
        try {
            return {name, Domain::categorical(std::move(names))};
        } catch (const ValidationError& e) {
            labels.fail(e.what());
        }
    }
    if (type == "ordinal") {
        OrdinalKind kind = OrdinalKind::continuous;
        if (r.has("kind")) {
            const auto k = r.child("kind").str();
            if (k == "integer") kind = OrdinalKind::integer;
            else if (k != "continuous") r.child("kind").fail("kind must be continuous or integer");
        }
        try {
            return {name, Domain::ordinal(r.child("lo").rational(), r.child("hi").rational(), kind)};
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
    }
    r.child("type").fail("unknown feature type \"" + type + "\"");
}

struct ModelReader {
    FeatureSpace space;
    std::vector<std::string> classes;

    FeatureIndex feature(const Reader& r) const
    {
        try {
            return space.index_of(r.str());
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            r.fail(e.what());
        }
    }

    ClassIndex klass(const Reader& r) const
    {
        const auto name = r.str();
        for (std::size_t i = 0; i < classes.size(); ++i)
            if (classes[i] == name) return i;
        r.fail("unknown class \"" + name + "\"");
    }

    ValueSet set(FeatureIndex j, const Reader& r) const
    {
        const auto& d = space.domain(j);
        std::vector<LabelId> labels;
        std::vector<Interval> parts;
        for (std::size_t i = 0; i < r.size(); ++i) {
            const auto item = r.item(i);
            try {
                if (d.is_categorical()) labels.push_back(d.label(item.str()));
                else parts.push_back(parse_interval(item.str()));
            } catch (const ValidationError& e) {
                item.fail(e.what());
            }
        }
        if (d.is_categorical()) {
            if (labels.empty()) r.fail("empty label set");
            return CatSet(std::move(labels));
        }
        if (parts.empty()) r.fail("empty interval list");
        return IntervalUnion(std::move(parts));
    }

    void tree(const Reader& r, std::vector<DecisionTree::Node>& nodes) const
    {
        const auto index = nodes.size();
        nodes.emplace_back();
        DecisionTree::Node n;
        if (r.has("leaf")) {
            n.kind = DecisionTree::NodeKind::leaf;
            n.leaf_class = klass(r.child("leaf"));
            nodes[index] = n;
            return;
        }
        n.feature = feature(r.child("feature"));
        const auto& d = space.domain(n.feature);
        Reader below = r, above = r;
        if (r.has("threshold")) {
            if (!d.is_ordinal()) r.child("threshold").fail("threshold on a categorical feature");
            n.kind = DecisionTree::NodeKind::ordinal_split;
            n.threshold = r.child("threshold").rational();
            below = r.child("lt");
            above = r.child("ge");
        } else if (r.has("equals")) {
            if (!d.is_categorical()) r.child("equals").fail("label test on an ordinal feature");
            n.kind = DecisionTree::NodeKind::categorical_split;
            try {
                n.label = d.label(r.child("equals").str());
            } catch (const ParseError&) {
                throw;
            } catch (const ValidationError& e) {
                r.child("equals").fail(e.what());
            }
            below = r.child("ne");
            above = r.child("eq");
        } else {
            r.fail("node needs \"leaf\", \"threshold\" or \"equals\"");
        }
        n.left = static_cast<std::int32_t>(nodes.size());
        tree(below, nodes);
        n.right = static_cast<std::int32_t>(nodes.size());
        tree(above, nodes);
        nodes[index] = n;
    }

    DecisionTree tree(const Reader& r) const
    {
        std::vector<DecisionTree::Node> nodes;
        tree(r, nodes);
        return DecisionTree::from_nodes(std::move(nodes));
    }

    Classifier classifier(const Reader& r) const
    {
        const auto type = r.child("type").str();
        if (type == "monotonic") {
            MonotonicClassifier mc;
            auto w = r.child("weights");
            for (std::size_t i = 0; i < w.size(); ++i) mc.weights.push_back(w.item(i).rational());
            auto t = r.child("thresholds");
            for (std::size_t i = 0; i < t.size(); ++i) mc.thresholds.push_back(t.item(i).rational());
            return mc;
        }
        if (type == "decision_list") {
            DecisionList dl;
            auto rules = r.child("rules");
            for (std::size_t i = 0; i < rules.size(); ++i) {
                auto rr = rules.item(i);
                Rule rule;
                auto when = rr.child("when");
                for (std::size_t k = 0; k < when.size(); ++k) {
                    auto lit = when.item(k);
                    const auto j = feature(lit.child("feature"));
                    rule.conditions.push_back(Literal{j, set(j, lit.child("in"))});
                }
                rule.class_id = klass(rr.child("class"));
                dl.rules.push_back(std::move(rule));
            }
            dl.default_class = klass(r.child("default"));
            return dl;
        }
        if (type == "decision_tree") return tree(r.child("root"));
        if (type == "tree_ensemble") {
            TreeEnsemble e;
            auto trees = r.child("trees");
            for (std::size_t i = 0; i < trees.size(); ++i) e.trees.push_back(tree(trees.item(i)));
            return e;
        }
        r.child("type").fail("unknown classifier type \"" + type + "\"");
    }
};

Json write_set(const Domain& d, const ValueSet& s)
{
    Json out = Json::array();
    if (d.is_categorical()) {
        for (auto l : s.cat().labels()) out.push_back(d.label_name(l));
    } else {
        for (const auto& p : s.intervals().parts()) out.push_back(p.str());
    }
    return out;
}

Json write_tree(const Model& m, const DecisionTree& t, std::int32_t at)
{
    const auto& n = t.nodes()[static_cast<std::size_t>(at)];
    Json out = Json::object();
    switch (n.kind) {
    case DecisionTree::NodeKind::leaf:
        out["leaf"] = m.classes[n.leaf_class];
        break;
    case DecisionTree::NodeKind::ordinal_split:
        out["feature"] = m.space[n.feature].name;
        out["threshold"] = format_rational(n.threshold);
        out["lt"] = write_tree(m, t, n.left);
        out["ge"] = write_tree(m, t, n.right);
        break;
    case DecisionTree::NodeKind::categorical_split:
        out["feature"] = m.space[n.feature].name;
        out["equals"] = m.space.domain(n.feature).label_name(n.label);
        out["ne"] = write_tree(m, t, n.left);
        out["eq"] = write_tree(m, t, n.right);
        break;
    }
    return out;
}

} // namespace

Model parse_model(std::string_view text)
{
    Json doc;
    try {
        doc = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), "invalid JSON");
    }
    Reader root{&doc, ""};
    if (root.child("format").str() != format_tag) root.child("format").fail("not an xinflate model");
    const auto& v = root.child("version");
    if (!v.node().is_number_integer() || v.node().get<int>() != format_version) v.fail("unsupported version");

    ModelReader mr;
    auto feats = root.child("features");
    std::vector<Feature> features;
    for (std::size_t i = 0; i < feats.size(); ++i) features.push_back(read_feature(feats.item(i)));
    try {
        mr.space = FeatureSpace(std::move(features));
    } catch (const ValidationError& e) {
        feats.fail(e.what());
    }
    auto classes = root.child("classes");
    for (std::size_t i = 0; i < classes.size(); ++i) mr.classes.push_back(classes.item(i).str());

    Model m{mr.space, mr.classes, mr.classifier(root.child("classifier"))};
    validate_model(m);
    return m;
}

std::string dump_model(const Model& m)
{
    Json doc = Json::object();
    doc["format"] = format_tag;
    doc["version"] = format_version;
    Json feats = Json::array();
    for (const auto& f : m.space.features()) {
        Json jf = Json::object();
        jf["name"] = f.name;
        if (f.domain.is_categorical()) {
            jf["type"] = "categorical";
            jf["labels"] = f.domain.categorical().labels;
        } else {
            const auto& o = f.domain.ordinal();
            jf["type"] = "ordinal";
            jf["lo"] = format_rational(o.lo);
            jf["hi"] = format_rational(o.hi);
            jf["kind"] = o.kind == OrdinalKind::integer ? "integer" : "continuous";
        }
        feats.push_back(std::move(jf));
    }
    doc["features"] = std::move(feats);
    doc["classes"] = m.classes;

    Json c = Json::object();
    std::visit(
        [&](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, MonotonicClassifier>) {
                c["type"] = "monotonic";
                Json w = Json::array(), t = Json::array();
                for (const auto& x : k.weights) w.push_back(format_rational(x));
                for (const auto& x : k.thresholds) t.push_back(format_rational(x));
                c["weights"] = std::move(w);
                c["thresholds"] = std::move(t);
            } else if constexpr (std::is_same_v<T, DecisionList>) {
                c["type"] = "decision_list";
                Json rules = Json::array();
                for (const auto& r : k.rules) {
                    Json when = Json::array();
                    for (const auto& lit : r.conditions) {
                        Json jl = Json::object();
                        jl["feature"] = m.space[lit.feature].name;
                        jl["in"] = write_set(m.space.domain(lit.feature), lit.allowed);
                        when.push_back(std::move(jl));
                    }
                    Json jr = Json::object();
                    jr["when"] = std::move(when);
                    jr["class"] = m.classes[r.class_id];
                    rules.push_back(std::move(jr));
                }
                c["rules"] = std::move(rules);
                c["default"] = m.classes[k.default_class];
            } else if constexpr (std::is_same_v<T, DecisionTree>) {
                c["type"] = "decision_tree";
                c["root"] = write_tree(m, k, 0);
            } else {
                c["type"] = "tree_ensemble";
                Json trees = Json::array();
                for (const auto& t : k.trees) trees.push_back(write_tree(m, t, 0));
                c["trees"] = std::move(trees);
            }
        },
        m.classifier);
    doc["classifier"] = std::move(c);
    return doc.dump(2) + "\n";
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

Model load_model(const std::filesystem::path& path) { return parse_model(read_text_file(path)); }

void save_model(const Model& m, const std::filesystem::path& path) { write_text_file(path, dump_model(m)); }

} // namespace xinflate
