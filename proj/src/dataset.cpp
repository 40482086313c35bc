#include "xinflate/dataset.hpp"

#include "xinflate/error.hpp"
#include "xinflate/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace xinflate {

std::vector<std::vector<std::string>> parse_csv(std::string_view text)
{
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t line = 1;
    auto end_row = [&]() {
        row.push_back(std::move(field));
        field.clear();
        const bool blank = row.size() == 1 && row[0].empty() && !was_quoted;
        if (!blank) out.push_back(std::move(row));
        row.clear();
        was_quoted = false;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                if (ch == '\n') ++line;
                field.push_back(ch);
            }
            continue;
        }
        switch (ch) {
        case '"':
            if (!field.empty()) throw ParseError("line " + std::to_string(line), "quote inside an unquoted field");
            quoted = true;
            was_quoted = true;
            break;
        case ',':
            row.push_back(std::move(field));
            field.clear();
            break;
        case '\r':
            if (i + 1 < text.size() && text[i + 1] == '\n') break;
            [[fallthrough]];
        case '\n':
            end_row();
            ++line;
            break;
        default:
            field.push_back(ch);
        }
    }
    if (quoted) throw ParseError("line " + std::to_string(line), "unterminated quoted field");
    if (!field.empty() || !row.empty() || was_quoted) end_row();
    return out;
}

namespace {

enum class ColumnType { infer, categorical, continuous, integer };

std::pair<std::string, ColumnType> split_header(const std::string& h)
{
    const auto colon = h.rfind(':');
    if (colon != std::string::npos) {
        const auto suffix = h.substr(colon + 1);
        const auto name = h.substr(0, colon);
        if (suffix == "cat") return {name, ColumnType::categorical};
        if (suffix == "num") return {name, ColumnType::continuous};
        if (suffix == "int") return {name, ColumnType::integer};
    }
    return {h, ColumnType::infer};
}

std::optional<Rational> try_number(const std::string& s)
{
    try {
        return parse_rational(s);
    } catch (const ValidationError&) {
        return std::nullopt;
    }
}

} // namespace

Dataset parse_dataset(std::string_view text, const CsvOptions& opts)
{
    auto records = parse_csv(text);
    if (records.empty()) throw ValidationError("dataset has no header");
    const auto header = records.front();
    const std::size_t width = header.size();
    if (width < 2) throw ValidationError("dataset needs at least one feature and a label column");
    for (std::size_t r = 1; r < records.size(); ++r)
        if (records[r].size() != width)
            throw ParseError("record " + std::to_string(r + 1),
                             "expected " + std::to_string(width) + " fields, got " + std::to_string(records[r].size()));
    if (records.size() < 2) throw ValidationError("dataset is empty");

    std::size_t label_col = width - 1;
    std::vector<std::pair<std::string, ColumnType>> cols;
    for (const auto& h : header) cols.push_back(split_header(h));
    if (opts.label) {
        auto it = std::find_if(cols.begin(), cols.end(), [&](const auto& c) { return c.first == *opts.label; });
        if (it == cols.end()) throw ValidationError("no column named " + *opts.label);
        label_col = static_cast<std::size_t>(it - cols.begin());
    }

    Dataset ds;
    std::vector<Feature> features;
    std::vector<std::size_t> source;
    for (std::size_t c = 0; c < width; ++c) {
        if (c == label_col) continue;
        auto [name, type] = cols[c];
        std::vector<std::optional<Rational>> nums;
        if (type != ColumnType::categorical) {
            for (std::size_t r = 1; r < records.size(); ++r) nums.push_back(try_number(records[r][c]));
            const bool numeric = std::all_of(nums.begin(), nums.end(), [](const auto& x) { return x.has_value(); });
            if (!numeric && type != ColumnType::infer)
                throw ValidationError("column " + name + " has non-numeric values");
            if (!numeric) type = ColumnType::categorical;
            else if (type == ColumnType::infer) type = ColumnType::continuous;
        }
        if (type == ColumnType::categorical) {
            std::vector<std::string> labels;
            for (std::size_t r = 1; r < records.size(); ++r)
                if (std::find(labels.begin(), labels.end(), records[r][c]) == labels.end())
                    labels.push_back(records[r][c]);
            if (labels.size() < 2) throw ValidationError("column " + name + " has a single value");
            features.push_back({name, Domain::categorical(std::move(labels))});
        } else {
            Rational lo = *nums.front(), hi = *nums.front();
            for (const auto& x : nums) {
                lo = std::min(lo, *x);
                hi = std::max(hi, *x);
            }
            if (type == ColumnType::integer) {
                for (const auto& x : nums)
                    if (!is_integral(*x)) throw ValidationError("column " + name + " has non-integer values");
            }
            if (lo == hi) hi = lo + 1;
            features.push_back(
                {name, Domain::ordinal(lo, hi, type == ColumnType::integer ? OrdinalKind::integer : OrdinalKind::continuous)});
        }
        source.push_back(c);
    }
    ds.space = FeatureSpace(std::move(features));
    for (std::size_t r = 1; r < records.size(); ++r) {
        std::vector<std::string> fields;
        for (auto c : source) fields.push_back(records[r][c]);
        ds.rows.push_back(parse_point(ds.space, fields));
        const auto& label = records[r][label_col];
        auto it = std::find(ds.classes.begin(), ds.classes.end(), label);
        if (it == ds.classes.end()) {
            ds.classes.push_back(label);
            ds.labels.push_back(ds.classes.size() - 1);
        } else {
            ds.labels.push_back(static_cast<ClassIndex>(it - ds.classes.begin()));
        }
    }
    return ds;
}

Dataset load_dataset(const std::filesystem::path& path, const CsvOptions& opts)
{
    return parse_dataset(read_text_file(path), opts);
}

Point parse_point(const FeatureSpace& space, const std::vector<std::string>& fields)
{
    if (fields.size() != space.size())
        throw ValidationError("expected " + std::to_string(space.size()) + " values, got " +
                              std::to_string(fields.size()));
    Point p;
    for (std::size_t j = 0; j < fields.size(); ++j) {
        std::string_view f = fields[j];
        while (!f.empty() && f.front() == ' ') f.remove_prefix(1);
        while (!f.empty() && f.back() == ' ') f.remove_suffix(1);
        p.push_back(space.domain(j).parse_value(f));
    }
    check_point(space, p);
    return p;
}

// ---------------------------------------------------------------- training

namespace {

struct Trainer {
    const Dataset& data;
    const ForestOptions& opts;
    std::mt19937_64& rng;
    std::size_t classes;
    std::size_t tried;

    double gini(const std::vector<std::size_t>& counts, std::size_t n) const
    {
        if (n == 0) return 0;
        double g = 1;
        for (auto c : counts) {
            const double q = static_cast<double>(c) / static_cast<double>(n);
            g -= q * q;
        }
        return g;
    }

    std::vector<std::size_t> count(const std::vector<std::size_t>& rows) const
    {
        std::vector<std::size_t> c(classes, 0);
        for (auto r : rows) ++c[data.labels[r]];
        return c;
    }

    struct Split {
        FeatureIndex feature = 0;
        bool categorical = false;
        Rational threshold;
        LabelId label;
        double score = 0;
    };

    std::optional<Split> best_split(const std::vector<std::size_t>& rows)
    {
        const auto m = data.space.size();
        std::vector<FeatureIndex> feats(m);
        std::iota(feats.begin(), feats.end(), FeatureIndex{0});
        for (std::size_t i = 0; i < tried; ++i) {
            std::uniform_int_distribution<std::size_t> pick(i, m - 1);
            std::swap(feats[i], feats[pick(rng)]);
        }
        const auto n = rows.size();
        const double parent = gini(count(rows), n);
        std::optional<Split> best;
        auto consider = [&](Split s, const std::vector<std::size_t>& left, std::size_t nl) {
            std::vector<std::size_t> right(classes);
            const auto total = count(rows);
            for (std::size_t k = 0; k < classes; ++k) right[k] = total[k] - left[k];
            const std::size_t nr = n - nl;
            if (nl == 0 || nr == 0) return;
            const double impurity = (static_cast<double>(nl) * gini(left, nl) + static_cast<double>(nr) * gini(right, nr)) /
                                    static_cast<double>(n);
            s.score = parent - impurity;
            if (s.score > 1e-12 && (!best || s.score > best->score + 1e-12)) best = std::move(s);
        };
        for (std::size_t i = 0; i < tried; ++i) {
            const auto j = feats[i];
            const auto& d = data.space.domain(j);
            if (d.is_categorical()) {
                for (std::uint32_t l = 0; l < d.label_count(); ++l) {
                    std::vector<std::size_t> left(classes, 0);
                    std::size_t nl = 0;
                    for (auto r : rows)
                        if (std::get<LabelId>(data.rows[r][j]).index != l) {
                            ++left[data.labels[r]];
                            ++nl;
                        }
                    Split s;
                    s.feature = j;
                    s.categorical = true;
                    s.label = LabelId{l};
                    consider(std::move(s), left, nl);
                }
                continue;
            }
            std::vector<std::size_t> order = rows;
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return std::get<Rational>(data.rows[a][j]) < std::get<Rational>(data.rows[b][j]);
            });
            std::vector<std::size_t> left(classes, 0);
            for (std::size_t k = 0; k + 1 < order.size(); ++k) {
                ++left[data.labels[order[k]]];
                const auto& a = std::get<Rational>(data.rows[order[k]][j]);
                const auto& b = std::get<Rational>(data.rows[order[k + 1]][j]);
                if (a == b) continue;
                Split s;
                s.feature = j;
                s.threshold = (a + b) / 2;
                consider(std::move(s), left, k + 1);
            }
        }
        return best;
    }

    ClassIndex majority_class(const std::vector<std::size_t>& rows) const
    {
        const auto c = count(rows);
        std::vector<std::uint32_t> votes(c.begin(), c.end());
        return majority(votes);
    }

    DecisionTree grow(const std::vector<std::size_t>& rows, std::size_t depth)
    {
        const auto c = count(rows);
        const bool pure = std::count_if(c.begin(), c.end(), [](std::size_t k) { return k > 0; }) <= 1;
        if (depth >= opts.max_depth || pure || rows.size() < 2) return DecisionTree::leaf(majority_class(rows));
        auto split = best_split(rows);
        if (!split) return DecisionTree::leaf(majority_class(rows));
        std::vector<std::size_t> left, right;
        for (auto r : rows) {
            const auto& v = data.rows[r][split->feature];
            const bool go_right = split->categorical ? std::get<LabelId>(v) == split->label
                                                     : std::get<Rational>(v) >= split->threshold;
            (go_right ? right : left).push_back(r);
        }
        auto l = grow(left, depth + 1);
        auto r = grow(right, depth + 1);
        if (split->categorical) return DecisionTree::categorical_split(split->feature, split->label, l, r);
        return DecisionTree::ordinal_split(split->feature, split->threshold, l, r);
    }
};

} // namespace

Model train_forest(const Dataset& data, const ForestOptions& opts)
{
    if (data.rows.empty()) throw ValidationError("cannot train on an empty dataset");
    if (data.rows.size() < 2) throw ValidationError("cannot train on a single row");
    if (std::all_of(data.labels.begin(), data.labels.end(), [&](ClassIndex c) { return c == data.labels.front(); }))
        throw ValidationError("cannot train on a single-class dataset");
    if (opts.trees == 0) throw ValidationError("a forest needs at least one tree");
    if (data.classes.size() > 64) throw ValidationError("at most 64 classes are supported");

    const auto m = data.space.size();
    std::size_t tried = opts.max_features.value_or(static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m)))));
    tried = std::clamp<std::size_t>(tried, 1, m);

    std::mt19937_64 rng(opts.seed);
    Trainer t{data, opts, rng, data.classes.size(), tried};
    TreeEnsemble forest;
    const auto n = data.rows.size();
    for (std::size_t i = 0; i < opts.trees; ++i) {
        std::vector<std::size_t> sample(n);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        for (auto& s : sample) s = pick(rng);
        forest.trees.push_back(t.grow(sample, 0));
    }
    Model model{data.space, data.classes, std::move(forest)};
    validate_model(model);
    return model;
}

double accuracy(const Model& m, const Dataset& data)
{
    if (data.rows.empty()) return 0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < data.rows.size(); ++i)
        if (predict(m, data.rows[i]) == data.labels[i]) ++ok;
    return static_cast<double>(ok) / static_cast<double>(data.rows.size());
}

} // namespace xinflate
