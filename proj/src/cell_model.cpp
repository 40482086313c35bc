#include "xinflate/cell_model.hpp"

#include "xinflate/error.hpp"

#include <limits>

namespace xinflate {

// ---------------------------------------------------------------- CellSet

CellSet::CellSet(std::uint32_t universe, bool full) : words_((universe + 63) / 64, 0), n_(universe)
{
    if (!full) return;
    for (auto& w : words_) w = ~std::uint64_t{0};
    if (n_ % 64) words_.back() = (std::uint64_t{1} << (n_ % 64)) - 1;
}

CellSet CellSet::of(std::uint32_t universe, std::span<const std::uint32_t> cells)
{
    CellSet s(universe, false);
    for (auto k : cells) s.set(k);
    return s;
}

bool CellSet::empty() const
{
    for (auto w : words_)
        if (w) return false;
    return true;
}

std::uint32_t CellSet::count() const
{
    std::uint32_t c = 0;
    for (auto w : words_) c += static_cast<std::uint32_t>(std::popcount(w));
    return c;
}

std::uint32_t CellSet::first() const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i]) return static_cast<std::uint32_t>(i * 64 + std::countr_zero(words_[i]));
    return n_;
}

std::vector<std::uint32_t> CellSet::members() const
{
    std::vector<std::uint32_t> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
        auto w = words_[i];
        while (w) {
            out.push_back(static_cast<std::uint32_t>(i * 64 + std::countr_zero(w)));
            w &= w - 1;
        }
    }
    return out;
}

namespace {

std::uint64_t low_mask(std::uint32_t bits) { return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1; }

} // namespace

bool CellSet::any_below(std::uint32_t k) const
{
    const std::uint32_t full = k / 64;
    for (std::uint32_t i = 0; i < full && i < words_.size(); ++i)
        if (words_[i]) return true;
    if (full < words_.size() && (words_[full] & low_mask(k % 64))) return true;
    return false;
}

bool CellSet::any_from(std::uint32_t k) const
{
    const std::uint32_t w = k / 64;
    if (w >= words_.size()) return false;
    if (words_[w] & ~low_mask(k % 64)) return true;
    for (std::size_t i = w + 1; i < words_.size(); ++i)
        if (words_[i]) return true;
    return false;
}

CellSet CellSet::below(std::uint32_t k) const
{
    CellSet r = *this;
    const std::uint32_t w = k / 64;
    for (std::size_t i = 0; i < r.words_.size(); ++i) {
        if (i > w) r.words_[i] = 0;
        else if (i == w) r.words_[i] &= low_mask(k % 64);
    }
    return r;
}

CellSet CellSet::from(std::uint32_t k) const
{
    CellSet r = *this;
    const std::uint32_t w = k / 64;
    for (std::size_t i = 0; i < r.words_.size() && i <= w; ++i) {
        if (i < w) r.words_[i] = 0;
        else r.words_[i] &= ~low_mask(k % 64);
    }
    return r;
}

CellSet CellSet::without(std::uint32_t k) const
{
    CellSet r = *this;
    r.reset(k);
    return r;
}

CellSet CellSet::only(std::uint32_t k) const
{
    CellSet r(n_, false);
    if (test(k)) r.set(k);
    return r;
}

bool CellSet::intersects(const CellSet& o) const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & o.words_[i]) return true;
    return false;
}

bool CellSet::subset_of(const CellSet& o) const
{
    for (std::size_t i = 0; i < words_.size(); ++i)
        if (words_[i] & ~o.words_[i]) return false;
    return true;
}

CellSet CellSet::operator&(const CellSet& o) const
{
    CellSet r = *this;
    for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= o.words_[i];
    return r;
}

CellSet CellSet::minus(const CellSet& o) const
{
    CellSet r = *this;
    for (std::size_t i = 0; i < r.words_.size(); ++i) r.words_[i] &= ~o.words_[i];
    return r;
}

std::uint64_t box_volume(const CellBox& box)
{
    std::uint64_t v = 1;
    for (const auto& s : box) {
        const std::uint64_t c = s.count();
        if (c == 0) return 0;
        if (v > std::numeric_limits<std::uint64_t>::max() / c) return std::numeric_limits<std::uint64_t>::max();
        v *= c;
    }
    return v;
}

// ---------------------------------------------------------------- compile

CellModel::Tree CellModel::compile(const DecisionTree& t, const Discretization& cells)
{
    Tree out;
    out.nodes.reserve(t.nodes().size());
    for (const auto& n : t.nodes()) {
        Node c;
        c.left = n.left;
        c.right = n.right;
        switch (n.kind) {
        case DecisionTree::NodeKind::leaf:
            c.leaf = static_cast<std::uint32_t>(n.leaf_class);
            break;
        case DecisionTree::NodeKind::ordinal_split:
            c.feature = static_cast<std::int32_t>(n.feature);
            c.split = cells.split_cell(n.feature, n.threshold);
            break;
        case DecisionTree::NodeKind::categorical_split:
            c.feature = static_cast<std::int32_t>(n.feature);
            c.categorical = true;
            c.split = n.label.index;
            break;
        }
        out.nodes.push_back(c);
    }
    return out;
}

CellModel::CellModel(const Model& model, const Discretization& cells)
    : classes_(model.classes.size()), features_(model.space.size())
{
    if (const auto* t = std::get_if<DecisionTree>(&model.classifier)) {
        kind_ = Kind::tree;
        trees_.push_back(compile(*t, cells));
    } else if (const auto* e = std::get_if<TreeEnsemble>(&model.classifier)) {
        kind_ = Kind::ensemble;
        for (const auto& tree : e->trees) trees_.push_back(compile(tree, cells));
    } else if (const auto* dl = std::get_if<DecisionList>(&model.classifier)) {
        kind_ = Kind::list;
        for (const auto& r : dl->rules) {
            CellRule cr;
            cr.class_id = r.class_id;
            for (const auto& lit : r.conditions) {
                const auto n = static_cast<std::uint32_t>(cells.cell_count(lit.feature));
                auto meeting = cells.cells_meeting(lit.feature, lit.allowed);
                cr.literals.push_back({static_cast<std::uint32_t>(lit.feature), CellSet::of(n, meeting)});
            }
            rules_.push_back(std::move(cr));
        }
        default_class_ = dl->default_class;
    } else {
        throw Error("monotonic models are not compiled to cells");
    }
}

// ---------------------------------------------------------------- evaluation

ClassIndex CellModel::eval_tree(const Tree& t, std::span<const std::uint32_t> point) const
{
    std::int32_t n = 0;
    for (;;) {
        const Node& node = t.nodes[static_cast<std::size_t>(n)];
        if (node.feature < 0) return node.leaf;
        const auto cell = point[static_cast<std::size_t>(node.feature)];
        const bool right = node.categorical ? cell == node.split : cell >= node.split;
        n = right ? node.right : node.left;
    }
}

ClassIndex CellModel::eval(std::span<const std::uint32_t> point) const
{
    switch (kind_) {
    case Kind::tree:
        return eval_tree(trees_.front(), point);
    case Kind::ensemble: {
        std::uint32_t votes[64] = {};
        for (const auto& t : trees_) ++votes[eval_tree(t, point)];
        return majority(std::span<const std::uint32_t>(votes, classes_));
    }
    case Kind::list:
        for (const auto& r : rules_) {
            bool fires = true;
            for (const auto& lit : r.literals) {
                if (!lit.accepted.test(point[lit.feature])) {
                    fires = false;
                    break;
                }
            }
            if (fires) return r.class_id;
        }
        return default_class_;
    }
    return 0;
}

// ---------------------------------------------------------------- search

namespace {

CellPoint first_point(const CellBox& box)
{
    CellPoint p(box.size());
    for (std::size_t f = 0; f < box.size(); ++f) p[f] = box[f].first();
    return p;
}

} // namespace

// Depth-first walk collecting the classes of leaves reachable from `box`.
// The box is narrowed along each path (and restored), so a leaf counts as
// reachable only if its whole path is satisfiable. Records the first node
// with both branches open in `hint`, and the first path to a leaf of a
// class other than `avoid` in `witness` (which stops the walk).
std::uint64_t CellModel::reach(const Tree& t, CellBox& box, std::optional<Condition>* hint, ClassIndex avoid,
                               CellPoint* witness) const
{
    std::uint64_t mask = 0;
    bool done = false;
    auto walk = [&](auto&& self, std::int32_t n) -> void {
        if (done) return;
        const Node& node = t.nodes[static_cast<std::size_t>(n)];
        if (node.feature < 0) {
            mask |= std::uint64_t{1} << node.leaf;
            if (witness && node.leaf != avoid) {
                *witness = first_point(box);
                done = true;
            }
            return;
        }
        const auto f = static_cast<std::size_t>(node.feature);
        CellSet saved = box[f];
        CellSet left = node.categorical ? saved.without(node.split) : saved.below(node.split);
        CellSet right = node.categorical ? saved.only(node.split) : saved.from(node.split);
        const bool go_left = !left.empty();
        const bool go_right = !right.empty();
        if (go_left && go_right && hint && !*hint) {
            // Express the branch over the whole universe so it can split any enclosing box.
            const CellSet all(saved.universe(), true);
            *hint = Condition{static_cast<std::uint32_t>(f), node.categorical ? all.without(node.split) : all.below(node.split)};
        }
        if (go_left) {
            box[f] = std::move(left);
            self(self, node.left);
            box[f] = saved;
        }
        if (go_right && !done) {
            box[f] = std::move(right);
            self(self, node.right);
            box[f] = std::move(saved);
        }
    };
    walk(walk, 0);
    return mask;
}

CellModel::Verdict CellModel::analyze_list(const CellBox& box, ClassIndex c) const
{
    std::uint64_t possible = 0;
    const CellLiteral* undecided = nullptr;
    bool decided = false;
    ClassIndex outcome = default_class_;
    for (const auto& r : rules_) {
        bool never = false;
        bool all = true;
        const CellLiteral* partial = nullptr;
        for (const auto& lit : r.literals) {
            const auto& a = box[lit.feature];
            if (!a.intersects(lit.accepted)) {
                never = true;
                break;
            }
            if (!a.subset_of(lit.accepted)) {
                all = false;
                if (!partial) partial = &lit;
            }
        }
        if (never) continue;
        possible |= std::uint64_t{1} << r.class_id;
        if (all) {
            if (!undecided) {
                decided = true;
                outcome = r.class_id;
            }
            break;
        }
        if (!undecided) undecided = partial;
    }
    if (!decided && !undecided) {
        decided = true;
        outcome = default_class_;
    }
    if (!decided) {
        // The default applies only if every rule can be falsified; including
        // it is a sound over-approximation.
        possible |= std::uint64_t{1} << default_class_;
    }

    Verdict v;
    if (decided) {
        if (outcome != c) {
            v.kind = Verdict::Kind::counter;
            v.witness = first_point(box);
        }
        return v;
    }
    if ((possible & ~(std::uint64_t{1} << c)) == 0) return v;
    v.kind = Verdict::Kind::split;
    v.split = Condition{undecided->feature, undecided->accepted};
    return v;
}

CellModel::Verdict CellModel::analyze_ensemble(CellBox& box, ClassIndex c) const
{
    const std::uint64_t cbit = std::uint64_t{1} << c;
    std::uint32_t sure_c = 0;
    std::uint32_t maybe[64] = {};
    std::uint32_t fixed_votes[64] = {};
    bool all_fixed = true;
    std::optional<Condition> hint;
    for (const auto& t : trees_) {
        std::optional<Condition> local;
        const std::uint64_t mask = reach(t, box, hint ? nullptr : &local, c, nullptr);
        if (std::popcount(mask) == 1) {
            ++fixed_votes[std::countr_zero(mask)];
            if (mask == cbit) ++sure_c;
        } else {
            all_fixed = false;
            if (!hint && local) hint = std::move(local);
        }
        for (std::uint64_t m = mask; m; m &= m - 1) ++maybe[std::countr_zero(m)];
    }

    Verdict v;
    if (all_fixed) {
        if (majority(std::span<const std::uint32_t>(fixed_votes, classes_)) != c) {
            v.kind = Verdict::Kind::counter;
            v.witness = first_point(box);
        }
        return v;
    }
    bool contender = false;
    for (ClassIndex k = 0; k < classes_ && !contender; ++k) {
        if (k == c) continue;
        contender = maybe[k] > sure_c || (maybe[k] == sure_c && k < c);
    }
    if (!contender) return v;
    v.kind = Verdict::Kind::split;
    v.split = std::move(*hint);
    return v;
}

CellModel::Verdict CellModel::analyze(CellBox& box, ClassIndex c) const
{
    switch (kind_) {
    case Kind::tree: {
        Verdict v;
        CellPoint witness;
        reach(trees_.front(), box, nullptr, c, &witness);
        if (!witness.empty()) {
            v.kind = Verdict::Kind::counter;
            v.witness = std::move(witness);
        }
        return v;
    }
    case Kind::ensemble:
        return analyze_ensemble(box, c);
    case Kind::list:
        return analyze_list(box, c);
    }
    return {};
}

std::optional<CellPoint> CellModel::search(const CellBox& root, ClassIndex c) const
{
    for (const auto& s : root)
        if (s.empty()) return std::nullopt;
    std::vector<CellBox> stack;
    stack.push_back(root);
    while (!stack.empty()) {
        CellBox box = std::move(stack.back());
        stack.pop_back();
        Verdict v = analyze(box, c);
        if (v.kind == Verdict::Kind::safe) continue;
        if (v.kind == Verdict::Kind::counter) return std::move(v.witness);
        const auto f = v.split.feature;
        CellSet inside = box[f] & v.split.part;
        CellSet outside = box[f].minus(v.split.part);
        CellBox other = box;
        other[f] = std::move(outside);
        box[f] = std::move(inside);
        stack.push_back(std::move(other));
        stack.push_back(std::move(box));
    }
    return std::nullopt;
}

} // namespace xinflate
