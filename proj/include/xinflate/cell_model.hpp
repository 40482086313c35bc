#pragma once

#include "xinflate/discretization.hpp"

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace xinflate {

/// Subset of the cells of one feature, as a bitset.
class CellSet {
public:
    CellSet() = default;
    CellSet(std::uint32_t universe, bool full);
    static CellSet of(std::uint32_t universe, std::span<const std::uint32_t> cells);

    std::uint32_t universe() const noexcept { return n_; }
    bool test(std::uint32_t k) const { return (words_[k >> 6] >> (k & 63)) & 1U; }
    void set(std::uint32_t k) { words_[k >> 6] |= std::uint64_t{1} << (k & 63); }
    void reset(std::uint32_t k) { words_[k >> 6] &= ~(std::uint64_t{1} << (k & 63)); }

    bool empty() const;
    std::uint32_t count() const;
    /// Smallest member; the set must be nonempty.
    std::uint32_t first() const;
    std::vector<std::uint32_t> members() const;

    bool any_below(std::uint32_t k) const;
    bool any_from(std::uint32_t k) const;
    CellSet below(std::uint32_t k) const;
    CellSet from(std::uint32_t k) const;
    CellSet without(std::uint32_t k) const;
    CellSet only(std::uint32_t k) const;

    bool intersects(const CellSet& o) const;
    bool subset_of(const CellSet& o) const;
    CellSet operator&(const CellSet& o) const;
    CellSet minus(const CellSet& o) const;

    friend bool operator==(const CellSet&, const CellSet&) = default;

private:
    std::vector<std::uint64_t> words_;
    std::uint32_t n_ = 0;
};

using CellBox = std::vector<CellSet>;
using CellPoint = std::vector<std::uint32_t>;

/// Number of cell points in a box, saturating at UINT64_MAX.
std::uint64_t box_volume(const CellBox& box);

/// A tree model or decision list compiled against a Discretization so that
/// evaluation and reasoning work on cell indices only.
class CellModel {
public:
    CellModel(const Model& model, const Discretization& cells);

    std::size_t class_count() const noexcept { return classes_; }
    std::size_t feature_count() const noexcept { return features_; }

    ClassIndex eval(std::span<const std::uint32_t> point) const;

    /// Exact search for a cell point in `box` whose class differs from `c`.
    /// Branch and bound: each box is classified by abstract evaluation
    /// (reachable leaves per tree, vote bounds, rule status) and split on an
    /// undecided tree or rule condition when the abstraction is inconclusive.
    std::optional<CellPoint> search(const CellBox& box, ClassIndex c) const;

private:
    struct Node {
        std::int32_t feature = -1; // -1 for leaves
        std::uint32_t split = 0;   // first cell of the right branch, or the label
        bool categorical = false;
        std::int32_t left = -1;
        std::int32_t right = -1;
        std::uint32_t leaf = 0;
    };
    struct Tree {
        std::vector<Node> nodes;
    };
    struct CellLiteral {
        std::uint32_t feature = 0;
        CellSet accepted;
    };
    struct CellRule {
        std::vector<CellLiteral> literals;
        ClassIndex class_id = 0;
    };
    enum class Kind { tree, ensemble, list };

    struct Condition {
        std::uint32_t feature = 0;
        CellSet part; // cells of the first branch, relative to the box being split
    };
    struct Verdict {
        enum class Kind { safe, counter, split } kind = Kind::safe;
        CellPoint witness;
        Condition split;
    };

    static Tree compile(const DecisionTree& t, const Discretization& cells);
    ClassIndex eval_tree(const Tree& t, std::span<const std::uint32_t> point) const;
    std::uint64_t reach(const Tree& t, CellBox& box, std::optional<Condition>* hint, ClassIndex avoid,
                        CellPoint* witness) const;
    Verdict analyze(CellBox& box, ClassIndex c) const;
    Verdict analyze_list(const CellBox& box, ClassIndex c) const;
    Verdict analyze_ensemble(CellBox& box, ClassIndex c) const;

    Kind kind_ = Kind::tree;
    std::size_t classes_ = 0;
    std::size_t features_ = 0;
    std::vector<Tree> trees_;
    std::vector<CellRule> rules_;
    ClassIndex default_class_ = 0;
};

} // namespace xinflate
