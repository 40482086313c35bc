#pragma once

#include "xinflate/cell_model.hpp"
#include "xinflate/classifiers.hpp"
#include "xinflate/discretization.hpp"

#include <atomic>
#include <map>
#include <memory>
#include <optional>

namespace xinflate {

/// Feature -> allowed values. Features absent from the map range over
/// their whole domain.
using Assignment = std::map<FeatureIndex, ValueSet>;

enum class OracleBackend {
    box_search,          // exact branch and bound over cell boxes (default)
    exhaustive_serial,   // full cell-product scan
    exhaustive_parallel, // same scan, OpenMP blocks
};

std::string_view to_string(OracleBackend b);
OracleBackend parse_backend(std::string_view name);

/// Entailment oracle for one model. Answers "is there a point in this box
/// whose class is not c?" exactly: corner evaluation for monotonic models,
/// cell reasoning for trees, ensembles and decision lists. Immutable and
/// safe to share between threads.
class Oracle {
public:
    explicit Oracle(std::shared_ptr<const Model> model, OracleBackend backend = OracleBackend::box_search);
    static std::shared_ptr<const Oracle> create(Model model, OracleBackend backend = OracleBackend::box_search);

    const Model& model() const noexcept { return *model_; }
    const FeatureSpace& space() const noexcept { return model_->space; }
    OracleBackend backend() const noexcept { return backend_; }
    /// Null for monotonic models.
    const Discretization* discretization() const noexcept { return cells_ ? &*cells_ : nullptr; }
    const CellModel* cell_model() const noexcept { return cell_model_ ? &*cell_model_ : nullptr; }

    /// True when the model predicts one class everywhere.
    bool is_constant() const noexcept { return constant_; }

    /// Some point x with x_j in box[j] (free features anywhere) and
    /// class(x) != c, or nullopt. Sets are checked against the domains.
    std::optional<Point> find_counterexample(const Assignment& box, ClassIndex c) const;

    CellBox to_cells(const Assignment& box) const;

private:
    std::optional<Point> monotone_search(const Assignment& box, ClassIndex c) const;
    std::optional<Point> cell_search(const Assignment& box, ClassIndex c) const;

    std::shared_ptr<const Model> model_;
    OracleBackend backend_;
    std::optional<Discretization> cells_;
    std::optional<CellModel> cell_model_;
    bool constant_ = false;
};

/// Count of oracle decisions made for one explanation problem.
struct OracleStats {
    std::atomic<std::uint64_t> calls{0};
};

/// A model plus an instance (v, c) with class(v) = c on a non-constant model.
class ExplanationProblem {
public:
    /// Throws ValidationError when v is not a valid point, when `c` is given
    /// and differs from the prediction, or when the model is constant.
    static ExplanationProblem create(std::shared_ptr<const Oracle> oracle, Point v,
                                     std::optional<ClassIndex> c = std::nullopt);

    const Oracle& oracle() const noexcept { return *oracle_; }
    std::shared_ptr<const Oracle> oracle_ptr() const noexcept { return oracle_; }
    const Model& model() const noexcept { return oracle_->model(); }
    const FeatureSpace& space() const noexcept { return oracle_->space(); }
    std::size_t feature_count() const noexcept { return space().size(); }
    const Point& point() const noexcept { return instance_.point; }
    const Value& value(FeatureIndex j) const { return instance_.point.at(j); }
    ClassIndex class_id() const noexcept { return instance_.class_id; }
    const Instance& instance() const noexcept { return instance_; }

    std::uint64_t calls() const noexcept { return stats_->calls.load(); }
    void count_call() const noexcept { stats_->calls.fetch_add(1, std::memory_order_relaxed); }

    /// {v_j} for every j in `fixed`.
    Assignment pinned(const FeatureSet& fixed) const;

private:
    ExplanationProblem(std::shared_ptr<const Oracle> oracle, Instance inst)
        : oracle_(std::move(oracle)), instance_(std::move(inst)), stats_(std::make_shared<OracleStats>())
    {
    }

    std::shared_ptr<const Oracle> oracle_;
    Instance instance_;
    std::shared_ptr<OracleStats> stats_;
};

/// Every x with x_j in a[j] (free features anywhere) has class c.
/// Throws ValidationError on an empty or out-of-domain set. Counts one call.
bool holds_sufficiency(const ExplanationProblem& p, const Assignment& a);

/// Some x with x_j = fixed[j] on fixed features and x_j in roam[j] otherwise
/// has class != c. The two maps must be disjoint and together cover every
/// feature; fixed sets must be singletons. Counts one call.
bool exists_counterexample(const ExplanationProblem& p, const Assignment& fixed, const Assignment& roam);

/// Witness form of holds_sufficiency; counts one call.
std::optional<Point> find_counterexample(const ExplanationProblem& p, const Assignment& a);

/// Corner check on a box of single intervals: true iff every point of the
/// box is classified as c. Throws ValidationError for a set with more than
/// one interval or a feature outside the space.
bool monotone_box_check(const MonotonicClassifier& mc, const FeatureSpace& space, const Assignment& a,
                        ClassIndex c);

} // namespace xinflate
