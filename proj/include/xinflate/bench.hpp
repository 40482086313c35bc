#pragma once

#include "xinflate/inflate.hpp"

#include <cstdint>
#include <vector>

namespace xinflate {

struct BenchRecord {
    std::size_t index = 0;
    Point point;
    ClassIndex class_id = 0;
    FeatureSet axp;
    /// Accepted probes per AXp feature: values, cells or bound moves added.
    std::vector<std::pair<FeatureIndex, std::size_t>> added;
    std::size_t total_added = 0;
    std::uint64_t oracle_calls = 0;
    double axp_seconds = 0;
    double inflate_seconds = 0;
};

/// Table-shaped summary: mean AXp length, mean seconds per instance, and
/// the min, max and mean of total_added.
struct BenchAggregates {
    double len = 0;
    double time = 0;
    std::size_t min_added = 0;
    std::size_t max_added = 0;
    double avg_added = 0;
};

struct BenchReport {
    std::vector<BenchRecord> records;
    BenchAggregates aggregates;
    double wall_seconds = 0;
};

BenchAggregates aggregate(const std::vector<BenchRecord>& records);

/// One AXp (ascending order) plus its inflation per instance. Instances are
/// spread over `threads` workers (0: default); records come back in input
/// order.
BenchReport run_bench(const std::shared_ptr<const Oracle>& oracle, const std::vector<Point>& instances,
                      const InflationConfig& cfg = {}, int threads = 0);

/// `count` reproducible points drawn uniformly: labels uniformly, integers
/// uniformly, continuous values on a 1/1000 grid of the domain.
std::vector<Point> random_points(const FeatureSpace& space, std::size_t count, std::uint64_t seed);

} // namespace xinflate
