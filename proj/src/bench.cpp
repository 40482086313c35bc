#include "xinflate/bench.hpp"

#include "xinflate/error.hpp"
#include "xinflate/parallel.hpp"

#include <algorithm>
#include <chrono>
#include <exception>
#include <random>

namespace xinflate {

BenchAggregates aggregate(const std::vector<BenchRecord>& records)
{
    BenchAggregates a;
    if (records.empty()) return a;
    const auto n = static_cast<double>(records.size());
    a.min_added = records.front().total_added;
    a.max_added = records.front().total_added;
    double len = 0, time = 0, added = 0;
    for (const auto& r : records) {
        len += static_cast<double>(r.axp.size());
        time += r.axp_seconds + r.inflate_seconds;
        added += static_cast<double>(r.total_added);
        a.min_added = std::min(a.min_added, r.total_added);
        a.max_added = std::max(a.max_added, r.total_added);
    }
    a.len = len / n;
    a.time = time / n;
    a.avg_added = added / n;
    return a;
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

BenchRecord run_one(const std::shared_ptr<const Oracle>& oracle, const Point& v, const InflationConfig& cfg)
{
    BenchRecord r;
    r.point = v;
    auto p = ExplanationProblem::create(oracle, v);
    r.class_id = p.class_id();
    auto t0 = std::chrono::steady_clock::now();
    r.axp = find_axp(p, cfg.order);
    r.axp_seconds = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    InflationConfig c = cfg;
    c.validate_input = false;
    const auto x = inflate_axp(p, r.axp, c);
    r.inflate_seconds = seconds_since(t0);
    for (auto j : x.features) r.added.emplace_back(j, x.added(j));
    r.total_added = x.total_added();
    r.oracle_calls = p.calls();
    return r;
}

} // namespace

BenchReport run_bench(const std::shared_ptr<const Oracle>& oracle, const std::vector<Point>& instances,
                      const InflationConfig& cfg, int threads)
{
    check_config(cfg);
    BenchReport report;
    report.records.resize(instances.size());
    const auto t0 = std::chrono::steady_clock::now();
    std::exception_ptr failure;
    const auto n = static_cast<std::int64_t>(instances.size());
    const int workers = threads > 0 ? threads : worker_count();
#pragma omp parallel for schedule(dynamic, 1) num_threads(workers)
    for (std::int64_t i = 0; i < n; ++i) {
        try {
            auto rec = run_one(oracle, instances[static_cast<std::size_t>(i)], cfg);
            rec.index = static_cast<std::size_t>(i);
            report.records[static_cast<std::size_t>(i)] = std::move(rec);
        } catch (...) {
#pragma omp critical(xinflate_bench_error)
            if (!failure) failure = std::current_exception();
        }
    }
    if (failure) std::rethrow_exception(failure);
    report.wall_seconds = seconds_since(t0);
    report.aggregates = aggregate(report.records);
    return report;
}

std::vector<Point> random_points(const FeatureSpace& space, std::size_t count, std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    std::vector<Point> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        Point p;
        for (const auto& f : space.features()) {
            const auto& d = f.domain;
            if (d.is_categorical()) {
                std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(d.label_count() - 1));
                p.emplace_back(LabelId{pick(rng)});
            } else if (d.is_integer()) {
                const auto lo = d.ordinal().lo.convert_to<long long>();
                const auto hi = d.ordinal().hi.convert_to<long long>();
                std::uniform_int_distribution<long long> pick(lo, hi);
                p.emplace_back(Rational(pick(rng)));
            } else {
                std::uniform_int_distribution<int> pick(0, 1000);
                const auto& o = d.ordinal();
                p.emplace_back(Rational(o.lo + (o.hi - o.lo) * Rational(pick(rng), 1000)));
            }
        }
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace xinflate
