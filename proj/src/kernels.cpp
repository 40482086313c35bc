#include "xinflate/kernels.hpp"

#include "xinflate/error.hpp"
#include "xinflate/parallel.hpp"

#include <atomic>
#include <limits>

#include <omp.h>

namespace xinflate {

namespace {

struct Odometer {
    std::vector<std::vector<std::uint32_t>> digits;
    std::vector<std::size_t> pos;
    CellPoint point;

    explicit Odometer(const CellBox& box)
    {
        for (const auto& s : box) digits.push_back(s.members());
        pos.assign(box.size(), 0);
        point.resize(box.size());
    }

    void seek(std::uint64_t index)
    {
        for (std::size_t f = digits.size(); f-- > 0;) {
            const auto radix = digits[f].size();
            pos[f] = static_cast<std::size_t>(index % radix);
            index /= radix;
            point[f] = digits[f][pos[f]];
        }
    }

    void next()
    {
        for (std::size_t f = digits.size(); f-- > 0;) {
            if (++pos[f] < digits[f].size()) {
                point[f] = digits[f][pos[f]];
                return;
            }
            pos[f] = 0;
            point[f] = digits[f][0];
        }
    }
};

std::uint64_t checked_volume(const CellBox& box)
{
    const auto v = box_volume(box);
    if (v == std::numeric_limits<std::uint64_t>::max()) throw Error("cell box too large for exhaustive scan");
    return v;
}

} // namespace

std::optional<CellPoint> exhaustive_serial(const CellModel& model, const CellBox& box, ClassIndex c)
{
    const auto volume = checked_volume(box);
    if (volume == 0) return std::nullopt;
    Odometer od(box);
    od.seek(0);
    for (std::uint64_t i = 0; i < volume; ++i, od.next())
        if (model.eval(od.point) != c) return od.point;
    return std::nullopt;
}

std::optional<CellPoint> exhaustive_parallel(const CellModel& model, const CellBox& box, ClassIndex c, int threads)
{
    const auto volume = checked_volume(box);
    if (volume == 0) return std::nullopt;
    constexpr std::uint64_t block = 1024;
    const auto blocks = static_cast<std::int64_t>((volume + block - 1) / block);
    const std::uint64_t none = std::numeric_limits<std::uint64_t>::max();
    std::atomic<std::uint64_t> best{none};
    const int workers = threads > 0 ? threads : worker_count();

#pragma omp parallel num_threads(workers)
    {
        Odometer od(box);
#pragma omp for schedule(dynamic, 1)
        for (std::int64_t b = 0; b < blocks; ++b) {
            const std::uint64_t start = static_cast<std::uint64_t>(b) * block;
            if (start >= best.load(std::memory_order_relaxed)) continue;
            const std::uint64_t stop = std::min(volume, start + block);
            od.seek(start);
            for (std::uint64_t i = start; i < stop; ++i, od.next()) {
                if (model.eval(od.point) != c) {
                    auto cur = best.load();
                    while (i < cur && !best.compare_exchange_weak(cur, i)) {
                    }
                    break;
                }
            }
        }
    }
    if (best.load() == none) return std::nullopt;
    Odometer od(box);
    od.seek(best.load());
    return od.point;
}

} // namespace xinflate
