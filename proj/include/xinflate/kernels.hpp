#pragma once

#include "xinflate/cell_model.hpp"

#include <optional>

namespace xinflate {

/// Reference kernels: scan every cell point of `box` in mixed-radix order
/// (feature 0 slowest) and return the first one whose class differs from
/// `c`. Both return the same point; the parallel one splits the index range
/// into blocks and keeps the smallest hit. Throw Error when the box volume
/// does not fit in 64 bits.
std::optional<CellPoint> exhaustive_serial(const CellModel& model, const CellBox& box, ClassIndex c);
std::optional<CellPoint> exhaustive_parallel(const CellModel& model, const CellBox& box, ClassIndex c,
                                             int threads = 0);

} // namespace xinflate
