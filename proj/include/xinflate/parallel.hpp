#pragma once

namespace xinflate {

/// Worker count for parallel sections: the explicit override when set,
/// else the OpenMP default, capped by XINFLATE_THREADS when that variable
/// holds a positive integer.
int worker_count();
/// 0 restores the default.
void set_worker_override(int n);

} // namespace xinflate
