#include "xinflate/parallel.hpp"

#include <atomic>
#include <charconv>
#include <cstdlib>
#include <cstring>

#include <omp.h>

namespace xinflate {

namespace {

std::atomic<int> override_threads{0};

int env_cap()
{
    const char* s = std::getenv("XINFLATE_THREADS");
    if (!s) return 0;
    int n = 0;
    auto [end, ec] = std::from_chars(s, s + std::strlen(s), n);
    if (ec != std::errc{} || *end != '\0' || n <= 0) return 0;
    return n;
}

} // namespace

int worker_count()
{
    int n = override_threads.load();
    if (n <= 0) n = omp_get_max_threads();
    const int cap = env_cap();
    if (cap > 0 && n > cap) n = cap;
    return n < 1 ? 1 : n;
}

void set_worker_override(int n) { override_threads.store(n < 0 ? 0 : n); }

} // namespace xinflate
