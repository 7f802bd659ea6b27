// SPDX-License-Identifier: Apache-2.0
//
// Backend dispatch. Auto-detection picks the widest backend the CPU
// supports; the JETCONVEX_KERNELS environment variable ("scalar", "avx2",
// "neon", "auto") overrides it, and tests can force a backend through
// select().

#include "jetconvex/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

namespace jetconvex {
namespace kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2OpsTable(); // kernels_avx2.cpp
#endif
#if defined(__aarch64__)
const Ops* neonOpsTable(); // kernels_neon.cpp
#endif

const Ops* avx2Ops()
{
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2"))
        return avx2OpsTable();
#endif
    return nullptr;
}

const Ops* neonOps()
{
#if defined(__aarch64__)
    return neonOpsTable();
#else
    return nullptr;
#endif
}

namespace {

const Ops* autoPick()
{
    if (const char* env = std::getenv("JETCONVEX_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalarOps();
        if (want == "avx2" && avx2Ops()) return avx2Ops();
        if (want == "neon" && neonOps()) return neonOps();
        // unknown or unavailable value: fall through to detection
    }
    if (const Ops* ops = avx2Ops()) return ops;
    if (const Ops* ops = neonOps()) return ops;
    return &scalarOps();
}

std::atomic<const Ops*> gActive{nullptr};

} // namespace

const Ops& active()
{
    const Ops* ops = gActive.load(std::memory_order_acquire);
    if (!ops) {
        ops = autoPick();
        gActive.store(ops, std::memory_order_release);
    }
    return *ops;
}

void select(Backend backend)
{
    switch (backend) {
    case Backend::Auto:
        gActive.store(autoPick(), std::memory_order_release);
        return;
    case Backend::Scalar:
        gActive.store(&scalarOps(), std::memory_order_release);
        return;
    case Backend::Avx2:
        if (const Ops* ops = avx2Ops()) {
            gActive.store(ops, std::memory_order_release);
            return;
        }
        throw std::invalid_argument("AVX2 kernels unavailable on this CPU");
    case Backend::Neon:
        if (const Ops* ops = neonOps()) {
            gActive.store(ops, std::memory_order_release);
            return;
        }
        throw std::invalid_argument("NEON kernels unavailable on this build");
    }
    throw std::invalid_argument("unknown kernel backend");
}

} // namespace kernels
} // namespace jetconvex
