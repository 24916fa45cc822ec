#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace sacq::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(SACQ_BUILD_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Table* best_available() {
#if defined(SACQ_BUILD_AVX2)
    if (cpu_has_avx2()) return &avx2::table();
#endif
#if defined(SACQ_BUILD_NEON)
    return &neon::table();
#endif
    return &scalar::table();
}

const Table* initial_table() {
    if (const char* env = std::getenv("SACQ_KERNELS")) {
        const std::string want(env);
        if (want == "scalar") return &scalar::table();
        if (want == "avx2" && available(Backend::Avx2)) return table_for(Backend::Avx2);
        if (want == "neon" && available(Backend::Neon)) return table_for(Backend::Neon);
    }
    return best_available();
}

std::atomic<const Table*>& current() {
    static std::atomic<const Table*> t{initial_table()};
    return t;
}

}  // namespace

std::string_view backend_name(Backend b) {
    switch (b) {
        case Backend::Scalar: return "scalar";
        case Backend::Avx2: return "avx2";
        case Backend::Neon: return "neon";
    }
    return "unknown";
}

const Table& scalar_table() { return scalar::table(); }

bool available(Backend b) {
    switch (b) {
        case Backend::Scalar: return true;
        case Backend::Avx2: return cpu_has_avx2();
        case Backend::Neon:
#if defined(SACQ_BUILD_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

const Table* table_for(Backend b) {
    if (!available(b)) return nullptr;
    switch (b) {
        case Backend::Scalar: return &scalar::table();
        case Backend::Avx2:
#if defined(SACQ_BUILD_AVX2)
            return &avx2::table();
#else
            return nullptr;
#endif
        case Backend::Neon:
#if defined(SACQ_BUILD_NEON)
            return &neon::table();
#else
            return nullptr;
#endif
    }
    return nullptr;
}

const Table& active() { return *current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
    const Table* t = table_for(b);
    if (t == nullptr)
        throw std::invalid_argument("kernel backend not available: " + std::string(backend_name(b)));
    current().store(t, std::memory_order_relaxed);
}

}  // namespace sacq::kernels
