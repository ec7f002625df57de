#include <atomic>
#include <cstdlib>
#include <string>

#include "kernels_internal.hpp"
#include "leocov/error.hpp"

namespace leocov::kernels {

#if defined(LEOCOV_HAVE_AVX2)
namespace detail {
const KernelTable* avx2_table_impl();
}
#endif

namespace {

bool cpu_has_avx2()
{
#if defined(LEOCOV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable& table_for(Backend backend)
{
    if (backend == Backend::avx2) {
        if (const KernelTable* t = avx2_table(); t != nullptr && cpu_has_avx2()) return *t;
        throw InvalidArgument("AVX2 kernels are not available on this machine");
    }
    return scalar_table();
}

const KernelTable* initial_table()
{
    if (const char* env = std::getenv("LEOCOV_KERNELS")) {
        const std::string_view name(env);
        if (!name.empty() && name != "auto") {
            try {
                return &table_for(parse_backend(name));
            } catch (const std::exception& e) {
                warn(std::string("ignoring LEOCOV_KERNELS: ") + e.what());
            }
        }
    }
    return &table_for(best_backend());
}

std::atomic<const KernelTable*>& current()
{
    static std::atomic<const KernelTable*> slot{initial_table()};
    return slot;
}

}  // namespace

const KernelTable* avx2_table()
{
#if defined(LEOCOV_HAVE_AVX2)
    return detail::avx2_table_impl();
#else
    return nullptr;
#endif
}

bool backend_supported(Backend backend)
{
    if (backend == Backend::scalar) return true;
    return avx2_table() != nullptr && cpu_has_avx2();
}

Backend best_backend()
{
    return backend_supported(Backend::avx2) ? Backend::avx2 : Backend::scalar;
}

void set_backend(Backend backend) { current().store(&table_for(backend)); }

Backend active_backend() { return active().backend; }

const KernelTable& active() { return *current().load(std::memory_order_relaxed); }

std::string_view backend_name(Backend backend)
{
    switch (backend) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
    }
    return "unknown";
}

Backend parse_backend(std::string_view name)
{
    if (name == "scalar") return Backend::scalar;
    if (name == "avx2") return Backend::avx2;
    throw InvalidArgument("unknown kernel backend '" + std::string(name) + "'");
}

}  // namespace leocov::kernels
