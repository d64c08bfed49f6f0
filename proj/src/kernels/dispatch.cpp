#include <atomic>
#include <cstdlib>
#include <string_view>

#include "agripv/kernels.hpp"

namespace agripv::kernels {

namespace {

// -1: detect, otherwise static_cast<int>(Isa).
std::atomic<int> g_override{-1};

bool cpu_has_avx2() {
#if defined(AGRIPV_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Isa resolve(Isa wanted) { return wanted == Isa::Avx2 && avx2_available() ? Isa::Avx2 : Isa::Scalar; }

}  // namespace

std::string_view to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
    static const bool available = cpu_has_avx2();
    return available;
}

Isa active_isa() {
    if (const int forced = g_override.load(std::memory_order_relaxed); forced >= 0)
        return resolve(static_cast<Isa>(forced));
    static const Isa from_env = [] {
        if (const char* env = std::getenv("AGRIPV_SIMD")) {
            const std::string_view v{env};
            if (v == "scalar") return Isa::Scalar;
            if (v == "avx2") return resolve(Isa::Avx2);
        }
        return resolve(Isa::Avx2);
    }();
    return from_env;
}

void set_isa_override(std::optional<Isa> isa) {
    g_override.store(isa ? static_cast<int>(*isa) : -1, std::memory_order_relaxed);
}

void sky_view(const RowSection& rows, std::span<const double> xs, std::span<double> out) {
#if defined(AGRIPV_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return sky_view_avx2(rows, xs, out);
#endif
    sky_view_scalar(rows, xs, out);
}

void beam_mask(const ShadowBand& band, std::span<const double> xs, std::span<double> out) {
#if defined(AGRIPV_HAVE_AVX2)
    if (active_isa() == Isa::Avx2) return beam_mask_avx2(band, xs, out);
#endif
    beam_mask_scalar(band, xs, out);
}

}  // namespace agripv::kernels
