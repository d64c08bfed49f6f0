#pragma once

#include <optional>
#include <span>
#include <string_view>

// Data-parallel inner loops of the ground irradiance model. Each kernel has
// a portable scalar reference and an AVX2 variant; dispatch picks the widest
// variant the running CPU supports. Results agree to rounding (see
// tests/unit/test_kernels.cpp).

namespace agripv::kernels {

/// One row of modules in the cross-section, endpoints relative to the row
/// centre. Rows repeat every `pitch`; both endpoints must satisfy z > 0.
struct RowSection {
    double pitch = 1.0;
    double x1 = 0.0, z1 = 1.0;
    double x2 = 0.0, z2 = 1.0;
    int rows_each_side = 32;
};

/// Shadow cast on the ground by one row: [start, start + length) repeated
/// every `pitch`.
struct ShadowBand {
    double pitch = 1.0;
    double start = 0.0;
    double length = 0.0;
};

/// Isotropic-sky view factor seen by horizontal ground points at positions
/// xs (same frame as RowSection), with rows -N..N obstructing.
void sky_view_scalar(const RowSection& rows, std::span<const double> xs, std::span<double> out);
/// 1.0 where the beam reaches the ground point, 0.0 inside the shadow band.
void beam_mask_scalar(const ShadowBand& band, std::span<const double> xs, std::span<double> out);

#if defined(AGRIPV_HAVE_AVX2)
void sky_view_avx2(const RowSection& rows, std::span<const double> xs, std::span<double> out);
void beam_mask_avx2(const ShadowBand& band, std::span<const double> xs, std::span<double> out);
#endif

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

/// True when the AVX2 variants were compiled in and the CPU reports AVX2.
bool avx2_available();

/// ISA used by the dispatching entry points: an explicit override first,
/// then AGRIPV_SIMD=scalar|avx2 from the environment, then CPU detection.
Isa active_isa();

/// Forces a variant (nullopt restores detection). Requesting an unavailable
/// variant falls back to scalar.
void set_isa_override(std::optional<Isa> isa);

void sky_view(const RowSection& rows, std::span<const double> xs, std::span<double> out);
void beam_mask(const ShadowBand& band, std::span<const double> xs, std::span<double> out);

}  // namespace agripv::kernels
