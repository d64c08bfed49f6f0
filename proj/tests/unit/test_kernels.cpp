#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "agripv/kernels.hpp"
#include "agripv/optics.hpp"

using namespace agripv;
using namespace agripv::kernels;

namespace {

RowSection random_rows(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    RowSection r;
    r.pitch = 2.0 + 10.0 * u(rng);
    const double w = r.pitch * (0.1 + 0.9 * u(rng));
    const double rot = (u(rng) - 0.5) * 3.0;  // radians, within +-86 deg
    const double h = 0.5 * w * std::abs(std::sin(rot)) + 0.1 + 4.0 * u(rng);
    r.x1 = -0.5 * w * std::cos(rot);
    r.z1 = h - 0.5 * w * std::sin(rot);
    r.x2 = 0.5 * w * std::cos(rot);
    r.z2 = h + 0.5 * w * std::sin(rot);
    r.rows_each_side = 8 + static_cast<int>(40 * u(rng));
    return r;
}

std::vector<double> random_points(std::mt19937_64& rng, double pitch, std::size_t n) {
    std::uniform_real_distribution<double> u(-pitch, pitch);
    std::vector<double> xs(n);
    for (auto& x : xs) x = u(rng);
    return xs;
}

}  // namespace

TEST_SUITE("kernels") {
    TEST_CASE("scalar sky view is bounded and symmetric for a flat row") {
        RowSection r{4.0, -1.0, 3.0, 1.0, 3.0, 40};
        std::vector<double> xs{-1.5, -0.5, 0.0, 0.5, 1.5};
        std::vector<double> out(xs.size());
        sky_view_scalar(r, xs, out);
        for (double v : out) {
            CHECK(v > 0.0);
            CHECK(v < 1.0);
        }
        CHECK(out[0] == doctest::Approx(out[4]).epsilon(1e-12));
        CHECK(out[1] == doctest::Approx(out[3]).epsilon(1e-12));
    }

    TEST_CASE("sky view of a vanishing row is the full sky") {
        RowSection r{4.0, -1e-9, 3.0, 1e-9, 3.0, 40};
        std::vector<double> xs{-1.7, 0.3, 1.9};
        std::vector<double> out(xs.size());
        sky_view_scalar(r, xs, out);
        for (double v : out) CHECK(v == doctest::Approx(1.0).epsilon(1e-8));
    }

    TEST_CASE("beam mask marks the periodic shadow band") {
        ShadowBand b{4.0, -1.0, 2.0};
        std::vector<double> xs{-1.5, -0.5, 0.5, 1.5, 3.5, 2.5, -4.5};
        std::vector<double> out(xs.size());
        beam_mask_scalar(b, xs, out);
        CHECK(out == std::vector<double>{1.0, 0.0, 0.0, 1.0, 0.0, 1.0, 0.0});
        ShadowBand full{4.0, 0.0, 5.0};
        beam_mask_scalar(full, xs, out);
        for (double v : out) CHECK(v == 0.0);
    }

#if defined(AGRIPV_HAVE_AVX2)
    TEST_CASE("AVX2 sky view matches scalar on random inputs, including ragged tails") {
        if (!avx2_available()) return;
        std::mt19937_64 rng(7);
        for (int trial = 0; trial < 200; ++trial) {
            const auto rows = random_rows(rng);
            const auto xs = random_points(rng, rows.pitch, 1 + static_cast<std::size_t>(trial % 37));
            std::vector<double> a(xs.size()), b(xs.size());
            sky_view_scalar(rows, xs, a);
            sky_view_avx2(rows, xs, b);
            for (std::size_t i = 0; i < xs.size(); ++i) CHECK(std::abs(a[i] - b[i]) <= 1e-14);
        }
    }

    TEST_CASE("AVX2 beam mask matches scalar exactly") {
        if (!avx2_available()) return;
        std::mt19937_64 rng(11);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (int trial = 0; trial < 200; ++trial) {
            const double p = 1.0 + 9.0 * u(rng);
            ShadowBand band{p, (u(rng) - 0.5) * 3.0 * p, 1.2 * p * u(rng)};
            const auto xs = random_points(rng, 3.0 * p, 1 + static_cast<std::size_t>(trial % 29));
            std::vector<double> a(xs.size()), b(xs.size());
            beam_mask_scalar(band, xs, a);
            beam_mask_avx2(band, xs, b);
            CHECK(a == b);
        }
    }
#endif

    TEST_CASE("dispatch override selects the variant and annual results agree across variants") {
        set_isa_override(Isa::Scalar);
        CHECK(active_isa() == Isa::Scalar);
        const ArrayLayout layout = ArrayLayout::from_a_lm(2.0);
        const SunPosition sun = [] {
            SunPosition s;
            s.zenith = 40.0;
            s.azimuth = 110.0;
            s.is_up = true;
            return s;
        }();
        const WeatherRecord rec{{}, 600.0, 700.0, 120.0};
        const RotationState rot = st_rotation(sun, 90.0);
        const auto scalar = ground_profile(layout, rot, rec, sun, 100);
        set_isa_override(Isa::Avx2);
        const auto vec = ground_profile(layout, rot, rec, sun, 100);
        set_isa_override(std::nullopt);
        for (std::size_t i = 0; i < scalar.irradiance.size(); ++i)
            CHECK(std::abs(scalar.irradiance[i] - vec.irradiance[i]) <= 1e-10);
        CHECK((to_string(Isa::Scalar) == "scalar"));
    }
}
