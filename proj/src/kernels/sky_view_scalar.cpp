#include <algorithm>
#include <cmath>

#include "agripv/kernels.hpp"

namespace agripv::kernels {

// Directions from a ground point are parameterised by u = tan(angle from
// zenith). Row k projects onto [min(u1,u2), max(u1,u2)] with
// u_i(k) = (k*pitch + x_i - x) / z_i, increasing in k, so both interval ends
// are sorted and the visible sky is the sum of positive gaps between
// consecutive rows plus the two open ends. A cosine-weighted 2-D view factor
// of an angular window is half the difference of sin(angle), and
// sin(atan(u)) = u / sqrt(1 + u^2).

namespace {

inline double sin_of_tan(double u) { return u / std::sqrt(1.0 + u * u); }

}  // namespace

void sky_view_scalar(const RowSection& rows, std::span<const double> xs, std::span<double> out) {
    const int n = rows.rows_each_side;
    const double inv_z1 = 1.0 / rows.z1;
    const double inv_z2 = 1.0 / rows.z2;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        auto ends = [&](int k, double& lo, double& hi) {
            const double base = k * rows.pitch - x;
            const double s1 = sin_of_tan((base + rows.x1) * inv_z1);
            const double s2 = sin_of_tan((base + rows.x2) * inv_z2);
            lo = std::min(s1, s2);
            hi = std::max(s1, s2);
        };
        double lo = 0.0, hi = 0.0;
        ends(-n, lo, hi);
        double visible = lo + 1.0;
        double prev_hi = hi;
        for (int k = -n + 1; k <= n; ++k) {
            ends(k, lo, hi);
            visible += std::max(0.0, lo - prev_hi);
            prev_hi = hi;
        }
        visible += 1.0 - prev_hi;
        out[i] = 0.5 * visible;
    }
}

void beam_mask_scalar(const ShadowBand& band, std::span<const double> xs, std::span<double> out) {
    if (band.length >= band.pitch) {
        std::fill(out.begin(), out.end(), 0.0);
        return;
    }
    const double inv_p = 1.0 / band.pitch;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - band.start;
        const double r = d - band.pitch * std::floor(d * inv_p);
        out[i] = r < band.length ? 0.0 : 1.0;
    }
}

}  // namespace agripv::kernels
