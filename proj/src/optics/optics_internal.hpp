#pragma once

#include <span>

#include "agripv/optics.hpp"

namespace agripv::detail {

/// Writes ground irradiance at xs into out; scratch has the size of xs.
void ground_irradiance(const SectionGeometry& g, RowAxis axis, const WeatherRecord& weather,
                       const SunPosition& sun, std::span<const double> xs, std::span<double> out,
                       std::span<double> scratch);

double unshaded_ghi(const WeatherRecord& weather, const SunPosition& sun);

PlaneOfArray poa(const SectionGeometry& g, const FaceViewFactors& vf, const RotationState& rotation,
                 const WeatherRecord& weather, const SunPosition& sun, double albedo, double ground_mean);

}  // namespace agripv::detail
