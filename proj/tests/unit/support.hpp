#pragma once

#include <filesystem>
#include <memory>

#include "agripv/planner.hpp"
#include "agripv/synthetic.hpp"

namespace agripv::test {

std::filesystem::path source_dir();

/// Synthetic Khanewal year, built once per process.
std::shared_ptr<const WeatherSeries> khanewal_weather();

/// Khanewal scenario whose weather comes from khanewal_weather() rather than disk.
Scenario khanewal_scenario();

/// Shared workspace over khanewal_scenario(); design spaces are cached by a_lm.
Workspace& khanewal_workspace();

/// Scratch directory unique to the calling test, removed at process exit.
std::filesystem::path scratch_dir(const std::string& name);

}  // namespace agripv::test
