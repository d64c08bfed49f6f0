#include "support.hpp"

#include <cstdlib>
#include <unistd.h>

namespace agripv::test {

std::filesystem::path source_dir() { return AGRIPV_SOURCE_DIR; }

std::shared_ptr<const WeatherSeries> khanewal_weather() {
    static const auto w = std::make_shared<const WeatherSeries>(synthetic_weather(khanewal_site()));
    return w;
}

Scenario khanewal_scenario() {
    Scenario s;
    s.base.site = khanewal_site();
    s.base.weather.path = "khanewal_synthetic.csv";
    return s;
}

Workspace& khanewal_workspace() {
    static Workspace ws(khanewal_scenario(), [](const SiteVariant&) { return *khanewal_weather(); });
    return ws;
}

std::filesystem::path scratch_dir(const std::string& name) {
    static const auto root = [] {
        auto p = std::filesystem::temp_directory_path() /
                 ("agripv_tests_" + std::to_string(static_cast<long>(::getpid())));
        std::filesystem::create_directories(p);
        std::atexit([] {
            std::error_code ec;
            std::filesystem::remove_all(std::filesystem::temp_directory_path() /
                                            ("agripv_tests_" + std::to_string(static_cast<long>(::getpid()))),
                                        ec);
        });
        return p;
    }();
    auto dir = root / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace agripv::test
