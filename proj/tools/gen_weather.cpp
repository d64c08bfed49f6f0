// Writes a deterministic synthetic hourly weather year as CSV.
#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "agripv/synthetic.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Generate a synthetic hourly weather year"};
    std::string site = "khanewal";
    std::string out;
    agripv::SyntheticWeatherParams params;
    app.add_option("--site", site, "khanewal or sydney")->check(CLI::IsMember({"khanewal", "sydney"}));
    app.add_option("--out", out, "output CSV path")->required();
    app.add_option("--year", params.year, "calendar year");
    app.add_option("--seed", params.seed, "random seed for daily attenuation");
    CLI11_PARSE(app, argc, argv);

    const auto config = site == "sydney" ? agripv::sydney_site() : agripv::khanewal_site();
    const auto weather = agripv::synthetic_weather(config, params);
    const std::string tmp = out + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        f << agripv::weather_to_csv(weather);
        if (!f) {
            std::cerr << "cannot write " << tmp << '\n';
            return 3;
        }
    }
    if (std::rename(tmp.c_str(), out.c_str()) != 0) {
        std::cerr << "cannot rename " << tmp << " to " << out << '\n';
        return 3;
    }
    return 0;
}
