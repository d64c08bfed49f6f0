#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "agripv/planner.hpp"

namespace agripv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitCompute = 4;

struct Options {
    std::string verb;
    std::filesystem::path scenario;
    std::filesystem::path out = ".";
    bool dump_timesteps = false;
    unsigned threads = 1;
};

/// File name -> content. Nothing touches the disk until write_outputs.
using OutputSet = std::map<std::string, std::string>;

/// Runs a verb against an already loaded workspace.
OutputSet execute(const Options& options, Workspace& ws, std::ostream& log);

/// Writes every file under dir via temporaries and renames them into place
/// only after all temporaries are complete. Throws on I/O failure, leaving
/// no partial outputs behind.
void write_outputs(const std::filesystem::path& dir, const OutputSet& files);

/// Full command line entry point; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace agripv::cli
