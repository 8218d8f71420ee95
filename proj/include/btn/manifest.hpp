#ifndef BTN_MANIFEST_HPP
#define BTN_MANIFEST_HPP

#include <filesystem>
#include <string>
#include <vector>

namespace btn {

inline constexpr const char* kVersion = "0.1.0";

/// Provenance record written next to every command's outputs.
struct RunManifest {
    std::string command;
    std::string config_text;         ///< exact config the run used
    std::string version = kVersion;
    std::uint64_t grid_hash = 0;
    std::vector<std::string> output_files;
    double wall_seconds = 0.0;
};

/// Writes JSON; throws when an output file listed does not exist.
void write_manifest(const std::filesystem::path& path, const RunManifest& manifest);

} // namespace btn

#endif
