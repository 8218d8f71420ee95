#include "btn/manifest.hpp"

#include <fstream>

#include <json.hpp>

namespace btn {

void write_manifest(const std::filesystem::path& path, const RunManifest& m) {
    for (const std::string& f : m.output_files)
        if (!std::filesystem::exists(f))
            throw std::runtime_error("manifest: listed output does not exist: " + f);
    nlohmann::json j;
    j["command"] = m.command;
    j["version"] = m.version;
    j["grid_hash"] = m.grid_hash;
    j["config"] = m.config_text;
    j["outputs"] = m.output_files;
    j["wall_seconds"] = m.wall_seconds;
    std::ofstream os(path);
    if (!os) throw std::runtime_error("manifest: cannot open " + path.string());
    os << j.dump(2) << "\n";
    if (!os) throw std::runtime_error("manifest: write failed");
}

} // namespace btn
