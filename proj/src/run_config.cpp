#include "fosdnn/run_config.hpp"

#include <algorithm>
#include <filesystem>

#include "fosdnn/csv_io.hpp"
#include "fosdnn/errors.hpp"

namespace fosdnn {

RunConfig RunConfig::from_file(const std::string& path, const std::string& command,
                               const std::vector<std::string>& allowed_keys,
                               const std::vector<std::string>& path_keys) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(read_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("config " + path + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("config " + path + ": top level must be an object");
    }
    if (doc.contains("command")) {
        auto cmd = doc.at("command").get<std::string>();
        if (cmd != command) {
            throw ConfigError("config " + path + ": command '" + cmd +
                              "' does not match invoked command '" + command + "'");
        }
    }
    for (const auto& [key, value] : doc.items()) {
        (void)value;
        if (key == "command") continue;
        if (std::find(allowed_keys.begin(), allowed_keys.end(), key) == allowed_keys.end()) {
            throw ConfigError("config " + path + ": unknown key '" + key + "' for command '" +
                              command + "'");
        }
    }
    for (const auto& key : path_keys) {
        if (!doc.contains(key)) continue;
        auto p = doc.at(key).get<std::string>();
        if (!std::filesystem::exists(p)) {
            throw ConfigError("config " + path + ": path for '" + key + "' does not exist: " + p);
        }
    }
    RunConfig rc;
    rc.doc = std::move(doc);
    return rc;
}

}  // namespace fosdnn
