#pragma once
#include <string>
#include <vector>

#include <json.hpp>

namespace fosdnn {

// A JSON run configuration for one CLI command. Unknown keys are rejected
// and any referenced input paths must resolve at parse time; command-line
// flags take precedence over config values.
struct RunConfig {
    nlohmann::json doc = nlohmann::json::object();

    static RunConfig from_file(const std::string& path, const std::string& command,
                               const std::vector<std::string>& allowed_keys,
                               const std::vector<std::string>& path_keys);

    bool has(const std::string& key) const { return doc.contains(key); }

    template <typename T>
    T get_or(const std::string& key, T fallback) const {
        if (!doc.contains(key)) return fallback;
        return doc.at(key).get<T>();
    }
};

}  // namespace fosdnn
