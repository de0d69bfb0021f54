#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

namespace shadowtree::cli {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat key/value configuration. Numbers and strings only; nested values are ignored.
struct ConfigValues {
    std::map<std::string, double> numbers;
    std::map<std::string, std::string> strings;

    std::optional<double> number(const std::string& key) const;
    std::optional<std::string> string(const std::string& key) const;
};

// JSON (nlohmann) or the flat `key = value` TOML subset, chosen by extension
// or by a leading '{'.
ConfigValues load_config(const std::string& path);
ConfigValues parse_json_config(const std::string& text);
ConfigValues parse_toml_config(const std::string& text);

}  // namespace shadowtree::cli
