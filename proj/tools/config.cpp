#include "config.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

namespace shadowtree::cli {

std::optional<double> ConfigValues::number(const std::string& key) const {
    if (auto it = numbers.find(key); it != numbers.end()) return it->second;
    return std::nullopt;
}

std::optional<std::string> ConfigValues::string(const std::string& key) const {
    if (auto it = strings.find(key); it != strings.end()) return it->second;
    return std::nullopt;
}

ConfigValues parse_json_config(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError(std::string("bad JSON config: ") + e.what());
    }
    if (!j.is_object()) throw UsageError("JSON config must be an object");
    ConfigValues cv;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it->is_number()) {
            cv.numbers[it.key()] = it->get<double>();
        } else if (it->is_string()) {
            cv.strings[it.key()] = it->get<std::string>();
        } else if (it->is_boolean()) {
            cv.numbers[it.key()] = it->get<bool>() ? 1.0 : 0.0;
        }
    }
    return cv;
}

ConfigValues parse_toml_config(const std::string& text) {
    ConfigValues cv;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    auto trim = [](std::string s) {
        const auto a = s.find_first_not_of(" \t\r");
        if (a == std::string::npos) return std::string();
        const auto b = s.find_last_not_of(" \t\r");
        return s.substr(a, b - a + 1);
    };
    while (std::getline(in, line)) {
        ++lineno;
        bool quoted = false;
        for (std::size_t i = 0; i < line.size(); ++i) {
            if (line[i] == '"') quoted = !quoted;
            if (line[i] == '#' && !quoted) {
                line.erase(i);
                break;
            }
        }
        line = trim(line);
        if (line.empty() || line.front() == '[') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw UsageError("TOML line " + std::to_string(lineno) + ": expected key = value");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));
        if (val.size() >= 2 && val.front() == '"' && val.back() == '"') {
            cv.strings[key] = val.substr(1, val.size() - 2);
            continue;
        }
        std::istringstream vs(val);
        double x;
        if (!(vs >> x) || !(vs >> std::ws).eof()) {
            throw UsageError("TOML line " + std::to_string(lineno) + ": value is not a number");
        }
        cv.numbers[key] = x;
    }
    return cv;
}

ConfigValues load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw UsageError("cannot open config file " + path);
    std::stringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();
    const bool ext_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    const bool ext_toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
    const auto first = text.find_first_not_of(" \t\r\n");
    if (ext_json || (!ext_toml && first != std::string::npos && text[first] == '{')) {
        return parse_json_config(text);
    }
    return parse_toml_config(text);
}

}  // namespace shadowtree::cli
