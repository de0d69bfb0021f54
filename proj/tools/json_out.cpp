#include "json_out.hpp"

#include <cmath>
#include <cstdio>

namespace shadowtree::cli {

std::string fmt17(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void emit(const nlohmann::ordered_json& j, int indent, int level, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (level + 1)), ' ');
    const std::string pad_close(static_cast<std::size_t>(indent * level), ' ');
    if (j.is_object()) {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
            emit(*it, indent, level + 1, out);
        }
        out += "\n" + pad_close + "}";
    } else if (j.is_array()) {
        out += "[";
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += ", ";
            first = false;
            emit(v, indent, level + 1, out);
        }
        out += "]";
    } else if (j.is_number_float()) {
        const double v = j.get<double>();
        // JSON has no inf/nan; emit null for them
        out += std::isfinite(v) ? fmt17(v) : "null";
    } else {
        out += j.dump();
    }
}

}  // namespace

std::string dump17(const nlohmann::ordered_json& j, int indent) {
    std::string out;
    emit(j, indent, 0, out);
    return out;
}

}  // namespace shadowtree::cli
