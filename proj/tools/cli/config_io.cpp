#include "config_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace magalg::cli {

namespace {

using nlohmann::json;

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') { ++line; col = 1; }
        else ++col;
    }
    return {line, col};
}

Vec3 vec_from(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3) throw CliError(kExitInput, where + ": expected [x, y, z]");
    Vec3 v;
    for (std::size_t i = 0; i < 3; ++i) {
        if (!j[i].is_number()) throw CliError(kExitInput, where + ": coordinates must be numbers");
        v[i] = j[i].get<double>();
        if (!std::isfinite(v[i])) throw CliError(kExitInput, where + ": coordinates must be finite");
    }
    return v;
}

}  // namespace

ConfigFile parse_config(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        // e.byte is 1-based and points just past the offending character.
        const auto [line, col] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        throw CliError(kExitInput, "malformed JSON at line " + std::to_string(line) + ", column " +
                                       std::to_string(col));
    }
    if (!j.is_object()) throw CliError(kExitInput, "config must be a JSON object");
    ConfigFile cfg;
    if (!j.contains("magnets") || !j["magnets"].is_array())
        throw CliError(kExitInput, "config needs a \"magnets\" array");
    for (std::size_t i = 0; i < j["magnets"].size(); ++i) {
        const json& m = j["magnets"][i];
        const std::string where = "magnets[" + std::to_string(i) + "]";
        if (!m.is_object() || !m.contains("position")) throw CliError(kExitInput, where + ": missing \"position\"");
        cfg.magnets.push_back(vec_from(m["position"], where + ".position"));
    }
    if (cfg.magnets.empty()) throw CliError(kExitInput, "config has no magnets");
    if (j.contains("field_points")) {
        if (!j["field_points"].is_array()) throw CliError(kExitInput, "\"field_points\" must be an array");
        for (std::size_t i = 0; i < j["field_points"].size(); ++i)
            cfg.field_points.push_back(vec_from(j["field_points"][i], "field_points[" + std::to_string(i) + "]"));
    }
    if (j.contains("si_prefactor")) {
        if (!j["si_prefactor"].is_boolean()) throw CliError(kExitInput, "\"si_prefactor\" must be a boolean");
        cfg.si_prefactor = j["si_prefactor"].get<bool>();
    }
    return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CliError(kExitInput, "config not found: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

nlohmann::json to_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

nlohmann::json to_json(const ConfigFile& cfg) {
    json j;
    j["magnets"] = json::array();
    for (const Vec3& m : cfg.magnets) j["magnets"].push_back({{"position", to_json(m)}});
    j["field_points"] = json::array();
    for (const Vec3& p : cfg.field_points) j["field_points"].push_back(to_json(p));
    j["si_prefactor"] = cfg.si_prefactor;
    return j;
}

std::string format_number(double v) {
    std::array<char, 32> buf{};
    const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

Vec3 parse_vec3(const std::string& text, const std::string& what) {
    Vec3 v;
    std::size_t pos = 0;
    for (std::size_t i = 0; i < 3; ++i) {
        const std::size_t end = i < 2 ? text.find(',', pos) : text.size();
        if (end == std::string::npos) throw CliError(kExitInput, what + ": expected x,y,z");
        const std::string part = text.substr(pos, end - pos);
        const auto res = std::from_chars(part.data(), part.data() + part.size(), v[i]);
        if (res.ec != std::errc() || res.ptr != part.data() + part.size() || !std::isfinite(v[i]))
            throw CliError(kExitInput, what + ": bad number '" + part + "'");
        pos = end + 1;
    }
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw CliError(kExitInput, "cannot write " + path.string());
    out << text;
}

}  // namespace magalg::cli
