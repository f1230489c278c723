#pragma once

// JSON configuration files and small formatting helpers for the command line.
//
//   {"magnets": [{"position": [x, y, z]}, ...],
//    "field_points": [[x, y, z], ...],      (optional)
//    "si_prefactor": false}                 (optional)

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "magalg/dipole_field.hpp"

namespace magalg::cli {

/// Exit-code carrying error: 1 theorem violation, 2 input error, 3 singularity.
class CliError : public std::runtime_error {
public:
    CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
    int code() const { return code_; }

private:
    int code_;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitViolation = 1;
inline constexpr int kExitInput = 2;
inline constexpr int kExitSingular = 3;

struct ConfigFile {
    std::vector<Vec3> magnets;
    std::vector<Vec3> field_points;
    bool si_prefactor = false;

    DipoleConfig at(const Vec3& field_point) const { return DipoleConfig{magnets, field_point, si_prefactor}; }
};

/// Parses config text; malformed JSON reports "line L, column C".
ConfigFile parse_config(std::string_view text);
/// Throws CliError(2, "config not found: ...") for a missing file.
ConfigFile load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ConfigFile& cfg);
nlohmann::json to_json(const Vec3& v);

/// Shortest round-trip decimal (std::to_chars).
std::string format_number(double v);

/// "1.5,2,-3" -> Vec3; throws CliError(2).
Vec3 parse_vec3(const std::string& text, const std::string& what);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace magalg::cli
