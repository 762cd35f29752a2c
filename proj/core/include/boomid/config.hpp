#ifndef BOOMID_CONFIG_HPP
#define BOOMID_CONFIG_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace boomid {

inline constexpr int kConfigFormatVersion = 1;
inline constexpr const char* kToolVersion = "0.1.0";

/// All schema violations found in one pass, not just the first.
class config_error : public std::runtime_error {
public:
    explicit config_error(std::vector<std::string> violations);
    std::vector<std::string> violations;
};

/// Validated per-subcommand configuration. `json` holds the config with
/// defaults filled in; `digest` is the FNV-1a hash of the canonical dump,
/// embedded into every artifact the run writes.
struct RunConfig {
    std::string command;
    nlohmann::json json;
    std::string digest;

    std::string dump_canonical() const;
};

/// Known subcommands, in CLI order.
const std::vector<std::string>& known_commands();

/// Parse + validate a config JSON for the given subcommand. Unknown keys
/// are rejected; every numeric field is range-checked against the owning
/// module's preconditions; all violations are reported together.
RunConfig validate_config(const std::string& command, const nlohmann::json& raw);

/// Read the file at `path` and validate it.
RunConfig load_config(const std::string& command, const std::string& path);

} // namespace boomid

#endif
