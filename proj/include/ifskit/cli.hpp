#ifndef IFSKIT_CLI_HPP
#define IFSKIT_CLI_HPP

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "ifskit/geometry.hpp"

namespace ifskit::cli {

/// Config rejected during validation; the message names the offending field path.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct RunOptions {
    std::string command;
    std::string config_path;
    std::string out_dir = ".";
    std::optional<std::uint64_t> seed;  // overrides dictionary.seed
    bool quiet = false;
    std::string mu_path;  // dist
    std::string nu_path;  // dist
    std::string which;    // completion-demo: kravchenko | truncation
};

struct RunReport {
    nlohmann::json json;
    bool all_passed = false;
};

/// Fills defaults and validates. Throws ConfigError naming the field path.
nlohmann::json canonicalize_config(const nlohmann::json& raw);

/// FNV-1a over the canonical dump; hex string.
std::string config_hash(const nlohmann::json& canonical);

IFSystem ifs_from_config(const nlohmann::json& canonical);

/// Dispatches to one of: attractor, measure, dist, cuntz-check, povm-fixpoint,
/// dilation-check, completion-demo. Writes artifacts and report.json under
/// out_dir. The report echoes the canonical config and its hash.
RunReport run(const RunOptions& options);

}  // namespace ifskit::cli

#endif
