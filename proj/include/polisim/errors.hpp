#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace polisim {

// Machine-readable failure codes shared by the config, persona, rule-table
// and adapter parsers. Tests match on the code + key rather than message text.
enum class Errc {
    missing_key,
    malformed_value,
    out_of_range,
    schema_error,
    unknown_stressor,
    malformed_entry,
    unknown_category,
    unknown_severity,
    empty_pattern,
    no_votes,
    empty_district,
    no_ballots,
    parse_error,
    timeout,
    invalid_config,
    io_error,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string key, const std::string& detail)
        : std::runtime_error(std::string(errc_name(code)) + ": " + key +
                             (detail.empty() ? "" : " (" + detail + ")")),
          code_(code),
          key_(std::move(key)) {}

    Errc code() const { return code_; }
    const std::string& key() const { return key_; }

private:
    Errc code_;
    std::string key_;
};

} // namespace polisim
