#pragma once

#include <stdexcept>
#include <string>

namespace sketchlab {

/// Failure of an editing tool. `code` is a stable identifier such as
/// "NotSimple" or "NothingToLift"; the program is left untouched.
class ToolError : public std::runtime_error {
public:
    ToolError(std::string code, const std::string& msg) : std::runtime_error(msg), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

}  // namespace sketchlab
