#pragma once

#include <stdexcept>
#include <string>

namespace bhct {

enum class ErrorKind { Validation, Numeric, IO };

// Every recoverable failure carries a stable dotted code, e.g. "phantom.disjointness".
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string code, const std::string& message);

    ErrorKind kind() const noexcept { return kind_; }
    const std::string& code() const noexcept { return code_; }

private:
    ErrorKind kind_;
    std::string code_;
};

[[noreturn]] void fail_validation(const std::string& code, const std::string& message);
[[noreturn]] void fail_numeric(const std::string& code, const std::string& message);
[[noreturn]] void fail_io(const std::string& code, const std::string& message);

const char* kind_name(ErrorKind kind) noexcept;

// Process exit status used by the CLI for each error kind.
int exit_code(ErrorKind kind) noexcept;

} // namespace bhct
