#include "bhct/error.hpp"

namespace bhct {

Error::Error(ErrorKind kind, std::string code, const std::string& message)
    : std::runtime_error(message), kind_(kind), code_(std::move(code)) {}

void fail_validation(const std::string& code, const std::string& message) {
    throw Error(ErrorKind::Validation, code, message);
}

void fail_numeric(const std::string& code, const std::string& message) {
    throw Error(ErrorKind::Numeric, code, message);
}

void fail_io(const std::string& code, const std::string& message) {
    throw Error(ErrorKind::IO, code, message);
}

const char* kind_name(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Validation: return "validation";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::IO: return "io";
    }
    return "unknown";
}

int exit_code(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::Validation: return 2;
    case ErrorKind::Numeric: return 3;
    case ErrorKind::IO: return 4;
    }
    return 1;
}

} // namespace bhct
