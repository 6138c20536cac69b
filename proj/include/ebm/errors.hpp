#pragma once

#include <stdexcept>
#include <string>

namespace ebm {

// Error taxonomy shared by the library and the CLI exit-code mapping:
//   usage -> exit 2, io -> exit 3, everything else (data/state/capability) -> exit 4.
enum class ErrorKind {
    usage,
    io,
    data,
    state,
    capability,
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& msg) : std::runtime_error(msg), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

[[noreturn]] inline void throw_usage(const std::string& msg) { throw Error(ErrorKind::usage, msg); }
[[noreturn]] inline void throw_io(const std::string& msg) { throw Error(ErrorKind::io, msg); }
[[noreturn]] inline void throw_data(const std::string& msg) { throw Error(ErrorKind::data, msg); }
[[noreturn]] inline void throw_state(const std::string& msg) { throw Error(ErrorKind::state, msg); }
[[noreturn]] inline void throw_capability(const std::string& msg) { throw Error(ErrorKind::capability, msg); }

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

inline void require_data(bool cond, const std::string& msg) { require(cond, ErrorKind::data, msg); }

inline const char* error_kind_name(ErrorKind k) {
    switch (k) {
    case ErrorKind::usage: return "usage";
    case ErrorKind::io: return "io";
    case ErrorKind::data: return "data";
    case ErrorKind::state: return "state";
    case ErrorKind::capability: return "capability";
    }
    return "unknown";
}

} // namespace ebm
