#include "lcws/error.hpp"

namespace lcws {

const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::argument: return "argument";
    case ErrorKind::decode: return "decode";
    case ErrorKind::format: return "format";
    case ErrorKind::policy_syntax: return "policy-syntax";
    case ErrorKind::state: return "state";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::io: return "io";
    case ErrorKind::access: return "access";
    }
    return "unknown";
}

} // namespace lcws
