#ifndef LCWS_ERROR_HPP
#define LCWS_ERROR_HPP

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lcws {

enum class ErrorKind {
    argument,      // caller violated a precondition
    decode,        // malformed / non-canonical / truncated encoding
    format,        // unknown magic, version or suite in a container
    policy_syntax, // policy text did not parse
    state,         // internal encryption/decryption state is inconsistent
    not_found,     // store object missing
    io,            // filesystem failure
    access,        // key does not satisfy the access policy
};

const char* to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

class PolicySyntaxError : public Error {
public:
    PolicySyntaxError(std::size_t position, const std::string& what)
        : Error(ErrorKind::policy_syntax, what + " at position " + std::to_string(position)),
          position_(position) {}
    std::size_t position() const noexcept { return position_; }

private:
    std::size_t position_;
};

} // namespace lcws

#endif
