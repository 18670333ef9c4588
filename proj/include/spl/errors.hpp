#pragma once

#include <stdexcept>
#include <string>

namespace spl {

// Malformed input text. Carries 1-based line/column of the offending token.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string msg, int line, int col)
        : std::runtime_error(std::move(msg)), line_(line), col_(col) {}
    int line() const { return line_; }
    int col() const { return col_; }

private:
    int line_;
    int col_;
};

// Well-formed input that cannot be processed as requested: names outside the
// declared vocabulary, ill-formed models, inconsistent arguments.
class InputError : public std::runtime_error {
public:
    explicit InputError(const std::string& msg) : std::runtime_error(msg) {}
};

// A configured ceiling was hit before a verdict could be reached. Never used
// to report a (possibly wrong) verdict.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& msg) : std::runtime_error(msg) {}
};

// A violated internal invariant. Always indicates an implementation bug, never
// bad input; mapped to its own process exit code.
class InternalError : public std::logic_error {
public:
    explicit InternalError(const std::string& msg) : std::logic_error(msg) {}
};

inline void internal_check(bool cond, const std::string& msg) {
    if (!cond) throw InternalError(msg);
}

}  // namespace spl
