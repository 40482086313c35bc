#pragma once

#include <stdexcept>
#include <string>

namespace xinflate {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid user input: malformed model, instance outside its domain,
/// misprediction, broken preconditions. The CLI maps it to exit code 2.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Schema or syntax violation in an input document. `where` is a JSON
/// pointer, a CSV line number or a byte offset, depending on the source.
class ParseError : public ValidationError {
public:
    ParseError(std::string where, const std::string& what)
        : ValidationError(where + ": " + what), where_(std::move(where)) {}

    const std::string& where() const noexcept { return where_; }

private:
    std::string where_;
};

} // namespace xinflate
