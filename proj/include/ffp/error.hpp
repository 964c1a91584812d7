#ifndef FFP_ERROR_HPP
#define FFP_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ffp {

enum class ErrorKind {
    parse,         // malformed file or cell
    dimension,     // vectors or fingerprints of different dim
    config,        // bad parameter, flag or argument combination
    io,            // cannot open, read or write a file
    domain,        // argument outside the mathematical domain of a function
    invalid_input, // non-finite values
    empty_class,   // a class without any instance
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline const char* to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::parse: return "parse error";
    case ErrorKind::dimension: return "dimension error";
    case ErrorKind::config: return "configuration error";
    case ErrorKind::io: return "I/O error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::invalid_input: return "invalid input";
    case ErrorKind::empty_class: return "empty class";
    }
    return "error";
}

/// Process exit code used by the command-line tool for each error kind.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::parse:
    case ErrorKind::invalid_input:
        return 2;
    case ErrorKind::dimension:
        return 3;
    case ErrorKind::config:
    case ErrorKind::domain:
    case ErrorKind::empty_class:
        return 4;
    case ErrorKind::io:
        return 5;
    }
    return 1;
}

} // namespace ffp

#endif
