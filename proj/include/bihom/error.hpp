#ifndef BIHOM_ERROR_HPP
#define BIHOM_ERROR_HPP

#include <stdexcept>
#include <string>

namespace bihom {

/// Operational failures: malformed input, violated preconditions, exhausted
/// search bounds. Mathematical falsity is never an Error; it is reported as
/// a verdict. The CLI maps Error to a nonzero exit status.
enum class ErrorKind {
    parse,        // file or scalar syntax
    shape,        // dimension / length inconsistencies
    precondition, // operation contract violated (singular map, mismatched ambient, ...)
    divergence,   // orbit search exceeded its bound
    io,           // filesystem
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind)
    {
    }

    ErrorKind kind() const { return kind_; }

    const char* kind_name() const
    {
        switch (kind_) {
        case ErrorKind::parse: return "parse";
        case ErrorKind::shape: return "shape";
        case ErrorKind::precondition: return "precondition";
        case ErrorKind::divergence: return "divergence";
        case ErrorKind::io: return "io";
        }
        return "unknown";
    }

private:
    ErrorKind kind_;
};

}  // namespace bihom

#endif
