#ifndef TOPOVOL_ERRORS_HPP
#define TOPOVOL_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <vector>

namespace topovol {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Raised when an input series is too short, empty or otherwise unusable.
class InvalidInput : public Error {
public:
    explicit InvalidInput(const std::string& msg) : Error(msg) {}
};

// Zero-variance input where a scale estimate is required.
class ZeroVariance : public Error {
public:
    explicit ZeroVariance(const std::string& msg) : Error(msg) {}
};

// Rank-deficient regression design; names the offending columns.
class CollinearityError : public Error {
public:
    CollinearityError(const std::string& msg, std::vector<std::string> columns)
        : Error(msg), offending_columns(std::move(columns)) {}
    std::vector<std::string> offending_columns;
};

// Particle filter numerical failure; carries the observation index at
// which all weights collapsed.
class FilterFailure : public Error {
public:
    FilterFailure(const std::string& msg, std::size_t step)
        : Error(msg), step_index(step) {}
    std::size_t step_index;
};

// Malformed or inconsistent input files.
class IngestError : public Error {
public:
    explicit IngestError(const std::string& msg) : Error(msg) {}
};

} // namespace topovol

#endif
