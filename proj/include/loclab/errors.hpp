// errors.hpp - exception hierarchy shared by all loclab modules.
#pragma once

#include <stdexcept>
#include <string>

namespace loclab {

struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct InvalidSize : Error {
    explicit InvalidSize(const std::string& msg) : Error("InvalidSize: " + msg) {}
};

struct UnknownVertex : Error {
    explicit UnknownVertex(const std::string& msg) : Error("UnknownVertex: " + msg) {}
};

struct EmptyBoundary : Error {
    explicit EmptyBoundary(const std::string& msg) : Error("EmptyBoundary: " + msg) {}
};

struct InvalidDomain : Error {
    explicit InvalidDomain(const std::string& msg) : Error("InvalidDomain: " + msg) {}
};

// Carries a plain-text dump of the offending matrix (row-major, 17 significant digits).
struct NumericalFailure : Error {
    NumericalFailure(const std::string& msg, std::string dump)
        : Error("NumericalFailure: " + msg), matrix_dump(std::move(dump)) {}
    std::string matrix_dump;
};

struct NearSpectrum : Error {
    explicit NearSpectrum(const std::string& msg) : Error("NearSpectrum: " + msg) {}
};

struct DegenerateScale : Error {
    explicit DegenerateScale(const std::string& msg) : Error("DegenerateScale: " + msg) {}
};

struct ScheduleInfeasible : Error {
    explicit ScheduleInfeasible(const std::string& msg) : Error("ScheduleInfeasible: " + msg) {}
};

struct HypothesisFailure : Error {
    explicit HypothesisFailure(const std::string& msg) : Error("HypothesisFailure: " + msg) {}
};

struct InvalidGeometry : Error {
    explicit InvalidGeometry(const std::string& msg) : Error("InvalidGeometry: " + msg) {}
};

struct InsufficientData : Error {
    explicit InsufficientData(const std::string& msg) : Error("InsufficientData: " + msg) {}
};

struct Unsupported : Error {
    explicit Unsupported(const std::string& msg) : Error("Unsupported: " + msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error("ConfigError: " + msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error("IoError: " + msg) {}
};

} // namespace loclab
