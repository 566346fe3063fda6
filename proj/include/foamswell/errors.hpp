#ifndef FOAMSWELL_ERRORS_HPP
#define FOAMSWELL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace foamswell {

/// A state with a non-positive deformation gradient; the singular elastic
/// response is undefined there and the deformation stops being invertible.
class SingularConfigurationError : public std::runtime_error {
public:
    explicit SingularConfigurationError(const std::string& what)
        : std::runtime_error(what) {}
};

/// Newton (or a line search inside it) failed to converge.
class SolverError : public std::runtime_error {
public:
    SolverError(const std::string& what, double residual, int iterations)
        : std::runtime_error(what), last_residual(residual), iterations(iterations) {}
    double last_residual;
    int iterations;
};

/// The Picard loop between the two subproblems exceeded its iteration cap.
class CouplingError : public std::runtime_error {
public:
    CouplingError(const std::string& what, std::vector<double> history)
        : std::runtime_error(what), change_history(std::move(history)) {}
    std::vector<double> change_history;
};

/// A constitutive assumption check failed.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// Bad configuration file: syntax or semantic violation.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, std::string field = {})
        : std::runtime_error(what), field_path(std::move(field)) {}
    std::string field_path;
};

} // namespace foamswell

#endif
