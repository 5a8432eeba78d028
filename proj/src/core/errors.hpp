#pragma once

#include <stdexcept>
#include <string>

namespace ncqft {

// Invalid run configuration (bad field values, incompatible model/params).
// Carries a field path such as "group.n" so the CLI can point at the culprit.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
    const std::string& field() const { return field_; }

private:
    std::string field_;
};

// Mismatched array/grid shapes between operands.
class ShapeError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A chain sum whose exhaustive evaluation would exceed the configured budget.
class BudgetError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Representation-theoretic preconditions violated (degenerate label, etc).
class RepresentationError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Fiberwise functional calculus applied outside its domain.
class CalculusError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace ncqft
