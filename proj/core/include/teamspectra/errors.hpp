#pragma once

#include <stdexcept>
#include <string>

namespace teamspectra {

// Raised when a JSON document is missing a required field or a field has
// the wrong type. Carries the offending field name.
class SchemaError : public std::runtime_error {
public:
    SchemaError(std::string field, const std::string& what)
        : std::runtime_error("schema error at '" + field + "': " + what),
          field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A match does not carry exactly 2 teams x 5 players.
class CardinalityError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Numeric argument outside its domain (e.g. zero duration).
class DomainError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// HTTP 401/403 from the match API.
class AuthError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// HTTP 404 from the match API (e.g. an unknown summoner name).
class NotFound : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Request failed after exhausting retries.
class TransportError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Centralization asked for a graph with zero total assist weight.
class UndefinedForEmptyGraph : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Feature assembly found a match without graph metrics.
class MissingGraph : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A feature column is constant (VIF regression impossible).
class DegenerateMatrix : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Correlation matrix is not invertible.
class SingularCorrelation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// All off-diagonal correlations vanish: no factor structure to assess.
class DegenerateCorrelation : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Iterative fit did not reach tolerance within the iteration budget.
class NonConvergence : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Factor-label rule criteria point at conflicting factors.
class AmbiguousPattern : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cluster-label rule would assign two labels to the same cluster.
class AmbiguousLabeling : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// k exceeds the number of distinct rows.
class KTooLarge : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Pipeline configuration is invalid (exit code 2 at the CLI).
class ConfigError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

// A pipeline stage failed; carries the stage name (exit code 3 at the CLI).
class StageError : public std::runtime_error {
public:
    StageError(std::string stage, const std::string& what)
        : std::runtime_error("stage '" + stage + "' failed: " + what),
          stage_(std::move(stage)) {}
    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

}  // namespace teamspectra
