#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace permadss {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What is wrong with a fuzzy system definition. Shared by programmatic
/// construction and the text parser so both report the same vocabulary.
enum class DefinitionIssue {
    syntax,
    invalid_name,
    invalid_number,
    invalid_option,
    empty_universe,
    invalid_breakpoints,
    support_outside_universe,
    uncovered_universe,
    label_order,
    no_labels,
    duplicate_label,
    duplicate_variable,
    unknown_variable,
    unknown_label,
    duplicate_clause,
    mixed_connectives,
    invalid_weight,
    invalid_resolution,
    missing_output,
    multiple_outputs,
    no_rules,
};

std::string_view to_string(DefinitionIssue issue);

class DefinitionError : public Error {
public:
    DefinitionError(DefinitionIssue issue, const std::string& message)
        : Error(message), issue_(issue) {}

    DefinitionIssue issue() const noexcept { return issue_; }

private:
    DefinitionIssue issue_;
};

struct SourcePosition {
    std::size_t line = 0;    // 1-based
    std::size_t column = 0;  // 1-based, in bytes

    friend bool operator==(const SourcePosition&, const SourcePosition&) = default;
};

class ParseError : public Error {
public:
    ParseError(DefinitionIssue issue, SourcePosition pos, const std::string& message);

    DefinitionIssue issue() const noexcept { return issue_; }
    SourcePosition position() const noexcept { return pos_; }
    /// The message without the "line:col:" prefix.
    const std::string& detail() const noexcept { return detail_; }

private:
    DefinitionIssue issue_;
    SourcePosition pos_;
    std::string detail_;
};

/// A crisp input outside its variable's universe. Inputs are never clamped
/// silently.
class OutOfRangeError : public Error {
public:
    OutOfRangeError(std::string variable, double value, double lo, double hi);

    const std::string& variable() const noexcept { return variable_; }
    double value() const noexcept { return value_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }

private:
    std::string variable_;
    double value_;
    double lo_;
    double hi_;
};

/// The aggregated output set is identically zero.
class NoRuleFiredError : public Error {
public:
    NoRuleFiredError() : Error("no rule fired: the aggregated output set is empty") {}
};

/// Malformed call arguments: missing or unknown variables, bad step counts,
/// invalid cash-flow schedules.
class InputError : public Error {
public:
    using Error::Error;
};

}  // namespace permadss
