#include "permadss/errors.hpp"

#include <fmt/format.h>

namespace permadss {

std::string_view to_string(DefinitionIssue issue) {
    switch (issue) {
    case DefinitionIssue::syntax: return "syntax error";
    case DefinitionIssue::invalid_name: return "invalid name";
    case DefinitionIssue::invalid_number: return "invalid number";
    case DefinitionIssue::invalid_option: return "invalid option";
    case DefinitionIssue::empty_universe: return "empty universe";
    case DefinitionIssue::invalid_breakpoints: return "invalid breakpoints";
    case DefinitionIssue::support_outside_universe: return "support outside universe";
    case DefinitionIssue::uncovered_universe: return "uncovered universe";
    case DefinitionIssue::label_order: return "label order";
    case DefinitionIssue::no_labels: return "no labels";
    case DefinitionIssue::duplicate_label: return "duplicate label";
    case DefinitionIssue::duplicate_variable: return "duplicate variable";
    case DefinitionIssue::unknown_variable: return "unknown variable";
    case DefinitionIssue::unknown_label: return "unknown label";
    case DefinitionIssue::duplicate_clause: return "duplicate clause";
    case DefinitionIssue::mixed_connectives: return "mixed connectives";
    case DefinitionIssue::invalid_weight: return "invalid weight";
    case DefinitionIssue::invalid_resolution: return "invalid resolution";
    case DefinitionIssue::missing_output: return "missing output";
    case DefinitionIssue::multiple_outputs: return "multiple outputs";
    case DefinitionIssue::no_rules: return "no rules";
    }
    return "unknown issue";
}

ParseError::ParseError(DefinitionIssue issue, SourcePosition pos, const std::string& message)
    : Error(fmt::format("{}:{}: {}: {}", pos.line, pos.column, to_string(issue), message)),
      issue_(issue),
      pos_(pos),
      detail_(message) {}

OutOfRangeError::OutOfRangeError(std::string variable, double value, double lo, double hi)
    : Error(fmt::format("{} = {} is outside its range [{}, {}]", variable, value, lo, hi)),
      variable_(std::move(variable)),
      value_(value),
      lo_(lo),
      hi_(hi) {}

}  // namespace permadss
