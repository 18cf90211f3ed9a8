#pragma once

#include "permadss/inference.hpp"

#include <string>
#include <string_view>

namespace permadss {

/// Parses the line-oriented FIS text format (see docs/fis-format.md).
///
/// Every violation is reported as a ParseError carrying the 1-based line and
/// column of the offending token and a DefinitionIssue naming the problem:
/// `syntax` for malformed lines, and the semantic issues (unknown_label,
/// duplicate_variable, support_outside_universe, no_rules, ...) for input
/// that is well-formed but describes an invalid system.
FisDefinition parse_fis(std::string_view text);

/// Canonical text for a system: header, options in fixed order, input blocks
/// in declaration order, the output block, then one rule per line. Numbers
/// are written in the shortest form that reads back to the same double, so
/// parse_fis(serialize_fis(f)) == f and serializing is idempotent.
std::string serialize_fis(const FisDefinition& fis);

/// Shortest decimal text that reads back as exactly `value`.
std::string format_number(double value);

}  // namespace permadss
