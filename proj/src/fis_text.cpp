#include "permadss/fis_text.hpp"

#include "permadss/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <optional>
#include <set>

namespace permadss {

std::string format_number(double value) {
    if (value == 0.0) return "0";  // folds -0
    std::array<char, 32> buf{};
    // Whole numbers below 2^53 read better in fixed notation and still round-trip.
    const bool whole = std::isfinite(value) && std::abs(value) < 9007199254740992.0 && value == std::trunc(value);
    auto [end, ec] = whole ? std::to_chars(buf.data(), buf.data() + buf.size(), value, std::chars_format::fixed)
                           : std::to_chars(buf.data(), buf.data() + buf.size(), value);
    return std::string(buf.data(), end);
}

namespace {

struct Token {
    std::string_view text;
    SourcePosition pos;
};

bool is_blank(char ch) { return ch == ' ' || ch == '\t' || ch == '\r' || ch == '\v' || ch == '\f'; }

std::vector<Token> tokenize_line(std::string_view line, std::size_t line_no) {
    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        if (is_blank(line[i])) {
            ++i;
            continue;
        }
        if (line[i] == '#') break;
        const std::size_t start = i;
        while (i < line.size() && !is_blank(line[i]) && line[i] != '#') ++i;
        tokens.push_back({line.substr(start, i - start), {line_no, start + 1}});
    }
    return tokens;
}

[[noreturn]] void fail(DefinitionIssue issue, SourcePosition pos, const std::string& message) {
    throw ParseError(issue, pos, message);
}

double parse_number(const Token& t) {
    double value = 0.0;
    const char* first = t.text.data();
    const char* last = first + t.text.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last || !std::isfinite(value))
        fail(DefinitionIssue::invalid_number, t.pos, fmt::format("'{}' is not a finite number", t.text));
    return value;
}

std::string parse_name(const Token& t, std::string_view what) {
    if (!is_identifier(t.text)) fail(DefinitionIssue::invalid_name, t.pos, fmt::format("'{}' is not a valid {} name", t.text, what));
    return std::string(t.text);
}

void expect_keyword(const std::vector<Token>& tokens, std::size_t i, std::string_view keyword, SourcePosition line_end) {
    if (i >= tokens.size()) fail(DefinitionIssue::syntax, line_end, fmt::format("expected '{}'", keyword));
    if (tokens[i].text != keyword)
        fail(DefinitionIssue::syntax, tokens[i].pos, fmt::format("expected '{}', found '{}'", keyword, tokens[i].text));
}

const Token& need(const std::vector<Token>& tokens, std::size_t i, std::string_view what, SourcePosition line_end) {
    if (i >= tokens.size()) fail(DefinitionIssue::syntax, line_end, fmt::format("expected {}", what));
    return tokens[i];
}

void expect_end(const std::vector<Token>& tokens, std::size_t i) {
    if (i < tokens.size())
        fail(DefinitionIssue::syntax, tokens[i].pos, fmt::format("unexpected '{}' at end of line", tokens[i].text));
}

struct PendingLabel {
    Label label;
    SourcePosition pos;
};

struct PendingVariable {
    bool is_output = false;
    std::string name;
    double lo = 0.0;
    double hi = 0.0;
    SourcePosition pos;
    std::vector<PendingLabel> labels;
};

struct PendingClause {
    Clause clause;
    SourcePosition var_pos;
    SourcePosition label_pos;
};

struct PendingRule {
    std::vector<PendingClause> antecedent;
    Connective connective = Connective::And;
    PendingClause consequent;
    double weight = 1.0;
    SourcePosition pos;
    SourcePosition weight_pos;
};

class Parser {
public:
    explicit Parser(std::string_view text) : text_(text) {}

    FisDefinition run() {
        std::size_t line_no = 0;
        std::size_t start = 0;
        while (start <= text_.size()) {
            const std::size_t nl = text_.find('\n', start);
            const std::size_t stop = nl == std::string_view::npos ? text_.size() : nl;
            ++line_no;
            statement(text_.substr(start, stop - start), line_no);
            if (nl == std::string_view::npos) break;
            start = nl + 1;
        }
        end_pos_ = {line_no, 1};
        return finish();
    }

private:
    void statement(std::string_view line, std::size_t line_no) {
        const auto tokens = tokenize_line(line, line_no);
        if (tokens.empty()) return;
        const SourcePosition line_end{line_no, line.size() + 1};
        const auto& head = tokens[0];

        if (head.text == "system") {
            if (system_name_) fail(DefinitionIssue::syntax, head.pos, "duplicate 'system' header");
            if (!variables_.empty() || !rules_.empty() || !options_seen_.empty())
                fail(DefinitionIssue::syntax, head.pos, "'system' must be the first statement");
            system_name_ = parse_name(need(tokens, 1, "a system name", line_end), "system");
            system_pos_ = head.pos;
            expect_end(tokens, 2);
            return;
        }
        if (!system_name_) fail(DefinitionIssue::syntax, head.pos, "expected 'system <name>' header first");

        if (head.text != "label") block_open_ = false;
        if (head.text == "option") {
            option(tokens, line_end);
        } else if (head.text == "input" || head.text == "output") {
            variable(tokens, line_end);
        } else if (head.text == "label") {
            label(tokens, line_end);
        } else if (head.text == "rule") {
            rule(tokens, line_end);
        } else {
            fail(DefinitionIssue::syntax, head.pos, fmt::format("unknown statement '{}'", head.text));
        }
    }

    void option(const std::vector<Token>& tokens, SourcePosition line_end) {
        const auto& key = need(tokens, 1, "an option name", line_end);
        const auto& value = need(tokens, 2, "an option value", line_end);
        expect_end(tokens, 3);
        if (!options_seen_.insert(std::string(key.text)).second)
            fail(DefinitionIssue::invalid_option, key.pos, fmt::format("option {} set twice", key.text));

        auto only = [&](std::string_view supported) {
            if (value.text != supported)
                fail(DefinitionIssue::invalid_option, value.pos,
                     fmt::format("{} supports only '{}', got '{}'", key.text, supported, value.text));
        };
        if (key.text == "and_op") {
            only("min");
        } else if (key.text == "or_op") {
            only("max");
        } else if (key.text == "implication") {
            only("min");
        } else if (key.text == "aggregation") {
            only("max");
        } else if (key.text == "defuzz") {
            only("centroid");
        } else if (key.text == "resolution") {
            std::size_t n = 0;
            const char* last = value.text.data() + value.text.size();
            auto [ptr, ec] = std::from_chars(value.text.data(), last, n);
            if (ec != std::errc{} || ptr != last)
                fail(DefinitionIssue::invalid_number, value.pos, fmt::format("'{}' is not a sample count", value.text));
            if (n < kMinResolution || n > kMaxResolution)
                fail(DefinitionIssue::invalid_resolution, value.pos,
                     fmt::format("resolution must be in [{}, {}], got {}", kMinResolution, kMaxResolution, n));
            options_.resolution = n;
        } else {
            fail(DefinitionIssue::invalid_option, key.pos, fmt::format("unknown option '{}'", key.text));
        }
    }

    void variable(const std::vector<Token>& tokens, SourcePosition line_end) {
        PendingVariable v;
        v.is_output = tokens[0].text == "output";
        v.pos = tokens[0].pos;
        const auto& name_tok = need(tokens, 1, "a variable name", line_end);
        v.name = parse_name(name_tok, "variable");
        expect_keyword(tokens, 2, "range", line_end);
        v.lo = parse_number(need(tokens, 3, "the range lower bound", line_end));
        v.hi = parse_number(need(tokens, 4, "the range upper bound", line_end));
        expect_end(tokens, 5);

        for (const auto& other : variables_)
            if (other.name == v.name)
                fail(DefinitionIssue::duplicate_variable, name_tok.pos, fmt::format("variable {} declared twice", v.name));
        if (v.is_output && std::any_of(variables_.begin(), variables_.end(), [](const auto& o) { return o.is_output; }))
            fail(DefinitionIssue::multiple_outputs, tokens[0].pos, "only one output variable is supported");
        if (!(v.lo < v.hi))
            fail(DefinitionIssue::empty_universe, tokens[3].pos,
                 fmt::format("range of {} needs lo < hi, got [{}, {}]", v.name, v.lo, v.hi));
        variables_.push_back(std::move(v));
        block_open_ = true;
    }

    void label(const std::vector<Token>& tokens, SourcePosition line_end) {
        if (!block_open_) fail(DefinitionIssue::syntax, tokens[0].pos, "'label' outside an input or output block");
        auto& v = variables_.back();
        const auto& name_tok = need(tokens, 1, "a label name", line_end);
        std::string name = parse_name(name_tok, "label");
        const auto& shape = need(tokens, 2, "'tri' or 'trap'", line_end);
        std::size_t arity = 0;
        if (shape.text == "tri") {
            arity = 3;
        } else if (shape.text == "trap") {
            arity = 4;
        } else {
            fail(DefinitionIssue::syntax, shape.pos, fmt::format("expected 'tri' or 'trap', found '{}'", shape.text));
        }
        std::array<double, 4> p{};
        for (std::size_t i = 0; i < arity; ++i) p[i] = parse_number(need(tokens, 3 + i, "a breakpoint", line_end));
        expect_end(tokens, 3 + arity);

        std::optional<MembershipFunction> mf;
        try {
            mf = arity == 3 ? MembershipFunction::triangular(p[0], p[1], p[2])
                            : MembershipFunction::trapezoidal(p[0], p[1], p[2], p[3]);
        } catch (const DefinitionError& e) {
            fail(e.issue(), shape.pos, e.what());
        }
        if (mf->support_lo() < v.lo || mf->support_hi() > v.hi)
            fail(DefinitionIssue::support_outside_universe, tokens[3].pos,
                 fmt::format("support [{}, {}] of {}.{} is outside the range [{}, {}]", mf->support_lo(),
                             mf->support_hi(), v.name, name, v.lo, v.hi));
        for (const auto& other : v.labels)
            if (other.label.name == name)
                fail(DefinitionIssue::duplicate_label, name_tok.pos, fmt::format("label {} declared twice in {}", name, v.name));
        v.labels.push_back({Label{std::move(name), *mf}, tokens[0].pos});
    }

    PendingClause clause(const std::vector<Token>& tokens, std::size_t& i, SourcePosition line_end) {
        PendingClause c;
        const auto& var = need(tokens, i, "a variable name", line_end);
        c.clause.variable = parse_name(var, "variable");
        c.var_pos = var.pos;
        expect_keyword(tokens, i + 1, "is", line_end);
        const auto& lab = need(tokens, i + 2, "a label name", line_end);
        c.clause.label = parse_name(lab, "label");
        c.label_pos = lab.pos;
        i += 3;
        return c;
    }

    void rule(const std::vector<Token>& tokens, SourcePosition line_end) {
        PendingRule r;
        r.pos = tokens[0].pos;
        expect_keyword(tokens, 1, "if", line_end);
        std::size_t i = 2;
        std::optional<Connective> connective;
        for (;;) {
            r.antecedent.push_back(clause(tokens, i, line_end));
            const auto& next = need(tokens, i, "'and', 'or' or 'then'", line_end);
            if (next.text == "then") break;
            Connective c;
            if (next.text == "and") {
                c = Connective::And;
            } else if (next.text == "or") {
                c = Connective::Or;
            } else {
                fail(DefinitionIssue::syntax, next.pos, fmt::format("expected 'and', 'or' or 'then', found '{}'", next.text));
            }
            if (connective && *connective != c)
                fail(DefinitionIssue::mixed_connectives, next.pos, "a rule must use a single connective throughout");
            connective = c;
            ++i;
        }
        ++i;  // then
        r.connective = connective.value_or(Connective::And);
        r.consequent = clause(tokens, i, line_end);
        if (i < tokens.size() && tokens[i].text == "weight") {
            const auto& w = need(tokens, i + 1, "a weight", line_end);
            r.weight = parse_number(w);
            r.weight_pos = w.pos;
            if (!(r.weight > 0.0 && r.weight <= 1.0))
                fail(DefinitionIssue::invalid_weight, w.pos, fmt::format("weight {} is outside (0, 1]", r.weight));
            i += 2;
        }
        expect_end(tokens, i);
        rules_.push_back(std::move(r));
    }

    LinguisticVariable build_variable(const PendingVariable& v) {
        if (v.labels.empty()) fail(DefinitionIssue::no_labels, v.pos, fmt::format("variable {} has no labels", v.name));
        std::vector<Label> labels;
        labels.reserve(v.labels.size());
        for (const auto& l : v.labels) labels.push_back(l.label);
        try {
            return LinguisticVariable(v.name, v.lo, v.hi, std::move(labels));
        } catch (const DefinitionError& e) {
            fail(e.issue(), v.pos, e.what());
        }
    }

    const PendingVariable* find_variable(std::string_view name) const {
        for (const auto& v : variables_)
            if (v.name == name) return &v;
        return nullptr;
    }

    void check_rule(const PendingRule& r) const {
        std::set<std::string, std::less<>> seen;
        auto check_label = [&](const PendingVariable& v, const PendingClause& c) {
            for (const auto& l : v.labels)
                if (l.label.name == c.clause.label) return;
            fail(DefinitionIssue::unknown_label, c.label_pos, fmt::format("{} has no label {}", v.name, c.clause.label));
        };
        for (const auto& c : r.antecedent) {
            const auto* v = find_variable(c.clause.variable);
            if (v == nullptr || v->is_output)
                fail(DefinitionIssue::unknown_variable, c.var_pos, fmt::format("unknown input {}", c.clause.variable));
            if (!seen.insert(c.clause.variable).second)
                fail(DefinitionIssue::duplicate_clause, c.var_pos, fmt::format("{} tested more than once", c.clause.variable));
            check_label(*v, c);
        }
        const auto* out = find_variable(r.consequent.clause.variable);
        if (out == nullptr || !out->is_output)
            fail(DefinitionIssue::unknown_variable, r.consequent.var_pos,
                 fmt::format("{} is not the output variable", r.consequent.clause.variable));
        check_label(*out, r.consequent);
    }

    FisDefinition finish() {
        if (!system_name_) fail(DefinitionIssue::syntax, {1, 1}, "missing 'system <name>' header");

        std::vector<LinguisticVariable> inputs;
        std::optional<LinguisticVariable> output;
        for (const auto& v : variables_) {
            auto built = build_variable(v);
            if (v.is_output) {
                output.emplace(std::move(built));
            } else {
                inputs.push_back(std::move(built));
            }
        }
        if (!output) fail(DefinitionIssue::missing_output, end_pos_, "no output variable declared");
        if (rules_.empty()) fail(DefinitionIssue::no_rules, end_pos_, "the system has no rules");

        std::vector<FuzzyRule> rules;
        rules.reserve(rules_.size());
        for (const auto& r : rules_) {
            check_rule(r);
            FuzzyRule rule;
            for (const auto& c : r.antecedent) rule.antecedent.push_back(c.clause);
            rule.connective = r.connective;
            rule.consequent = r.consequent.clause;
            rule.weight = r.weight;
            rules.push_back(std::move(rule));
        }
        try {
            return FisDefinition(*system_name_, std::move(inputs), std::move(*output), std::move(rules), options_);
        } catch (const DefinitionError& e) {
            fail(e.issue(), system_pos_, e.what());
        }
    }

    std::string_view text_;
    std::optional<std::string> system_name_;
    SourcePosition system_pos_{1, 1};
    SourcePosition end_pos_{1, 1};
    FisOptions options_;
    std::set<std::string, std::less<>> options_seen_;
    std::vector<PendingVariable> variables_;
    std::vector<PendingRule> rules_;
    bool block_open_ = false;
};

void write_variable(std::string& out, std::string_view kind, const LinguisticVariable& v) {
    out += fmt::format("{} {} range {} {}\n", kind, v.name(), format_number(v.lo()), format_number(v.hi()));
    for (const auto& l : v.labels()) {
        out += fmt::format("  label {} {}", l.name, l.mf.kind() == MembershipKind::triangular ? "tri" : "trap");
        for (double p : l.mf.params()) {
            out += ' ';
            out += format_number(p);
        }
        out += '\n';
    }
}

}  // namespace

FisDefinition parse_fis(std::string_view text) { return Parser(text).run(); }

std::string serialize_fis(const FisDefinition& fis) {
    std::string out;
    out += fmt::format("system {}\n", fis.name());
    out += "option and_op min\n";
    out += "option or_op max\n";
    out += "option implication min\n";
    out += "option aggregation max\n";
    out += "option defuzz centroid\n";
    out += fmt::format("option resolution {}\n", fis.options().resolution);
    for (const auto& v : fis.inputs()) {
        out += '\n';
        write_variable(out, "input", v);
    }
    out += '\n';
    write_variable(out, "output", fis.output());
    out += '\n';
    for (const auto& r : fis.rules()) {
        out += "rule if";
        for (std::size_t i = 0; i < r.antecedent.size(); ++i) {
            if (i > 0) out += r.connective == Connective::And ? " and" : " or";
            out += fmt::format(" {} is {}", r.antecedent[i].variable, r.antecedent[i].label);
        }
        out += fmt::format(" then {} is {}", r.consequent.variable, r.consequent.label);
        if (r.weight != 1.0) out += fmt::format(" weight {}", format_number(r.weight));
        out += '\n';
    }
    return out;
}

}  // namespace permadss
