#include "permadss/service.hpp"

#include "permadss/errors.hpp"
#include "permadss/json_io.hpp"
#include "permadss/surface.hpp"

#include "httplib.h"

#include <fmt/format.h>

#include <charconv>
#include <cmath>

namespace permadss {

using nlohmann::json;

json ApiError::to_json() const {
    return {{"status", status}, {"code", code}, {"message", message}, {"field", field ? json(*field) : json(nullptr)}};
}

namespace {

ApiError bad_request(std::string message, std::optional<std::string> field = std::nullopt, int status = 400) {
    return {status, "bad_request", std::move(message), std::move(field)};
}

ApiError out_of_range(const OutOfRangeError& e) { return {422, "out_of_range", e.what(), field_name(e.variable())}; }

std::optional<double> parse_double(std::string_view text) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

// Case-insensitive lookup of an input name; returns the canonical spelling.
std::optional<std::string> resolve_input(const FisDefinition& fis, std::string_view name) {
    for (const auto& v : fis.inputs())
        if (field_name(v.name()) == field_name(name)) return v.name();
    return std::nullopt;
}

std::optional<std::string> single_param(const QueryParams& q, const std::string& key, ApiError& err) {
    const auto n = q.count(key);
    if (n == 0) return std::nullopt;
    if (n > 1) {
        err = bad_request(fmt::format("query parameter '{}' given {} times; expected one", key, n), key);
        return std::nullopt;
    }
    return q.find(key)->second;
}

}  // namespace

ApiResponse DssService::health() const {
    return ApiResponse::ok({{"status", "ok"}, {"models", {"stable", "growth"}}});
}

ApiResponse DssService::evaluate(std::string_view body, bool trace) const {
    const auto doc = json::parse(body, nullptr, false);
    if (doc.is_discarded()) return ApiResponse::error(bad_request("request body is not valid JSON"));
    if (!doc.is_object()) return ApiResponse::error(bad_request("request body must be a JSON object"));

    const auto scenario_it = doc.find("scenario");
    if (scenario_it == doc.end() || !scenario_it->is_string())
        return ApiResponse::error(bad_request("'scenario' must be a string", "scenario"));
    const auto scenario = parse_scenario(scenario_it->get<std::string>());
    if (!scenario)
        return ApiResponse::error({422, "bad_scenario",
                                   fmt::format("unknown scenario '{}'; expected stable or growth",
                                               scenario_it->get<std::string>()),
                                   "scenario"});

    PermanenceInput in;
    for (auto [key, slot] : {std::pair{"npv", &in.npv}, std::pair{"gen", &in.gen}, std::pair{"divers", &in.divers}}) {
        const auto it = doc.find(key);
        if (it == doc.end() || !it->is_number())
            return ApiResponse::error(bad_request(fmt::format("'{}' must be a number", key), key));
        *slot = it->get<double>();
    }
    bool clamp = false;
    if (const auto it = doc.find("clamp"); it != doc.end()) {
        if (!it->is_boolean()) return ApiResponse::error(bad_request("'clamp' must be a boolean", "clamp"));
        clamp = it->get<bool>();
    }

    const auto& fis = models_.system(*scenario);
    if (clamp) in = clamp_input(fis, in);
    try {
        const auto result = evaluate_permanence(fis, in);
        return ApiResponse::ok(evaluation_json(*scenario, fis, in, result, {true, trace}));
    } catch (const OutOfRangeError& e) {
        return ApiResponse::error(out_of_range(e));
    } catch (const NoRuleFiredError& e) {
        return ApiResponse::error({422, "no_rule_fired", e.what(), std::nullopt});
    }
}

ApiResponse DssService::surface(const QueryParams& query) const {
    ApiError err;
    const auto scenario_text = single_param(query, "scenario", err);
    if (!err.code.empty()) return ApiResponse::error(err);
    if (!scenario_text) return ApiResponse::error(bad_request("missing query parameter 'scenario'", "scenario"));
    const auto scenario = parse_scenario(*scenario_text);
    if (!scenario)
        return ApiResponse::error(
            {422, "bad_scenario", fmt::format("unknown scenario '{}'", *scenario_text), "scenario"});
    const auto& fis = models_.system(*scenario);

    if (query.count("fix") != 1)
        return ApiResponse::error(
            bad_request(fmt::format("exactly one 'fix=VAR:VALUE' parameter is required, got {}", query.count("fix")), "fix"));
    const std::string fix = query.find("fix")->second;
    const auto colon = fix.find(':');
    if (colon == std::string::npos) return ApiResponse::error(bad_request("'fix' must look like VAR:VALUE", "fix"));
    const auto fixed_var = resolve_input(fis, std::string_view(fix).substr(0, colon));
    if (!fixed_var) return ApiResponse::error(bad_request(fmt::format("unknown variable in fix '{}'", fix), "fix"));
    const auto fixed_value = parse_double(std::string_view(fix).substr(colon + 1));
    if (!fixed_value) return ApiResponse::error(bad_request(fmt::format("'{}' has no numeric value", fix), "fix"));

    std::size_t steps = kDefaultSteps;
    const auto steps_text = single_param(query, "steps", err);
    if (!err.code.empty()) return ApiResponse::error(err);
    if (steps_text) {
        auto [ptr, ec] = std::from_chars(steps_text->data(), steps_text->data() + steps_text->size(), steps);
        if (ec != std::errc{} || ptr != steps_text->data() + steps_text->size())
            return ApiResponse::error(bad_request(fmt::format("steps '{}' is not a count", *steps_text), "steps"));
        if (steps < 2 || steps > kMaxServiceSteps)
            return ApiResponse::error(
                bad_request(fmt::format("steps must be between 2 and {}, got {}", kMaxServiceSteps, steps), "steps"));
    }

    // Axes default to the two remaining inputs in declaration order.
    std::vector<std::string> rest;
    for (const auto& v : fis.inputs())
        if (v.name() != *fixed_var) rest.push_back(v.name());
    std::string axes[2] = {rest.at(0), rest.at(1)};
    const char* axis_keys[2] = {"x", "y"};
    for (int a = 0; a < 2; ++a) {
        const auto given = single_param(query, axis_keys[a], err);
        if (!err.code.empty()) return ApiResponse::error(err);
        if (!given) continue;
        const auto resolved = resolve_input(fis, *given);
        if (!resolved)
            return ApiResponse::error(bad_request(fmt::format("unknown variable '{}'", *given), axis_keys[a]));
        axes[a] = *resolved;
    }
    if (axes[0] == axes[1] || axes[0] == *fixed_var || axes[1] == *fixed_var)
        return ApiResponse::error(bad_request(
            fmt::format("fixed variable and axes must be distinct, got {} with {} x {}", *fixed_var, axes[0], axes[1]),
            std::nullopt, 422));

    try {
        const auto grid = sweep(fis, {*fixed_var, *fixed_value}, axes[0], axes[1], steps);
        auto body = json::parse(export_json(grid));
        body["scenario"] = to_string(*scenario);
        return ApiResponse::ok(std::move(body));
    } catch (const OutOfRangeError& e) {
        return ApiResponse::error(out_of_range(e));
    } catch (const NoRuleFiredError& e) {
        return ApiResponse::error({422, "no_rule_fired", e.what(), std::nullopt});
    } catch (const InputError& e) {
        return ApiResponse::error(bad_request(e.what(), std::nullopt, 422));
    }
}

ApiResponse DssService::model(std::string_view scenario) const {
    const auto s = parse_scenario(scenario);
    if (!s)
        return ApiResponse::error({404, "bad_scenario", fmt::format("no model for scenario '{}'", scenario), "scenario"});
    return ApiResponse::ok(model_json(*s, models_.system(*s)));
}

namespace {

void send(httplib::Response& res, const ApiResponse& r) {
    res.status = r.status;
    res.set_content(r.body.dump(), "application/json");
}

bool truthy(const std::string& v) { return v == "true" || v == "1" || v == "yes"; }

}  // namespace

void mount_routes(httplib::Server& server, const DssService& service,
                  const std::optional<std::filesystem::path>& static_dir) {
    server.set_default_headers({
        {"Access-Control-Allow-Origin", "*"},
        {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
        {"Access-Control-Allow-Headers", "Content-Type"},
    });

    server.Get("/api/v1/health", [&service](const httplib::Request&, httplib::Response& res) { send(res, service.health()); });
    server.Post("/api/v1/evaluate", [&service](const httplib::Request& req, httplib::Response& res) {
        const bool trace = req.has_param("trace") && truthy(req.get_param_value("trace"));
        send(res, service.evaluate(req.body, trace));
    });
    server.Get("/api/v1/surface", [&service](const httplib::Request& req, httplib::Response& res) {
        QueryParams q(req.params.begin(), req.params.end());
        send(res, service.surface(q));
    });
    server.Get(R"(/api/v1/model/([^/]+))", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.model(req.matches[1].str()));
    });
    server.Options(R"(/api/v1/.*)", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });

    if (static_dir) server.set_mount_point("/", static_dir->string());

    server.set_error_handler([](const httplib::Request& req, httplib::Response& res) {
        if (!res.body.empty()) return;
        send(res, ApiResponse::error(bad_request(fmt::format("no route for {} {}", req.method, req.path), std::nullopt,
                                                 res.status)));
    });
    server.set_exception_handler([](const httplib::Request&, httplib::Response& res, std::exception_ptr ep) {
        std::string what = "internal error";
        try {
            std::rethrow_exception(ep);
        } catch (const std::exception& e) {
            what = e.what();
        } catch (...) {
        }
        send(res, ApiResponse::error({500, "internal_error", what, std::nullopt}));
    });
}

}  // namespace permadss
