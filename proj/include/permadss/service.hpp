#pragma once

#include "permadss/permanence.hpp"

#include "json.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace httplib {
class Server;
}

namespace permadss {

inline constexpr std::size_t kMaxServiceSteps = 201;

/// Machine-readable error. Every non-2xx body is exactly
/// {"status", "code", "message", "field"} with field null when no single
/// request field is to blame.
struct ApiError {
    int status = 400;
    std::string code;  // out_of_range | bad_scenario | bad_request | no_rule_fired
    std::string message;
    std::optional<std::string> field;

    nlohmann::json to_json() const;
};

struct ApiResponse {
    int status = 200;
    nlohmann::json body;

    static ApiResponse ok(nlohmann::json body) { return {200, std::move(body)}; }
    static ApiResponse error(const ApiError& e) { return {e.status, e.to_json()}; }
};

using QueryParams = std::multimap<std::string, std::string>;

/// Request handlers over immutable, shared models. Handlers keep no state
/// between calls and may run concurrently.
class DssService {
public:
    explicit DssService(PermanenceModels models) : models_(std::move(models)) {}

    const PermanenceModels& models() const noexcept { return models_; }

    /// GET /api/v1/health
    ApiResponse health() const;
    /// POST /api/v1/evaluate, body {scenario, npv, gen, divers, clamp?}.
    /// Lists fired rules only; `trace` adds the sampled aggregate set.
    ApiResponse evaluate(std::string_view body, bool trace) const;
    /// GET /api/v1/surface?scenario=&fix=VAR:VAL&steps=[&x=&y=]
    ApiResponse surface(const QueryParams& query) const;
    /// GET /api/v1/model/{scenario}
    ApiResponse model(std::string_view scenario) const;

private:
    PermanenceModels models_;
};

/// Installs the /api/v1 routes, CORS headers and JSON error bodies. When
/// `static_dir` is set its files are served from `/`.
void mount_routes(httplib::Server& server, const DssService& service,
                  const std::optional<std::filesystem::path>& static_dir = std::nullopt);

}  // namespace permadss
