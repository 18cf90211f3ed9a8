#include "permadss/cli.hpp"

#include "permadss/calibration.hpp"
#include "permadss/errors.hpp"
#include "permadss/fis_text.hpp"
#include "permadss/json_io.hpp"
#include "permadss/permanence.hpp"
#include "permadss/service.hpp"
#include "permadss/surface.hpp"

#include "CLI11.hpp"
#include "httplib.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace permadss {

namespace {

struct EvalArgs {
    std::string scenario;
    double npv = 0.0;
    double gen = 0.0;
    double divers = 0.0;
    bool json = false;
};

struct SweepArgs {
    std::string scenario;
    std::string fix;
    std::size_t steps = kDefaultSteps;
    std::string format = "csv";
    std::string out;
};

struct ServeArgs {
    std::string addr = "127.0.0.1:8080";
    std::string static_dir;
};

class UsageError : public Error {
public:
    using Error::Error;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    const auto scenario = *parse_scenario(a.scenario);
    const auto models = PermanenceModels::load(default_models_dir());
    const auto& fis = models.system(scenario);
    const PermanenceInput in{a.npv, a.gen, a.divers};
    const auto result = evaluate_permanence(fis, in);
    if (a.json) {
        out << evaluation_json(scenario, fis, in, result, {false, true}).dump() << '\n';
    } else {
        out << "incentive: " << format_number(result.output) << '\n';
    }
    return kExitOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
    const auto scenario = *parse_scenario(a.scenario);
    const auto models = PermanenceModels::load(default_models_dir());
    const auto& fis = models.system(scenario);

    const auto eq = a.fix.find('=');
    if (eq == std::string::npos) throw UsageError(fmt::format("--fix expects VAR=VALUE, got '{}'", a.fix));
    const std::string name = a.fix.substr(0, eq);
    const std::string value_text = a.fix.substr(eq + 1);
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(value_text.data(), value_text.data() + value_text.size(), value);
    if (ec != std::errc{} || ptr != value_text.data() + value_text.size())
        throw UsageError(fmt::format("--fix value '{}' is not a number", value_text));

    std::string fixed;
    std::vector<std::string> axes;
    for (const auto& v : fis.inputs()) {
        if (field_name(v.name()) == field_name(name)) {
            fixed = v.name();
        } else {
            axes.push_back(v.name());
        }
    }
    if (fixed.empty()) throw UsageError(fmt::format("--fix names unknown variable '{}'", name));

    const auto grid = sweep(fis, {fixed, value}, axes.at(0), axes.at(1), a.steps);
    const auto text = a.format == "json" ? export_json(grid) + "\n" : export_csv(grid);
    if (a.out.empty() || a.out == "-") {
        out << text;
    } else {
        std::ofstream file(a.out, std::ios::binary);
        if (!file) throw Error(fmt::format("cannot write {}", a.out));
        file << text;
        if (!file) throw Error(fmt::format("failed writing {}", a.out));
        err << fmt::format("wrote {}x{} surface to {}\n", a.steps, a.steps, a.out);
    }
    return kExitOk;
}

int cmd_validate(const std::string& path, std::ostream& out, std::ostream& err) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(fmt::format("cannot open {}", path));
    std::ostringstream buf;
    buf << in.rdbuf();
    try {
        const auto fis = parse_fis(buf.str());
        out << fmt::format("{} rules, {} variables\n", fis.rules().size(), fis.inputs().size() + 1);
        return kExitOk;
    } catch (const ParseError& e) {
        err << fmt::format("{}:{}\n", path, e.what());
        return kExitDomainError;
    }
}

int cmd_calibrate(std::ostream& out) {
    const auto report = check_calibration(default_models_dir());
    out << report.to_text();
    return report.all_passed() ? kExitOk : kExitDomainError;
}

int cmd_serve(const ServeArgs& a, std::ostream& err) {
    const auto colon = a.addr.rfind(':');
    int port = 0;
    if (colon == std::string::npos) throw UsageError(fmt::format("--addr expects HOST:PORT, got '{}'", a.addr));
    const std::string host = a.addr.substr(0, colon);
    const std::string port_text = a.addr.substr(colon + 1);
    auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
    if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port < 0 || port > 65535 || host.empty())
        throw UsageError(fmt::format("--addr expects HOST:PORT, got '{}'", a.addr));

    const DssService service(PermanenceModels::load(default_models_dir()));
    httplib::Server server;
    std::optional<std::filesystem::path> static_dir;
    if (!a.static_dir.empty()) static_dir = a.static_dir;
    mount_routes(server, service, static_dir);
    if (!server.bind_to_port(host, port)) throw Error(fmt::format("cannot listen on {}", a.addr));
    err << fmt::format("listening on http://{}\n", a.addr) << std::flush;
    return server.listen_after_bind() ? kExitOk : kExitDomainError;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fuzzy decision support for a generics laboratory's incentive to remain in the market", "permadss"};
    app.require_subcommand(1);
    const std::vector<std::string> scenarios{"stable", "growth"};

    EvalArgs eval;
    auto* eval_cmd = app.add_subcommand("eval", "Evaluate the incentive to remain for one laboratory");
    eval_cmd->add_option("--scenario", eval.scenario, "stable or growth")->required()->check(CLI::IsMember(scenarios));
    eval_cmd->add_option("--npv", eval.npv, "Expected NPV in euros")->required();
    eval_cmd->add_option("--gen", eval.gen, "Number of generics in the portfolio")->required();
    eval_cmd->add_option("--divers", eval.divers, "Diversification score (0-5)")->required();
    eval_cmd->add_flag("--json", eval.json, "Print the full inference trace as JSON");

    SweepArgs sw;
    auto* sweep_cmd = app.add_subcommand("sweep", "Sweep two inputs with the third fixed");
    sweep_cmd->add_option("--scenario", sw.scenario, "stable or growth")->required()->check(CLI::IsMember(scenarios));
    sweep_cmd->add_option("--fix", sw.fix, "Fixed input, VAR=VALUE")->required();
    sweep_cmd->add_option("--steps", sw.steps, "Grid points per axis")->check(CLI::Range(2, 1001));
    sweep_cmd->add_option("--format", sw.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    sweep_cmd->add_option("--out", sw.out, "Output file (default: standard output)");

    std::string validate_path;
    auto* validate_cmd = app.add_subcommand("validate", "Parse a FIS file and report diagnostics");
    validate_cmd->add_option("file", validate_path, "FIS text file")->required();

    auto* calibrate_cmd = app.add_subcommand("calibrate", "Check the bundled models against the calibration anchors");

    ServeArgs serve;
    auto* serve_cmd = app.add_subcommand("serve", "Start the HTTP JSON service");
    serve_cmd->add_option("--addr", serve.addr, "HOST:PORT to listen on");
    serve_cmd->add_option("--static", serve.static_dir, "Directory served at /");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        app.exit(e, err, err);
        return kExitUsage;
    }

    try {
        if (*eval_cmd) return cmd_eval(eval, out);
        if (*sweep_cmd) return cmd_sweep(sw, out, err);
        if (*validate_cmd) return cmd_validate(validate_path, out, err);
        if (*calibrate_cmd) return cmd_calibrate(out);
        if (*serve_cmd) return cmd_serve(serve, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitDomainError;
    }
    return kExitUsage;
}

}  // namespace permadss
