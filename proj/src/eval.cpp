#include "hdlcore/eval.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/proc.hpp"
#include "hdlcore/util.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>

namespace hdlcore {

namespace fs = std::filesystem;
using nlohmann::json;

std::vector<BenchDesign> load_bench(const std::string& dir,
                                    std::vector<std::string>* warnings) {
    if (!fs::is_directory(dir)) throw Error("benchmark directory not found: " + dir);

    std::vector<fs::path> subdirs;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.is_directory()) subdirs.push_back(entry.path());
    std::sort(subdirs.begin(), subdirs.end(),
              [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

    std::vector<BenchDesign> designs;
    for (const auto& sub : subdirs) {
        BenchDesign d;
        d.name = sub.filename().string();
        fs::path desc = sub / "design_description.txt";
        fs::path tb = sub / "testbench.v";
        fs::path ref = sub / "designer_RTL.v";
        if (!fs::is_regular_file(desc) || !fs::is_regular_file(tb)) {
            if (warnings)
                warnings->push_back("skipping " + d.name +
                                    ": missing design_description.txt or testbench.v");
            continue;
        }
        d.description = read_file(desc);
        d.testbench = read_file(tb);
        if (trim(d.description).empty() || trim(d.testbench).empty()) {
            if (warnings)
                warnings->push_back("skipping " + d.name + ": empty description or testbench");
            continue;
        }
        if (fs::is_regular_file(ref)) d.reference = read_file(ref);
        designs.push_back(std::move(d));
    }
    if (designs.empty()) throw Error("no usable designs in benchmark directory: " + dir);
    return designs;
}

namespace {

std::string substitute_paths(std::string cmd, const std::string& code_file,
                             const std::string& tb_file) {
    auto replace_all = [](std::string& s, const std::string& from, const std::string& to) {
        size_t pos = 0;
        while ((pos = s.find(from, pos)) != std::string::npos) {
            s.replace(pos, from.size(), to);
            pos += to.size();
        }
    };
    replace_all(cmd, "{code_file}", code_file);
    replace_all(cmd, "{tb_file}", tb_file);
    return cmd;
}

std::string failure_note(const std::string& which, const CommandResult& r) {
    if (r.timed_out) return which + " check timeout";
    if (r.exit_code == 127) return which + " command not found (exit 127)";
    return which + " check failed (exit " + std::to_string(r.exit_code) + ")";
}

} // namespace

AttemptOutcome check_attempt(const BenchDesign& design, const std::string& code,
                             const CheckConfig& cfg) {
    if (cfg.syntax_cmd.empty()) throw Error("check config is missing syntax_cmd");

    static std::atomic<std::uint64_t> ws_counter{0};
    fs::path root = cfg.workdir_root.empty() ? fs::temp_directory_path()
                                             : fs::path(cfg.workdir_root);
    fs::path ws = root / ("hdlcore_check_" + design.name + "_" +
                          std::to_string(ws_counter.fetch_add(1)));
    fs::create_directories(ws);

    AttemptOutcome outcome;
    try {
        fs::path code_file = ws / "code.v";
        fs::path tb_file = ws / "testbench.v";
        write_file(code_file, code);
        write_file(tb_file, design.testbench);

        auto syntax = run_command(
            substitute_paths(cfg.syntax_cmd, code_file.string(), tb_file.string()),
            cfg.timeout_ms);
        outcome.syntax_pass = !syntax.timed_out && syntax.exit_code == 0;
        if (!outcome.syntax_pass) {
            outcome.error_note = failure_note("syntax", syntax);
        } else if (!cfg.func_cmd.empty()) {
            auto func = run_command(
                substitute_paths(cfg.func_cmd, code_file.string(), tb_file.string()),
                cfg.timeout_ms);
            outcome.func_pass = !func.timed_out && func.exit_code == 0;
            if (!outcome.func_pass) outcome.error_note = failure_note("functional", func);
        }
    } catch (const Error& e) {
        outcome.syntax_pass = false;
        outcome.func_pass = false;
        outcome.error_note = e.what();
    }

    std::error_code ec;
    fs::remove_all(ws, ec);
    return outcome;
}

std::pair<double, double> pass_at_k(const std::vector<DesignOutcomes>& outcomes, int k) {
    if (outcomes.empty()) throw Error("pass@k over an empty design list");
    if (k < 1) throw Error("pass@k requires k >= 1");

    int syntax_successes = 0, func_successes = 0;
    for (const auto& design : outcomes) {
        if (design.attempts.size() < static_cast<size_t>(k))
            throw Error("design " + design.design + " has " +
                        std::to_string(design.attempts.size()) + " attempts, needs >= " +
                        std::to_string(k));
        bool syn = false, fun = false;
        for (int i = 0; i < k; ++i) {
            const auto& a = design.attempts[static_cast<size_t>(i)];
            if (a.func_pass && !a.syntax_pass)
                throw Error("invariant violated: func_pass without syntax_pass on design " +
                            design.design);
            syn = syn || a.syntax_pass;
            fun = fun || a.func_pass;
        }
        if (syn) ++syntax_successes;
        if (fun) ++func_successes;
    }
    double denom = static_cast<double>(outcomes.size());
    return {syntax_successes / denom, func_successes / denom};
}

EvalReport build_report(std::vector<DesignOutcomes> outcomes, EvalReport::ConfigEcho config) {
    EvalReport report;
    report.designs = std::move(outcomes);
    report.config = config;
    for (int k = 1; k <= config.attempts; ++k) {
        auto [syn, fun] = pass_at_k(report.designs, k);
        report.aggregates.push_back({k, syn, fun});
    }
    return report;
}

std::string emit_report_json(const EvalReport& report) {
    json designs = json::array();
    for (const auto& d : report.designs) {
        json attempts = json::array();
        for (const auto& a : d.attempts)
            attempts.push_back({{"syntax_pass", a.syntax_pass},
                                {"func_pass", a.func_pass},
                                {"error_note", a.error_note}});
        designs.push_back({{"design", d.design}, {"attempts", attempts}});
    }
    json aggregates = json::array();
    for (const auto& a : report.aggregates)
        aggregates.push_back(
            {{"k", a.k}, {"syntax_rate", a.syntax_rate}, {"func_rate", a.func_rate}});
    json j{
        {"designs", designs},
        {"config",
         {{"mode", report.config.mode},
          {"k", report.config.k},
          {"n", report.config.n},
          {"temp_gen", report.config.temp_gen},
          {"temp_selfverify", report.config.temp_selfverify},
          {"attempts", report.config.attempts}}},
        {"aggregates", aggregates},
    };
    return j.dump(2) + "\n";
}

EvalReport parse_report_json(const std::string& text) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw Error("unparseable eval report");
    try {
        EvalReport report;
        for (const auto& d : j.at("designs")) {
            DesignOutcomes outcomes;
            outcomes.design = d.at("design").get<std::string>();
            for (const auto& a : d.at("attempts")) {
                AttemptOutcome o;
                o.syntax_pass = a.at("syntax_pass").get<bool>();
                o.func_pass = a.at("func_pass").get<bool>();
                o.error_note = a.at("error_note").get<std::string>();
                outcomes.attempts.push_back(o);
            }
            report.designs.push_back(std::move(outcomes));
        }
        const auto& c = j.at("config");
        report.config.mode = c.at("mode").get<std::string>();
        report.config.k = c.at("k").get<int>();
        report.config.n = c.at("n").get<int>();
        report.config.temp_gen = c.at("temp_gen").get<double>();
        report.config.temp_selfverify = c.at("temp_selfverify").get<double>();
        report.config.attempts = c.at("attempts").get<int>();
        for (const auto& a : j.at("aggregates"))
            report.aggregates.push_back({a.at("k").get<int>(),
                                         a.at("syntax_rate").get<double>(),
                                         a.at("func_rate").get<double>()});
        return report;
    } catch (const json::exception& e) {
        throw Error(std::string("malformed eval report: ") + e.what());
    }
}

namespace {

int percent(double rate) { return static_cast<int>(std::llround(rate * 100.0)); }

std::pair<bool, bool> best_of_attempts(const DesignOutcomes& d, int k) {
    bool syn = false, fun = false;
    for (int i = 0; i < k && i < static_cast<int>(d.attempts.size()); ++i) {
        syn = syn || d.attempts[static_cast<size_t>(i)].syntax_pass;
        fun = fun || d.attempts[static_cast<size_t>(i)].func_pass;
    }
    return {syn, fun};
}

} // namespace

std::string emit_report_markdown(const EvalReport& report) {
    int k = report.config.attempts;
    std::string out;
    out += "| Design | Syn. | Fun. |\n";
    out += "|---|---|---|\n";
    for (const auto& d : report.designs) {
        auto [syn, fun] = best_of_attempts(d, k);
        out += "| " + d.design + " | " + (syn ? "✓" : "✗") + " | " +
               (fun ? "✓" : "✗") + " |\n";
    }
    auto [syn_rate, fun_rate] = pass_at_k(report.designs, k);
    out += "| **Syntax Success** | " + std::to_string(percent(syn_rate)) + "% | |\n";
    out += "| **Functionality Success** | " + std::to_string(percent(fun_rate)) + "% | |\n";
    return out;
}

std::string emit_report_csv(const EvalReport& report) {
    int k = report.config.attempts;
    std::string out = "design,syntax_pass,func_pass\n";
    for (const auto& d : report.designs) {
        auto [syn, fun] = best_of_attempts(d, k);
        out += d.design + "," + (syn ? "1" : "0") + "," + (fun ? "1" : "0") + "\n";
    }
    return out;
}

} // namespace hdlcore
