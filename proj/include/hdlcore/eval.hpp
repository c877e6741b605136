#pragma once

#include <json.hpp>

#include <string>
#include <utility>
#include <vector>

namespace hdlcore {

struct BenchDesign {
    std::string name;
    std::string description; // design_description.txt
    std::string testbench;   // testbench.v
    std::string reference;   // designer_RTL.v, may be empty
};

// Loads <dir>/<design>/{design_description.txt, testbench.v[, designer_RTL.v]}.
// Designs sorted by name; ones missing a description or testbench are skipped
// with a warning. An empty result is fatal.
std::vector<BenchDesign> load_bench(const std::string& dir,
                                    std::vector<std::string>* warnings = nullptr);

struct CheckConfig {
    std::string syntax_cmd;  // placeholders {code_file} {tb_file}
    std::string func_cmd;
    int timeout_ms = 60000;
    std::string workdir_root; // empty: system temp dir
};

struct AttemptOutcome {
    bool syntax_pass = false;
    bool func_pass = false;   // evaluated only when syntax_pass
    std::string error_note;

    bool operator==(const AttemptOutcome&) const = default;
};

// Writes code and testbench to a private workspace, runs the syntax command, and
// runs the functional command only when syntax passed. Command failures and
// timeouts become failed outcomes with a note, never exceptions.
AttemptOutcome check_attempt(const BenchDesign& design, const std::string& code,
                             const CheckConfig& cfg);

struct DesignOutcomes {
    std::string design;
    std::vector<AttemptOutcome> attempts;

    bool operator==(const DesignOutcomes&) const = default;
};

// Empirical best-of-k: a design succeeds when any of its first k attempts passes.
// Returns (syntax_rate, func_rate). Requires k >= 1 and >= k attempts per design;
// asserts func_pass => syntax_pass on every outcome.
std::pair<double, double> pass_at_k(const std::vector<DesignOutcomes>& outcomes, int k);

struct EvalReport {
    struct ConfigEcho {
        std::string mode;
        int k = 0, n = 0;
        double temp_gen = 0.0, temp_selfverify = 0.0;
        int attempts = 1;

        bool operator==(const ConfigEcho&) const = default;
    };
    struct KRates {
        int k = 1;
        double syntax_rate = 0.0;
        double func_rate = 0.0;

        bool operator==(const KRates&) const = default;
    };

    std::vector<DesignOutcomes> designs;
    ConfigEcho config;
    std::vector<KRates> aggregates; // k = 1 .. attempts

    bool operator==(const EvalReport&) const = default;
};

EvalReport build_report(std::vector<DesignOutcomes> outcomes, EvalReport::ConfigEcho config);

std::string emit_report_json(const EvalReport& report);
EvalReport parse_report_json(const std::string& text);
std::string emit_report_markdown(const EvalReport& report); // best-of-attempts grid
std::string emit_report_csv(const EvalReport& report);

} // namespace hdlcore
