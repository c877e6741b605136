#include "hdlcore/selfverify.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <algorithm>
#include <map>

namespace hdlcore {

namespace {

std::string chat_phase(const PromptCatalog& catalog, const std::string& template_id,
                       const std::map<std::string, std::string>& bindings,
                       ModelGateway& gateway, const SelfVerifyConfig& cfg,
                       const std::string& phase, PhaseLog* log,
                       const std::string& extra_user = "") {
    auto rendered = catalog.render(template_id, bindings);
    std::string user = rendered.user_text + extra_user;

    ChatRequest req;
    if (!rendered.system_text.empty())
        req.messages.push_back({"system", rendered.system_text});
    req.messages.push_back({"user", user});
    req.temperature = cfg.temperature;
    req.max_tokens = cfg.max_tokens;

    std::string reply = gateway.chat(req);
    if (log) log->push_back({phase, rendered.system_text, user, reply});
    return reply;
}

constexpr const char* kReaskNote =
    "\n\nYour previous reply did not contain a usable code block. "
    "Emit a fenced code block containing one complete Verilog module.";

} // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "PASS";
        case Verdict::Fail: return "FAIL";
        case Verdict::Missing: return "MISSING";
    }
    return "MISSING";
}

SimulationTranscript parse_transcript(const std::string& raw) {
    SimulationTranscript t;
    t.raw = raw;
    bool verdict_seen = false;
    for (const auto& line : split_lines(raw)) {
        std::string s = trim(line);
        if (s.starts_with("[STEP]") || s.starts_with("[CHECK]")) {
            t.steps.push_back(line);
        } else if (s.starts_with("[MISMATCH]")) {
            t.mismatches.push_back(line);
        } else if (s.starts_with("[RESULT]") && !verdict_seen) {
            std::string token = trim(s.substr(8));
            if (token.starts_with("PASS")) {
                t.verdict = Verdict::Pass;
                verdict_seen = true;
            } else if (token.starts_with("FAIL")) {
                t.verdict = Verdict::Fail;
                verdict_seen = true;
            }
        }
    }
    return t;
}

SimulationSummary summarize(const SimulationTranscript& transcript, int max_lines) {
    if (max_lines < 0) max_lines = 0;
    SimulationSummary s;
    s.verdict = transcript.verdict;
    size_t keep = std::min<size_t>(transcript.mismatches.size(), static_cast<size_t>(max_lines));
    s.mismatch_lines.assign(transcript.mismatches.begin(),
                            transcript.mismatches.begin() + keep);
    s.truncated = transcript.mismatches.size() > keep;
    return s;
}

std::string summary_text(const SimulationSummary& summary) {
    std::string out;
    if (summary.verdict != Verdict::Missing)
        out += "[RESULT] " + verdict_name(summary.verdict) + "\n";
    for (const auto& line : summary.mismatch_lines) {
        out += line;
        out += '\n';
    }
    if (summary.truncated) out += "(further mismatches truncated)\n";
    if (out.empty()) out = "(no verdict line and no mismatches reported)\n";
    return out;
}

std::string gen_testbench(const TaskDescription& task, const std::string& initial_code,
                          const PromptCatalog& catalog, ModelGateway& gateway,
                          const SelfVerifyConfig& cfg, PhaseLog* log) {
    if (initial_code.empty()) throw Error("testbench generation requires initial code");
    std::map<std::string, std::string> bindings = {{"task", task.raw_text},
                                                   {"code", initial_code}};

    std::string reply = chat_phase(catalog, "testbench", bindings, gateway, cfg,
                                   "testbench", log);
    auto block = extract_code_block(reply);
    if (block && block->find("module") != std::string::npos) return *block;

    reply = chat_phase(catalog, "testbench", bindings, gateway, cfg, "testbench_retry",
                       log, kReaskNote);
    block = extract_code_block(reply);
    if (block && block->find("module") != std::string::npos) return *block;
    throw GatewayError("testbench generation produced no usable code block after re-ask");
}

SimulationTranscript self_simulate(const TaskDescription& task, const std::string& initial_code,
                                   const std::string& testbench, const PromptCatalog& catalog,
                                   ModelGateway& gateway, const SelfVerifyConfig& cfg,
                                   PhaseLog* log) {
    if (initial_code.empty() || testbench.empty())
        throw Error("self-simulation requires code and testbench");
    std::string reply = chat_phase(catalog, "selfsim",
                                   {{"task", task.raw_text},
                                    {"code", initial_code},
                                    {"testbench", testbench}},
                                   gateway, cfg, "selfsim", log);
    return parse_transcript(reply);
}

RefineResult refine(const TaskDescription& task, const std::string& initial_code,
                    const SimulationSummary& summary, const PromptCatalog& catalog,
                    ModelGateway& gateway, const SelfVerifyConfig& cfg, PhaseLog* log) {
    if (initial_code.empty()) throw Error("refinement requires initial code");
    std::map<std::string, std::string> bindings = {{"task", task.raw_text},
                                                   {"code", initial_code},
                                                   {"summary", summary_text(summary)}};

    std::string reply = chat_phase(catalog, "refine", bindings, gateway, cfg, "refine", log);
    auto block = extract_code_block(reply);
    if (block) return {*block, false};

    reply = chat_phase(catalog, "refine", bindings, gateway, cfg, "refine_retry", log,
                       kReaskNote);
    block = extract_code_block(reply);
    if (block) return {*block, false};
    return {initial_code, true};
}

SelfVerifyOutcome run_self_verification(const TaskDescription& task,
                                        const std::string& initial_code,
                                        const PromptCatalog& catalog, ModelGateway& gateway,
                                        const SelfVerifyConfig& cfg, PhaseLog* log) {
    SelfVerifyOutcome out;
    out.testbench = gen_testbench(task, initial_code, catalog, gateway, cfg, log);
    out.transcript = self_simulate(task, initial_code, out.testbench, catalog, gateway,
                                   cfg, log);
    out.summary = summarize(out.transcript, cfg.summary_max_lines);
    auto refined = refine(task, initial_code, out.summary, catalog, gateway, cfg, log);
    out.refined_code = refined.code;
    out.refinement_fallback = refined.fallback;
    return out;
}

} // namespace hdlcore
