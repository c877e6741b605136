#pragma once

#include "hdlcore/classify.hpp"
#include "hdlcore/gateway.hpp"
#include "hdlcore/prompts.hpp"
#include "hdlcore/task.hpp"

#include <string>
#include <vector>

namespace hdlcore {

enum class Verdict { Pass, Fail, Missing };

std::string verdict_name(Verdict v);

// Transcript line grammar emitted by the self-simulation prompt:
//   [STEP] ...      progress lines
//   [CHECK] ...     check evaluations
//   [MISMATCH] ...  failing checks
//   [RESULT] PASS|FAIL  exactly one verdict line
struct SimulationTranscript {
    std::string raw;
    std::vector<std::string> steps;      // [STEP] and [CHECK] lines, in order
    std::vector<std::string> mismatches; // [MISMATCH] lines, in order
    Verdict verdict = Verdict::Missing;
};

SimulationTranscript parse_transcript(const std::string& raw);

struct SimulationSummary {
    Verdict verdict = Verdict::Missing;
    std::vector<std::string> mismatch_lines; // first max_lines mismatches
    bool truncated = false;
};

// Pure text processing, no model call.
SimulationSummary summarize(const SimulationTranscript& transcript, int max_lines = 20);

// Summary rendered back in transcript grammar, used as the {summary} binding.
std::string summary_text(const SimulationSummary& summary);

struct SelfVerifyConfig {
    double temperature = 0.0;
    int max_tokens = 4096;
    int summary_max_lines = 20;
};

std::string gen_testbench(const TaskDescription& task, const std::string& initial_code,
                          const PromptCatalog& catalog, ModelGateway& gateway,
                          const SelfVerifyConfig& cfg, PhaseLog* log = nullptr);

SimulationTranscript self_simulate(const TaskDescription& task, const std::string& initial_code,
                                   const std::string& testbench, const PromptCatalog& catalog,
                                   ModelGateway& gateway, const SelfVerifyConfig& cfg,
                                   PhaseLog* log = nullptr);

struct RefineResult {
    std::string code;
    bool fallback = false; // true when the model never produced a code block
};

RefineResult refine(const TaskDescription& task, const std::string& initial_code,
                    const SimulationSummary& summary, const PromptCatalog& catalog,
                    ModelGateway& gateway, const SelfVerifyConfig& cfg,
                    PhaseLog* log = nullptr);

struct SelfVerifyOutcome {
    std::string testbench;
    SimulationTranscript transcript;
    SimulationSummary summary;
    std::string refined_code;
    bool refinement_fallback = false;
};

// Full loop: testbench -> self-simulation -> summary -> refinement. Three model
// calls on the happy path plus at most one re-ask each for testbench and refine.
SelfVerifyOutcome run_self_verification(const TaskDescription& task,
                                        const std::string& initial_code,
                                        const PromptCatalog& catalog, ModelGateway& gateway,
                                        const SelfVerifyConfig& cfg, PhaseLog* log = nullptr);

} // namespace hdlcore
