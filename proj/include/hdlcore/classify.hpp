#pragma once

#include "hdlcore/gateway.hpp"
#include "hdlcore/prompts.hpp"
#include "hdlcore/task.hpp"

#include <string>
#include <vector>

namespace hdlcore {

struct ClassifierConfig {
    std::vector<std::string> temporal_keywords = default_temporal_keywords();
    Complexity complexity_default = Complexity::Complex; // on unparseable replies
    int max_tokens = 256;
};

// One prompt/reply exchange captured for the trace.
struct PhaseRecord {
    std::string phase;
    std::string system_prompt;
    std::string user_prompt;
    std::string reply;
};

using PhaseLog = std::vector<PhaseRecord>;

// Sequential iff a temporal keyword matches; the word "combinational" anywhere in
// the description overrides to Combinational.
LogicType classify_logic(const TaskDescription& task, const ClassifierConfig& cfg);

struct ComplexityResult {
    Complexity value = Complexity::Complex;
    bool parse_failed = false;
    std::string reply;
};

// Asks the model (temperature 0) and takes the first case-insensitive occurrence
// of SIMPLE or COMPLEX in the reply; unparseable replies fall back to the
// configured default and are flagged.
ComplexityResult assess_complexity(const TaskDescription& task, const PromptCatalog& catalog,
                                   ModelGateway& gateway, const ClassifierConfig& cfg,
                                   PhaseLog* log = nullptr);

struct ClassifyResult {
    TaskClass cls;
    std::vector<std::string> matched_keywords;
    bool combinational_override = false;
    bool complexity_parse_failed = false;
};

ClassifyResult classify(const TaskDescription& task, const PromptCatalog& catalog,
                        ModelGateway& gateway, const ClassifierConfig& cfg,
                        PhaseLog* log = nullptr);

} // namespace hdlcore
