#include "hdlcore/classify.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/log.hpp"
#include "hdlcore/util.hpp"

namespace hdlcore {

LogicType classify_logic(const TaskDescription& task, const ClassifierConfig& cfg) {
    if (contains_word(task.raw_text, "combinational")) return LogicType::Combinational;
    return detect_temporal(task.raw_text, cfg.temporal_keywords) ? LogicType::Sequential
                                                                 : LogicType::Combinational;
}

ComplexityResult assess_complexity(const TaskDescription& task, const PromptCatalog& catalog,
                                   ModelGateway& gateway, const ClassifierConfig& cfg,
                                   PhaseLog* log) {
    auto rendered = catalog.render("complexity", {{"task", task.raw_text}});

    ChatRequest req;
    if (!rendered.system_text.empty())
        req.messages.push_back({"system", rendered.system_text});
    req.messages.push_back({"user", rendered.user_text});
    req.temperature = 0.0;
    req.max_tokens = cfg.max_tokens;

    ComplexityResult result;
    result.reply = gateway.chat(req);
    if (log)
        log->push_back({"classify", rendered.system_text, rendered.user_text, result.reply});

    std::string lower = to_lower(result.reply);
    size_t simple_at = lower.find("simple");
    size_t complex_at = lower.find("complex");
    if (simple_at == std::string::npos && complex_at == std::string::npos) {
        result.parse_failed = true;
        result.value = cfg.complexity_default;
        hdlcore::log(LogLevel::Warn, "complexity reply for task '" + task.name +
                                         "' has no SIMPLE/COMPLEX, using default " +
                                         complexity_name(result.value));
    } else {
        result.value = simple_at < complex_at ? Complexity::Simple : Complexity::Complex;
    }
    return result;
}

ClassifyResult classify(const TaskDescription& task, const PromptCatalog& catalog,
                        ModelGateway& gateway, const ClassifierConfig& cfg, PhaseLog* log) {
    ClassifyResult result;
    result.combinational_override = contains_word(task.raw_text, "combinational");
    result.matched_keywords = matched_temporal_keywords(task.raw_text, cfg.temporal_keywords);
    result.cls.logic = classify_logic(task, cfg);

    auto complexity = assess_complexity(task, catalog, gateway, cfg, log);
    result.cls.complexity = complexity.value;
    result.complexity_parse_failed = complexity.parse_failed;
    return result;
}

} // namespace hdlcore
