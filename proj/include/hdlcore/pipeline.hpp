#pragma once

#include "hdlcore/classify.hpp"
#include "hdlcore/gateway.hpp"
#include "hdlcore/prompts.hpp"
#include "hdlcore/retrieve.hpp"
#include "hdlcore/selfverify.hpp"
#include "hdlcore/task.hpp"
#include "hdlcore/vindex.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace hdlcore {

// Ablation ladder. Each mode runs the previous mode's machinery plus one feature:
//   base       task text sent directly
//   cot        generic chain-of-thought template
//   c_cot      classification + category template
//   c_cot_rag  + retrieved exemplars
//   full       + self-verification loop
enum class PipelineMode { Base, Cot, CCot, CCotRag, Full };

PipelineMode parse_mode(const std::string& name);
std::string mode_name(PipelineMode m);

struct PipelineConfig {
    PipelineMode mode = PipelineMode::Full;
    RetrievalParams retrieval{};
    std::optional<double> temp_gen; // unset: 0.0 for attempts==1, 0.7 otherwise
    double temp_selfverify = 0.0;
    int attempts = 1;
    int parallel_tasks = 2;
    int max_tokens = 4096;
    std::size_t exemplar_char_budget = 8000;
    int summary_max_lines = 20;
    ClassifierConfig classifier{};

    double resolved_temp_gen() const;
    void validate() const;
};

struct ExemplarRef {
    std::int64_t record_id = 0;
    double rerank_score = 0.0;
    double stage1_max = 0.0;
};

// Everything observed during one generation attempt. Serialized per attempt as
// attempt_<i>.json; content is a pure function of inputs under the mock gateway.
struct GenerationTrace {
    std::string task_name;
    int attempt = 0;
    std::string mode;
    int k = 0, n = 0;
    double temp_gen = 0.0, temp_selfverify = 0.0;

    std::string status; // "ok" | "error"
    std::string error;

    std::string task_label; // empty below c_cot
    std::vector<std::string> matched_keywords;
    bool combinational_override = false;
    bool complexity_parse_failed = false;
    bool classification_cached = false;

    bool rerank_used = false;
    std::vector<ExemplarRef> exemplars;

    std::string generation_template;
    std::string initial_code;
    std::string testbench;
    std::string transcript_verdict; // PASS | FAIL | MISSING, empty below full
    std::vector<std::string> summary_mismatches;
    bool summary_truncated = false;
    std::string refined_code;
    bool refinement_fallback = false;
    std::string final_code;

    std::vector<std::string> phases; // executed phase names, in order
    PhaseLog phase_log;              // verbatim prompts and replies
    int model_calls = 0;             // chat calls made during this attempt

    nlohmann::json to_json() const;
};

class TaskRunner {
public:
    TaskRunner(const PipelineConfig& config, const PromptCatalog& catalog,
               ModelGateway& gateway, const LoadedIndex* index = nullptr);

    // One trace per attempt. A typed error inside an attempt marks that attempt
    // failed-with-error and the remaining attempts still run.
    std::vector<GenerationTrace> run_task(const TaskDescription& task);

private:
    GenerationTrace run_attempt(const TaskDescription& task, int attempt);

    const PipelineConfig& config_;
    const PromptCatalog& catalog_;
    ModelGateway& gateway_;
    const LoadedIndex* index_;

    std::optional<ClassifyResult> cached_class_;
    std::optional<RetrievalResult> cached_retrieval_;
};

struct TaskResult {
    std::string task_name;
    std::vector<GenerationTrace> attempts;
    bool failed = false; // every attempt errored (or the task never ran)
    std::string error;   // representative message when failed
};

// Runs tasks with bounded parallelism; output order equals input order.
std::vector<TaskResult> run_suite(const std::vector<TaskDescription>& tasks,
                                  const PipelineConfig& config, const PromptCatalog& catalog,
                                  ModelGateway& gateway, const LoadedIndex* index = nullptr);

// Writes <out_dir>/<task>/attempt_<i>.json for every attempt.
void write_traces(const std::vector<TaskResult>& results, const std::string& out_dir);

} // namespace hdlcore
