#include "hdlcore/pipeline.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <atomic>
#include <filesystem>
#include <thread>

namespace hdlcore {

using nlohmann::json;

PipelineMode parse_mode(const std::string& name) {
    if (name == "base") return PipelineMode::Base;
    if (name == "cot") return PipelineMode::Cot;
    if (name == "c_cot") return PipelineMode::CCot;
    if (name == "c_cot_rag") return PipelineMode::CCotRag;
    if (name == "full") return PipelineMode::Full;
    throw Error("unknown pipeline mode: " + name +
                " (expected base|cot|c_cot|c_cot_rag|full)");
}

std::string mode_name(PipelineMode m) {
    switch (m) {
        case PipelineMode::Base: return "base";
        case PipelineMode::Cot: return "cot";
        case PipelineMode::CCot: return "c_cot";
        case PipelineMode::CCotRag: return "c_cot_rag";
        case PipelineMode::Full: return "full";
    }
    return "full";
}

double PipelineConfig::resolved_temp_gen() const {
    if (temp_gen) return *temp_gen;
    return attempts > 1 ? 0.7 : 0.0;
}

void PipelineConfig::validate() const {
    if (attempts < 1) throw Error("attempts must be >= 1");
    if (parallel_tasks < 1) throw Error("parallel_tasks must be >= 1");
    retrieval.validate();
}

json GenerationTrace::to_json() const {
    json exs = json::array();
    for (const auto& e : exemplars)
        exs.push_back({{"record_id", e.record_id},
                       {"rerank_score", e.rerank_score},
                       {"stage1_max", e.stage1_max}});
    json log = json::array();
    for (const auto& p : phase_log)
        log.push_back({{"phase", p.phase},
                       {"system", p.system_prompt},
                       {"user", p.user_prompt},
                       {"reply", p.reply}});
    return json{
        {"task", task_name},
        {"attempt", attempt},
        {"mode", mode},
        {"k", k},
        {"n", n},
        {"temp_gen", temp_gen},
        {"temp_selfverify", temp_selfverify},
        {"status", status},
        {"error", error},
        {"task_label", task_label},
        {"matched_keywords", matched_keywords},
        {"combinational_override", combinational_override},
        {"complexity_parse_failed", complexity_parse_failed},
        {"classification_cached", classification_cached},
        {"rerank_used", rerank_used},
        {"exemplars", exs},
        {"generation_template", generation_template},
        {"initial_code", initial_code},
        {"testbench", testbench},
        {"transcript_verdict", transcript_verdict},
        {"summary_mismatches", summary_mismatches},
        {"summary_truncated", summary_truncated},
        {"refined_code", refined_code},
        {"refinement_fallback", refinement_fallback},
        {"final_code", final_code},
        {"phases", phases},
        {"phase_log", log},
        {"model_calls", model_calls},
    };
}

TaskRunner::TaskRunner(const PipelineConfig& config, const PromptCatalog& catalog,
                       ModelGateway& gateway, const LoadedIndex* index)
    : config_(config), catalog_(catalog), gateway_(gateway), index_(index) {
    config_.validate();
    if (config_.mode >= PipelineMode::CCotRag && !index_)
        throw Error("mode " + mode_name(config_.mode) + " requires a loaded index");
}

GenerationTrace TaskRunner::run_attempt(const TaskDescription& task, int attempt) {
    GenerationTrace trace;
    trace.task_name = task.name;
    trace.attempt = attempt;
    trace.mode = mode_name(config_.mode);
    trace.k = config_.retrieval.k;
    trace.n = config_.retrieval.n;
    trace.temp_gen = config_.resolved_temp_gen();
    trace.temp_selfverify = config_.temp_selfverify;
    trace.status = "ok";

    try {
        std::optional<TaskClass> cls;
        if (config_.mode >= PipelineMode::CCot) {
            trace.phases.push_back("classify");
            if (!cached_class_) {
                cached_class_ =
                    classify(task, catalog_, gateway_, config_.classifier, &trace.phase_log);
            } else {
                trace.classification_cached = true;
            }
            cls = cached_class_->cls;
            trace.task_label = cls->label();
            trace.matched_keywords = cached_class_->matched_keywords;
            trace.combinational_override = cached_class_->combinational_override;
            trace.complexity_parse_failed = cached_class_->complexity_parse_failed;
        }

        std::string exemplar_block;
        if (config_.mode >= PipelineMode::CCotRag) {
            trace.phases.push_back("retrieve");
            if (!cached_retrieval_)
                cached_retrieval_ = retrieve(*index_, task, config_.retrieval, gateway_);
            trace.rerank_used = cached_retrieval_->rerank_used;
            for (const auto& e : cached_retrieval_->exemplars)
                trace.exemplars.push_back(
                    {e.record_id, e.rerank_score, e.stage1_scores.max_score()});
            exemplar_block =
                format_exemplars(cached_retrieval_->exemplars, config_.exemplar_char_budget);
        }

        // generation
        trace.phases.push_back("generate");
        ChatRequest req;
        req.temperature = config_.resolved_temp_gen();
        req.max_tokens = config_.max_tokens;
        std::string system_text, user_text;
        if (config_.mode == PipelineMode::Base) {
            trace.generation_template = "direct";
            user_text = task.raw_text;
        } else {
            std::string id = config_.mode == PipelineMode::Cot ? "cot_gen"
                                                               : gen_template_for(*cls);
            trace.generation_template = id;
            std::map<std::string, std::string> bindings = {{"task", task.raw_text}};
            if (id != "cot_gen") {
                bindings["exemplars"] = exemplar_block;
                bindings["module_header"] = task.components().module_header;
            }
            auto rendered = catalog_.render(id, bindings);
            system_text = rendered.system_text;
            user_text = rendered.user_text;
        }
        if (!system_text.empty()) req.messages.push_back({"system", system_text});
        req.messages.push_back({"user", user_text});

        std::string reply = gateway_.chat(req);
        trace.phase_log.push_back({"generate", system_text, user_text, reply});

        auto code = extract_code_block(reply);
        if (!code) throw GatewayError("generation reply contained no code block");
        trace.initial_code = *code;
        trace.final_code = *code;

        if (config_.mode == PipelineMode::Full) {
            SelfVerifyConfig sv;
            sv.temperature = config_.temp_selfverify;
            sv.max_tokens = config_.max_tokens;
            sv.summary_max_lines = config_.summary_max_lines;

            trace.phases.push_back("testbench");
            trace.testbench =
                gen_testbench(task, trace.initial_code, catalog_, gateway_, sv,
                              &trace.phase_log);
            trace.phases.push_back("selfsim");
            auto transcript = self_simulate(task, trace.initial_code, trace.testbench,
                                            catalog_, gateway_, sv, &trace.phase_log);
            auto summary = summarize(transcript, sv.summary_max_lines);
            trace.phases.push_back("refine");
            auto refined = refine(task, trace.initial_code, summary, catalog_, gateway_,
                                  sv, &trace.phase_log);

            trace.transcript_verdict = verdict_name(transcript.verdict);
            trace.summary_mismatches = summary.mismatch_lines;
            trace.summary_truncated = summary.truncated;
            trace.refined_code = refined.code;
            trace.refinement_fallback = refined.fallback;
            trace.final_code = refined.code;
        }
    } catch (const Error& e) {
        trace.status = "error";
        trace.error = e.what();
    }
    // every phase_log entry is one chat exchange
    trace.model_calls = static_cast<int>(trace.phase_log.size());
    return trace;
}

std::vector<GenerationTrace> TaskRunner::run_task(const TaskDescription& task) {
    std::vector<GenerationTrace> traces;
    traces.reserve(static_cast<size_t>(config_.attempts));
    for (int i = 0; i < config_.attempts; ++i) traces.push_back(run_attempt(task, i));
    return traces;
}

std::vector<TaskResult> run_suite(const std::vector<TaskDescription>& tasks,
                                  const PipelineConfig& config, const PromptCatalog& catalog,
                                  ModelGateway& gateway, const LoadedIndex* index) {
    if (tasks.empty()) throw Error("no tasks");
    config.validate();

    std::vector<TaskResult> results(tasks.size());
    std::atomic<size_t> next{0};

    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            TaskResult& r = results[i];
            r.task_name = tasks[i].name;
            try {
                TaskRunner runner(config, catalog, gateway, index);
                r.attempts = runner.run_task(tasks[i]);
                r.failed = !r.attempts.empty();
                for (const auto& t : r.attempts)
                    if (t.status == "ok") r.failed = false;
                if (r.failed && !r.attempts.empty()) r.error = r.attempts.front().error;
            } catch (const Error& e) {
                r.failed = true;
                r.error = e.what();
            }
        }
    };

    size_t threads = std::min<size_t>(static_cast<size_t>(config.parallel_tasks), tasks.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    return results;
}

void write_traces(const std::vector<TaskResult>& results, const std::string& out_dir) {
    for (const auto& r : results) {
        std::filesystem::path dir = std::filesystem::path(out_dir) / r.task_name;
        std::filesystem::create_directories(dir);
        for (const auto& t : r.attempts) {
            auto path = dir / ("attempt_" + std::to_string(t.attempt) + ".json");
            write_file(path, t.to_json().dump(2) + "\n");
        }
    }
}

} // namespace hdlcore
