// hdlcore - training-free HDL code generation pipeline:
// corpus ingestion, two-stage retrieval, classified CoT prompting with
// self-verification, and pass@k benchmark evaluation.

#include "hdlcore/classify.hpp"
#include "hdlcore/config.hpp"
#include "hdlcore/corpus.hpp"
#include "hdlcore/errors.hpp"
#include "hdlcore/eval.hpp"
#include "hdlcore/gateway.hpp"
#include "hdlcore/log.hpp"
#include "hdlcore/pipeline.hpp"
#include "hdlcore/prompts.hpp"
#include "hdlcore/retrieve.hpp"
#include "hdlcore/util.hpp"
#include "hdlcore/vindex.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <thread>

using namespace hdlcore;
using nlohmann::json;

namespace {

constexpr const char* kVersion = "hdlcore 0.1.0";

TaskDescription load_task(const std::string& path) {
    TaskDescription t;
    t.raw_text = read_file(path);
    t.name = std::filesystem::path(path).stem().string();
    if (trim(t.raw_text).empty()) throw Error("task file is empty: " + path);
    return t;
}

PromptCatalog load_catalog(const GlobalConfig& cfg) {
    if (cfg.template_dir.empty()) return PromptCatalog::builtin();
    return PromptCatalog::load_dir(cfg.template_dir);
}

ClassifierConfig classifier_config(const GlobalConfig& cfg) {
    ClassifierConfig c;
    c.temporal_keywords = cfg.temporal_keywords;
    c.complexity_default = cfg.complexity_default;
    return c;
}

PipelineConfig pipeline_config(const GlobalConfig& cfg, const std::string& mode,
                               int attempts) {
    PipelineConfig p;
    p.mode = parse_mode(mode);
    p.retrieval = {cfg.retrieval_k, cfg.retrieval_n};
    p.temp_gen = cfg.temp_gen;
    p.temp_selfverify = cfg.temp_selfverify;
    p.attempts = attempts;
    p.parallel_tasks = cfg.parallel_tasks;
    p.max_tokens = cfg.max_tokens;
    p.exemplar_char_budget = cfg.exemplar_char_budget;
    p.summary_max_lines = cfg.summary_max_lines;
    p.classifier = classifier_config(cfg);
    return p;
}

std::string preview(const std::string& text, size_t limit = 80) {
    std::string flat = collapse_whitespace(text);
    if (flat.size() <= limit) return flat;
    return flat.substr(0, limit) + "...";
}

// ---------------------------------------------------------------------------
// subcommand bodies
// ---------------------------------------------------------------------------

int cmd_ingest(const std::vector<std::string>& inputs, const std::string& out,
               const IngestFilters& filters) {
    IngestStats stats;
    auto corpus = ingest(inputs, filters, &stats);
    save_corpus(corpus, out);
    std::cout << "ingested " << corpus.size() << " records -> " << out << "\n"
              << "skipped: " << stats.malformed << " malformed, " << stats.filtered
              << " filtered, " << stats.duplicates << " duplicates\n";
    return 0;
}

int cmd_index(const GlobalConfig& cfg, const std::string& corpus_path,
              const std::string& out_dir, int batch) {
    auto corpus = load_corpus(corpus_path);
    auto gateway = make_gateway(cfg, /*require_chat=*/false);
    auto index = build_index(corpus, *gateway, cfg.embed.model, batch);
    save_index(index, corpus, out_dir);
    std::cout << "indexed " << index.count << " records (dim " << index.dim << ") -> "
              << out_dir << "\n";
    return 0;
}

int cmd_retrieve(const GlobalConfig& cfg, const std::string& index_dir,
                 const std::string& task_path, bool as_json) {
    auto loaded = load_index(index_dir);
    auto task = load_task(task_path);
    auto gateway = make_gateway(cfg, /*require_chat=*/false);
    RetrievalParams params{cfg.retrieval_k, cfg.retrieval_n};
    auto result = retrieve(loaded, task, params, *gateway);

    if (as_json) {
        json exs = json::array();
        for (const auto& e : result.exemplars)
            exs.push_back({{"record_id", e.record_id},
                           {"rerank_score", e.rerank_score},
                           {"stage1", {{"hl", e.stage1_scores.s_hl},
                                       {"ll", e.stage1_scores.s_ll},
                                       {"mh", e.stage1_scores.s_mh}}},
                           {"instruction", e.instruction}});
        json j{{"task", task.name},
               {"k", params.k},
               {"n", params.n},
               {"rerank", result.rerank_used ? "enabled" : "disabled"},
               {"exemplars", exs}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "rerank: " << (result.rerank_used ? "enabled" : "disabled") << "\n";
    int rank = 1;
    for (const auto& e : result.exemplars) {
        std::cout << rank++ << ". record " << e.record_id << " (rerank " << e.rerank_score
                  << ", stage1 max " << e.stage1_scores.max_score() << ")\n"
                  << "   " << preview(e.instruction) << "\n";
    }
    return 0;
}

int cmd_classify(const GlobalConfig& cfg, const std::string& task_path, bool as_json) {
    auto task = load_task(task_path);
    auto catalog = load_catalog(cfg);
    auto gateway = make_gateway(cfg);
    auto result = classify(task, catalog, *gateway, classifier_config(cfg));

    if (as_json) {
        json j{{"task", task.name},
               {"logic", logic_name(result.cls.logic)},
               {"complexity", complexity_name(result.cls.complexity)},
               {"label", result.cls.label()},
               {"matched_keywords", result.matched_keywords},
               {"combinational_override", result.combinational_override},
               {"complexity_parse_failed", result.complexity_parse_failed}};
        std::cout << j.dump(2) << "\n";
        return 0;
    }

    std::cout << "task: " << task.name << "\n"
              << "logic: " << logic_name(result.cls.logic) << "\n"
              << "complexity: " << complexity_name(result.cls.complexity) << "\n"
              << "label: " << result.cls.label() << "\n";
    std::cout << "matched keywords:";
    for (const auto& kw : result.matched_keywords) std::cout << " " << kw;
    std::cout << "\n";
    if (result.combinational_override) std::cout << "combinational override: yes\n";
    if (result.complexity_parse_failed)
        std::cout << "warning: complexity reply unparseable, used default\n";
    return 0;
}

int cmd_generate(const GlobalConfig& cfg, const std::vector<std::string>& task_paths,
                 const std::string& mode, const std::string& index_dir, int attempts,
                 const std::string& out_dir) {
    std::vector<TaskDescription> tasks;
    for (const auto& p : task_paths) tasks.push_back(load_task(p));

    std::optional<LoadedIndex> loaded;
    if (!index_dir.empty()) loaded = load_index(index_dir);

    auto catalog = load_catalog(cfg);
    auto gateway = make_gateway(cfg);
    auto config = pipeline_config(cfg, mode, attempts);
    auto results = run_suite(tasks, config, catalog, *gateway,
                             loaded ? &*loaded : nullptr);
    write_traces(results, out_dir);

    int failures = 0;
    for (const auto& r : results) {
        int ok = 0;
        for (const auto& t : r.attempts) ok += t.status == "ok";
        std::cout << r.task_name << ": " << ok << "/" << r.attempts.size()
                  << " attempts ok\n";
        if (r.failed) {
            ++failures;
            std::cerr << r.task_name << " failed: " << r.error << "\n";
        }
    }
    std::cout << "traces -> " << out_dir << "\n";
    return failures == static_cast<int>(results.size()) ? 1 : 0;
}

int cmd_eval(const GlobalConfig& cfg, const std::string& bench_dir, const std::string& mode,
             const std::string& index_dir, int attempts, const std::string& syntax_cmd,
             const std::string& func_cmd, const std::string& report_path,
             const std::string& trace_dir) {
    std::vector<std::string> warnings;
    auto designs = load_bench(bench_dir, &warnings);
    for (const auto& w : warnings) std::cerr << "warning: " << w << "\n";

    std::vector<TaskDescription> tasks;
    for (const auto& d : designs) {
        TaskDescription t;
        t.name = d.name;
        t.raw_text = d.description;
        tasks.push_back(std::move(t));
    }

    std::optional<LoadedIndex> loaded;
    if (!index_dir.empty()) loaded = load_index(index_dir);
    auto catalog = load_catalog(cfg);
    auto gateway = make_gateway(cfg);
    auto config = pipeline_config(cfg, mode, attempts);
    auto results = run_suite(tasks, config, catalog, *gateway,
                             loaded ? &*loaded : nullptr);
    if (!trace_dir.empty()) write_traces(results, trace_dir);

    CheckConfig check;
    check.syntax_cmd = syntax_cmd;
    check.func_cmd = func_cmd;
    check.timeout_ms = cfg.check_timeout_ms;

    std::vector<DesignOutcomes> outcomes(designs.size());
    std::atomic<size_t> next{0};
    auto worker = [&] {
        for (;;) {
            size_t i = next.fetch_add(1);
            if (i >= designs.size()) return;
            DesignOutcomes& d = outcomes[i];
            d.design = designs[i].name;
            for (const auto& t : results[i].attempts) {
                if (t.status != "ok" || t.final_code.empty()) {
                    AttemptOutcome o;
                    o.error_note = t.error.empty() ? "no code generated" : t.error;
                    d.attempts.push_back(o);
                } else {
                    d.attempts.push_back(check_attempt(designs[i], t.final_code, check));
                }
            }
        }
    };
    size_t threads =
        std::min<size_t>(static_cast<size_t>(cfg.parallel_checks), designs.size());
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    EvalReport::ConfigEcho echo;
    echo.mode = mode_name(config.mode);
    echo.k = config.retrieval.k;
    echo.n = config.retrieval.n;
    echo.temp_gen = config.resolved_temp_gen();
    echo.temp_selfverify = config.temp_selfverify;
    echo.attempts = config.attempts;
    auto report = build_report(std::move(outcomes), echo);
    write_file(report_path, emit_report_json(report));

    const auto& final_rates = report.aggregates.back();
    std::cout << "designs: " << report.designs.size() << "\n"
              << "pass@" << final_rates.k << " syntax: "
              << static_cast<int>(std::llround(final_rates.syntax_rate * 100)) << "%\n"
              << "pass@" << final_rates.k << " functional: "
              << static_cast<int>(std::llround(final_rates.func_rate * 100)) << "%\n"
              << "report -> " << report_path << "\n";
    return 0;
}

int cmd_report(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
    auto report = parse_report_json(read_file(in_path));
    std::string text;
    if (format == "json") text = emit_report_json(report);
    else if (format == "markdown") text = emit_report_markdown(report);
    else if (format == "csv") text = emit_report_csv(report);
    else throw Error("unknown report format: " + format + " (expected json|markdown|csv)");

    if (out_path.empty()) std::cout << text;
    else {
        write_file(out_path, text);
        std::cout << "report -> " << out_path << "\n";
    }
    return 0;
}

int cmd_prompts_lint(const GlobalConfig& cfg) {
    auto catalog = load_catalog(cfg);
    auto problems = catalog.lint();
    if (problems.empty()) {
        std::cout << "templates OK ("
                  << (cfg.template_dir.empty() ? "builtin" : cfg.template_dir) << ")\n";
        return 0;
    }
    for (const auto& p : problems) std::cerr << "lint: " << p << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"training-free HDL code generation pipeline"};
    app.set_version_flag("--version", kVersion);
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (JSON)");

    // ingest
    auto* ingest_cmd = app.add_subcommand("ingest", "normalize instruction-code datasets");
    std::vector<std::string> ingest_inputs;
    std::string ingest_out;
    IngestFilters filters;
    bool no_dedup = false;
    ingest_cmd->add_option("--input", ingest_inputs, "input JSONL file(s)")
        ->required()
        ->expected(-1);
    ingest_cmd->add_option("--out", ingest_out, "output corpus path")->required();
    ingest_cmd->add_option("--min-instr", filters.min_instruction_len,
                           "minimum instruction length");
    ingest_cmd->add_option("--min-code", filters.min_code_len, "minimum code length");
    ingest_cmd->add_option("--max-instr", filters.max_instruction_len,
                           "maximum instruction length");
    ingest_cmd->add_option("--max-code", filters.max_code_len, "maximum code length");
    ingest_cmd->add_flag("--no-dedup", no_dedup, "keep exact duplicates");

    // index
    auto* index_cmd = app.add_subcommand("index", "build the three-component vector index");
    std::string index_corpus, index_out;
    int index_batch = 64;
    index_cmd->add_option("--corpus", index_corpus, "corpus JSONL")->required();
    index_cmd->add_option("--out", index_out, "index directory")->required();
    auto* opt_batch = index_cmd->add_option("--batch", index_batch, "embedding batch size");

    // retrieve
    auto* retrieve_cmd = app.add_subcommand("retrieve", "two-stage exemplar retrieval");
    std::string retrieve_index, retrieve_task;
    int flag_k = 0, flag_n = 0;
    bool retrieve_json = false;
    retrieve_cmd->add_option("--index", retrieve_index, "index directory")->required();
    retrieve_cmd->add_option("--task", retrieve_task, "task description file")->required();
    auto* opt_k = retrieve_cmd->add_option("--k", flag_k, "stage-1 size per component");
    auto* opt_n = retrieve_cmd->add_option("--n", flag_n, "final exemplar count");
    retrieve_cmd->add_flag("--json", retrieve_json, "JSON output");

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "task classification");
    std::string classify_task;
    bool classify_json = false;
    classify_cmd->add_option("--task", classify_task, "task description file")->required();
    classify_cmd->add_flag("--json", classify_json, "JSON output");

    // generate
    auto* generate_cmd = app.add_subcommand("generate", "run the generation pipeline");
    std::vector<std::string> generate_tasks;
    std::string generate_mode = "full", generate_index, generate_out;
    int generate_attempts = 1;
    generate_cmd->add_option("--task", generate_tasks, "task description file(s)")
        ->required()
        ->expected(-1);
    generate_cmd->add_option("--mode", generate_mode, "base|cot|c_cot|c_cot_rag|full");
    generate_cmd->add_option("--index", generate_index, "index directory");
    generate_cmd->add_option("--attempts", generate_attempts, "attempts per task");
    generate_cmd->add_option("--out", generate_out, "trace output directory")->required();

    // eval
    auto* eval_cmd = app.add_subcommand("eval", "benchmark evaluation with pass@k");
    std::string eval_bench, eval_mode = "full", eval_index, eval_syntax, eval_func;
    std::string eval_report, eval_traces;
    int eval_attempts = 1;
    eval_cmd->add_option("--bench", eval_bench, "benchmark directory")->required();
    eval_cmd->add_option("--mode", eval_mode, "base|cot|c_cot|c_cot_rag|full");
    eval_cmd->add_option("--index", eval_index, "index directory");
    eval_cmd->add_option("--attempts", eval_attempts, "attempts per design");
    eval_cmd->add_option("--syntax-cmd", eval_syntax,
                         "syntax check command, placeholders {code_file} {tb_file}")
        ->required();
    eval_cmd->add_option("--func-cmd", eval_func, "functional check command");
    eval_cmd->add_option("--report", eval_report, "report JSON output path")->required();
    eval_cmd->add_option("--trace-dir", eval_traces, "also persist generation traces");

    // report
    auto* report_cmd = app.add_subcommand("report", "render an eval report");
    std::string report_in, report_format = "markdown", report_out;
    report_cmd->add_option("--in", report_in, "report JSON")->required();
    report_cmd->add_option("--format", report_format, "json|markdown|csv");
    report_cmd->add_option("--out", report_out, "output file (default stdout)");

    // prompts lint
    auto* prompts_cmd = app.add_subcommand("prompts", "prompt template utilities");
    prompts_cmd->require_subcommand(1);
    auto* lint_cmd = prompts_cmd->add_subcommand("lint", "validate the template set");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        GlobalConfig cfg;
        if (!config_path.empty()) cfg = load_config(config_path);
        set_log_level(cfg.log_level);
        filters.dedup = !no_dedup;
        if (*opt_k) cfg.retrieval_k = flag_k;
        if (*opt_n) cfg.retrieval_n = flag_n;
        if (!*opt_batch) index_batch = cfg.embed_batch;

        if (ingest_cmd->parsed()) return cmd_ingest(ingest_inputs, ingest_out, filters);
        if (index_cmd->parsed()) return cmd_index(cfg, index_corpus, index_out, index_batch);
        if (retrieve_cmd->parsed())
            return cmd_retrieve(cfg, retrieve_index, retrieve_task, retrieve_json);
        if (classify_cmd->parsed()) return cmd_classify(cfg, classify_task, classify_json);
        if (generate_cmd->parsed())
            return cmd_generate(cfg, generate_tasks, generate_mode, generate_index,
                                generate_attempts, generate_out);
        if (eval_cmd->parsed())
            return cmd_eval(cfg, eval_bench, eval_mode, eval_index, eval_attempts,
                            eval_syntax, eval_func, eval_report, eval_traces);
        if (report_cmd->parsed()) return cmd_report(report_in, report_format, report_out);
        if (lint_cmd->parsed()) return cmd_prompts_lint(cfg);

        std::cerr << app.help();
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
