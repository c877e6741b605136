#include "hdlcore/prompts.hpp"

#include "hdlcore/errors.hpp"
#include "hdlcore/util.hpp"

#include <algorithm>
#include <filesystem>
#include <set>

namespace hdlcore {

namespace {

const std::vector<std::string>& global_placeholders() {
    static const std::vector<std::string> names = {
        "task", "exemplars", "code", "testbench", "summary", "module_header",
    };
    return names;
}

// Placeholders each template must actually use in its text.
const std::map<std::string, std::vector<std::string>>& required_uses() {
    static const std::map<std::string, std::vector<std::string>> req = {
        {"sc_gen", {"task"}},          {"ss_gen", {"task"}},
        {"cc_gen", {"task"}},          {"cs_gen", {"task"}},
        {"cot_gen", {"task"}},         {"complexity", {"task"}},
        {"testbench", {"task", "code"}},
        {"selfsim", {"task", "code", "testbench"}},
        {"refine", {"task", "code", "summary"}},
    };
    return req;
}

bool text_uses(const PromptTemplate& t, const std::string& name) {
    std::string token = "{" + name + "}";
    return t.system_text.find(token) != std::string::npos ||
           t.user_text.find(token) != std::string::npos;
}

std::string substitute(const std::string& text, const std::vector<std::string>& declared,
                       const std::map<std::string, std::string>& bindings,
                       const std::string& id) {
    std::string out;
    out.reserve(text.size());
    size_t i = 0;
    while (i < text.size()) {
        if (text[i] != '{') {
            out.push_back(text[i++]);
            continue;
        }
        const std::string* hit = nullptr;
        for (const auto& name : declared) {
            if (text.compare(i + 1, name.size(), name) == 0 &&
                i + 1 + name.size() < text.size() && text[i + 1 + name.size()] == '}') {
                hit = &name;
                break;
            }
        }
        if (!hit) {
            out.push_back(text[i++]);
            continue;
        }
        auto b = bindings.find(*hit);
        if (b == bindings.end())
            throw Error("unbound placeholder {" + *hit + "} rendering template " + id);
        out += b->second;
        i += hit->size() + 2;
    }
    return out;
}

std::string gen_system_text() {
    return "You are an expert Verilog designer. Reason step by step, then output one "
           "complete Verilog module in a fenced code block.";
}

std::string gen_user_text(const TaskClass& cls) {
    bool seq = cls.logic == LogicType::Sequential;
    std::string text = "Design task: {task}\n\n{exemplars}";
    text += seq ? "This is a sequential design: behavior depends on clock edges and stored state.\n"
                : "This is a combinational design: outputs depend only on the current inputs, "
                  "with no clocks and no stored state.\n";
    text += knowledge_block(cls);
    text += "\nModule interface, if known: {module_header}\n\n";
    text += "Work through the design step by step:\n";
    text += "1. Restate the required behavior in your own words.\n";
    text += "2. List the ports with their directions and widths.\n";
    text += seq ? "3. Define the state registers, their update on each clock edge, and the "
                  "reset behavior.\n"
                : "3. Derive the logic for each output.\n";
    text += "4. Write the final Verilog module.\n\n";
    text += "Output the complete module in a single fenced Verilog code block.\n";
    return text;
}

PromptTemplate make_gen_template(const TaskClass& cls) {
    PromptTemplate t;
    t.id = gen_template_for(cls);
    t.system_text = gen_system_text();
    t.user_text = gen_user_text(cls);
    t.placeholders = {"task", "exemplars", "module_header"};
    return t;
}

PromptTemplate parse_template_file(const std::filesystem::path& path) {
    std::string content = read_file(path);
    PromptTemplate t;
    t.id = path.stem().string();

    size_t pos = 0;
    bool saw_separator = false;
    bool saw_placeholders = false;
    while (pos <= content.size()) {
        size_t nl = content.find('\n', pos);
        std::string line = nl == std::string::npos ? content.substr(pos)
                                                   : content.substr(pos, nl - pos);
        size_t next = nl == std::string::npos ? content.size() + 1 : nl + 1;
        if (trim(line) == "---") {
            saw_separator = true;
            t.user_text = next <= content.size() ? content.substr(next) : "";
            break;
        }
        if (line.starts_with("placeholders:")) {
            saw_placeholders = true;
            std::string rest = line.substr(13);
            size_t s = 0;
            while (s < rest.size()) {
                size_t comma = rest.find(',', s);
                std::string name = trim(rest.substr(s, comma == std::string::npos
                                                           ? std::string::npos
                                                           : comma - s));
                if (!name.empty()) t.placeholders.push_back(name);
                if (comma == std::string::npos) break;
                s = comma + 1;
            }
        } else if (line.starts_with("system:")) {
            t.system_text = trim(line.substr(7));
        } else if (!trim(line).empty()) {
            throw Error("unknown front matter in template " + path.string() + ": " + line);
        }
        pos = next;
    }
    if (!saw_separator)
        throw Error("template file missing `---` separator: " + path.string());
    if (!saw_placeholders)
        throw Error("template file missing `placeholders:` line: " + path.string());
    return t;
}

} // namespace

const std::vector<std::string>& PromptCatalog::required_ids() {
    static const std::vector<std::string> ids = {
        "sc_gen", "ss_gen", "cc_gen", "cs_gen", "cot_gen",
        "complexity", "testbench", "selfsim", "refine",
    };
    return ids;
}

std::string gen_template_for(const TaskClass& cls) {
    std::string id;
    id += cls.complexity == Complexity::Simple ? 's' : 'c';
    id += cls.logic == LogicType::Combinational ? 'c' : 's';
    return id + "_gen";
}

std::string knowledge_block(const TaskClass& cls) {
    bool seq = cls.logic == LogicType::Sequential;
    if (cls.complexity == Complexity::Simple) {
        return seq ? "Keep the implementation minimal: one clocked always block with a clear "
                     "reset is enough.\n"
                   : "Keep the implementation minimal: continuous assign statements or a "
                     "single always @(*) block are enough.\n";
    }
    if (seq) {
        return "Sequential design checklist:\n"
               "- Use non-blocking assignments (<=) inside clocked always blocks.\n"
               "- Keep a single clock domain and trigger on one edge, such as posedge clk.\n"
               "- Apply a consistent reset discipline and initialize every state register "
               "on reset.\n"
               "- Separate next-state logic from the state registers when it aids clarity.\n";
    }
    return "Combinational design checklist:\n"
           "- Cover every case of each conditional and case statement; add a default "
           "branch so no latch is inferred.\n"
           "- Assign every output on every path through an always @(*) block.\n"
           "- Use blocking assignments (=) inside combinational always blocks.\n"
           "- Do not reference clocks or keep state between evaluations.\n";
}

PromptCatalog PromptCatalog::builtin() {
    PromptCatalog cat;
    for (LogicType logic : {LogicType::Combinational, LogicType::Sequential})
        for (Complexity cx : {Complexity::Simple, Complexity::Complex})
            cat.put(make_gen_template(TaskClass{logic, cx}));

    PromptTemplate cot;
    cot.id = "cot_gen";
    cot.system_text = gen_system_text();
    cot.user_text =
        "Design task: {task}\n\n"
        "Work through the design step by step before writing any code:\n"
        "1. Restate the required behavior in your own words.\n"
        "2. List the ports with their directions and widths.\n"
        "3. Plan the implementation.\n"
        "4. Write the final Verilog module.\n\n"
        "Output the complete module in a single fenced Verilog code block.\n";
    cot.placeholders = {"task"};
    cat.put(cot);

    PromptTemplate complexity;
    complexity.id = "complexity";
    complexity.system_text =
        "You are an experienced digital design engineer judging how demanding a Verilog "
        "implementation task is.";
    complexity.user_text =
        "Task under assessment: {task}\n\n"
        "Decide whether implementing this design is SIMPLE or COMPLEX for a language "
        "model.\n"
        "Weigh the amount of internal state, pipelining, arithmetic, and corner cases "
        "involved.\n"
        "Reply with exactly one word on the first line: SIMPLE or COMPLEX.\n";
    complexity.placeholders = {"task"};
    cat.put(complexity);

    PromptTemplate testbench;
    testbench.id = "testbench";
    testbench.system_text = "You are an expert Verilog verification engineer.";
    testbench.user_text =
        "Testbench target task: {task}\n\n"
        "Design under test:\n{code}\n\n"
        "Write a self-checking Verilog testbench for this design. Drive representative "
        "input stimuli, compare every observed output against its expected value, and "
        "$display the result of each check. Output the complete testbench module in a "
        "single fenced Verilog code block.\n";
    testbench.placeholders = {"task", "code"};
    cat.put(testbench);

    PromptTemplate selfsim;
    selfsim.id = "selfsim";
    selfsim.system_text =
        "You are acting as a Verilog event-driven simulator. Execute the code mentally "
        "and report exactly what happens.";
    selfsim.user_text =
        "Act as a Verilog event-driven simulator for the original task: {task}\n\n"
        "Design under test:\n{code}\n\n"
        "Testbench:\n{testbench}\n\n"
        "Simulate the testbench against the design step by step. Report one line at a "
        "time using exactly this format:\n"
        "[STEP] <signal changes or evaluation performed>\n"
        "[CHECK] <testbench check evaluated and the observed value>\n"
        "[MISMATCH] <expected versus observed, only when a check fails>\n"
        "Finish with exactly one verdict line:\n"
        "[RESULT] PASS\n"
        "or\n"
        "[RESULT] FAIL\n";
    selfsim.placeholders = {"task", "code", "testbench"};
    cat.put(selfsim);

    PromptTemplate refine;
    refine.id = "refine";
    refine.system_text =
        "You are an expert Verilog designer repairing a module based on simulation "
        "findings.";
    refine.user_text =
        "Revise the Verilog module for the original task: {task}\n\n"
        "Current implementation:\n{code}\n\n"
        "Simulation summary:\n{summary}\n\n"
        "If the summary shows failures, fix their root causes. If the summary shows PASS "
        "and you find no defect, return the code unchanged. Output the complete module "
        "in a single fenced Verilog code block.\n";
    refine.placeholders = {"task", "code", "summary"};
    cat.put(refine);

    return cat;
}

PromptCatalog PromptCatalog::load_dir(const std::string& dir) {
    if (!std::filesystem::is_directory(dir))
        throw Error("template directory not found: " + dir);
    PromptCatalog cat;
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".txt")
            files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) cat.put(parse_template_file(f));
    for (const auto& id : required_ids())
        if (!cat.has(id)) throw Error("template directory " + dir + " is missing " + id);
    return cat;
}

void PromptCatalog::put(PromptTemplate t) { templates_[t.id] = std::move(t); }

const PromptTemplate& PromptCatalog::get(const std::string& id) const {
    auto it = templates_.find(id);
    if (it == templates_.end()) throw Error("unknown prompt template: " + id);
    return it->second;
}

PromptCatalog::Rendered PromptCatalog::render(
    const std::string& id, const std::map<std::string, std::string>& bindings) const {
    const PromptTemplate& t = get(id);
    Rendered r;
    r.system_text = substitute(t.system_text, t.placeholders, bindings, id);
    r.user_text = substitute(t.user_text, t.placeholders, bindings, id);
    return r;
}

std::vector<std::string> PromptCatalog::lint() const {
    std::vector<std::string> problems;
    for (const auto& id : required_ids())
        if (!templates_.count(id)) problems.push_back("missing template: " + id);

    for (const auto& [id, t] : templates_) {
        for (const auto& name : t.placeholders)
            if (!text_uses(t, name))
                problems.push_back(id + ": declared placeholder {" + name +
                                   "} never appears in the text");
        for (const auto& name : global_placeholders()) {
            bool declared = std::find(t.placeholders.begin(), t.placeholders.end(), name) !=
                            t.placeholders.end();
            if (!declared && text_uses(t, name))
                problems.push_back(id + ": text uses {" + name + "} but does not declare it");
        }
        auto req = required_uses().find(id);
        if (req != required_uses().end())
            for (const auto& name : req->second)
                if (!text_uses(t, name))
                    problems.push_back(id + ": must reference {" + name + "}");
    }
    return problems;
}

std::string template_file_text(const PromptTemplate& t) {
    std::string out = "placeholders:";
    for (size_t i = 0; i < t.placeholders.size(); ++i)
        out += (i ? ", " : " ") + t.placeholders[i];
    out += "\n";
    if (!t.system_text.empty()) out += "system: " + t.system_text + "\n";
    out += "---\n";
    out += t.user_text;
    return out;
}

std::string format_exemplars(const std::vector<Exemplar>& exemplars, std::size_t char_budget) {
    std::vector<const Exemplar*> kept;
    kept.reserve(exemplars.size());
    for (const auto& e : exemplars) kept.push_back(&e);

    auto total = [&] {
        std::size_t sum = 0;
        for (const auto* e : kept) sum += e->instruction.size() + e->code.size();
        return sum;
    };
    while (!kept.empty() && total() > char_budget) kept.pop_back();
    if (kept.empty()) return "";

    std::string out = "Reference examples from similar tasks:\n\n";
    for (size_t i = 0; i < kept.size(); ++i) {
        out += "Example " + std::to_string(i + 1) + " — Task:\n";
        out += kept[i]->instruction;
        out += "\nCode:\n";
        out += kept[i]->code;
        out += "\n\n";
    }
    return out;
}

} // namespace hdlcore
