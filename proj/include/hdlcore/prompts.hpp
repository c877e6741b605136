#pragma once

#include "hdlcore/retrieve.hpp"
#include "hdlcore/task.hpp"

#include <map>
#include <string>
#include <vector>

namespace hdlcore {

struct PromptTemplate {
    std::string id;
    std::string system_text;
    std::string user_text;
    std::vector<std::string> placeholders; // declared in front matter

    bool operator==(const PromptTemplate&) const = default;
};

// The catalog holds one template per id:
//   sc_gen ss_gen cc_gen cs_gen  category-specific generation
//   cot_gen                      generic chain-of-thought generation
//   complexity                   task self-assessment
//   testbench selfsim refine     self-verification loop
//
// Template files carry a front matter block terminated by `---`:
//   placeholders: task, exemplars
//   system: <one-line system text>
// followed by the user text. Only declared placeholders are substituted;
// any other {braces} in the text are literal.
class PromptCatalog {
public:
    static const std::vector<std::string>& required_ids();

    // Compiled-in copy of the shipped template set (templates/ in the repo).
    static PromptCatalog builtin();
    static PromptCatalog load_dir(const std::string& dir);

    const PromptTemplate& get(const std::string& id) const;
    bool has(const std::string& id) const { return templates_.count(id) != 0; }

    struct Rendered {
        std::string system_text;
        std::string user_text;
    };
    Rendered render(const std::string& id,
                    const std::map<std::string, std::string>& bindings) const;

    // Returns problems; empty means the catalog is well formed.
    std::vector<std::string> lint() const;

    void put(PromptTemplate t); // replaces any existing template with the same id

private:
    std::map<std::string, PromptTemplate> templates_;
};

// Guidance injected into the four generation templates: simple classes get the
// logic-type one-liner, complex classes get the extended checklist.
std::string knowledge_block(const TaskClass& cls);

std::string gen_template_for(const TaskClass& cls); // sc_gen / ss_gen / cc_gen / cs_gen

// Numbered exemplar blocks for the {exemplars} binding. Empty input renders "".
// Exemplars whose instruction+code characters overflow the budget are dropped
// lowest-ranked first.
std::string format_exemplars(const std::vector<Exemplar>& exemplars, std::size_t char_budget);

// Canonical template-file rendering (front matter + `---` + user text).
std::string template_file_text(const PromptTemplate& t);

} // namespace hdlcore
