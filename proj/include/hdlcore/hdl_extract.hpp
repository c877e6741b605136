#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace hdlcore {

enum class PortDir { Input, Output, Inout };

std::string port_dir_name(PortDir d);

struct PortDecl {
    PortDir direction = PortDir::Input;
    std::string name;
    std::string qualifiers;              // "reg", "wire signed", ... empty if none
    std::string range_text;              // normalized "[msb:lsb]" text, empty if unranged
    std::optional<int> width_msb;        // populated only for integer descending ranges
    std::optional<int> width_lsb;

    bool operator==(const PortDecl&) const = default;
};

struct ModuleHeader {
    std::string module_name;
    std::string params_text;             // verbatim "#(...)" with whitespace collapsed, empty if none
    std::vector<PortDecl> ports;

    bool operator==(const ModuleHeader&) const = default;
};

struct KeyComponents {
    std::string high_level;
    std::string low_level;
    std::string module_header;

    bool operator==(const KeyComponents&) const = default;
};

// Removes // and /* */ comments, replacing each with a single space.
std::string strip_hdl_comments(std::string_view code);

// Recognizes the first module header in the text. ANSI headers are parsed from the
// port list; non-ANSI headers resolve directions from body declarations up to the
// first `always`/`assign`. Returns nullopt when nothing parseable is found.
std::optional<ModuleHeader> parse_module_header(std::string_view code);

std::string render_module_header(const ModuleHeader& h);

// Splits instruction text into the three retrieval components. `code`, when given,
// is the preferred source for the module header. Never fails; fields degrade to "".
KeyComponents extract_components(std::string_view instruction,
                                 const std::string* code = nullptr);

const std::vector<std::string>& default_temporal_keywords();

// Case-insensitive word-boundary keyword hit test.
bool detect_temporal(std::string_view description, const std::vector<std::string>& keywords);

std::vector<std::string> matched_temporal_keywords(std::string_view description,
                                                   const std::vector<std::string>& keywords);

// First fenced code block tagged verilog/systemverilog (or untagged); falls back to
// the first `module` ... `endmodule` span. nullopt when neither exists.
std::optional<std::string> extract_code_block(std::string_view reply);

} // namespace hdlcore
