#include "hdlcore/hdl_extract.hpp"

#include "hdlcore/util.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

namespace hdlcore {

namespace {

bool is_ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) != 0 || c == '_';
}

bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '$';
}

const std::set<std::string>& qualifier_keywords() {
    static const std::set<std::string> kws = {
        "wire", "reg", "logic", "signed", "unsigned", "var", "tri", "tri0", "tri1",
        "wand", "wor", "supply0", "supply1", "integer", "time", "bit", "byte",
        "shortint", "int", "longint",
    };
    return kws;
}

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> kws = {
        "module", "endmodule", "input", "output", "inout", "begin", "end",
        "always", "assign", "parameter", "localparam",
    };
    return kws;
}

struct Cursor {
    std::string_view s;
    size_t pos = 0;

    bool done() const { return pos >= s.size(); }
    char peek() const { return done() ? '\0' : s[pos]; }

    void skip_ws() {
        while (!done() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }

    std::string read_ident() {
        if (done() || !is_ident_start(s[pos])) return {};
        size_t b = pos;
        while (!done() && is_ident_char(s[pos])) ++pos;
        return std::string(s.substr(b, pos - b));
    }

    // Reads a balanced (...) or [...] group starting at the current open bracket.
    // Returns the inner text; pos ends just past the closing bracket.
    std::string read_balanced(char open, char close) {
        if (peek() != open) return {};
        size_t depth = 0;
        size_t b = pos + 1;
        for (; pos < s.size(); ++pos) {
            if (s[pos] == open) ++depth;
            else if (s[pos] == close) {
                --depth;
                if (depth == 0) {
                    std::string inner(s.substr(b, pos - b));
                    ++pos;
                    return inner;
                }
            }
        }
        pos = s.size(); // unterminated: consume the rest
        return std::string(s.substr(b));
    }
};

size_t find_word(std::string_view s, std::string_view word, size_t from = 0) {
    size_t pos = from;
    while ((pos = s.find(word, pos)) != std::string_view::npos) {
        bool left_ok = pos == 0 || !is_ident_char(s[pos - 1]);
        size_t end = pos + word.size();
        bool right_ok = end == s.size() || !is_ident_char(s[end]);
        if (left_ok && right_ok) return pos;
        ++pos;
    }
    return std::string_view::npos;
}

std::string strip_spaces(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
    return out;
}

void parse_range_ints(const std::string& inner_no_space, PortDecl& port) {
    size_t colon = inner_no_space.find(':');
    if (colon == std::string::npos) return;
    std::string msb_s = inner_no_space.substr(0, colon);
    std::string lsb_s = inner_no_space.substr(colon + 1);
    auto all_digits = [](const std::string& t) {
        return !t.empty() && t.size() <= 9 && std::all_of(t.begin(), t.end(), [](char c) {
            return std::isdigit(static_cast<unsigned char>(c)) != 0;
        });
    };
    if (!all_digits(msb_s) || !all_digits(lsb_s)) return;
    int msb = std::stoi(msb_s);
    int lsb = std::stoi(lsb_s);
    if (msb >= lsb && lsb >= 0) {
        port.width_msb = msb;
        port.width_lsb = lsb;
    }
}

std::optional<PortDir> dir_from_word(std::string_view w) {
    if (w == "input") return PortDir::Input;
    if (w == "output") return PortDir::Output;
    if (w == "inout") return PortDir::Inout;
    return std::nullopt;
}

std::vector<std::string> split_top_level_commas(std::string_view s) {
    std::vector<std::string> chunks;
    size_t depth = 0, start = 0;
    for (size_t i = 0; i < s.size(); ++i) {
        char c = s[i];
        if (c == '(' || c == '[') ++depth;
        else if (c == ')' || c == ']') {
            if (depth > 0) --depth;
        } else if (c == ',' && depth == 0) {
            chunks.emplace_back(trim(s.substr(start, i - start)));
            start = i + 1;
        }
    }
    chunks.emplace_back(trim(s.substr(start)));
    return chunks;
}

// Parses "input reg [7:0] name" style declarations from a chunk cursor.
// On entry the direction keyword has already been consumed.
bool parse_decl_tail(Cursor& cur, PortDir dir, PortDecl& out) {
    out = PortDecl{};
    out.direction = dir;
    std::string quals;
    for (;;) {
        cur.skip_ws();
        size_t save = cur.pos;
        std::string word = cur.read_ident();
        if (word.empty()) break;
        if (qualifier_keywords().count(word)) {
            if (!quals.empty()) quals += ' ';
            quals += word;
        } else {
            cur.pos = save;
            break;
        }
    }
    out.qualifiers = quals;
    cur.skip_ws();
    if (cur.peek() == '[') {
        std::string inner = strip_spaces(cur.read_balanced('[', ']'));
        out.range_text = "[" + inner + "]";
        parse_range_ints(inner, out);
    }
    cur.skip_ws();
    out.name = cur.read_ident();
    return !out.name.empty() && !reserved_words().count(out.name);
}

void append_unique_port(std::vector<PortDecl>& ports, const PortDecl& p) {
    for (const auto& q : ports)
        if (q.name == p.name) return;
    ports.push_back(p);
}

// Resolves directions of a non-ANSI port list from body declarations. Scanning
// stops at the first behavioral construct or endmodule.
std::vector<PortDecl> resolve_non_ansi(const std::vector<std::string>& names,
                                       std::string_view body) {
    size_t cut = body.size();
    for (std::string_view stop : {"always", "assign", "endmodule"}) {
        size_t p = find_word(body, stop);
        if (p != std::string_view::npos) cut = std::min(cut, p);
    }
    body = body.substr(0, cut);

    std::map<std::string, PortDecl> decls;
    size_t pos = 0;
    while (pos < body.size()) {
        size_t best = std::string_view::npos;
        std::string best_word;
        for (std::string_view w : {"input", "output", "inout"}) {
            size_t p = find_word(body, w, pos);
            if (p < best) {
                best = p;
                best_word = std::string(w);
            }
        }
        if (best == std::string_view::npos) break;
        Cursor cur{body, best + best_word.size()};
        PortDecl proto;
        if (!parse_decl_tail(cur, *dir_from_word(best_word), proto)) {
            pos = best + best_word.size();
            continue;
        }
        // identifier list: proto.name already holds the first one
        std::vector<std::string> listed = {proto.name};
        for (;;) {
            cur.skip_ws();
            if (cur.peek() != ',') break;
            ++cur.pos;
            cur.skip_ws();
            std::string more = cur.read_ident();
            if (more.empty()) break;
            listed.push_back(more);
        }
        for (const auto& nm : listed) {
            if (!decls.count(nm)) {
                PortDecl p = proto;
                p.name = nm;
                decls.emplace(nm, p);
            }
        }
        pos = cur.pos;
    }

    std::vector<PortDecl> ports;
    for (const auto& nm : names) {
        auto it = decls.find(nm);
        if (it != decls.end()) append_unique_port(ports, it->second);
    }
    return ports;
}

// Attempts a header parse at `mod_pos` (the `module` keyword). On success returns
// the header and sets `span_end` past the parsed region (port list or `;`).
std::optional<ModuleHeader> parse_header_at(std::string_view s, size_t mod_pos,
                                            size_t& span_end) {
    Cursor cur{s, mod_pos + 6};
    cur.skip_ws();
    ModuleHeader header;
    header.module_name = cur.read_ident();
    if (header.module_name.empty() || reserved_words().count(header.module_name))
        return std::nullopt;

    cur.skip_ws();
    if (cur.peek() == '#') {
        ++cur.pos;
        cur.skip_ws();
        if (cur.peek() != '(') return std::nullopt;
        header.params_text = "#(" + collapse_whitespace(cur.read_balanced('(', ')')) + ")";
    }

    cur.skip_ws();
    if (cur.peek() == ';') {
        span_end = cur.pos + 1;
        return header;
    }
    if (cur.peek() != '(') return std::nullopt;

    std::string port_src = cur.read_balanced('(', ')');
    size_t after_ports = cur.pos;
    cur.skip_ws();
    if (cur.peek() == ';') after_ports = cur.pos + 1;
    span_end = after_ports;

    auto chunks = split_top_level_commas(port_src);
    chunks.erase(std::remove_if(chunks.begin(), chunks.end(),
                                [](const std::string& c) { return c.empty(); }),
                 chunks.end());
    if (chunks.empty()) return header;

    Cursor probe{chunks.front(), 0};
    probe.skip_ws();
    std::string first_word = probe.read_ident();
    bool ansi = dir_from_word(first_word).has_value();

    if (ansi) {
        std::optional<PortDecl> prev;
        for (const auto& chunk : chunks) {
            Cursor cc{chunk, 0};
            cc.skip_ws();
            size_t save = cc.pos;
            std::string word = cc.read_ident();
            auto dir = dir_from_word(word);
            PortDecl port;
            if (dir) {
                if (!parse_decl_tail(cc, *dir, port)) continue;
            } else {
                cc.pos = save;
                std::string nm = cc.read_ident();
                if (nm.empty() || !prev) continue;
                port = *prev;
                port.name = nm;
            }
            append_unique_port(header.ports, port);
            prev = port;
        }
        return header;
    }

    std::vector<std::string> names;
    for (const auto& chunk : chunks) {
        Cursor cc{chunk, 0};
        cc.skip_ws();
        std::string nm = cc.read_ident();
        cc.skip_ws();
        if (!nm.empty() && cc.done() && !reserved_words().count(nm)) names.push_back(nm);
    }
    if (names.empty()) return header;
    header.ports = resolve_non_ansi(names, s.substr(after_ports));
    return header;
}

std::optional<ModuleHeader> parse_module_header_span(std::string_view code,
                                                     size_t& span_begin,
                                                     size_t& span_end) {
    std::string stripped = strip_hdl_comments(code);
    size_t pos = 0;
    while ((pos = find_word(stripped, "module", pos)) != std::string_view::npos) {
        size_t end = pos;
        auto h = parse_header_at(stripped, pos, end);
        if (h) {
            span_begin = pos;
            span_end = end;
            return h;
        }
        pos += 6;
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// instruction segmentation
// ---------------------------------------------------------------------------

// End offset of the first paragraph: up to the first blank line after content,
// else the first sentence, else the whole text.
size_t first_paragraph_end(std::string_view text) {
    size_t line_start = 0;
    bool seen_content = false;
    while (line_start <= text.size()) {
        size_t nl = text.find('\n', line_start);
        size_t line_end = nl == std::string_view::npos ? text.size() : nl;
        std::string_view line = text.substr(line_start, line_end - line_start);
        bool blank = trim(line).empty();
        if (blank && seen_content) return line_start;
        if (!blank) seen_content = true;
        if (nl == std::string_view::npos) break;
        line_start = nl + 1;
    }
    // no blank line: first sentence boundary
    for (size_t i = 0; i + 1 <= text.size(); ++i) {
        if (text[i] != '.') continue;
        if (i + 1 == text.size() || std::isspace(static_cast<unsigned char>(text[i + 1])))
            return i + 1;
    }
    return text.size();
}

std::string truncate_utf8(std::string_view s, size_t max_bytes) {
    if (s.size() <= max_bytes) return std::string(s);
    size_t cut = max_bytes;
    while (cut > 0 && (static_cast<unsigned char>(s[cut]) & 0xC0) == 0x80) --cut;
    return std::string(s.substr(0, cut));
}

struct LineSpan {
    size_t begin, end; // [begin, end) in the original text, excluding the newline
};

std::vector<LineSpan> line_spans(std::string_view text) {
    std::vector<LineSpan> spans;
    size_t start = 0;
    while (start <= text.size()) {
        size_t nl = text.find('\n', start);
        size_t end = nl == std::string_view::npos ? text.size() : nl;
        spans.push_back({start, end});
        if (nl == std::string_view::npos) break;
        start = nl + 1;
    }
    return spans;
}

// Parses "a [7:0], b and c" item lists used by prose port declarations.
std::vector<PortDecl> parse_prose_items(std::string_view line, size_t from, PortDir dir,
                                        size_t& end_pos) {
    std::vector<PortDecl> items;
    Cursor cur{line, from};
    for (;;) {
        cur.skip_ws();
        size_t save = cur.pos;
        std::string nm = cur.read_ident();
        if (nm.empty() || reserved_words().count(nm)) {
            cur.pos = save;
            break;
        }
        PortDecl p;
        p.direction = dir;
        p.name = nm;
        cur.skip_ws();
        if (cur.peek() == '[') {
            std::string inner = strip_spaces(cur.read_balanced('[', ']'));
            p.range_text = "[" + inner + "]";
            parse_range_ints(inner, p);
        }
        items.push_back(p);
        cur.skip_ws();
        if (cur.peek() == ',') {
            ++cur.pos;
            continue;
        }
        size_t save2 = cur.pos;
        std::string conj = cur.read_ident();
        if (to_lower(conj) == "and") continue;
        cur.pos = save2;
        break;
    }
    end_pos = cur.pos;
    return items;
}

// Finds "input(s):" / "output port(s):" style markers in `lower` (the lowercased
// line). Returns direction and the offset just past the colon, or nullopt.
std::optional<std::pair<PortDir, size_t>> match_prose_marker(std::string_view lower,
                                                             size_t at) {
    std::string_view lv = lower.substr(at);
    PortDir dir;
    size_t consumed = 0;
    if (lv.starts_with("input")) {
        dir = PortDir::Input;
        consumed = 5;
    } else if (lv.starts_with("output")) {
        dir = PortDir::Output;
        consumed = 6;
    } else if (lv.starts_with("inout")) {
        dir = PortDir::Inout;
        consumed = 5;
    } else {
        return std::nullopt;
    }
    if (at > 0 && is_ident_char(lower[at - 1])) return std::nullopt;
    if (consumed < lv.size() && lv[consumed] == 's') ++consumed;
    size_t p = consumed;
    while (p < lv.size() && lv[p] == ' ') ++p;
    for (std::string_view noise : {"ports", "port", "signals", "signal"}) {
        if (lv.substr(p).starts_with(noise)) {
            p += noise.size();
            break;
        }
    }
    while (p < lv.size() && lv[p] == ' ') ++p;
    if (p >= lv.size() || lv[p] != ':') return std::nullopt;
    return std::make_pair(dir, at + p + 1);
}

// Looks for "module name: foo" / "module named foo" phrasing anywhere in the text.
std::string find_prose_module_name(std::string_view text) {
    std::string lower = to_lower(text);
    size_t pos = 0;
    while ((pos = find_word(lower, "module", pos)) != std::string_view::npos) {
        Cursor cur{text, pos + 6};
        for (;;) {
            cur.skip_ws();
            while (!cur.done() && (cur.peek() == ':' || cur.peek() == '=' ||
                                   cur.peek() == '"' || cur.peek() == '\''))
                ++cur.pos;
            cur.skip_ws();
            size_t save = cur.pos;
            std::string word = cur.read_ident();
            if (word.empty()) break;
            std::string wl = to_lower(word);
            if (wl == "name" || wl == "named" || wl == "is" || wl == "called") continue;
            if (reserved_words().count(wl)) break;
            cur.pos = save;
            std::string ident = cur.read_ident();
            return ident;
        }
        pos += 6;
    }
    return {};
}

} // namespace

std::string port_dir_name(PortDir d) {
    switch (d) {
        case PortDir::Input: return "input";
        case PortDir::Output: return "output";
        case PortDir::Inout: return "inout";
    }
    return "input";
}

std::string strip_hdl_comments(std::string_view code) {
    // Length-preserving: comment bytes become spaces (newlines kept), so offsets
    // into the stripped text are valid in the original.
    std::string out(code);
    size_t i = 0;
    while (i < code.size()) {
        if (code[i] == '/' && i + 1 < code.size() && code[i + 1] == '/') {
            while (i < code.size() && code[i] != '\n') out[i++] = ' ';
        } else if (code[i] == '/' && i + 1 < code.size() && code[i + 1] == '*') {
            out[i] = ' ';
            out[i + 1] = ' ';
            i += 2;
            while (i < code.size() && !(i + 1 < code.size() && code[i] == '*' && code[i + 1] == '/')) {
                if (code[i] != '\n') out[i] = ' ';
                ++i;
            }
            if (i + 1 < code.size()) {
                out[i] = ' ';
                out[i + 1] = ' ';
                i += 2;
            }
        } else {
            ++i;
        }
    }
    return out;
}

std::optional<ModuleHeader> parse_module_header(std::string_view code) {
    size_t b = 0, e = 0;
    return parse_module_header_span(code, b, e);
}

std::string render_module_header(const ModuleHeader& h) {
    std::string out = "module " + h.module_name;
    if (!h.params_text.empty()) out += " " + h.params_text;
    out += "(";
    for (size_t i = 0; i < h.ports.size(); ++i) {
        const PortDecl& p = h.ports[i];
        if (i) out += ", ";
        out += port_dir_name(p.direction);
        if (!p.qualifiers.empty()) out += " " + p.qualifiers;
        if (!p.range_text.empty()) out += " " + p.range_text;
        out += " " + p.name;
    }
    out += ");";
    return out;
}

KeyComponents extract_components(std::string_view instruction, const std::string* code) {
    KeyComponents out;

    size_t para_end = first_paragraph_end(instruction);
    out.high_level = truncate_utf8(trim(instruction.substr(0, para_end)), 400);

    std::vector<std::pair<size_t, size_t>> removals;
    removals.emplace_back(0, para_end);

    std::optional<ModuleHeader> header;
    if (code) header = parse_module_header(*code);
    if (!header) {
        size_t hb = 0, he = 0;
        header = parse_module_header_span(instruction, hb, he);
        if (header) {
            removals.emplace_back(hb, he);
        } else {
            // prose-style port declarations
            std::vector<PortDecl> ports;
            for (const auto& span : line_spans(instruction)) {
                std::string_view line = instruction.substr(span.begin, span.end - span.begin);
                std::string lower = to_lower(line);
                bool line_hit = false;
                size_t pos = 0;
                while (pos < line.size()) {
                    auto marker = match_prose_marker(lower, pos);
                    if (!marker) {
                        ++pos;
                        continue;
                    }
                    size_t end_pos = marker->second;
                    auto items = parse_prose_items(line, marker->second, marker->first, end_pos);
                    if (!items.empty()) {
                        line_hit = true;
                        for (const auto& p : items) ports.push_back(p);
                    }
                    pos = std::max(end_pos, pos + 1);
                }
                if (line_hit) removals.emplace_back(span.begin, span.end);
            }
            if (!ports.empty()) {
                ModuleHeader h;
                std::string nm = find_prose_module_name(instruction);
                h.module_name = nm.empty() ? "top" : nm;
                for (const auto& p : ports) append_unique_port(h.ports, p);
                header = h;
            }
        }
    }
    if (header) out.module_header = render_module_header(*header);

    std::sort(removals.begin(), removals.end());
    std::string rest;
    size_t cursor = 0;
    for (const auto& [b, e] : removals) {
        if (b > cursor) {
            rest += instruction.substr(cursor, b - cursor);
            rest += ' ';
        }
        cursor = std::max(cursor, e);
    }
    if (cursor < instruction.size()) rest += instruction.substr(cursor);
    out.low_level = collapse_whitespace(rest);

    return out;
}

const std::vector<std::string>& default_temporal_keywords() {
    static const std::vector<std::string> kws = {
        "clk", "clock", "posedge", "negedge", "reset", "rst", "edge", "cycle",
        "register", "flip-flop", "flip flop", "fsm", "state machine", "counter",
        "sequential", "fifo", "shift",
    };
    return kws;
}

bool detect_temporal(std::string_view description, const std::vector<std::string>& keywords) {
    for (const auto& kw : keywords)
        if (contains_word(description, kw)) return true;
    return false;
}

std::vector<std::string> matched_temporal_keywords(std::string_view description,
                                                   const std::vector<std::string>& keywords) {
    std::vector<std::string> hits;
    for (const auto& kw : keywords)
        if (contains_word(description, kw)) hits.push_back(kw);
    return hits;
}

std::optional<std::string> extract_code_block(std::string_view reply) {
    auto lines = split_lines(reply);
    size_t i = 0;
    while (i < lines.size()) {
        std::string t = trim(lines[i]);
        if (!t.starts_with("```")) {
            ++i;
            continue;
        }
        std::string lang = to_lower(trim(t.substr(3)));
        size_t j = i + 1;
        while (j < lines.size() && !trim(lines[j]).starts_with("```")) ++j;
        bool eligible = lang.empty() || lang == "verilog" || lang == "systemverilog" ||
                        lang == "v" || lang == "sv";
        if (eligible) {
            std::string content;
            for (size_t k = i + 1; k < j; ++k) {
                content += lines[k];
                content += '\n';
            }
            return content;
        }
        i = j + 1; // skip this block and keep looking
    }

    size_t mod = find_word(reply, "module");
    if (mod != std::string_view::npos) {
        size_t endm = find_word(reply, "endmodule", mod);
        if (endm != std::string_view::npos)
            return std::string(reply.substr(mod, endm + 9 - mod));
    }
    return std::nullopt;
}

} // namespace hdlcore
