#pragma once

#include "hdlcore/hdl_extract.hpp"

#include <optional>
#include <string>

namespace hdlcore {

enum class LogicType { Combinational, Sequential };
enum class Complexity { Simple, Complex };

std::string logic_name(LogicType t);
std::string complexity_name(Complexity c);

struct TaskClass {
    LogicType logic = LogicType::Combinational;
    Complexity complexity = Complexity::Simple;

    // SC-HDL / SS-HDL / CC-HDL / CS-HDL
    std::string label() const;

    bool operator==(const TaskClass&) const = default;
};

struct TaskDescription {
    std::string raw_text;
    std::string name;

    const KeyComponents& components() const {
        if (!components_) components_ = extract_components(raw_text);
        return *components_;
    }

private:
    mutable std::optional<KeyComponents> components_;
};

} // namespace hdlcore
