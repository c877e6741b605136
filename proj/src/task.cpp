#include "hdlcore/task.hpp"

namespace hdlcore {

std::string logic_name(LogicType t) {
    return t == LogicType::Combinational ? "Combinational" : "Sequential";
}

std::string complexity_name(Complexity c) {
    return c == Complexity::Simple ? "Simple" : "Complex";
}

std::string TaskClass::label() const {
    std::string l;
    l += complexity == Complexity::Simple ? 'S' : 'C';
    l += logic == LogicType::Combinational ? 'C' : 'S';
    return l + "-HDL";
}

} // namespace hdlcore
