#pragma once

#include <stdexcept>
#include <string>

namespace hrt {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct SteppedWhilePaused : std::logic_error {
    SteppedWhilePaused() : std::logic_error("step() called while the world is paused") {}
};

struct UnknownAgent : std::out_of_range {
    explicit UnknownAgent(int id) : std::out_of_range("unknown agent id " + std::to_string(id)) {}
};

struct NoActiveOrder : std::logic_error {
    NoActiveOrder() : std::logic_error("no active order to score against") {}
};

} // namespace hrt
