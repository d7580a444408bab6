// errors.hpp -- error type shared by all gcq modules
#pragma once

#include <stdexcept>
#include <string>

namespace gcq {

// Every failure carries a machine-readable kind plus a human message.
// Kinds are stable strings; the CLI maps them to exit codes.
struct Error : std::runtime_error {
    std::string kind;

    Error(std::string k, const std::string& msg)
        : std::runtime_error(k + ": " + msg), kind(std::move(k)) {}
};

[[noreturn]] inline void fail(std::string kind, const std::string& msg) {
    throw Error(std::move(kind), msg);
}

// Budget-style kinds abort long computations; everything else is an input
// or API misuse problem. The CLI exits 3 for the former, 2 for the latter.
inline bool is_budget_kind(const std::string& kind) {
    return kind == "BudgetExceeded" || kind == "LimitExceeded";
}

}  // namespace gcq
