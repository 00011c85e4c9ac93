#pragma once

#include <stdexcept>
#include <string>

namespace fbv {

struct DuplicateAtoms : std::runtime_error {
    DuplicateAtoms() : std::runtime_error("atom names must occur at most once per polarity") {}
};

struct FlatOnly : std::runtime_error {
    FlatOnly() : std::runtime_error("operation defined on seq-free structures only") {}
};

struct StaleInstance : std::runtime_error {
    StaleInstance() : std::runtime_error("rule instance does not match the given structure") {}
};

struct WebError : std::runtime_error {
    enum class Kind { InvalidWeb, NoPartition };
    WebError(Kind k, const std::string& msg) : std::runtime_error(msg), kind(k) {}
    Kind kind;
};

}  // namespace fbv
