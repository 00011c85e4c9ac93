#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "fbv/structure.hpp"

namespace fbv {

class ParseError : public std::runtime_error {
public:
    enum class Kind { Syntax, NegatedNonAtom, SeqNotAllowed };

    ParseError(Kind kind, std::size_t offset, std::vector<std::string> expected, const std::string& msg)
        : std::runtime_error(msg), kind_(kind), offset_(offset), expected_(std::move(expected)) {}

    Kind kind() const { return kind_; }
    std::size_t offset() const { return offset_; }
    const std::vector<std::string>& expected() const { return expected_; }

private:
    Kind kind_;
    std::size_t offset_;
    std::vector<std::string> expected_;
};

struct ParseOptions {
    bool allow_seq = true;
};

// Parses one structure. The result is numbered in preorder but not normalized.
Structure parse(std::string_view text, ParseOptions opts = {});

}  // namespace fbv
