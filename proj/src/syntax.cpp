#include "fbv/syntax.hpp"

#include <cctype>

namespace fbv {

namespace {

bool atom_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) != 0; }

class Parser {
public:
    Parser(std::string_view text, ParseOptions opts) : text_(text), opts_(opts) {}

    Structure run() {
        Structure s = structure();
        skip_ws();
        if (pos_ != text_.size()) fail({"end of input"});
        return number_occurrences(s);
    }

private:
    std::string_view text_;
    ParseOptions opts_;
    std::size_t pos_ = 0;

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    [[noreturn]] void fail(std::vector<std::string> expected) {
        std::string msg = "parse error at offset " + std::to_string(pos_) + ": expected ";
        for (std::size_t i = 0; i < expected.size(); ++i) {
            if (i) msg += i + 1 == expected.size() ? " or " : ", ";
            msg += expected[i];
        }
        if (pos_ < text_.size())
            msg += ", found '" + std::string(1, text_[pos_]) + "'";
        else
            msg += ", found end of input";
        throw ParseError(ParseError::Kind::Syntax, pos_, std::move(expected), msg);
    }

    std::string name() {
        std::size_t start = pos_;
        while (pos_ < text_.size() && atom_char(text_[pos_])) ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    Structure structure() {
        char c = peek();
        if (c == '*') {
            ++pos_;
            return Structure::unit();
        }
        if (c == '-') {
            std::size_t at = pos_;
            ++pos_;
            char d = peek();
            if (atom_char(d)) return Structure::atom(name(), Polarity::Negative);
            if (d == '[' || d == '(' || d == '<' || d == '*' || d == '-')
                throw ParseError(ParseError::Kind::NegatedNonAtom, at, {"atom"},
                                 "negation applies to atoms only (offset " + std::to_string(at) + ")");
            fail({"atom"});
        }
        if (atom_char(c)) return Structure::atom(name(), Polarity::Positive);
        if (c == '[') return group(NodeKind::Par, ']', ',');
        if (c == '(') return group(NodeKind::Copar, ')', ',');
        if (c == '<') {
            if (!opts_.allow_seq)
                throw ParseError(ParseError::Kind::SeqNotAllowed, pos_, {"'*'", "atom", "'['", "'('"},
                                 "seq structures need --system bv (offset " + std::to_string(pos_) + ")");
            return group(NodeKind::Seq, '>', ';');
        }
        std::vector<std::string> exp{"'*'", "atom", "'-'", "'['", "'('"};
        if (opts_.allow_seq) exp.push_back("'<'");
        fail(std::move(exp));
    }

    Structure group(NodeKind kind, char close, char sep) {
        ++pos_;
        Children ch;
        ch.push_back(structure());
        for (;;) {
            char c = peek();
            if (c == sep) {
                ++pos_;
                ch.push_back(structure());
            } else if (c == close) {
                ++pos_;
                break;
            } else {
                fail({std::string("'") + sep + "'", std::string("'") + close + "'"});
            }
        }
        return Structure::make(kind, std::move(ch));
    }
};

}  // namespace

Structure parse(std::string_view text, ParseOptions opts) { return Parser(text, opts).run(); }

}  // namespace fbv
