#pragma once

#include <cctype>
#include <cstdint>
#include <string>
#include <string_view>

#include "drinfeld/error.hpp"

namespace drinfeld {

// Recursive-descent reader for the sparse sum-of-products syntax shared by
// field elements, A-polynomials and twisted polynomials:
//
//   expr   := [+|-] term {(+|-) term}
//   term   := factor {* factor}
//   factor := atom [^ integer]
//   atom   := integer | symbol | ( expr )
//
// Products are folded left to right, so noncommutative rings see operands in
// written order. The adaptor supplies the ring:
//   Value from_int(std::uint64_t), Value symbol(char), add, sub, mul, neg,
//   pow(Value, std::uint64_t).
template <class Adaptor>
class ExpressionParser {
public:
    using Value = typename Adaptor::Value;

    ExpressionParser(std::string_view text, const Adaptor& ring, std::string module)
        : text_(text), ring_(ring), module_(std::move(module)) {}

    Value parse() {
        skip();
        if (pos_ >= text_.size()) fail("empty expression");
        Value v = expr();
        skip();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return v;
    }

private:
    [[noreturn]] void fail(const std::string& why) const {
        throw ValidationError(module_, "cannot parse \"" + std::string(text_) + "\": " + why +
                                           " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool eat(char c) {
        skip();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    std::uint64_t integer() {
        skip();
        if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_])))
            fail("expected integer");
        std::uint64_t v = 0;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
            const std::uint64_t d = static_cast<std::uint64_t>(text_[pos_] - '0');
            if (v > (UINT64_MAX - d) / 10) fail("integer overflow");
            v = v * 10 + d;
            ++pos_;
        }
        return v;
    }

    Value expr() {
        bool negate = false;
        if (eat('-')) negate = true;
        else eat('+');
        Value acc = term();
        if (negate) acc = ring_.neg(acc);
        for (;;) {
            if (eat('+')) acc = ring_.add(acc, term());
            else if (eat('-')) acc = ring_.sub(acc, term());
            else return acc;
        }
    }

    Value term() {
        Value acc = factor();
        while (eat('*')) acc = ring_.mul(acc, factor());
        return acc;
    }

    Value factor() {
        Value base = atom();
        if (eat('^')) return ring_.pow(base, integer());
        return base;
    }

    Value atom() {
        skip();
        if (pos_ >= text_.size()) fail("unexpected end of input");
        const char c = text_[pos_];
        if (c == '(') {
            ++pos_;
            Value v = expr();
            if (!eat(')')) fail("missing ')'");
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return ring_.from_int(integer());
        if (std::isalpha(static_cast<unsigned char>(c))) {
            ++pos_;
            try {
                return ring_.symbol(c);
            } catch (const ValidationError&) {
                --pos_;
                fail("unknown symbol '" + std::string(1, c) + "'");
            }
        }
        fail("unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    const Adaptor& ring_;
    std::string module_;
    std::size_t pos_ = 0;
};

template <class Adaptor>
typename Adaptor::Value parse_expression(std::string_view text, const Adaptor& ring, std::string module) {
    return ExpressionParser<Adaptor>(text, ring, std::move(module)).parse();
}

} // namespace drinfeld
