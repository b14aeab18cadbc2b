#include "evgap/tonnes.hpp"

#include <limits>
#include <stdexcept>

namespace evgap {

Tonnes Tonnes::whole(std::int64_t tons) {
    std::int64_t g = 0;
    if (__builtin_mul_overflow(tons, kGramsPerTonne, &g)) {
        throw std::overflow_error("tonnage out of range");
    }
    return Tonnes(g);
}

Tonnes Tonnes::parse(std::string_view text) {
    auto bad = [&](const char* why) {
        return std::invalid_argument("invalid quantity '" + std::string(text) + "': " + why);
    };
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) {
        neg = text[i] == '-';
        ++i;
    }
    std::int64_t whole_part = 0;
    std::size_t int_digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++int_digits) {
        if (__builtin_mul_overflow(whole_part, 10, &whole_part) ||
            __builtin_add_overflow(whole_part, text[i] - '0', &whole_part)) {
            throw bad("too large");
        }
    }
    std::int64_t frac = 0;
    std::size_t frac_digits = 0;
    if (i < text.size() && text[i] == '.') {
        ++i;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++frac_digits) {
            if (frac_digits == 6) throw bad("more than 6 decimal places");
            frac = frac * 10 + (text[i] - '0');
        }
    }
    if (i != text.size() || int_digits + frac_digits == 0) throw bad("not a decimal number");
    for (std::size_t k = frac_digits; k < 6; ++k) frac *= 10;

    std::int64_t g = 0;
    if (__builtin_mul_overflow(whole_part, kGramsPerTonne, &g) || __builtin_add_overflow(g, frac, &g)) {
        throw bad("too large");
    }
    return Tonnes(neg ? -g : g);
}

std::string Tonnes::to_string() const {
    const bool neg = grams_ < 0;
    const auto mag = neg ? -static_cast<unsigned long long>(grams_) : static_cast<unsigned long long>(grams_);
    std::string out = std::to_string(mag / kGramsPerTonne);
    if (auto frac = mag % kGramsPerTonne; frac != 0) {
        std::string f = std::to_string(frac);
        f.insert(0, 6 - f.size(), '0');
        while (f.back() == '0') f.pop_back();
        out += "." + f;
    }
    return neg ? "-" + out : out;
}

Tonnes& Tonnes::operator+=(Tonnes other) {
    if (__builtin_add_overflow(grams_, other.grams_, &grams_)) {
        throw std::overflow_error("tonnage sum out of range");
    }
    return *this;
}

}  // namespace evgap
