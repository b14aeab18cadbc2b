#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace evgap {

// Metric tons held exactly as integer grams.
class Tonnes {
public:
    static constexpr std::int64_t kGramsPerTonne = 1'000'000;

    constexpr Tonnes() = default;
    static constexpr Tonnes from_grams(std::int64_t g) { return Tonnes(g); }
    static Tonnes whole(std::int64_t tons);
    // Decimal text, up to 6 fractional digits. Throws std::invalid_argument.
    static Tonnes parse(std::string_view text);

    constexpr std::int64_t grams() const { return grams_; }
    double value() const { return static_cast<double>(grams_) / kGramsPerTonne; }
    double kilograms() const { return static_cast<double>(grams_) / 1000.0; }
    bool negative() const { return grams_ < 0; }
    std::string to_string() const;

    Tonnes& operator+=(Tonnes other);
    friend Tonnes operator+(Tonnes a, Tonnes b) { return a += b; }
    friend constexpr auto operator<=>(Tonnes, Tonnes) = default;

private:
    constexpr explicit Tonnes(std::int64_t g) : grams_(g) {}
    std::int64_t grams_ = 0;
};

}  // namespace evgap
