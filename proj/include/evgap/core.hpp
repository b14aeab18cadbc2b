#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace evgap {

enum class MineralId : std::size_t {
    Lithium,
    Cobalt,
    Nickel,
    Manganese,
    Graphite,
    Aluminum,
    Copper,
    Phosphate
};
inline constexpr std::size_t kMineralCount = 8;
inline constexpr std::array<MineralId, kMineralCount> kAllMinerals{
    MineralId::Lithium,  MineralId::Cobalt,   MineralId::Nickel, MineralId::Manganese,
    MineralId::Graphite, MineralId::Aluminum, MineralId::Copper, MineralId::Phosphate};

// Tie-break order for optimal chemistry follows this enum.
enum class ChemistryId : std::size_t { NMC111, NMC523, NMC622, NMC811, NCA, LFP };
inline constexpr std::size_t kChemistryCount = 6;
inline constexpr std::array<ChemistryId, kChemistryCount> kAllChemistries{
    ChemistryId::NMC111, ChemistryId::NMC523, ChemistryId::NMC622,
    ChemistryId::NMC811, ChemistryId::NCA,    ChemistryId::LFP};

// Fixed-size array indexed by an enum.
template <class Key, class T, std::size_t N>
struct EnumArray {
    std::array<T, N> values{};

    constexpr T& operator[](Key k) { return values[static_cast<std::size_t>(k)]; }
    constexpr const T& operator[](Key k) const { return values[static_cast<std::size_t>(k)]; }
    auto begin() { return values.begin(); }
    auto end() { return values.end(); }
    auto begin() const { return values.begin(); }
    auto end() const { return values.end(); }
    friend bool operator==(const EnumArray&, const EnumArray&) = default;
};

template <class T>
using PerMineral = EnumArray<MineralId, T, kMineralCount>;
template <class T>
using PerChemistry = EnumArray<ChemistryId, T, kChemistryCount>;

template <class T>
using YearMap = std::map<int, T>;

std::string_view to_string(MineralId m);      // canonical lower case
std::string_view display_name(MineralId m);   // "Lithium"
std::optional<MineralId> parse_mineral(std::string_view text);

std::string_view to_string(ChemistryId c);    // "NMC811"
std::optional<ChemistryId> parse_chemistry(std::string_view text);

// Input problem tied to a file location. line 0 means "whole file".
class DataError : public std::runtime_error {
public:
    DataError(std::string source, std::size_t line, const std::string& message);
    const std::string& source() const { return source_; }
    std::size_t line() const { return line_; }

private:
    std::string source_;
    std::size_t line_;
};

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

template <class T>
const T& at_year(const YearMap<T>& m, int year, std::string_view what) {
    auto it = m.find(year);
    if (it == m.end()) {
        throw std::out_of_range(std::string(what) + ": no value for year " + std::to_string(year));
    }
    return it->second;
}

}  // namespace evgap
