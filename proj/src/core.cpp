#include "evgap/core.hpp"

#include <algorithm>
#include <cctype>

namespace evgap {

namespace {

constexpr std::array<std::string_view, kMineralCount> kMineralNames{
    "lithium", "cobalt", "nickel", "manganese", "graphite", "aluminum", "copper", "phosphate"};
constexpr std::array<std::string_view, kMineralCount> kMineralDisplay{
    "Lithium", "Cobalt", "Nickel", "Manganese", "Graphite", "Aluminum", "Copper", "Phosphate"};
constexpr std::array<std::string_view, kChemistryCount> kChemistryNames{
    "NMC111", "NMC523", "NMC622", "NMC811", "NCA", "LFP"};

std::string compact_upper(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == '-' || c == '_') continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

}  // namespace

std::string_view to_string(MineralId m) { return kMineralNames[static_cast<std::size_t>(m)]; }
std::string_view display_name(MineralId m) { return kMineralDisplay[static_cast<std::size_t>(m)]; }

std::optional<MineralId> parse_mineral(std::string_view text) {
    const std::string key = to_lower(trim(text));
    for (std::size_t i = 0; i < kMineralCount; ++i) {
        if (key == kMineralNames[i]) return kAllMinerals[i];
    }
    if (key == "aluminium") return MineralId::Aluminum;
    return std::nullopt;
}

std::string_view to_string(ChemistryId c) { return kChemistryNames[static_cast<std::size_t>(c)]; }

// Accepts "NMC811", "nmc 811", "NMC-811".
std::optional<ChemistryId> parse_chemistry(std::string_view text) {
    const std::string key = compact_upper(text);
    for (std::size_t i = 0; i < kChemistryCount; ++i) {
        if (key == kChemistryNames[i]) return kAllChemistries[i];
    }
    return std::nullopt;
}

DataError::DataError(std::string source, std::size_t line, const std::string& message)
    : std::runtime_error(source + (line > 0 ? ":" + std::to_string(line) : std::string()) + ": " +
                         message),
      source_(std::move(source)),
      line_(line) {}

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

}  // namespace evgap
