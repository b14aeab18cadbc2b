#pragma once

#include <istream>
#include <span>
#include <string>
#include <vector>

#include "evgap/core.hpp"
#include "evgap/tonnes.hpp"

namespace evgap {

enum class SupplyBasis { Production, Reserves };
enum class SourceKind { UsMining, UsRecycling, AllyMining, AddedSupply };

std::string_view to_string(SupplyBasis b);
std::string_view to_string(SourceKind k);
std::optional<SourceKind> parse_source_kind(std::string_view text);

struct SupplyRecord {
    SupplyBasis basis = SupplyBasis::Production;
    MineralId mineral = MineralId::Lithium;
    std::string country;
    SourceKind source_kind = SourceKind::AllyMining;
    Tonnes quantity;          // as recorded; bauxite tons for bauxite rows
    std::string basis_note;
    std::string source;       // file name, for diagnostics
    std::size_t line = 0;

    // basis_note starting with "bauxite" marks ore tonnage.
    bool is_bauxite() const;
    Tonnes contribution() const;  // after bauxite conversion
};

struct SupplyTable {
    PerMineral<Tonnes> production;  // t/yr
    PerMineral<Tonnes> reserves;    // t
    std::vector<SupplyRecord> provenance;

    const PerMineral<Tonnes>& totals(SupplyBasis b) const {
        return b == SupplyBasis::Production ? production : reserves;
    }
};

struct AddedSupplySpec {
    PerMineral<Tonnes> additions;
    PerMineral<std::string> top_producer;
};

Tonnes bauxite_to_aluminum(Tonnes bauxite);

// Rows: mineral,country,source_kind,quantity,basis_note
std::vector<SupplyRecord> read_supply_records(std::istream& in, SupplyBasis basis,
                                              const std::string& source);
SupplyTable load_supply(std::span<const SupplyRecord> records);

// Rows: mineral,top_producer,addition
AddedSupplySpec read_added_supply(std::istream& in, const std::string& source);
SupplyTable apply_added_supply(const SupplyTable& base, const AddedSupplySpec& spec);

PerMineral<double> to_kilograms(const PerMineral<Tonnes>& t);

}  // namespace evgap
