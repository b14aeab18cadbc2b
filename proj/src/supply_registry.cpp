#include "evgap/supply_registry.hpp"

#include <set>
#include <stdexcept>
#include <tuple>

#include "evgap/csv.hpp"

namespace evgap {

std::string_view to_string(SupplyBasis b) {
    return b == SupplyBasis::Production ? "production" : "reserves";
}

std::string_view to_string(SourceKind k) {
    switch (k) {
        case SourceKind::UsMining: return "us_mining";
        case SourceKind::UsRecycling: return "us_recycling";
        case SourceKind::AllyMining: return "ally_mining";
        case SourceKind::AddedSupply: return "added_supply";
    }
    return "?";
}

std::optional<SourceKind> parse_source_kind(std::string_view text) {
    const std::string key = to_lower(trim(text));
    if (key == "us_mining") return SourceKind::UsMining;
    if (key == "us_recycling") return SourceKind::UsRecycling;
    if (key == "ally_mining") return SourceKind::AllyMining;
    return std::nullopt;
}

bool SupplyRecord::is_bauxite() const { return to_lower(trim(basis_note)).rfind("bauxite", 0) == 0; }

Tonnes SupplyRecord::contribution() const { return is_bauxite() ? bauxite_to_aluminum(quantity) : quantity; }

Tonnes bauxite_to_aluminum(Tonnes bauxite) {
    if (bauxite.negative()) throw std::invalid_argument("bauxite tonnage must be non-negative");
    // nearest gram; exact for kg-resolution input
    return Tonnes::from_grams((bauxite.grams() + 2) / 4);
}

std::vector<SupplyRecord> read_supply_records(std::istream& in, SupplyBasis basis,
                                              const std::string& source) {
    const CsvTable t = read_csv(in, source);
    const auto c_min = t.column("mineral");
    const auto c_cty = t.column("country");
    const auto c_kind = t.column("source_kind");
    const auto c_qty = t.column("quantity");
    const auto c_note = t.column("basis_note");

    std::vector<SupplyRecord> out;
    out.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        const auto& f = row.fields;
        SupplyRecord r;
        r.basis = basis;
        r.source = source;
        r.line = row.line;
        auto m = parse_mineral(f[c_min]);
        if (!m) throw DataError(source, row.line, "unknown mineral '" + f[c_min] + "'");
        r.mineral = *m;
        auto k = parse_source_kind(f[c_kind]);
        if (!k) throw DataError(source, row.line, "unknown source_kind '" + f[c_kind] + "'");
        r.source_kind = *k;
        r.country = f[c_cty];
        try {
            r.quantity = Tonnes::parse(f[c_qty]);
        } catch (const std::exception& e) {
            throw DataError(source, row.line, e.what());
        }
        r.basis_note = f[c_note];
        out.push_back(std::move(r));
    }
    return out;
}

SupplyTable load_supply(std::span<const SupplyRecord> records) {
    SupplyTable table;
    std::set<std::tuple<SupplyBasis, MineralId, std::string, SourceKind>> seen;
    for (const auto& r : records) {
        auto fail = [&](const std::string& msg) { return DataError(r.source, r.line, msg); };
        if (r.quantity.negative()) throw fail("negative quantity " + r.quantity.to_string());
        if (trim(r.country).empty()) throw fail("empty country");
        if (r.is_bauxite() && r.mineral != MineralId::Aluminum) {
            throw fail("bauxite conversion note on a non-aluminum record");
        }
        if (!seen.emplace(r.basis, r.mineral, to_lower(trim(r.country)), r.source_kind).second) {
            throw fail("duplicate record for (" + std::string(to_string(r.mineral)) + ", " + r.country +
                       ", " + std::string(to_string(r.source_kind)) + ")");
        }
        auto& totals = r.basis == SupplyBasis::Production ? table.production : table.reserves;
        totals[r.mineral] += r.contribution();
        table.provenance.push_back(r);
    }
    return table;
}

AddedSupplySpec read_added_supply(std::istream& in, const std::string& source) {
    const CsvTable t = read_csv(in, source);
    const auto c_min = t.column("mineral");
    const auto c_top = t.column("top_producer");
    const auto c_add = t.column("addition");
    AddedSupplySpec spec;
    PerMineral<bool> seen{};
    for (const auto& row : t.rows) {
        auto m = parse_mineral(row.fields[c_min]);
        if (!m) throw DataError(source, row.line, "unknown mineral '" + row.fields[c_min] + "'");
        if (seen[*m]) throw DataError(source, row.line, "duplicate mineral");
        seen[*m] = true;
        try {
            spec.additions[*m] = Tonnes::parse(row.fields[c_add]);
        } catch (const std::exception& e) {
            throw DataError(source, row.line, e.what());
        }
        if (spec.additions[*m].negative()) throw DataError(source, row.line, "negative addition");
        spec.top_producer[*m] = row.fields[c_top];
    }
    return spec;
}

SupplyTable apply_added_supply(const SupplyTable& base, const AddedSupplySpec& spec) {
    SupplyTable out = base;
    for (MineralId m : kAllMinerals) {
        const Tonnes add = spec.additions[m];
        if (add.negative()) throw std::invalid_argument("negative added supply");
        if (add.grams() == 0) continue;
        out.production[m] += add;
        SupplyRecord r;
        r.basis = SupplyBasis::Production;
        r.mineral = m;
        r.country = spec.top_producer[m].empty() ? "unspecified" : spec.top_producer[m];
        r.source_kind = SourceKind::AddedSupply;
        r.quantity = add;
        r.basis_note = "20% of top producer 2022 output";
        r.source = "added supply";
        out.provenance.push_back(std::move(r));
    }
    return out;
}

PerMineral<double> to_kilograms(const PerMineral<Tonnes>& t) {
    PerMineral<double> kg{};
    for (MineralId m : kAllMinerals) kg[m] = t[m].kilograms();
    return kg;
}

}  // namespace evgap
