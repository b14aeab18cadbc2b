#pragma once

#include <cmath>
#include <filesystem>
#include <sstream>
#include <string>

#include "evgap/model.hpp"

namespace evgap::test {

inline std::filesystem::path data_dir() { return EVGAP_TEST_DATA_DIR; }

// Shipped dataset, loaded once per binary.
inline const Model& shipped() {
    static const Model m(load_inputs(DataPaths::in(data_dir())));
    return m;
}

inline double rel_err(double actual, double expected) {
    return expected == 0.0 ? std::abs(actual) : std::abs(actual - expected) / std::abs(expected);
}

inline std::istringstream text(const std::string& s) { return std::istringstream(s); }

}  // namespace evgap::test
