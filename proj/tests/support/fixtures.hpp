#pragma once

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

#include "safpat/facts.hpp"

namespace safpat::testing {

inline std::string fixture_path(std::string_view name) {
    return std::string(SAFPAT_FIXTURE_DIR) + "/" + std::string(name);
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline SystemModel load_fixture(std::string_view name) {
    auto r = parse_facts(read_file(fixture_path(name)));
    if (!r.ok()) throw std::runtime_error("fixture " + std::string(name) + " failed to parse");
    return std::move(*r.model);
}

}  // namespace safpat::testing
