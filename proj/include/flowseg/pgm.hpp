#pragma once

#include <string>

#include "flowseg/label_map.hpp"

namespace flowseg {

// ASCII PGM (P2). Labels are stored verbatim as gray values.
LabelMap read_pgm(const std::string& path);

// Writes one grid row per line; maxval is max(1, largest label).
void write_pgm(const LabelMap& map, const std::string& path);

}  // namespace flowseg
