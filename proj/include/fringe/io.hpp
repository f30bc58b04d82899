#pragma once

#include <string>
#include <vector>

#include "fringe/field.hpp"

namespace fringe {

// PFM: grayscale "Pf", 32-bit float samples, negative scale marker for
// little-endian payload, scanlines stored bottom-to-top. Round-trips are
// bit-exact at float32 precision.
void write_pfm(const RealField& f, const std::string& path);
RealField read_pfm(const std::string& path);

// PGM: P5 binary, 8- or 16-bit. Samples are scaled from [lo, hi] and clamped.
void write_pgm(const RealField& f, const std::string& path, double lo, double hi,
               bool sixteen_bit = false);
RealField read_pgm(const std::string& path);

/// RFC-4180-style field quoting: quotes are doubled, fields containing
/// commas, quotes or newlines are wrapped in quotes.
std::string csv_quote(const std::string& field);

/// Joins already-quoted cells into one CSV line (no trailing newline).
std::string csv_row(const std::vector<std::string>& cells);

/// Shortest decimal form that round-trips a double exactly.
std::string format_double(double v);

}  // namespace fringe
