#pragma once

// SQGF1 field snapshots.
//
// A file is a sequence of records. Each record is
//
//   "SQGF1"            5 bytes, ASCII magic
//   n                  uint32, little-endian
//   box length L       IEEE-754 binary64, little-endian
//   name length        uint32, little-endian
//   name               UTF-8 bytes, no terminator
//   values             n*n binary64, little-endian, row-major (row index
//                      along x2, column index along x1)
//
// Vector fields are stored as two consecutive records named "<name>:x" and
// "<name>:y". Values round-trip bit-exactly.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "sqg/field.hpp"

namespace sqg {

struct NamedField {
  std::string name;
  ScalarField field;
};

void write_record(std::ostream& os, const std::string& name, const ScalarField& f);
// Reads records until end of stream. Records with equal (n, L) share one grid.
std::vector<NamedField> read_records(std::istream& is);

void write_snapshot(const std::filesystem::path& path, const std::vector<NamedField>& fields);
void write_snapshot(const std::filesystem::path& path, const std::string& name, const ScalarField& f);
void write_snapshot(const std::filesystem::path& path, const std::string& name, const VectorField2& u);
std::vector<NamedField> read_snapshot(const std::filesystem::path& path);

// Picks the two components "<name>:x", "<name>:y" out of a record list.
VectorField2 find_vector(const std::vector<NamedField>& records, const std::string& name);

}  // namespace sqg
