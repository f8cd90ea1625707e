#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meshnet/tabular.hpp"

namespace meshnet {

// Schema file: one attribute per line as "name:kind:role" with kind one of
// int, dec<places> (e.g. dec1), month, date-dm, time-hm, cat and role input
// or target. Blank lines and lines starting with '#' are skipped.
Schema parse_schema(std::istream& in);
Schema load_schema_file(const std::string& path);

// The schema-file spelling of an attribute's kind ("dec1", "date-dm", ...).
std::string kind_token(const AttributeSpec& spec);

// Comma-separated rows under a header that must match the schema attribute
// names in order; one optional leading serial column is skipped. Values are
// parsed at the declared kind and precision.
std::vector<Record> ingest_csv(std::istream& in, const Schema& schema);
std::vector<Record> ingest_csv_file(const std::string& path, const Schema& schema);

}  // namespace meshnet
