#include "meshnet/csv.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <sstream>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

std::string trim(const std::string& s) {
  size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!line.empty() && line.back() == sep) out.push_back("");
  return out;
}

std::pair<ValueKind, int> parse_kind_token(const std::string& token, int line_no) {
  if (token == "int") return {ValueKind::Integer, 0};
  if (token == "month") return {ValueKind::Month, 0};
  if (token == "date-dm") return {ValueKind::DateDM, 0};
  if (token == "time-hm") return {ValueKind::TimeHM, 0};
  if (token == "cat") return {ValueKind::Category, 0};
  if (token.rfind("dec", 0) == 0 && token.size() > 3 &&
      std::all_of(token.begin() + 3, token.end(),
                  [](unsigned char c) { return std::isdigit(c); })) {
    const int places = std::stoi(token.substr(3));
    if (places >= 1 && places <= 9) return {ValueKind::Decimal, places};
  }
  fail(Errc::SchemaFileError,
       "line " + std::to_string(line_no) + ": unknown kind '" + token + "'");
}

}  // namespace

Schema parse_schema(std::istream& in) {
  Schema schema;
  std::string line;
  int line_no = 0;
  int targets = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = trim(line);
    if (body.empty() || body[0] == '#') continue;
    const auto parts = split(body, ':');
    if (parts.size() != 3) {
      fail(Errc::SchemaFileError, "line " + std::to_string(line_no) +
                                      ": expected name:kind:role, got '" + body + "'");
    }
    AttributeSpec spec;
    spec.name = parts[0];
    if (spec.name.empty()) {
      fail(Errc::SchemaFileError,
           "line " + std::to_string(line_no) + ": empty attribute name");
    }
    std::tie(spec.kind, spec.places) = parse_kind_token(parts[1], line_no);
    if (parts[2] == "input") {
      spec.role = AttrRole::Input;
    } else if (parts[2] == "target") {
      spec.role = AttrRole::Target;
      ++targets;
    } else {
      fail(Errc::SchemaFileError, "line " + std::to_string(line_no) +
                                      ": role must be input or target, got '" +
                                      parts[2] + "'");
    }
    if (schema.find(spec.name)) {
      fail(Errc::SchemaFileError, "line " + std::to_string(line_no) +
                                      ": attribute '" + spec.name + "' repeats");
    }
    schema.attributes.push_back(std::move(spec));
  }
  if (schema.attributes.empty()) {
    fail(Errc::SchemaFileError, "schema file declares no attributes");
  }
  if (targets != 1) {
    fail(Errc::SchemaFileError, "schema file needs exactly one target line, found " +
                                    std::to_string(targets));
  }
  return schema;
}

Schema load_schema_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::SchemaFileError, "cannot open '" + path + "'");
  return parse_schema(in);
}

std::string kind_token(const AttributeSpec& spec) {
  switch (spec.kind) {
    case ValueKind::Integer:  return "int";
    case ValueKind::Decimal:  return "dec" + std::to_string(spec.places);
    case ValueKind::Month:    return "month";
    case ValueKind::DateDM:   return "date-dm";
    case ValueKind::TimeHM:   return "time-hm";
    case ValueKind::Category: return "cat";
    default:                  return kind_name(spec.kind);
  }
}

std::vector<Record> ingest_csv(std::istream& in, const Schema& schema) {
  std::string line;
  if (!std::getline(in, line)) fail(Errc::HeaderMismatch, "empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split(line, ',');
  const size_t want = schema.attributes.size();
  size_t skip = 0;
  auto matches = [&](size_t offset) {
    if (header.size() != want + offset) return false;
    for (size_t i = 0; i < want; ++i) {
      if (header[i + offset] != schema.attributes[i].name) return false;
    }
    return true;
  };
  if (matches(1)) {
    skip = 1;  // leading serial column
  } else if (!matches(0)) {
    fail(Errc::HeaderMismatch, "header '" + line + "' does not match the schema");
  }

  std::vector<Record> records;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const auto fields = split(line, ',');
    if (fields.size() != want + skip) {
      fail(Errc::RowParseError, "line " + std::to_string(line_no) + ": expected " +
                                    std::to_string(want + skip) + " fields, got " +
                                    std::to_string(fields.size()));
    }
    Record record;
    for (size_t i = 0; i < want; ++i) {
      const AttributeSpec& spec = schema.attributes[i];
      try {
        record[spec.name] = parse_value(spec.kind, fields[i + skip], spec.places);
      } catch (const Error& e) {
        fail(Errc::RowParseError, "line " + std::to_string(line_no) + ", '" +
                                      spec.name + "': " + e.what());
      }
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<Record> ingest_csv_file(const std::string& path, const Schema& schema) {
  std::ifstream in(path);
  if (!in) fail(Errc::RowParseError, "cannot open '" + path + "'");
  return ingest_csv(in, schema);
}

}  // namespace meshnet
