#pragma once

#include <optional>
#include <string>

#include "meshnet/image.hpp"
#include "meshnet/mesh.hpp"
#include "meshnet/tabular.hpp"

namespace meshnet {

inline constexpr const char* kArchiveFormat = "meshnet/1";

// Everything one CLI mesh file carries: the graph itself plus the optional
// tabular schema and image model that interpret it.
struct Document {
  Mesh mesh;
  std::optional<Schema> schema;
  std::optional<ImageModel> image_model;
};

// JSON text with sorted keys; identical documents serialize byte-identically,
// so golden tests can diff archives directly.
std::string save_document(const Document& doc);
void save_document_file(const Document& doc, const std::string& path);

Document load_document(const std::string& text);
Document load_document_file(const std::string& path);

}  // namespace meshnet
