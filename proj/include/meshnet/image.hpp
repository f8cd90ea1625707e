#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "meshnet/mesh.hpp"

namespace meshnet {

// A rectangular pixel grid. Grayscale grids hold raw 0..255 samples until
// quantize() maps them onto the two-code black/white palette; palette grids
// hold color codes directly (00 = background).
struct PixelGrid {
  int width = 0;
  int height = 0;
  std::vector<int> cells;  // row-major, top-left first
  int background_code = 0;
  bool grayscale = false;

  int at(int col, int row) const { return cells[row * width + col]; }
};

// The ten direction labels: eight compass directions between adjacent
// pixels plus the two wildcards used only inside hand-built shape priors.
bool is_concrete_direction(const std::string& label);
const std::set<std::string>& all_directions();

inline constexpr const char* kAnyDirection = "ANY";
inline constexpr const char* kInheritDirection = "INHERIT";

// Per-color neuron counts plus the set of direction labels; coordinates do
// not participate, so the signature is translation invariant.
struct SubnetSignature {
  std::map<int, long long> counts;
  std::set<std::string> labels;

  bool operator==(const SubnetSignature&) const = default;
};

struct ImageEntry {
  SubnetId shape{};
  NeuronId label_neuron{};
  SubnetSignature signature;
};

struct ImageModel {
  SubnetId super_subnet{};
  SubnetId label_subnet{};
  std::vector<ImageEntry> entries;
};

struct ClassifyScore {
  SubnetId shape{};
  std::string label;
  long long label_mismatch = 0;
  long long count_distance = 0;
};

struct ClassifyResult {
  std::string label;
  std::vector<ClassifyScore> ranking;  // best first
  SubnetSignature test_signature;
  std::string trace;
};

// Parses PGM "P2" (ASCII grayscale, maxval 255) or a palette-grid text file
// (rows of two-digit codes separated by spaces). Binary "P5" is rejected.
PixelGrid load_grid(std::istream& in);
PixelGrid load_grid_file(const std::string& path);

// Grayscale sample < threshold becomes foreground code 1 (black ink), the
// rest background code 0. Palette grids pass through unchanged.
PixelGrid quantize(const PixelGrid& grid, int threshold);

// Row-major transform: one neuron per stored cell, payload
// Token("px:<col>,<row>:<code>"), connections to every already-created
// 8-neighbor labeled with the direction between the pixels. By default only
// foreground cells are stored; keep_background also stores code-0 cells so
// alternating patterns keep their texture.
SubnetId image_to_subnet(Mesh& mesh, const PixelGrid& grid,
                         const std::string& name, bool keep_background = false,
                         std::optional<SubnetId> parent = std::nullopt);

// Finds or creates the super subnet ("shapes") and label subnet
// ("shape-labels") that anchor registered images.
ImageModel ensure_image_model(Mesh& mesh);

SubnetId register_labeled_image(Mesh& mesh, ImageModel& model,
                                const PixelGrid& grid, const std::string& label,
                                bool keep_background = false);

SubnetSignature subnet_signature(const Mesh& mesh, SubnetId shape);

// Scores every registered entry against the (transient) test subnet:
// lexicographic (label mismatch, count distance), ties to the smaller
// subnet id. The model mesh is never modified.
ClassifyResult classify_image(const Mesh& mesh, const ImageModel& model,
                              const PixelGrid& grid,
                              bool keep_background = false);

// A chain of pixels_per_unit neurons connected with ANY labels plus a
// Token(unit_name) label neuron in the "units" subnet.
SubnetId build_unit_subnet(Mesh& mesh, const std::string& unit_name,
                           int pixels_per_unit);

// max(bounding-box width, height) of the shape in pixels divided by the
// unit chain length, at one decimal place.
Decimal measure_extent(const Mesh& mesh, SubnetId shape, SubnetId unit);

}  // namespace meshnet
