#include "meshnet/image.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

const std::set<std::string> kEight = {"E", "W", "N", "S", "NE", "NW", "SE", "SW"};

std::string two_digits(int code) {
  std::string s = std::to_string(code);
  return s.size() < 2 ? "0" + s : s;
}

std::string pixel_token(int col, int row, int code) {
  return "px:" + std::to_string(col) + "," + std::to_string(row) + ":" +
         two_digits(code);
}

struct PixelCell {
  int col, row, code;
};

// Token("px:<col>,<row>:<code>") -> coordinates and code
std::optional<PixelCell> parse_pixel_token(const Value& payload) {
  const auto* token = std::get_if<Token>(&payload);
  if (!token || token->text.rfind("px:", 0) != 0) return std::nullopt;
  const std::string body = token->text.substr(3);
  const auto comma = body.find(',');
  const auto colon = body.find(':', comma == std::string::npos ? 0 : comma);
  if (comma == std::string::npos || colon == std::string::npos) return std::nullopt;
  try {
    return PixelCell{std::stoi(body.substr(0, comma)),
                     std::stoi(body.substr(comma + 1, colon - comma - 1)),
                     std::stoi(body.substr(colon + 1))};
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

PixelGrid parse_pgm(std::istream& in) {
  // header tokens with '#' comments running to end of line
  auto next_token = [&in]() -> std::string {
    std::string tok;
    char ch;
    while (in.get(ch)) {
      if (ch == '#') {
        while (in.get(ch) && ch != '\n') {
        }
        continue;
      }
      if (std::isspace(static_cast<unsigned char>(ch))) {
        if (!tok.empty()) return tok;
        continue;
      }
      tok.push_back(ch);
    }
    return tok;
  };

  auto next_int = [&](const char* what) {
    const std::string tok = next_token();
    if (tok.empty() ||
        !std::all_of(tok.begin(), tok.end(),
                     [](unsigned char c) { return std::isdigit(c); })) {
      fail(Errc::MalformedImage, std::string("expected ") + what + ", got '" + tok + "'");
    }
    try {
      return std::stoi(tok);
    } catch (const std::exception&) {
      fail(Errc::MalformedImage, std::string(what) + " '" + tok + "' out of range");
    }
  };

  const int width = next_int("width");
  const int height = next_int("height");
  const int maxval = next_int("maxval");
  if (width <= 0 || height <= 0) {
    fail(Errc::MalformedImage, "grid dimensions must be positive");
  }
  if (maxval != 255) {
    fail(Errc::UnsupportedFormat, "only maxval 255 grayscale is supported");
  }

  PixelGrid grid;
  grid.width = width;
  grid.height = height;
  grid.grayscale = true;
  grid.cells.reserve(static_cast<size_t>(width) * height);
  for (int i = 0; i < width * height; ++i) {
    const int v = next_int("pixel value");
    if (v > maxval) fail(Errc::MalformedImage, "pixel value exceeds maxval");
    grid.cells.push_back(v);
  }
  if (!next_token().empty()) fail(Errc::MalformedImage, "trailing data after pixels");
  return grid;
}

PixelGrid parse_palette(std::istream& in) {
  PixelGrid grid;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream row(line);
    std::vector<int> codes;
    std::string tok;
    while (row >> tok) {
      if (tok.size() != 2 || !std::isdigit(static_cast<unsigned char>(tok[0])) ||
          !std::isdigit(static_cast<unsigned char>(tok[1]))) {
        fail(Errc::MalformedImage, "palette cell '" + tok + "' is not two digits");
      }
      codes.push_back((tok[0] - '0') * 10 + (tok[1] - '0'));
    }
    if (codes.empty()) continue;  // blank line
    if (grid.width == 0) {
      grid.width = static_cast<int>(codes.size());
    } else if (static_cast<int>(codes.size()) != grid.width) {
      fail(Errc::MalformedImage, "ragged palette row");
    }
    grid.cells.insert(grid.cells.end(), codes.begin(), codes.end());
    ++grid.height;
  }
  if (grid.width == 0) fail(Errc::MalformedImage, "empty palette grid");
  return grid;
}

}  // namespace

bool is_concrete_direction(const std::string& label) {
  return kEight.count(label) != 0;
}

const std::set<std::string>& all_directions() { return kEight; }

PixelGrid load_grid(std::istream& in) {
  // sniff the magic without consuming palette content
  std::string head;
  in >> head;
  if (head == "P2") return parse_pgm(in);
  if (head == "P5") fail(Errc::UnsupportedFormat, "binary PGM (P5) is not supported");
  if (head.size() == 2 && std::isdigit(static_cast<unsigned char>(head[0])) &&
      std::isdigit(static_cast<unsigned char>(head[1]))) {
    in.clear();
    in.seekg(0);
    return parse_palette(in);
  }
  fail(Errc::UnsupportedFormat, "unrecognized image format '" + head + "'");
}

PixelGrid load_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::MalformedImage, "cannot open '" + path + "'");
  return load_grid(in);
}

PixelGrid quantize(const PixelGrid& grid, int threshold) {
  if (!grid.grayscale) return grid;
  PixelGrid out = grid;
  out.grayscale = false;
  for (int& cell : out.cells) cell = cell < threshold ? 1 : 0;
  return out;
}

SubnetId image_to_subnet(Mesh& mesh, const PixelGrid& grid,
                         const std::string& name, bool keep_background,
                         std::optional<SubnetId> parent) {
  const bool any_foreground =
      std::any_of(grid.cells.begin(), grid.cells.end(),
                  [&](int c) { return c != grid.background_code; });
  if (!any_foreground) fail(Errc::EmptyImage, "grid has no foreground pixels");

  const SubnetId sid = mesh.create_subnet(name, SubnetRole::Shape, parent);
  std::map<std::pair<int, int>, NeuronId> placed;

  for (int row = 0; row < grid.height; ++row) {
    for (int col = 0; col < grid.width; ++col) {
      const int code = grid.at(col, row);
      if (code == grid.background_code && !keep_background) continue;
      const auto [id, created] =
          mesh.insert_value(sid, Token{pixel_token(col, row, code)});
      (void)created;
      placed[{col, row}] = id;

      // already-created 8-neighbors sit west, northwest, north, northeast;
      // the label is the direction from the scan-earlier pixel to this one.
      // An anti-diagonal pair additionally carries NE: scanning columns
      // first instead of rows first makes this pixel the earlier endpoint,
      // and the stored texture must not depend on that choice.
      struct Probe {
        int dc, dr;
        std::set<std::string> labels;
      };
      static const Probe kProbes[] = {{-1, 0, {"E"}},
                                      {-1, -1, {"SE"}},
                                      {0, -1, {"S"}},
                                      {1, -1, {"SW", "NE"}}};
      for (const Probe& p : kProbes) {
        const auto hit = placed.find({col + p.dc, row + p.dr});
        if (hit != placed.end()) {
          mesh.connect({hit->second, id}, p.labels, false);
        }
      }
    }
  }
  return sid;
}

ImageModel ensure_image_model(Mesh& mesh) {
  ImageModel model;
  const auto super = mesh.find_subnet("shapes");
  model.super_subnet =
      super ? *super : mesh.create_subnet("shapes", SubnetRole::Super);
  const auto labels = mesh.find_subnet("shape-labels");
  model.label_subnet =
      labels ? *labels : mesh.create_subnet("shape-labels", SubnetRole::Label);
  return model;
}

SubnetId register_labeled_image(Mesh& mesh, ImageModel& model,
                                const PixelGrid& grid, const std::string& label,
                                bool keep_background) {
  if (label.empty()) fail(Errc::InvalidArgument, "image label must not be empty");
  const SubnetId shape =
      image_to_subnet(mesh, grid, mesh.make_unique_name(label), keep_background,
                      model.super_subnet);
  const auto [cell, created] =
      mesh.insert_value(model.label_subnet, Category{label});
  (void)created;
  mesh.connect({cell, EndpointRef(shape)});
  model.entries.push_back({shape, cell, subnet_signature(mesh, shape)});
  return shape;
}

SubnetSignature subnet_signature(const Mesh& mesh, SubnetId shape) {
  const Subnet& s = mesh.subnet(shape);
  if (s.role != SubnetRole::Shape) {
    fail(Errc::NotAShapeSubnet, "'" + s.name + "' is not a shape subnet");
  }

  SubnetSignature sig;
  for (const NeuronId n : s.order) {
    if (const auto cell = parse_pixel_token(mesh.neuron(n).payload)) {
      ++sig.counts[cell->code];
    }
  }

  // union of intra-subnet connection labels, in connection-id order so the
  // INHERIT resolution below is deterministic
  bool saw_inherit = false;
  std::optional<std::string> first_concrete;
  for (const auto& [cid, conn] : mesh.connections()) {
    (void)cid;
    const bool intra = std::all_of(
        conn.endpoints.begin(), conn.endpoints.end(), [&](const EndpointRef& e) {
          return e.is_neuron() && s.contains(e.neuron());
        });
    if (!intra || conn.endpoints.size() < 2) continue;
    for (const std::string& label : conn.labels) {
      if (label == kInheritDirection) {
        saw_inherit = true;
        continue;
      }
      if (is_concrete_direction(label) && !first_concrete) first_concrete = label;
      sig.labels.insert(label);
    }
  }
  if (saw_inherit && first_concrete) sig.labels.insert(*first_concrete);
  return sig;
}

ClassifyResult classify_image(const Mesh& mesh, const ImageModel& model,
                              const PixelGrid& grid, bool keep_background) {
  // the test image lives in a scratch mesh; the trained model is read-only
  Mesh scratch;
  scratch.config = mesh.config;
  const SubnetId test = image_to_subnet(scratch, grid, "test", keep_background);
  if (model.entries.empty()) fail(Errc::EmptyModel, "no registered images");

  ClassifyResult result;
  result.test_signature = subnet_signature(scratch, test);

  for (const ImageEntry& entry : model.entries) {
    std::set<std::string> effective;
    for (const std::string& label : entry.signature.labels) {
      if (label == kAnyDirection) {
        effective.insert(kEight.begin(), kEight.end());
      } else {
        effective.insert(label);
      }
    }
    std::vector<std::string> delta;
    std::set_symmetric_difference(effective.begin(), effective.end(),
                                  result.test_signature.labels.begin(),
                                  result.test_signature.labels.end(),
                                  std::back_inserter(delta));

    long long count_distance = 0;
    std::set<int> codes;
    for (const auto& [code, n] : entry.signature.counts) {
      (void)n;
      codes.insert(code);
    }
    for (const auto& [code, n] : result.test_signature.counts) {
      (void)n;
      codes.insert(code);
    }
    for (const int code : codes) {
      const auto a = entry.signature.counts.find(code);
      const auto b = result.test_signature.counts.find(code);
      count_distance += std::abs((a == entry.signature.counts.end() ? 0 : a->second) -
                                 (b == result.test_signature.counts.end() ? 0 : b->second));
    }

    const std::string label =
        std::get<Category>(mesh.neuron(entry.label_neuron).payload).text;
    result.ranking.push_back(
        {entry.shape, label, static_cast<long long>(delta.size()), count_distance});
  }

  std::sort(result.ranking.begin(), result.ranking.end(),
            [](const ClassifyScore& a, const ClassifyScore& b) {
              return std::tuple(a.label_mismatch, a.count_distance, raw(a.shape)) <
                     std::tuple(b.label_mismatch, b.count_distance, raw(b.shape));
            });
  result.label = result.ranking.front().label;

  std::ostringstream os;
  auto render_sig = [](const SubnetSignature& sig) {
    std::ostringstream s;
    s << "counts {";
    bool first = true;
    for (const auto& [code, n] : sig.counts) {
      s << (first ? "" : ", ") << two_digits(code) << ":" << n;
      first = false;
    }
    s << "} labels {";
    first = true;
    for (const auto& label : sig.labels) {
      s << (first ? "" : ", ") << label;
      first = false;
    }
    s << "}";
    return s.str();
  };
  os << "test " << render_sig(result.test_signature) << "\n";
  for (const ClassifyScore& sc : result.ranking) {
    os << sc.label << " (s" << raw(sc.shape) << "): label mismatch "
       << sc.label_mismatch << ", count distance " << sc.count_distance << "\n";
  }
  os << "verdict " << result.label << "\n";
  result.trace = os.str();
  return result;
}

SubnetId build_unit_subnet(Mesh& mesh, const std::string& unit_name,
                           int pixels_per_unit) {
  if (unit_name.empty()) fail(Errc::InvalidArgument, "unit name must not be empty");
  if (pixels_per_unit < 1) {
    fail(Errc::InvalidRange, "a unit needs at least one pixel");
  }
  const SubnetId sid =
      mesh.create_subnet(mesh.make_unique_name(unit_name), SubnetRole::Shape);
  std::vector<NeuronId> chain;
  for (int i = 0; i < pixels_per_unit; ++i) {
    chain.push_back(mesh.insert_value(sid, Token{pixel_token(0, i, 1)}).first);
  }
  for (size_t i = 0; i + 1 < chain.size(); ++i) {
    mesh.connect({chain[i], chain[i + 1]}, {kAnyDirection}, false);
  }

  const auto units = mesh.find_subnet("units");
  const SubnetId label_home =
      units ? *units : mesh.create_subnet("units", SubnetRole::Label);
  const auto [label, created] = mesh.insert_value(label_home, Token{unit_name});
  (void)created;
  mesh.connect({label, EndpointRef(sid)});
  return sid;
}

Decimal measure_extent(const Mesh& mesh, SubnetId shape, SubnetId unit) {
  const Subnet& s = mesh.subnet(shape);
  const Subnet& u = mesh.subnet(unit);
  if (s.role != SubnetRole::Shape || u.role != SubnetRole::Shape) {
    fail(Errc::NotAShapeSubnet, "measurement needs two shape subnets");
  }

  std::optional<int> min_col, max_col, min_row, max_row;
  for (const NeuronId n : s.order) {
    const auto cell = parse_pixel_token(mesh.neuron(n).payload);
    if (!cell) continue;
    min_col = min_col ? std::min(*min_col, cell->col) : cell->col;
    max_col = max_col ? std::max(*max_col, cell->col) : cell->col;
    min_row = min_row ? std::min(*min_row, cell->row) : cell->row;
    max_row = max_row ? std::max(*max_row, cell->row) : cell->row;
  }
  if (!min_col) fail(Errc::EmptySubnet, "'" + s.name + "' holds no pixels");

  long long chain = 0;
  for (const NeuronId n : u.order) {
    if (parse_pixel_token(mesh.neuron(n).payload)) ++chain;
  }
  if (chain == 0) fail(Errc::EmptySubnet, "'" + u.name + "' holds no pixel chain");

  const long long extent =
      std::max(*max_col - *min_col + 1, *max_row - *min_row + 1);
  // one decimal place, halves away from zero
  const long long scaled = (10 * extent * 2 + chain) / (2 * chain);
  return Decimal{scaled, 1};
}

}  // namespace meshnet
