#include <doctest.h>

#include <functional>
#include <set>
#include <sstream>
#include <string>

#include "meshnet/error.hpp"
#include "meshnet/image.hpp"
#include "meshnet/mesh.hpp"

using namespace meshnet;

namespace {

bool fails_with(Errc code, const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

std::string data_path(const std::string& name) {
  return std::string(MESHNET_DATA_DIR) + "/" + name;
}

PixelGrid grid_from(const std::string& text) {
  std::istringstream in(text);
  return load_grid(in);
}

/* The two-code black/white view of a fixture file. */
PixelGrid fixture(const std::string& name) {
  return quantize(load_grid_file(data_path(name)), 128);
}

}  // namespace

TEST_CASE("ASCII grayscale parses; binary and odd depths do not") {
  const PixelGrid line = load_grid_file(data_path("line10.pgm"));
  CHECK(line.width == 1);
  CHECK(line.height == 10);
  CHECK(line.grayscale);
  CHECK(line.cells.size() == 10);
  CHECK(line.at(0, 0) == 0);  // black ink on white paper

  // comments are skipped wherever whitespace may appear
  const PixelGrid tiny = grid_from("P2\n# note\n2 2\n255\n0 255\n255 0\n");
  CHECK(tiny.width == 2);
  CHECK(tiny.at(0, 0) == 0);
  CHECK(tiny.at(1, 0) == 255);

  CHECK(fails_with(Errc::UnsupportedFormat,
                   [] { grid_from("P5\n2 2\n255\n0 0 0 0"); }));
  CHECK(fails_with(Errc::UnsupportedFormat,
                   [] { grid_from("P2\n2 2\n100\n0 0 0 0"); }));
  CHECK(fails_with(Errc::UnsupportedFormat,
                   [] { grid_from("P7\n2 2\n255\n0 0 0 0"); }));
  CHECK(fails_with(Errc::MalformedImage,
                   [] { grid_from("P2\n2 2\n255\n0 0 0"); }));  // truncated
  CHECK(fails_with(Errc::MalformedImage,
                   [] { grid_from("P2\n2 2\n255\n0 0 0 0 0"); }));  // trailing
  CHECK(fails_with(Errc::MalformedImage,
                   [] { grid_from("P2\n2 2\n255\n0 0 0 999"); }));  // > maxval
  CHECK(fails_with(Errc::MalformedImage,
                   [] { grid_from("P2\n0 2\n255\n"); }));
  CHECK(fails_with(Errc::MalformedImage, [] { load_grid_file("/nonesuch.pgm"); }));
}

TEST_CASE("palette grids carry two-digit codes directly") {
  const PixelGrid p = load_grid_file(data_path("palette3x4.txt"));
  CHECK_FALSE(p.grayscale);
  CHECK(p.width == 4);
  CHECK(p.height == 3);
  CHECK(p.at(0, 0) == 1);
  CHECK(p.at(1, 1) == 4);
  CHECK(p.background_code == 0);

  const PixelGrid dotted = load_grid_file(data_path("dotted10.txt"));
  CHECK(dotted.width == 1);
  CHECK(dotted.height == 10);
  CHECK(dotted.at(0, 0) == 1);
  CHECK(dotted.at(0, 1) == 0);

  CHECK(fails_with(Errc::MalformedImage, [] { grid_from("01 02\n03\n"); }));
  CHECK(fails_with(Errc::MalformedImage, [] { grid_from("01 2\n"); }));
}

TEST_CASE("quantizing buckets strictly below the threshold as ink") {
  const PixelGrid g = grid_from("P2\n4 1\n255\n0 127 128 255\n");
  const PixelGrid q = quantize(g, 128);
  CHECK_FALSE(q.grayscale);
  CHECK(q.at(0, 0) == 1);
  CHECK(q.at(1, 0) == 1);   // 127 < 128
  CHECK(q.at(2, 0) == 0);   // 128 is not
  CHECK(q.at(3, 0) == 0);

  // palette grids pass through untouched
  const PixelGrid p = load_grid_file(data_path("palette3x4.txt"));
  CHECK(quantize(p, 128).cells == p.cells);
}

TEST_CASE("a vertical line becomes a chain of south-labeled cells") {
  Mesh mesh;
  const SubnetId shape = image_to_subnet(mesh, fixture("line10.pgm"), "line");
  CHECK(mesh.subnet(shape).size() == 10);
  CHECK(mesh.subnet(shape).role == SubnetRole::Shape);
  CHECK(mesh.connections().size() == 9);
  for (const auto& [cid, c] : mesh.connections()) {
    (void)cid;
    CHECK(c.labels == std::set<std::string>{"S"});
    CHECK_FALSE(c.directed);
  }
  CHECK(mesh.find_neuron(shape, Token{"px:0,0:01"}).has_value());
  CHECK(mesh.find_neuron(shape, Token{"px:0,9:01"}).has_value());
  CHECK_FALSE(mesh.find_neuron(shape, Token{"px:0,10:01"}).has_value());

  const SubnetSignature sig = subnet_signature(mesh, shape);
  CHECK(sig.counts == std::map<int, long long>{{1, 10}});
  CHECK(sig.labels == std::set<std::string>{"S"});
}

TEST_CASE("adjacency labels distinguish the two diagonals") {
  Mesh mesh;
  // main diagonal: the later pixel sits southeast of the earlier one
  const SubnetId back = image_to_subnet(mesh, grid_from("01 00\n00 01\n"), "back");
  CHECK(subnet_signature(mesh, back).labels == std::set<std::string>{"SE"});

  // anti-diagonal: one connection carrying both readings of the slant
  const SubnetId fwd = image_to_subnet(mesh, grid_from("00 01\n01 00\n"), "fwd");
  CHECK(subnet_signature(mesh, fwd).labels == std::set<std::string>{"NE", "SW"});

  // a single horizontal pair reads west-to-east
  const SubnetId flat = image_to_subnet(mesh, grid_from("01 01\n"), "flat");
  CHECK(subnet_signature(mesh, flat).labels == std::set<std::string>{"E"});

  // the anti-diagonal pair is one connection, not two
  CHECK(mesh.subnet(fwd).size() == 2);
}

TEST_CASE("background cells are dropped unless explicitly kept") {
  Mesh mesh;
  const PixelGrid dotted = load_grid_file(data_path("dotted10.txt"));

  const SubnetId sparse = image_to_subnet(mesh, dotted, "sparse");
  CHECK(mesh.subnet(sparse).size() == 5);
  const SubnetSignature sparse_sig = subnet_signature(mesh, sparse);
  CHECK(sparse_sig.counts == std::map<int, long long>{{1, 5}});
  CHECK(sparse_sig.labels.empty());  // the kept cells never touch

  const SubnetId full = image_to_subnet(mesh, dotted, "full", /*keep_background=*/true);
  CHECK(mesh.subnet(full).size() == 10);
  const SubnetSignature full_sig = subnet_signature(mesh, full);
  CHECK(full_sig.counts == std::map<int, long long>{{0, 5}, {1, 5}});
  CHECK(full_sig.labels == std::set<std::string>{"S"});

  // an all-background grid stores nothing, kept or not
  CHECK(fails_with(Errc::EmptyImage, [&] {
    image_to_subnet(mesh, grid_from("00 00\n00 00\n"), "blank");
  }));
  CHECK(fails_with(Errc::EmptyImage, [&] {
    image_to_subnet(mesh, grid_from("00 00\n00 00\n"), "blank", true);
  }));
}

TEST_CASE("the signature ignores position entirely") {
  Mesh mesh;
  const SubnetId left = image_to_subnet(
      mesh, grid_from("01 00 00\n01 00 00\n01 01 00\n"), "left");
  const SubnetId shifted = image_to_subnet(
      mesh, grid_from("00 00 00 00\n00 01 00 00\n00 01 00 00\n00 01 01 00\n"),
      "shifted");
  CHECK(subnet_signature(mesh, left) == subnet_signature(mesh, shifted));
}

TEST_CASE("the digit fixtures carry the advertised texture") {
  Mesh mesh;
  const SubnetId zero = image_to_subnet(mesh, fixture("digit0.pgm"), "zero");
  const SubnetSignature zero_sig = subnet_signature(mesh, zero);
  CHECK(zero_sig.counts == std::map<int, long long>{{1, 118}});
  CHECK(zero_sig.labels == std::set<std::string>{"E", "S", "SE", "NE", "SW"});

  const SubnetId one = image_to_subnet(mesh, fixture("digit1.pgm"), "one");
  const SubnetSignature one_sig = subnet_signature(mesh, one);
  CHECK(one_sig.counts == std::map<int, long long>{{1, 43}});
  CHECK(one_sig.labels == std::set<std::string>{"E", "S", "SE"});

  const SubnetId probe = image_to_subnet(mesh, fixture("test1.pgm"), "probe");
  const SubnetSignature probe_sig = subnet_signature(mesh, probe);
  CHECK(probe_sig.counts == std::map<int, long long>{{1, 33}});
  CHECK(probe_sig.labels == std::set<std::string>{"E", "S", "SE"});
}

TEST_CASE("registration files shapes under the model subnets") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  CHECK(mesh.subnet(model.super_subnet).name == "shapes");
  CHECK(mesh.subnet(model.super_subnet).role == SubnetRole::Super);
  CHECK(mesh.subnet(model.label_subnet).name == "shape-labels");

  // a second call finds the same subnets instead of duplicating them
  const ImageModel again = ensure_image_model(mesh);
  CHECK(again.super_subnet == model.super_subnet);
  CHECK(again.label_subnet == model.label_subnet);

  const SubnetId line = register_labeled_image(mesh, model, fixture("line10.pgm"), "line");
  CHECK(mesh.subnet(line).name == "line");
  CHECK(mesh.subnet(line).parent == model.super_subnet);
  REQUIRE(model.entries.size() == 1);
  CHECK(model.entries[0].shape == line);
  CHECK(model.entries[0].signature.counts.at(1) == 10);

  // the label neuron joins the shape at subnet level
  const NeuronId cell = model.entries[0].label_neuron;
  CHECK(mesh.neuron(cell).payload == Value{Category{"line"}});
  CHECK(mesh.find_connection({EndpointRef(cell), EndpointRef(line)}, {}).has_value());

  // an identical label registers again under a derived subnet name
  const SubnetId line2 = register_labeled_image(mesh, model, fixture("line12.pgm"), "line");
  CHECK(mesh.subnet(line2).name == "line~2");
  CHECK(model.entries[1].label_neuron == cell);  // same label neuron, deduped
  CHECK(mesh.validate().empty());

  CHECK(fails_with(Errc::InvalidArgument, [&] {
    register_labeled_image(mesh, model, fixture("line10.pgm"), "");
  }));
}

TEST_CASE("classification ranks by label mismatch, then count distance") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  register_labeled_image(mesh, model, fixture("line10.pgm"), "line");
  register_labeled_image(mesh, model, load_grid_file(data_path("dotted10.txt")),
                         "dotted", /*keep_background=*/true);

  const ClassifyResult r = classify_image(mesh, model, fixture("line12.pgm"));
  CHECK(r.label == "line");
  REQUIRE(r.ranking.size() == 2);
  CHECK(r.ranking[0].label == "line");
  CHECK(r.ranking[0].label_mismatch == 0);
  CHECK(r.ranking[0].count_distance == 2);   // 12 cells vs 10
  CHECK(r.ranking[1].label == "dotted");
  CHECK(r.ranking[1].label_mismatch == 0);
  CHECK(r.ranking[1].count_distance == 12);  // |12-5| ink + |0-5| background
  CHECK(r.test_signature.counts == std::map<int, long long>{{1, 12}});

  // the model mesh is untouched by classification
  const size_t neurons = mesh.neurons().size();
  classify_image(mesh, model, fixture("line12.pgm"));
  CHECK(mesh.neurons().size() == neurons);
  CHECK_FALSE(mesh.find_subnet("test").has_value());
}

TEST_CASE("the thin test digit lands on the thin trained digit") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  register_labeled_image(mesh, model, fixture("line10.pgm"), "line");
  register_labeled_image(mesh, model, load_grid_file(data_path("dotted10.txt")),
                         "dotted", true);
  register_labeled_image(mesh, model, fixture("digit0.pgm"), "0");
  register_labeled_image(mesh, model, fixture("digit1.pgm"), "1");

  const ClassifyResult r = classify_image(mesh, model, fixture("test1.pgm"));
  CHECK(r.label == "1");
  REQUIRE(r.ranking.size() == 4);
  CHECK(r.ranking[0].label == "1");
  CHECK(r.ranking[0].label_mismatch == 0);
  CHECK(r.ranking[0].count_distance == 10);  // 43 trained cells vs 33
  CHECK(r.ranking[1].label == "line");
  CHECK(r.ranking[1].label_mismatch == 2);   // no SE or E in a 1-wide bar
  CHECK(r.ranking[1].count_distance == 23);
  CHECK(r.ranking[2].label == "dotted");
  CHECK(r.ranking[2].count_distance == 33);
  CHECK(r.ranking[3].label == "0");
  CHECK(r.ranking[3].label_mismatch == 2);   // the 0 adds NE and SW
  CHECK(r.ranking[3].count_distance == 85);

  CHECK(r.trace.find("verdict 1") != std::string::npos);
  CHECK(r.trace.find("label mismatch 0, count distance 10") != std::string::npos);
}

TEST_CASE("a perfect match scores zero twice; ties go to the older shape") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  register_labeled_image(mesh, model, fixture("digit1.pgm"), "first");
  register_labeled_image(mesh, model, fixture("digit1.pgm"), "second");

  const ClassifyResult r = classify_image(mesh, model, fixture("digit1.pgm"));
  CHECK(r.ranking[0].label_mismatch == 0);
  CHECK(r.ranking[0].count_distance == 0);
  CHECK(r.ranking[1].label_mismatch == 0);
  CHECK(r.ranking[1].count_distance == 0);
  CHECK(r.label == "first");  // equal scores resolve to the earlier subnet
}

TEST_CASE("classification needs a model and a non-empty probe") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  CHECK(fails_with(Errc::EmptyModel, [&] {
    classify_image(mesh, model, fixture("line10.pgm"));
  }));
  register_labeled_image(mesh, model, fixture("line10.pgm"), "line");
  CHECK(fails_with(Errc::EmptyImage, [&] {
    classify_image(mesh, model, grid_from("00 00\n"));
  }));
}

TEST_CASE("a wildcard-labeled prior matches every direction literally") {
  Mesh mesh;
  ImageModel model = ensure_image_model(mesh);
  const SubnetId unit = build_unit_subnet(mesh, "rod", 3);
  const NeuronId label = mesh.insert_value(model.label_subnet, Category{"rod"}).first;
  model.entries.push_back({unit, label, subnet_signature(mesh, unit)});
  CHECK(model.entries[0].signature.labels == std::set<std::string>{"ANY"});

  const ClassifyResult r = classify_image(mesh, model, fixture("line10.pgm"));
  // ANY expands to all eight directions; the test bar only has S
  CHECK(r.ranking[0].label_mismatch == 7);
  CHECK(r.ranking[0].count_distance == 7);  // 10 cells vs 3
}

TEST_CASE("inherited directions resolve to the first concrete one") {
  Mesh mesh;
  const SubnetId frag = mesh.create_subnet("frag", SubnetRole::Shape);
  const NeuronId a = mesh.insert_value(frag, Token{"px:0,0:01"}).first;
  const NeuronId b = mesh.insert_value(frag, Token{"px:1,0:01"}).first;
  const NeuronId c = mesh.insert_value(frag, Token{"px:2,0:01"}).first;
  mesh.connect({a, b}, {"INHERIT"});
  mesh.connect({b, c}, {"E"});
  CHECK(subnet_signature(mesh, frag).labels == std::set<std::string>{"E"});

  // with no concrete direction anywhere, INHERIT simply disappears
  const SubnetId bare = mesh.create_subnet("bare", SubnetRole::Shape);
  const NeuronId d = mesh.insert_value(bare, Token{"px:0,0:01"}).first;
  const NeuronId e = mesh.insert_value(bare, Token{"px:0,1:01"}).first;
  const NeuronId f = mesh.insert_value(bare, Token{"px:0,2:01"}).first;
  mesh.connect({d, e}, {"ANY"});
  mesh.connect({e, f}, {"INHERIT"});
  CHECK(subnet_signature(mesh, bare).labels == std::set<std::string>{"ANY"});

  CHECK(fails_with(Errc::NotAShapeSubnet, [&] {
    const SubnetId plain = mesh.create_subnet("plain", SubnetRole::Attribute);
    subnet_signature(mesh, plain);
  }));
}

TEST_CASE("unit chains are wildcard-connected and named in the units subnet") {
  Mesh mesh;
  const SubnetId rod = build_unit_subnet(mesh, "rod", 5);
  CHECK(mesh.subnet(rod).name == "rod");
  CHECK(mesh.subnet(rod).size() == 5);
  int any_edges = 0;
  for (const auto& [cid, c] : mesh.connections()) {
    (void)cid;
    if (c.labels == std::set<std::string>{"ANY"}) ++any_edges;
  }
  CHECK(any_edges == 4);

  const auto units = mesh.find_subnet("units");
  REQUIRE(units.has_value());
  CHECK(mesh.subnet(*units).role == SubnetRole::Label);
  CHECK(mesh.find_neuron(*units, Token{"rod"}).has_value());

  // building the same unit again derives a fresh subnet, reusing the name cell
  const SubnetId rod2 = build_unit_subnet(mesh, "rod", 5);
  CHECK(mesh.subnet(rod2).name == "rod~2");
  CHECK(mesh.subnet(*units).size() == 1);

  CHECK(fails_with(Errc::InvalidRange, [&] { build_unit_subnet(mesh, "bad", 0); }));
  CHECK(fails_with(Errc::InvalidArgument, [&] { build_unit_subnet(mesh, "", 3); }));
}

TEST_CASE("extent is the larger bounding-box side in unit lengths") {
  Mesh mesh;
  const SubnetId bar12 = image_to_subnet(mesh, fixture("line12.pgm"), "bar12");
  const SubnetId bar10 = image_to_subnet(mesh, fixture("line10.pgm"), "bar10");
  const SubnetId dot = image_to_subnet(mesh, grid_from("01\n"), "dot");
  const SubnetId rod5 = build_unit_subnet(mesh, "rod", 5);
  const SubnetId rod10 = build_unit_subnet(mesh, "decirod", 10);

  CHECK(measure_extent(mesh, bar12, rod5) == Decimal{24, 1});   // 12/5 = 2.4
  CHECK(measure_extent(mesh, bar10, rod10) == Decimal{10, 1});  // 10/10 = 1.0
  CHECK(measure_extent(mesh, dot, rod5) == Decimal{2, 1});      // 1/5 = 0.2
  // a shape measures itself as exactly one of itself
  CHECK(measure_extent(mesh, bar12, bar12) == Decimal{10, 1});

  const SubnetId units = *mesh.find_subnet("units");
  CHECK(fails_with(Errc::NotAShapeSubnet,
                   [&] { measure_extent(mesh, bar12, units); }));
  const SubnetId hollow = mesh.create_subnet("hollow", SubnetRole::Shape);
  CHECK(fails_with(Errc::EmptySubnet,
                   [&] { measure_extent(mesh, hollow, rod5); }));
}

TEST_CASE("transforming twice produces the same structure") {
  Mesh one;
  const SubnetId s1 = image_to_subnet(one, fixture("digit1.pgm"), "d");
  Mesh two;
  const SubnetId s2 = image_to_subnet(two, fixture("digit1.pgm"), "d");
  CHECK(subnet_signature(one, s1) == subnet_signature(two, s2));
  CHECK(one.neurons().size() == two.neurons().size());
  CHECK(one.connections().size() == two.connections().size());
  CHECK(one.subnet(s1).order == two.subnet(s2).order);
}
