#include "meshnet/archive.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

using nlohmann::json;  // std::map-backed: object keys serialize sorted

json value_to_json(const Value& v) {
  json j;
  j["kind"] = kind_name(kind_of(v));
  std::visit(
      [&j](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, Integer>) {
          j["v"] = x.v;
        } else if constexpr (std::is_same_v<T, Decimal>) {
          j["scaled"] = x.scaled;
          j["places"] = x.places;
        } else if constexpr (std::is_same_v<T, Month>) {
          j["index"] = x.index;
        } else if constexpr (std::is_same_v<T, DateDM>) {
          j["day"] = x.day;
          j["month"] = x.month;
        } else if constexpr (std::is_same_v<T, TimeHM>) {
          j["hour"] = x.hour;
          j["minute"] = x.minute;
        } else if constexpr (std::is_same_v<T, Category>) {
          j["text"] = x.text;
        } else if constexpr (std::is_same_v<T, ColorCode>) {
          j["code"] = x.code;
        } else if constexpr (std::is_same_v<T, OperatorSym>) {
          j["symbol"] = x.symbol;
        } else {
          j["text"] = x.text;
        }
      },
      v);
  return j;
}

Value value_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "int") return Integer{j.at("v").get<long long>()};
  if (kind == "dec") {
    return Decimal{j.at("scaled").get<long long>(), j.at("places").get<int>()};
  }
  if (kind == "month") return Month{j.at("index").get<int>()};
  if (kind == "date-dm") {
    return DateDM{j.at("day").get<int>(), j.at("month").get<int>()};
  }
  if (kind == "time-hm") {
    return TimeHM{j.at("hour").get<int>(), j.at("minute").get<int>()};
  }
  if (kind == "cat") return Category{j.at("text").get<std::string>()};
  if (kind == "color") return ColorCode{j.at("code").get<int>()};
  if (kind == "op") return OperatorSym{j.at("symbol").get<std::string>()};
  if (kind == "token") return Token{j.at("text").get<std::string>()};
  fail(Errc::CorruptArchive, "unknown value kind '" + kind + "'");
}

json endpoint_to_json(const EndpointRef& e) {
  return {{"kind", e.is_neuron() ? "neuron" : "subnet"}, {"id", e.id}};
}

EndpointRef endpoint_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  const std::uint64_t id = j.at("id").get<std::uint64_t>();
  if (kind == "neuron") return EndpointRef(NeuronId{id});
  if (kind == "subnet") return EndpointRef(SubnetId{id});
  fail(Errc::CorruptArchive, "unknown endpoint kind '" + kind + "'");
}

json optional_subnet(const std::optional<SubnetId>& s) {
  return s ? json(raw(*s)) : json(nullptr);
}

std::optional<SubnetId> optional_subnet_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  return SubnetId{j.get<std::uint64_t>()};
}

json mesh_to_json(const Mesh& mesh) {
  json j;
  j["config"] = {
      {"binarize_threshold", mesh.config.binarize_threshold},
      {"nearest_k", mesh.config.nearest_k},
      {"rounding", mesh.config.rounding == Rounding::HalfAwayFromZero
                       ? "half-away-from-zero"
                       : "half-even"},
      {"weight_decrement", mesh.config.weight_decrement},
      {"weight_floor", mesh.config.weight_floor},
      {"weight_initial", mesh.config.weight_initial},
  };

  json subnets = json::array();
  for (const auto& [sid, s] : mesh.subnets()) {
    json order = json::array();
    for (const NeuronId n : s.order) order.push_back(raw(n));
    subnets.push_back({{"id", raw(sid)},
                       {"name", s.name},
                       {"order", order},
                       {"parent", optional_subnet(s.parent)},
                       {"role", role_name(s.role)}});
  }
  j["subnets"] = subnets;

  json neurons = json::array();
  for (const auto& [nid, n] : mesh.neurons()) {
    neurons.push_back({{"id", raw(nid)}, {"value", value_to_json(n.payload)}});
  }
  j["neurons"] = neurons;

  json connections = json::array();
  for (const auto& [cid, c] : mesh.connections()) {
    json endpoints = json::array();
    for (const auto& e : c.endpoints) endpoints.push_back(endpoint_to_json(e));
    connections.push_back({{"directed", c.directed},
                           {"endpoints", endpoints},
                           {"id", raw(cid)},
                           {"labels", c.labels},
                           {"occurrences", c.occurrences}});
  }
  j["connections"] = connections;

  j["route_table"] = json::object();
  for (const auto& [key, sid] : mesh.route_table()) {
    j["route_table"][key] = raw(sid);
  }

  j["prior"] = {{"arithmetic", optional_subnet(mesh.prior.arithmetic)},
                {"decimals", optional_subnet(mesh.prior.decimals)},
                {"integers", optional_subnet(mesh.prior.integers)},
                {"months", optional_subnet(mesh.prior.months)},
                {"relational", optional_subnet(mesh.prior.relational)},
                {"time_structure", optional_subnet(mesh.prior.time_structure)}};

  j["counters"] = {{"connection", mesh.next_connection_ordinal()},
                   {"neuron", mesh.next_neuron_ordinal()},
                   {"subnet", mesh.next_subnet_ordinal()}};
  return j;
}

Mesh mesh_from_json(const json& j) {
  Mesh mesh;

  const json& cfg = j.at("config");
  mesh.config.binarize_threshold = cfg.at("binarize_threshold").get<int>();
  mesh.config.nearest_k = cfg.at("nearest_k").get<int>();
  const std::string rounding = cfg.at("rounding").get<std::string>();
  if (rounding == "half-away-from-zero") {
    mesh.config.rounding = Rounding::HalfAwayFromZero;
  } else if (rounding == "half-even") {
    mesh.config.rounding = Rounding::HalfEven;
  } else {
    fail(Errc::CorruptArchive, "unknown rounding '" + rounding + "'");
  }
  mesh.config.weight_decrement = cfg.at("weight_decrement").get<double>();
  mesh.config.weight_floor = cfg.at("weight_floor").get<double>();
  mesh.config.weight_initial = cfg.at("weight_initial").get<double>();

  for (const json& s : j.at("subnets")) {
    mesh.restore_subnet(SubnetId{s.at("id").get<std::uint64_t>()},
                        s.at("name").get<std::string>(),
                        role_from_name(s.at("role").get<std::string>()),
                        optional_subnet_from(s.at("parent")));
  }
  for (const json& n : j.at("neurons")) {
    mesh.restore_neuron(NeuronId{n.at("id").get<std::uint64_t>()},
                        value_from_json(n.at("value")));
  }
  for (const json& s : j.at("subnets")) {
    const SubnetId sid{s.at("id").get<std::uint64_t>()};
    for (const json& n : s.at("order")) {
      mesh.restore_membership(sid, NeuronId{n.get<std::uint64_t>()});
    }
  }
  for (const json& c : j.at("connections")) {
    std::vector<EndpointRef> endpoints;
    for (const json& e : c.at("endpoints")) {
      endpoints.push_back(endpoint_from_json(e));
    }
    mesh.restore_connection(ConnectionId{c.at("id").get<std::uint64_t>()},
                            endpoints, c.at("directed").get<bool>(),
                            c.at("labels").get<std::set<std::string>>(),
                            c.at("occurrences").get<int>());
  }

  for (const auto& [key, sid] : j.at("route_table").items()) {
    mesh.register_route(key, SubnetId{sid.get<std::uint64_t>()});
  }

  const json& prior = j.at("prior");
  mesh.prior.arithmetic = optional_subnet_from(prior.at("arithmetic"));
  mesh.prior.decimals = optional_subnet_from(prior.at("decimals"));
  mesh.prior.integers = optional_subnet_from(prior.at("integers"));
  mesh.prior.months = optional_subnet_from(prior.at("months"));
  mesh.prior.relational = optional_subnet_from(prior.at("relational"));
  mesh.prior.time_structure = optional_subnet_from(prior.at("time_structure"));

  const json& counters = j.at("counters");
  mesh.restore_counters(counters.at("neuron").get<std::uint64_t>(),
                        counters.at("subnet").get<std::uint64_t>(),
                        counters.at("connection").get<std::uint64_t>());

  const auto problems = mesh.validate();
  if (!problems.empty()) {
    fail(Errc::CorruptArchive, "archive violates mesh invariants: " + problems.front());
  }
  return mesh;
}

json schema_to_json(const Schema& schema) {
  json attributes = json::array();
  for (const auto& a : schema.attributes) {
    attributes.push_back({{"kind", kind_name(a.kind)},
                          {"name", a.name},
                          {"places", a.places},
                          {"role", a.role == AttrRole::Target ? "target" : "input"}});
  }
  return {{"attributes", attributes}};
}

Schema schema_from_json(const json& j) {
  Schema schema;
  for (const json& a : j.at("attributes")) {
    AttributeSpec spec;
    spec.name = a.at("name").get<std::string>();
    spec.kind = kind_from_name(a.at("kind").get<std::string>());
    spec.places = a.at("places").get<int>();
    const std::string role = a.at("role").get<std::string>();
    if (role != "input" && role != "target") {
      fail(Errc::CorruptArchive, "unknown attribute role '" + role + "'");
    }
    spec.role = role == "target" ? AttrRole::Target : AttrRole::Input;
    schema.attributes.push_back(std::move(spec));
  }
  return schema;
}

json model_to_json(const ImageModel& model) {
  json entries = json::array();
  for (const auto& e : model.entries) {
    json counts = json::object();
    for (const auto& [code, n] : e.signature.counts) {
      counts[std::to_string(code)] = n;
    }
    entries.push_back({{"label_neuron", raw(e.label_neuron)},
                       {"shape", raw(e.shape)},
                       {"signature", {{"counts", counts},
                                      {"labels", e.signature.labels}}}});
  }
  return {{"entries", entries},
          {"label_subnet", raw(model.label_subnet)},
          {"super_subnet", raw(model.super_subnet)}};
}

ImageModel model_from_json(const json& j) {
  ImageModel model;
  model.label_subnet = SubnetId{j.at("label_subnet").get<std::uint64_t>()};
  model.super_subnet = SubnetId{j.at("super_subnet").get<std::uint64_t>()};
  for (const json& e : j.at("entries")) {
    ImageEntry entry;
    entry.shape = SubnetId{e.at("shape").get<std::uint64_t>()};
    entry.label_neuron = NeuronId{e.at("label_neuron").get<std::uint64_t>()};
    const json& sig = e.at("signature");
    for (const auto& [code, n] : sig.at("counts").items()) {
      entry.signature.counts[std::stoi(code)] = n.get<long long>();
    }
    entry.signature.labels = sig.at("labels").get<std::set<std::string>>();
    model.entries.push_back(std::move(entry));
  }
  return model;
}

}  // namespace

std::string save_document(const Document& doc) {
  json j = mesh_to_json(doc.mesh);
  j["format"] = kArchiveFormat;
  j["schema"] = doc.schema ? schema_to_json(*doc.schema) : json(nullptr);
  j["image_model"] = doc.image_model ? model_to_json(*doc.image_model) : json(nullptr);
  return j.dump(2) + "\n";
}

void save_document_file(const Document& doc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << save_document(doc);
}

Document load_document(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::CorruptArchive, std::string("not valid archive text: ") + e.what());
  }
  if (!j.is_object() || !j.contains("format") || !j["format"].is_string()) {
    fail(Errc::CorruptArchive, "missing format marker");
  }
  if (j["format"].get<std::string>() != kArchiveFormat) {
    fail(Errc::ArchiveVersionMismatch,
         "archive format '" + j["format"].get<std::string>() + "', expected '" +
             kArchiveFormat + "'");
  }
  try {
    Document doc;
    doc.mesh = mesh_from_json(j);
    if (!j.at("schema").is_null()) doc.schema = schema_from_json(j.at("schema"));
    if (!j.at("image_model").is_null()) {
      doc.image_model = model_from_json(j.at("image_model"));
    }
    return doc;
  } catch (const json::exception& e) {
    fail(Errc::CorruptArchive, std::string("archive structure: ") + e.what());
  } catch (const Error& e) {
    // a restore hook refused the data (dangling id, repeated identity, ...)
    if (e.code() == Errc::CorruptArchive) throw;
    fail(Errc::CorruptArchive, std::string("archive content: ") + e.what());
  }
}

Document load_document_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(Errc::CorruptArchive, "cannot open '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_document(buffer.str());
}

}  // namespace meshnet
