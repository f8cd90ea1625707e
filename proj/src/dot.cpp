#include "meshnet/dot.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (const char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

std::string weight_text(double w) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", w);
  return buf;
}

std::string edge_label(const Mesh& mesh, const Connection& c) {
  std::string text;
  for (const auto& label : c.labels) {
    if (!text.empty()) text += ", ";
    text += label;
  }
  if (!text.empty()) text += " ";
  text += "(" + weight_text(mesh.weight_of(c.id)) + ")";
  return text;
}

}  // namespace

std::string export_dot(const Mesh& mesh,
                       const std::optional<std::vector<SubnetId>>& scope) {
  std::set<SubnetId> visible;
  if (scope) {
    for (const SubnetId sid : *scope) {
      mesh.subnet(sid);  // throws UnknownSubnet for missing ids
      visible.insert(sid);
    }
  } else {
    for (const auto& [sid, s] : mesh.subnets()) {
      (void)s;
      visible.insert(sid);
    }
  }

  std::ostringstream os;
  os << "digraph mesh {\n";
  os << "  graph [fontname=\"Helvetica\"];\n";
  os << "  node [fontname=\"Helvetica\"];\n";
  os << "  edge [fontname=\"Helvetica\"];\n";

  // a neuron draws inside its lowest-id visible home subnet
  std::set<NeuronId> drawn;
  for (const SubnetId sid : visible) {
    const Subnet& s = mesh.subnet(sid);
    os << "  subgraph cluster_s" << raw(sid) << " {\n";
    os << "    label=\"" << escape(s.name) << " [" << role_name(s.role) << "]\";\n";
    for (const NeuronId nid : s.order) {
      if (drawn.count(nid)) continue;
      const auto& homes = mesh.neuron(nid).home_subnets;
      bool mine = true;
      for (const SubnetId home : homes) {
        if (home < sid && visible.count(home)) {
          mine = false;
          break;
        }
      }
      if (!mine) continue;
      os << "    n" << raw(nid) << " [label=\""
         << escape(value_text(mesh.neuron(nid).payload)) << "\"];\n";
      drawn.insert(nid);
    }
    os << "  }\n";
  }

  // box nodes for subnets used as endpoints themselves
  std::set<SubnetId> boxed;
  const auto box = [&](SubnetId sid) {
    if (boxed.insert(sid).second) {
      os << "  s" << raw(sid) << " [shape=box, label=\""
         << escape(mesh.subnet(sid).name) << "\"];\n";
    }
  };

  for (const auto& [cid, c] : mesh.connections()) {
    bool in_scope = true;
    for (const auto& e : c.endpoints) {
      if (e.is_neuron() ? !drawn.count(e.neuron()) : !visible.count(e.subnet())) {
        in_scope = false;
        break;
      }
    }
    if (!in_scope) continue;

    const auto node_ref = [&](const EndpointRef& e) {
      if (e.is_neuron()) return "n" + std::to_string(raw(e.neuron()));
      box(e.subnet());
      return "s" + std::to_string(raw(e.subnet()));
    };
    const std::string label = escape(edge_label(mesh, c));

    if (c.endpoints.size() == 2) {
      os << "  " << node_ref(c.endpoints[0]) << " -> " << node_ref(c.endpoints[1])
         << " [label=\"" << label << "\"";
      if (!c.directed) os << ", dir=none";
      os << "];\n";
    } else {
      // hyperedge: fan endpoints through a junction point
      os << "  c" << raw(cid) << " [shape=point, xlabel=\"" << label << "\"];\n";
      for (size_t i = 0; i < c.endpoints.size(); ++i) {
        if (c.directed && i == 0) {
          os << "  " << node_ref(c.endpoints[i]) << " -> c" << raw(cid) << ";\n";
        } else {
          os << "  c" << raw(cid) << " -> " << node_ref(c.endpoints[i]);
          if (!c.directed) os << " [dir=none]";
          os << ";\n";
        }
      }
    }
  }

  os << "}\n";
  return os.str();
}

void export_dot_file(const Mesh& mesh, const std::string& path,
                     const std::optional<std::vector<SubnetId>>& scope) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(Errc::InvalidArgument, "cannot write '" + path + "'");
  out << export_dot(mesh, scope);
}

}  // namespace meshnet
