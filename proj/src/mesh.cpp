#include "meshnet/mesh.hpp"

#include <algorithm>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

void erase_id(std::vector<ConnectionId>& v, ConnectionId id) {
  v.erase(std::remove(v.begin(), v.end(), id), v.end());
}

}  // namespace

const char* role_name(SubnetRole role) {
  switch (role) {
    case SubnetRole::Prior: return "prior";
    case SubnetRole::Attribute: return "attribute";
    case SubnetRole::Target: return "target";
    case SubnetRole::Shape: return "shape";
    case SubnetRole::Super: return "super";
    case SubnetRole::Label: return "label";
    case SubnetRole::Bias: return "bias";
    case SubnetRole::Operator: return "operator";
    case SubnetRole::Central: return "central";
  }
  return "?";
}

SubnetRole role_from_name(const std::string& name) {
  for (int i = 0; i <= static_cast<int>(SubnetRole::Central); ++i) {
    const auto role = static_cast<SubnetRole>(i);
    if (name == role_name(role)) return role;
  }
  fail(Errc::CorruptArchive, "unknown subnet role '" + name + "'");
}

const char* connection_kind_name(ConnectionKind kind) {
  switch (kind) {
    case ConnectionKind::NeuronNeuronSameSubnet: return "neuron-neuron-same-subnet";
    case ConnectionKind::NeuronNeuronCrossSubnet: return "neuron-neuron-cross-subnet";
    case ConnectionKind::NeuronNeuronCentral: return "neuron-neuron-central";
    case ConnectionKind::SubnetSubnet: return "subnet-subnet";
    case ConnectionKind::SubnetSubnetCentral: return "subnet-subnet-central";
    case ConnectionKind::NeuronSubnet: return "neuron-subnet";
    case ConnectionKind::NeuronSubnetCentral: return "neuron-subnet-central";
  }
  return "?";
}

// ---- construction ----

SubnetId Mesh::create_subnet(const std::string& name, SubnetRole role,
                             std::optional<SubnetId> parent) {
  if (name.empty()) fail(Errc::InvalidArgument, "subnet name must not be empty");
  if (subnet_names_.count(name)) {
    fail(Errc::DuplicateSubnetName, "subnet '" + name + "' already exists");
  }
  if (parent && !subnets_.count(*parent)) {
    fail(Errc::UnknownSubnet, "parent subnet #" + std::to_string(raw(*parent)));
  }
  const SubnetId id{next_subnet_++};
  Subnet s;
  s.id = id;
  s.name = name;
  s.role = role;
  s.parent = parent;
  subnets_.emplace(id, std::move(s));
  subnet_names_.emplace(name, id);
  return id;
}

std::pair<NeuronId, bool> Mesh::insert_value(SubnetId sid, const Value& v) {
  Subnet& s = subnet_mut(sid);
  if (const auto it = s.by_value.find(v); it != s.by_value.end()) {
    return {it->second, false};
  }
  const NeuronId id{next_neuron_++};
  Neuron n;
  n.id = id;
  n.payload = v;
  n.home_subnets.insert(sid);
  neurons_.emplace(id, std::move(n));
  s.order.push_back(id);
  s.members.insert(id);
  s.by_value.emplace(v, id);
  return {id, true};
}

Mesh::ConnKey Mesh::make_key(const std::vector<EndpointRef>& endpoints,
                             const std::set<std::string>& labels) {
  ConnKey key{endpoints, {labels.begin(), labels.end()}};
  std::sort(key.first.begin(), key.first.end());
  return key;
}

void Mesh::check_endpoints(const std::vector<EndpointRef>& endpoints) const {
  if (endpoints.size() < 2) {
    fail(Errc::ArityTooSmall, "a connection needs at least two endpoints");
  }
  for (const auto& e : endpoints) {
    if (e.is_neuron()) {
      if (!neurons_.count(e.neuron())) {
        fail(Errc::UnknownEndpoint, "neuron #" + std::to_string(e.id));
      }
    } else if (!subnets_.count(e.subnet())) {
      fail(Errc::UnknownEndpoint, "subnet #" + std::to_string(e.id));
    }
  }
  auto sorted = endpoints;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    fail(Errc::InvalidArgument, "duplicate endpoint in connection");
  }
}

ConnectionKind Mesh::derive_kind(const std::vector<EndpointRef>& endpoints) const {
  bool any_neuron = false, any_subnet = false, any_central = false;
  for (const auto& e : endpoints) {
    if (e.is_neuron()) {
      any_neuron = true;
      if (neuron_in_central(e.neuron())) any_central = true;
    } else {
      any_subnet = true;
      if (subnet(e.subnet()).role == SubnetRole::Central) any_central = true;
    }
  }
  if (any_neuron && any_subnet) {
    return any_central ? ConnectionKind::NeuronSubnetCentral : ConnectionKind::NeuronSubnet;
  }
  if (any_subnet) {
    return any_central ? ConnectionKind::SubnetSubnetCentral : ConnectionKind::SubnetSubnet;
  }
  if (any_central) return ConnectionKind::NeuronNeuronCentral;
  // all neurons: same-subnet when one subnet contains every endpoint
  std::set<SubnetId> common = neuron(endpoints.front().neuron()).home_subnets;
  for (size_t i = 1; i < endpoints.size() && !common.empty(); ++i) {
    const auto& home = neuron(endpoints[i].neuron()).home_subnets;
    std::set<SubnetId> next;
    std::set_intersection(common.begin(), common.end(), home.begin(), home.end(),
                          std::inserter(next, next.begin()));
    common.swap(next);
  }
  return common.empty() ? ConnectionKind::NeuronNeuronCrossSubnet
                        : ConnectionKind::NeuronNeuronSameSubnet;
}

void Mesh::index_connection(const Connection& c) {
  connection_index_.emplace(make_key(c.endpoints, c.labels), c.id);
  for (const auto& e : c.endpoints) {
    if (e.is_neuron()) {
      incident_neuron_[e.neuron()].push_back(c.id);
    } else {
      incident_subnet_[e.subnet()].push_back(c.id);
    }
  }
}

void Mesh::unindex_connection(const Connection& c) {
  connection_index_.erase(make_key(c.endpoints, c.labels));
  for (const auto& e : c.endpoints) {
    if (e.is_neuron()) {
      if (auto it = incident_neuron_.find(e.neuron()); it != incident_neuron_.end()) {
        erase_id(it->second, c.id);
      }
    } else if (auto it = incident_subnet_.find(e.subnet()); it != incident_subnet_.end()) {
      erase_id(it->second, c.id);
    }
  }
}

ConnectionId Mesh::connect(const std::vector<EndpointRef>& endpoints,
                           std::set<std::string> labels, bool directed) {
  check_endpoints(endpoints);
  const auto key = make_key(endpoints, labels);
  if (const auto it = connection_index_.find(key); it != connection_index_.end()) {
    record_occurrence(it->second);
    return it->second;
  }
  const ConnectionId id{next_connection_++};
  Connection c;
  c.id = id;
  c.endpoints = endpoints;
  c.directed = directed;
  c.labels = std::move(labels);
  c.occurrences = 1;
  c.kind = derive_kind(endpoints);
  index_connection(c);
  connections_.emplace(id, std::move(c));
  return id;
}

double Mesh::record_occurrence(ConnectionId id) {
  const auto it = connections_.find(id);
  if (it == connections_.end()) {
    fail(Errc::UnknownConnection, "connection #" + std::to_string(raw(id)));
  }
  ++it->second.occurrences;
  return weight_of(id);
}

// ---- queries ----

double Mesh::weight_for_occurrences(int occurrences) const {
  const double w =
      config.weight_initial - config.weight_decrement * (occurrences - 1);
  return std::max(config.weight_floor, w);
}

double Mesh::weight_of(ConnectionId id) const {
  return weight_for_occurrences(connection(id).occurrences);
}

const std::vector<ConnectionId>& Mesh::connections_of(NeuronId n) const {
  static const std::vector<ConnectionId> kNone;
  const auto it = incident_neuron_.find(n);
  return it == incident_neuron_.end() ? kNone : it->second;
}

std::vector<NeuronId> Mesh::neighbors(NeuronId n, std::optional<SubnetId> within) const {
  if (!neurons_.count(n)) fail(Errc::UnknownNeuron, "neuron #" + std::to_string(raw(n)));
  const Subnet* filter = nullptr;
  if (within) filter = &subnet(*within);
  std::set<NeuronId> out;
  for (const ConnectionId cid : connections_of(n)) {
    for (const auto& e : connection(cid).endpoints) {
      if (!e.is_neuron() || e.neuron() == n) continue;
      if (filter && !filter->contains(e.neuron())) continue;
      out.insert(e.neuron());
    }
  }
  return {out.begin(), out.end()};
}

std::vector<NeuronId> Mesh::targets_of(NeuronId n, SubnetId target) const {
  if (subnet(target).role != SubnetRole::Target) {
    fail(Errc::NotATargetSubnet, "subnet '" + subnet(target).name + "'");
  }
  return neighbors(n, target);
}

NearestHit Mesh::nearest_neuron(SubnetId sid, const Value& v) const {
  return nearest_members(sid, v, 1).front();
}

std::vector<NearestHit> Mesh::nearest_members(SubnetId sid, const Value& v, int k) const {
  const Subnet& s = subnet(sid);
  if (s.order.empty()) fail(Errc::EmptySubnet, "subnet '" + s.name + "' has no members");
  if (k < 1) fail(Errc::InvalidArgument, "k must be positive");

  struct Ranked {
    bool exact;
    AxisValue dist;
    AxisValue axis;
    NeuronId id;
  };
  std::vector<Ranked> ranked;
  const auto exact = s.by_value.find(v);
  if (exact != s.by_value.end()) {
    ranked.push_back({true, {}, axis_of(v).value_or(AxisValue{}), exact->second});
  }
  const auto vx = axis_of(v);
  if (!vx && exact == s.by_value.end()) {
    fail(Errc::NoAxisForCategorical,
         "'" + value_text(v) + "' has no axis and no exact match");
  }
  if (vx) {
    for (const NeuronId nid : s.order) {
      const Neuron& n = neuron(nid);
      if (exact != s.by_value.end() && nid == exact->second) continue;
      const auto d = distance_between(n.payload, v);
      if (!d) continue;  // member itself has no axis
      ranked.push_back({false, *d, *axis_of(n.payload), nid});
    }
  }
  if (ranked.empty()) {
    fail(Errc::EmptySubnet, "subnet '" + s.name + "' has no comparable members");
  }
  std::sort(ranked.begin(), ranked.end(), [](const Ranked& a, const Ranked& b) {
    if (a.exact != b.exact) return a.exact;
    if (!axis_equal(a.dist, b.dist)) return axis_less(a.dist, b.dist);
    if (!axis_equal(a.axis, b.axis)) return axis_less(a.axis, b.axis);
    return a.id < b.id;
  });
  std::vector<NearestHit> out;
  for (const auto& r : ranked) {
    if (static_cast<int>(out.size()) == k) break;
    out.push_back({r.id, r.exact, r.dist});
  }
  return out;
}

ConnectionKind Mesh::classify_connection(ConnectionId id) const {
  return derive_kind(connection(id).endpoints);
}

std::optional<SubnetId> Mesh::find_subnet(const std::string& name) const {
  const auto it = subnet_names_.find(name);
  if (it == subnet_names_.end()) return std::nullopt;
  return it->second;
}

std::optional<NeuronId> Mesh::find_neuron(SubnetId sid, const Value& v) const {
  const Subnet& s = subnet(sid);
  const auto it = s.by_value.find(v);
  if (it == s.by_value.end()) return std::nullopt;
  return it->second;
}

std::optional<ConnectionId> Mesh::find_connection(
    const std::vector<EndpointRef>& endpoints,
    const std::set<std::string>& labels) const {
  const auto it = connection_index_.find(make_key(endpoints, labels));
  if (it == connection_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<PairStrength> Mesh::pair_strength(NeuronId a, NeuronId b) const {
  std::optional<PairStrength> out;
  for (const ConnectionId cid : connections_of(a)) {
    const Connection& c = connection(cid);
    const bool joins_b = std::any_of(c.endpoints.begin(), c.endpoints.end(),
                                     [&](const EndpointRef& e) {
                                       return e.is_neuron() && e.neuron() == b;
                                     });
    if (!joins_b) continue;
    const double w = weight_of(cid);
    if (!out) {
      out = PairStrength{w, c.occurrences};
    } else {
      out->weight = std::min(out->weight, w);
      out->occurrences += c.occurrences;
    }
  }
  return out;
}

const Neuron& Mesh::neuron(NeuronId id) const {
  const auto it = neurons_.find(id);
  if (it == neurons_.end()) fail(Errc::UnknownNeuron, "neuron #" + std::to_string(raw(id)));
  return it->second;
}

const Subnet& Mesh::subnet(SubnetId id) const {
  const auto it = subnets_.find(id);
  if (it == subnets_.end()) fail(Errc::UnknownSubnet, "subnet #" + std::to_string(raw(id)));
  return it->second;
}

const Connection& Mesh::connection(ConnectionId id) const {
  const auto it = connections_.find(id);
  if (it == connections_.end()) {
    fail(Errc::UnknownConnection, "connection #" + std::to_string(raw(id)));
  }
  return it->second;
}

Subnet& Mesh::subnet_mut(SubnetId id) {
  return const_cast<Subnet&>(subnet(id));
}

Neuron& Mesh::neuron_mut(NeuronId id) {
  return const_cast<Neuron&>(neuron(id));
}

bool Mesh::neuron_in_central(NeuronId n) const {
  for (const SubnetId sid : neuron(n).home_subnets) {
    if (subnet(sid).role == SubnetRole::Central) return true;
  }
  return false;
}

std::string Mesh::make_unique_name(const std::string& base) const {
  if (!subnet_names_.count(base)) return base;
  for (int i = 2;; ++i) {
    const std::string candidate = base + "~" + std::to_string(i);
    if (!subnet_names_.count(candidate)) return candidate;
  }
}

// ---- routing ----

void Mesh::register_route(const std::string& key, SubnetId s) {
  subnet(s);  // existence check
  route_table_[key] = s;
}

SubnetId Mesh::route(const std::string& attribute) {
  const auto it = route_table_.find(attribute);
  if (it == route_table_.end()) {
    fail(Errc::UnroutableInput, "no route for '" + attribute + "'");
  }
  route_log_.push_back(attribute + " -> " + subnet(it->second).name + "#" +
                       std::to_string(raw(it->second)));
  return it->second;
}

// ---- structural surgery ----

void Mesh::drop_connection(ConnectionId id) {
  const auto it = connections_.find(id);
  if (it == connections_.end()) return;
  unindex_connection(it->second);
  connections_.erase(it);
}

void Mesh::rewire_endpoint(EndpointRef from, EndpointRef to) {
  std::vector<ConnectionId> affected;
  if (from.is_neuron()) {
    if (auto it = incident_neuron_.find(from.neuron()); it != incident_neuron_.end()) {
      affected = it->second;
    }
  } else if (auto it = incident_subnet_.find(from.subnet()); it != incident_subnet_.end()) {
    affected = it->second;
  }

  for (const ConnectionId cid : affected) {
    const auto cit = connections_.find(cid);
    if (cit == connections_.end()) continue;  // absorbed earlier in this loop
    Connection c = cit->second;
    unindex_connection(c);
    connections_.erase(cit);

    std::vector<EndpointRef> rewired;
    for (const auto& e : c.endpoints) {
      const EndpointRef r = (e == from) ? to : e;
      if (std::find(rewired.begin(), rewired.end(), r) == rewired.end()) {
        rewired.push_back(r);
      }
    }
    if (rewired.size() < 2) continue;  // collapsed onto itself

    c.endpoints = std::move(rewired);
    const auto key = make_key(c.endpoints, c.labels);
    if (const auto hit = connection_index_.find(key); hit != connection_index_.end()) {
      // identity collision: fold occurrences into the surviving connection
      connections_.at(hit->second).occurrences += c.occurrences;
      continue;
    }
    c.kind = derive_kind(c.endpoints);
    index_connection(c);
    connections_.emplace(c.id, std::move(c));
  }

  if (from.is_neuron()) {
    incident_neuron_.erase(from.neuron());
  } else {
    incident_subnet_.erase(from.subnet());
  }
}

void Mesh::reclassify_incident(NeuronId nid) {
  const auto it = incident_neuron_.find(nid);
  if (it == incident_neuron_.end()) return;
  for (const ConnectionId cid : it->second) {
    Connection& c = connections_.at(cid);
    c.kind = derive_kind(c.endpoints);
  }
}

SubnetId Mesh::merge_subnets(SubnetId a, SubnetId b, const std::string& merged_name) {
  if (a == b) fail(Errc::InvalidArgument, "cannot merge a subnet with itself");
  const SubnetRole role = subnet(a).role;
  const auto parent = subnet(a).parent;
  subnet(b);  // existence check before any mutation
  const SubnetId m = create_subnet(merged_name, role, parent);

  std::vector<NeuronId> source = subnet(a).order;
  source.insert(source.end(), subnet(b).order.begin(), subnet(b).order.end());

  Subnet& merged = subnet_mut(m);
  for (const NeuronId nid : source) {
    if (merged.contains(nid)) continue;  // same neuron homed in both operands
    const Value payload = neuron(nid).payload;
    const auto seen = merged.by_value.find(payload);
    if (seen == merged.by_value.end()) {
      merged.order.push_back(nid);
      merged.members.insert(nid);
      merged.by_value.emplace(payload, nid);
      continue;
    }
    // payload collision across the operands: lower id survives
    const NeuronId survivor = std::min(seen->second, nid);
    const NeuronId loser = std::max(seen->second, nid);
    if (survivor != seen->second) {
      std::replace(merged.order.begin(), merged.order.end(), seen->second, survivor);
      merged.members.erase(seen->second);
      merged.members.insert(survivor);
      seen->second = survivor;
    }
    rewire_endpoint(EndpointRef(loser), EndpointRef(survivor));
    const std::set<SubnetId> loser_homes = neuron(loser).home_subnets;
    for (const SubnetId h : loser_homes) {
      if (h == a || h == b) continue;
      Subnet& other = subnet_mut(h);
      std::replace(other.order.begin(), other.order.end(), loser, survivor);
      other.members.erase(loser);
      other.members.insert(survivor);
      other.by_value[neuron(loser).payload] = survivor;
      neuron_mut(survivor).home_subnets.insert(h);
    }
    neurons_.erase(loser);
    incident_neuron_.erase(loser);
  }

  for (const NeuronId nid : merged.members) {
    auto& home = neuron_mut(nid).home_subnets;
    home.erase(a);
    home.erase(b);
    home.insert(m);
  }

  rewire_endpoint(EndpointRef(a), EndpointRef(m));
  rewire_endpoint(EndpointRef(b), EndpointRef(m));

  // kinds were derived while the members still lived in the operands
  for (const NeuronId nid : merged.members) reclassify_incident(nid);

  for (auto& [sid, s] : subnets_) {
    if (s.parent == a || s.parent == b) s.parent = m;
  }
  for (auto& [key, sid] : route_table_) {
    if (sid == a || sid == b) sid = m;
  }
  for (auto* slot : {&prior.integers, &prior.decimals, &prior.months,
                     &prior.time_structure, &prior.arithmetic, &prior.relational}) {
    if (*slot == a || *slot == b) *slot = m;
  }

  subnet_names_.erase(subnet(a).name);
  subnet_names_.erase(subnet(b).name);
  subnets_.erase(a);
  subnets_.erase(b);
  incident_subnet_.erase(a);
  incident_subnet_.erase(b);
  return m;
}

std::pair<SubnetId, SubnetId> Mesh::split_subnet(
    SubnetId sid, const std::function<bool(const Value&)>& selector) {
  const Subnet snapshot = subnet(sid);
  const SubnetId sel =
      create_subnet(make_unique_name(snapshot.name + "/selected"), snapshot.role,
                    snapshot.parent);
  const SubnetId rest =
      create_subnet(make_unique_name(snapshot.name + "/rest"), snapshot.role,
                    snapshot.parent);

  for (const NeuronId nid : snapshot.order) {
    const Value& payload = neuron(nid).payload;
    Subnet& part = subnet_mut(selector(payload) ? sel : rest);
    part.order.push_back(nid);
    part.members.insert(nid);
    part.by_value.emplace(payload, nid);
    auto& home = neuron_mut(nid).home_subnets;
    home.erase(sid);
    home.insert(part.id);
  }
  for (const NeuronId nid : snapshot.order) reclassify_incident(nid);

  // The split subnet itself vanishes, and its subnet-level connections with it;
  // neuron-level connections ride along with the members untouched.
  if (const auto it = incident_subnet_.find(sid); it != incident_subnet_.end()) {
    const std::vector<ConnectionId> doomed = it->second;
    for (const ConnectionId cid : doomed) drop_connection(cid);
  }
  for (auto it = route_table_.begin(); it != route_table_.end();) {
    it = (it->second == sid) ? route_table_.erase(it) : std::next(it);
  }
  for (auto& [other_id, s] : subnets_) {
    if (s.parent == sid) s.parent = snapshot.parent;
  }
  for (auto* slot : {&prior.integers, &prior.decimals, &prior.months,
                     &prior.time_structure, &prior.arithmetic, &prior.relational}) {
    if (*slot == sid) *slot = std::nullopt;
  }

  subnet_names_.erase(snapshot.name);
  subnets_.erase(sid);
  incident_subnet_.erase(sid);
  return {sel, rest};
}

// ---- integrity ----

void Mesh::restore_counters(std::uint64_t neuron, std::uint64_t subnet,
                            std::uint64_t conn) {
  next_neuron_ = neuron;
  next_subnet_ = subnet;
  next_connection_ = conn;
}

void Mesh::restore_subnet(SubnetId id, const std::string& name, SubnetRole role,
                          std::optional<SubnetId> parent) {
  if (name.empty()) fail(Errc::InvalidArgument, "subnet name must not be empty");
  if (subnets_.count(id)) {
    fail(Errc::InvalidArgument, "subnet id #" + std::to_string(raw(id)) + " repeats");
  }
  if (subnet_names_.count(name)) {
    fail(Errc::DuplicateSubnetName, "subnet '" + name + "' already exists");
  }
  Subnet s;
  s.id = id;
  s.name = name;
  s.role = role;
  s.parent = parent;  // may point at a later id; the loader re-validates
  subnets_.emplace(id, std::move(s));
  subnet_names_.emplace(name, id);
  next_subnet_ = std::max(next_subnet_, raw(id) + 1);
}

void Mesh::restore_neuron(NeuronId id, const Value& payload) {
  if (neurons_.count(id)) {
    fail(Errc::InvalidArgument, "neuron id #" + std::to_string(raw(id)) + " repeats");
  }
  Neuron n;
  n.id = id;
  n.payload = payload;
  neurons_.emplace(id, std::move(n));
  next_neuron_ = std::max(next_neuron_, raw(id) + 1);
}

void Mesh::restore_membership(SubnetId sid, NeuronId nid) {
  Subnet& s = subnet_mut(sid);
  Neuron& n = neuron_mut(nid);
  if (!s.by_value.emplace(n.payload, nid).second) {
    fail(Errc::InvalidArgument,
         "subnet '" + s.name + "' stores value '" + value_text(n.payload) + "' twice");
  }
  s.order.push_back(nid);
  s.members.insert(nid);
  n.home_subnets.insert(sid);
}

void Mesh::restore_connection(ConnectionId id,
                              const std::vector<EndpointRef>& endpoints,
                              bool directed, std::set<std::string> labels,
                              int occurrences) {
  if (connections_.count(id)) {
    fail(Errc::InvalidArgument,
         "connection id #" + std::to_string(raw(id)) + " repeats");
  }
  if (occurrences < 1) fail(Errc::InvalidArgument, "occurrences below one");
  check_endpoints(endpoints);
  if (connection_index_.count(make_key(endpoints, labels))) {
    fail(Errc::InvalidArgument, "connection identity repeats");
  }
  Connection c;
  c.id = id;
  c.endpoints = endpoints;
  c.directed = directed;
  c.labels = std::move(labels);
  c.occurrences = occurrences;
  c.kind = derive_kind(endpoints);
  index_connection(c);
  connections_.emplace(id, std::move(c));
  next_connection_ = std::max(next_connection_, raw(id) + 1);
}

std::vector<std::string> Mesh::validate() const {
  std::vector<std::string> problems;
  const auto complain = [&problems](std::string what) {
    problems.push_back(std::move(what));
  };

  for (const auto& [sid, s] : subnets_) {
    if (s.order.size() != s.members.size() || s.order.size() != s.by_value.size()) {
      complain("subnet '" + s.name + "': inconsistent member indexes");
    }
    if (raw(sid) >= next_subnet_) complain("subnet id beyond counter");
    if (s.parent && !subnets_.count(*s.parent)) {
      complain("subnet '" + s.name + "': dangling parent");
    }
    std::set<Value> payloads;
    for (const NeuronId nid : s.order) {
      const auto it = neurons_.find(nid);
      if (it == neurons_.end()) {
        complain("subnet '" + s.name + "': dangling member neuron");
        continue;
      }
      if (!it->second.home_subnets.count(sid)) {
        complain("subnet '" + s.name + "': member without back-reference");
      }
      if (!payloads.insert(it->second.payload).second) {
        complain("subnet '" + s.name + "': duplicate payload " +
                 value_text(it->second.payload));
      }
      const auto bv = s.by_value.find(it->second.payload);
      if (bv == s.by_value.end() || bv->second != nid) {
        complain("subnet '" + s.name + "': by-value index mismatch");
      }
    }
  }

  for (const auto& [nid, n] : neurons_) {
    if (raw(nid) >= next_neuron_) complain("neuron id beyond counter");
    for (const SubnetId sid : n.home_subnets) {
      const auto it = subnets_.find(sid);
      if (it == subnets_.end()) {
        complain("neuron " + value_text(n.payload) + ": dangling home subnet");
      } else if (!it->second.contains(nid)) {
        complain("neuron " + value_text(n.payload) + ": home subnet disowns it");
      }
    }
  }

  if (connection_index_.size() != connections_.size()) {
    complain("connection identity index out of sync");
  }
  for (const auto& [cid, c] : connections_) {
    if (raw(cid) >= next_connection_) complain("connection id beyond counter");
    if (c.endpoints.size() < 2) complain("connection with arity < 2");
    if (c.occurrences < 1) complain("connection with zero occurrences");
    bool endpoints_ok = true;
    for (const auto& e : c.endpoints) {
      const bool ok = e.is_neuron() ? neurons_.count(e.neuron()) > 0
                                    : subnets_.count(e.subnet()) > 0;
      if (!ok) {
        complain("connection #" + std::to_string(raw(cid)) + ": dangling endpoint");
        endpoints_ok = false;
      }
    }
    if (!endpoints_ok) continue;
    if (derive_kind(c.endpoints) != c.kind) {
      complain("connection #" + std::to_string(raw(cid)) + ": stale kind");
    }
    const auto idx = connection_index_.find(make_key(c.endpoints, c.labels));
    if (idx == connection_index_.end() || idx->second != cid) {
      complain("connection #" + std::to_string(raw(cid)) + ": identity index miss");
    }
    for (const auto& e : c.endpoints) {
      const std::vector<ConnectionId>* list = nullptr;
      if (e.is_neuron()) {
        const auto it = incident_neuron_.find(e.neuron());
        if (it != incident_neuron_.end()) list = &it->second;
      } else {
        const auto it = incident_subnet_.find(e.subnet());
        if (it != incident_subnet_.end()) list = &it->second;
      }
      const long hits = list ? std::count(list->begin(), list->end(), cid) : 0;
      if (hits != 1) {
        complain("connection #" + std::to_string(raw(cid)) + ": adjacency asymmetry");
      }
    }
  }

  for (const auto& [key, sid] : route_table_) {
    if (!subnets_.count(sid)) complain("route '" + key + "' points nowhere");
  }
  for (const auto* slot : {&prior.integers, &prior.decimals, &prior.months,
                           &prior.time_structure, &prior.arithmetic, &prior.relational}) {
    if (*slot && !subnets_.count(**slot)) complain("prior catalog entry points nowhere");
  }
  return problems;
}

}  // namespace meshnet
