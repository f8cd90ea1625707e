#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "meshnet/value.hpp"

namespace meshnet {

/* Ordinal identifiers.  Assigned monotonically starting at 1 and never reused,
 * so rebuilding a mesh from the same operation sequence reproduces the same
 * ids bit for bit. */
enum class NeuronId : std::uint64_t {};
enum class SubnetId : std::uint64_t {};
enum class ConnectionId : std::uint64_t {};

inline std::uint64_t raw(NeuronId id) { return static_cast<std::uint64_t>(id); }
inline std::uint64_t raw(SubnetId id) { return static_cast<std::uint64_t>(id); }
inline std::uint64_t raw(ConnectionId id) { return static_cast<std::uint64_t>(id); }

enum class SubnetRole {
  Prior,      // built-in knowledge (number lines, months, time structure)
  Attribute,  // one input column of a schema
  Target,     // the predicted column
  Shape,      // pixels of one registered image or a shape prior
  Super,      // groups shape subnets of one model
  Label,      // class labels attached to shapes
  Bias,       // named prediction adjustments
  Operator,   // arithmetic / relational symbols
  Central,    // bookkeeping of the routing mechanism itself
};

const char* role_name(SubnetRole role);
SubnetRole role_from_name(const std::string& name);

/* A connection endpoint is either a single neuron or a whole subnet. */
struct EndpointRef {
  enum class Tag { Neuron, Subnet };
  Tag tag = Tag::Neuron;
  std::uint64_t id = 0;

  EndpointRef() = default;
  EndpointRef(NeuronId n) : tag(Tag::Neuron), id(raw(n)) {}
  EndpointRef(SubnetId s) : tag(Tag::Subnet), id(raw(s)) {}

  bool is_neuron() const { return tag == Tag::Neuron; }
  NeuronId neuron() const { return NeuronId{id}; }
  SubnetId subnet() const { return SubnetId{id}; }

  auto operator<=>(const EndpointRef&) const = default;
};

enum class ConnectionKind {
  NeuronNeuronSameSubnet,
  NeuronNeuronCrossSubnet,
  NeuronNeuronCentral,
  SubnetSubnet,
  SubnetSubnetCentral,
  NeuronSubnet,
  NeuronSubnetCentral,
};

const char* connection_kind_name(ConnectionKind kind);

struct Neuron {
  NeuronId id{};
  Value payload;
  std::set<SubnetId> home_subnets;
};

/* Weight is not stored: it is always max(floor, initial - decrement*(occ-1)),
 * so keeping only the occurrence count makes the law impossible to violate.
 * Lower weight means a stronger bond. */
struct Connection {
  ConnectionId id{};
  std::vector<EndpointRef> endpoints;  // ordered; meaningful when directed
  bool directed = false;
  std::set<std::string> labels;
  int occurrences = 1;
  ConnectionKind kind = ConnectionKind::NeuronNeuronCrossSubnet;
};

struct Subnet {
  SubnetId id{};
  std::string name;
  SubnetRole role = SubnetRole::Attribute;
  std::optional<SubnetId> parent;
  std::vector<NeuronId> order;  // insertion order; duplicates impossible

  // rebuilt indexes, not serialized
  std::set<NeuronId> members;
  std::map<Value, NeuronId> by_value;

  size_t size() const { return order.size(); }
  bool contains(NeuronId n) const { return members.count(n) != 0; }
};

enum class Rounding { HalfAwayFromZero, HalfEven };

struct EngineConfig {
  double weight_initial = 1.0;
  double weight_decrement = 0.25;
  double weight_floor = 0.0;
  int nearest_k = 1;                   // anchors consulted per input attribute
  Rounding rounding = Rounding::HalfAwayFromZero;
  int binarize_threshold = 128;        // grayscale < threshold -> foreground
};

/* Handles to the prior-knowledge subnets a mesh was initialised with. */
struct PriorCatalog {
  std::optional<SubnetId> integers;
  std::optional<SubnetId> decimals;
  std::optional<SubnetId> months;
  std::optional<SubnetId> time_structure;
  std::optional<SubnetId> arithmetic;
  std::optional<SubnetId> relational;
};

struct NearestHit {
  NeuronId id{};
  bool exact = false;
  AxisValue distance{};  // zero when exact
};

/* Min connection weight and total occurrences across every connection joining
 * two specific neurons; the comparison key of all vote tie-breaks. */
struct PairStrength {
  double weight = 0.0;
  long long occurrences = 0;
};

class Mesh {
public:
  EngineConfig config;
  PriorCatalog prior;

  // ---- construction ----

  /* New named subnet; names are unique across the mesh. */
  SubnetId create_subnet(const std::string& name, SubnetRole role,
                         std::optional<SubnetId> parent = std::nullopt);

  /* Insert a value into a subnet.  Equal payloads within one subnet collapse
   * to the same neuron; the bool is true when a neuron was created. */
  std::pair<NeuronId, bool> insert_value(SubnetId s, const Value& v);

  /* Join two or more endpoints.  A connection is identified by its unordered
   * endpoint set plus its label set: re-connecting the same combination bumps
   * the occurrence count of the existing connection instead of duplicating
   * it.  Returns the connection id either way. */
  ConnectionId connect(const std::vector<EndpointRef>& endpoints,
                       std::set<std::string> labels = {}, bool directed = false);

  /* One more observation of an existing connection; returns the new weight. */
  double record_occurrence(ConnectionId c);

  // ---- queries (const, safe to run concurrently) ----

  double weight_of(ConnectionId c) const;
  double weight_for_occurrences(int occurrences) const;

  /* Neurons sharing at least one connection with n (direction ignored;
   * subnet-level endpoints do not make their members neighbours).  Optionally
   * restricted to members of one subnet.  Sorted by id. */
  std::vector<NeuronId> neighbors(NeuronId n,
                                  std::optional<SubnetId> within = std::nullopt) const;

  /* Members of the target subnet directly connected to n.  Sorted by id. */
  std::vector<NeuronId> targets_of(NeuronId n, SubnetId target) const;

  /* Member of s closest to v on the axis.  An exact payload match wins
   * outright; otherwise the smallest |axis - axis| wins, ties going to the
   * smaller axis value and then the smaller id. */
  NearestHit nearest_neuron(SubnetId s, const Value& v) const;

  /* The nearest_neuron ordering, first k members. */
  std::vector<NearestHit> nearest_members(SubnetId s, const Value& v, int k) const;

  ConnectionKind classify_connection(ConnectionId c) const;

  std::optional<SubnetId> find_subnet(const std::string& name) const;
  std::optional<NeuronId> find_neuron(SubnetId s, const Value& v) const;
  std::optional<ConnectionId> find_connection(const std::vector<EndpointRef>& endpoints,
                                              const std::set<std::string>& labels) const;
  std::optional<PairStrength> pair_strength(NeuronId a, NeuronId b) const;

  const Neuron& neuron(NeuronId id) const;
  const Subnet& subnet(SubnetId id) const;
  const Connection& connection(ConnectionId id) const;
  const std::vector<ConnectionId>& connections_of(NeuronId n) const;

  const std::map<SubnetId, Subnet>& subnets() const { return subnets_; }
  const std::map<NeuronId, Neuron>& neurons() const { return neurons_; }
  const std::map<ConnectionId, Connection>& connections() const { return connections_; }
  const std::map<std::string, SubnetId>& route_table() const { return route_table_; }

  bool neuron_in_central(NeuronId n) const;

  /* Derive a free subnet name from a base by appending ~2, ~3, ... */
  std::string make_unique_name(const std::string& base) const;

  // ---- routing ----

  void register_route(const std::string& key, SubnetId s);

  /* Central dispatch: attribute name -> subnet.  Each lookup is appended to
   * the scratch log (single-writer, like every mutation). */
  SubnetId route(const std::string& attribute);

  const std::vector<std::string>& route_log() const { return route_log_; }
  void clear_scratch() { route_log_.clear(); }

  // ---- structural surgery ----

  /* Union of a and b as a fresh subnet; a and b disappear.  Equal payloads
   * collapse to the lower-id neuron and the loser's connections are rewired
   * to the survivor (colliding connection identities absorb occurrences). */
  SubnetId merge_subnets(SubnetId a, SubnetId b, const std::string& merged_name);

  /* Partition s by a payload predicate into <name>/selected and <name>/rest;
   * s disappears.  Neuron-level connections are untouched; connections using
   * s itself as an endpoint go away with it. */
  std::pair<SubnetId, SubnetId> split_subnet(
      SubnetId s, const std::function<bool(const Value&)>& selector);

  // ---- integrity ----

  /* Re-checks the structural invariants (dedupe, identity index, adjacency
   * symmetry, kind consistency, referential integrity).  Returns problem
   * descriptions; empty means healthy. */
  std::vector<std::string> validate() const;

  std::uint64_t next_neuron_ordinal() const { return next_neuron_; }
  std::uint64_t next_subnet_ordinal() const { return next_subnet_; }
  std::uint64_t next_connection_ordinal() const { return next_connection_; }

  /* Used by the archive loader to restore counters exactly. */
  void restore_counters(std::uint64_t neuron, std::uint64_t subnet, std::uint64_t conn);

  // ---- archive restore (entities with preassigned ids; loader use only) ----

  /* Each restore_* inserts one entity exactly as serialized and rebuilds the
   * derived indexes around it.  Order: subnets, neurons, memberships (in each
   * subnet's serialized order), connections.  Violations of the structural
   * invariants throw, which the loader reports as a corrupt archive. */
  void restore_subnet(SubnetId id, const std::string& name, SubnetRole role,
                      std::optional<SubnetId> parent);
  void restore_neuron(NeuronId id, const Value& payload);
  void restore_membership(SubnetId s, NeuronId n);
  void restore_connection(ConnectionId id, const std::vector<EndpointRef>& endpoints,
                          bool directed, std::set<std::string> labels,
                          int occurrences);

private:
  using ConnKey = std::pair<std::vector<EndpointRef>, std::vector<std::string>>;

  static ConnKey make_key(const std::vector<EndpointRef>& endpoints,
                          const std::set<std::string>& labels);

  ConnectionKind derive_kind(const std::vector<EndpointRef>& endpoints) const;
  void check_endpoints(const std::vector<EndpointRef>& endpoints) const;
  void index_connection(const Connection& c);
  void unindex_connection(const Connection& c);
  void drop_connection(ConnectionId id);

  /* Replace every occurrence of endpoint `from` with `to` across all incident
   * connections, absorbing identity collisions. */
  void rewire_endpoint(EndpointRef from, EndpointRef to);

  /* Re-derive the cached kind of every connection touching `nid`; needed after
   * an operation moved the neuron between home subnets. */
  void reclassify_incident(NeuronId nid);

  Subnet& subnet_mut(SubnetId id);
  Neuron& neuron_mut(NeuronId id);

  std::map<SubnetId, Subnet> subnets_;
  std::map<NeuronId, Neuron> neurons_;
  std::map<ConnectionId, Connection> connections_;
  std::map<std::string, SubnetId> subnet_names_;
  std::map<ConnKey, ConnectionId> connection_index_;
  std::map<NeuronId, std::vector<ConnectionId>> incident_neuron_;
  std::map<SubnetId, std::vector<ConnectionId>> incident_subnet_;
  std::map<std::string, SubnetId> route_table_;
  std::vector<std::string> route_log_;

  std::uint64_t next_neuron_ = 1;
  std::uint64_t next_subnet_ = 1;
  std::uint64_t next_connection_ = 1;
};

}  // namespace meshnet
