#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "meshnet/mesh.hpp"

namespace meshnet {

enum class AttrRole { Input, Target };

struct AttributeSpec {
  std::string name;
  ValueKind kind = ValueKind::Category;
  int places = 0;  // decimal precision; meaningful only for ValueKind::Decimal
  AttrRole role = AttrRole::Input;
};

/* Ordered column layout of one dataset: any number of inputs plus exactly one
 * target. */
struct Schema {
  std::vector<AttributeSpec> attributes;

  const AttributeSpec& target() const;
  std::vector<const AttributeSpec*> inputs() const;
  const AttributeSpec* find(const std::string& name) const;
};

/* Values keyed by attribute name.  A full record carries every column, a
 * prediction request carries the inputs only. */
using Record = std::map<std::string, Value>;

struct TrainReport {
  int neurons_created = 0;
  int connections_created = 0;
  int connections_updated = 0;
};

/* A named signed adjustment, stored in the graph itself: Token(tag) in the
 * bias subnet, joined to the target subnet with the rendered amount as the
 * connection label. */
struct BiasRule {
  std::string tag;
  Decimal adjustment;
};

// ---- prediction trace ----

struct ProbeTrace {
  std::string other_attribute;
  std::vector<NeuronId> candidates;      // both conditions met, sorted by id
  std::optional<NeuronId> selected;
  bool selected_exact = false;
  AxisValue selected_distance{};
  std::vector<NeuronId> shared_targets;  // targets common to selected & anchor
  std::optional<NeuronId> vote;
};

struct AnchorTrace {
  std::string attribute;
  NeuronId anchor{};
  bool exact = false;
  AxisValue distance{};
  std::vector<ProbeTrace> probes;
  std::optional<NeuronId> result;  // this anchor's elected target
};

struct PredictionTrace {
  std::vector<AnchorTrace> anchors;
  std::vector<NeuronId> aggregation_inputs;
  Value raw_value;  // aggregate before bias
  std::vector<BiasRule> bias_applied;
};

struct Prediction {
  Value value;
  PredictionTrace trace;
};

struct FoldResult {
  int index = 0;  // 1-based record number
  Value expected;
  std::optional<Value> predicted;  // absent when the fold raised NoEvidence
  bool correct = false;
};

struct EvaluationReport {
  std::vector<FoldResult> folds;
  int correct = 0;
  std::optional<double> accuracy;         // categorical targets
  std::optional<double> mean_abs_error;   // numeric targets
};

// ---- operations ----

/* Creates one subnet per attribute (subnet name = attribute name) and routes
 * the names through the central table. */
void define_schema(Mesh& mesh, const Schema& schema);

/* Stores one complete record: values deduped into their subnets, every value
 * pair joined with a directed "If...Then" edge in schema order, new neurons
 * anchored to prior knowledge. */
TrainReport train_record(Mesh& mesh, const Schema& schema, const Record& record);

/* User feedback confirming an outcome; stored exactly like training. */
TrainReport confirm(Mesh& mesh, const Schema& schema, const Record& record);

void add_bias_rule(Mesh& mesh, const Schema& schema, const BiasRule& rule);
std::vector<BiasRule> bias_rules(const Mesh& mesh, const Schema& schema);

/* Members of `other` that (1) share a connection with the anchor and
 * (2) lead to at least one of the anchor's targets.  Sorted by id. */
std::vector<NeuronId> candidate_set(const Mesh& mesh, NeuronId anchor,
                                    SubnetId other, SubnetId target);

/* The target both `selected` and `anchor` point at; several shared targets
 * resolve to the one with the minimum summed connection weight to the pair,
 * then the maximum summed occurrences, then the smallest id. */
NeuronId resolve_vote(const Mesh& mesh, NeuronId selected, NeuronId anchor,
                      SubnetId target);

/* Fill in the target for a record of input values.
 *
 * Per input attribute the anchor is the nearest stored value.  Each other
 * input attribute then offers the anchor's neighbours that share a target
 * with it; the offer closest to that attribute's input value casts a vote,
 * the anchor takes the plurality of its votes, and the anchors' choices are
 * aggregated — numeric targets by mean at the target's precision, categorical
 * ones by plurality.  All tie-breaks prefer the strongest (lowest-weight)
 * link, then the most occurrences, then the smallest id.  Read-only. */
Prediction predict(const Mesh& mesh, const Schema& schema, const Record& inputs,
                   const std::vector<std::string>& bias_tags = {});

/* Leave-one-out over `records`: each fold trains a copy of `prototype` (an
 * initialised but untrained mesh) on the other records and predicts the
 * held-out target. */
EvaluationReport evaluate_loo(const Mesh& prototype, const Schema& schema,
                              const std::vector<Record>& records);

std::string render_trace(const Mesh& mesh, const Prediction& prediction);

}  // namespace meshnet
