#include "meshnet/tabular.hpp"

#include <algorithm>
#include <sstream>
#include <tuple>

#include "meshnet/error.hpp"
#include "meshnet/prior.hpp"

namespace meshnet {

namespace {

constexpr const char* kIfThen = "If...Then";
constexpr const char* kBiasSubnet = "bias";

bool is_numeric(ValueKind kind) {
  return kind == ValueKind::Integer || kind == ValueKind::Decimal;
}

void check_value_kind(const AttributeSpec& spec, const Value& v) {
  if (kind_of(v) != spec.kind) {
    fail(Errc::SchemaMismatch, "attribute '" + spec.name + "' expects " +
                                   kind_name(spec.kind) + ", got " +
                                   kind_name(kind_of(v)));
  }
  if (spec.kind == ValueKind::Decimal && std::get<Decimal>(v).places != spec.places) {
    fail(Errc::SchemaMismatch,
         "attribute '" + spec.name + "' expects " + std::to_string(spec.places) +
             " decimal place(s)");
  }
}

SubnetId routed(const Mesh& mesh, const std::string& attribute) {
  const auto it = mesh.route_table().find(attribute);
  if (it == mesh.route_table().end()) {
    fail(Errc::UnroutableInput, "no route for '" + attribute + "'");
  }
  return it->second;
}

/* strongest-bond ordering shared by every tie-break: lowest weight first,
 * then most occurrences, then smallest id */
std::tuple<double, long long, std::uint64_t> strength_key(const Mesh& mesh,
                                                          NeuronId from,
                                                          NeuronId to) {
  const auto ps = mesh.pair_strength(from, to);
  return {ps ? ps->weight : 1e9, ps ? -ps->occurrences : 0, raw(to)};
}

/* nearest of an id subset to v, with the nearest_neuron ordering; empty when
 * v has no axis and no exact match among the candidates */
struct SubsetHit {
  NeuronId id{};
  bool exact = false;
  AxisValue distance{};
};

std::optional<SubsetHit> nearest_of(const Mesh& mesh,
                                    const std::vector<NeuronId>& ids,
                                    const Value& v) {
  std::optional<SubsetHit> best;
  std::optional<AxisValue> best_axis;
  for (const NeuronId id : ids) {
    const Value& payload = mesh.neuron(id).payload;
    if (payload == v) return SubsetHit{id, true, {}};
    const auto d = distance_between(payload, v);
    if (!d) continue;
    const AxisValue axis = *axis_of(payload);
    const bool better =
        !best || axis_less(*d, best->distance) ||
        (axis_equal(*d, best->distance) &&
         (axis_less(axis, *best_axis) ||
          (axis_equal(axis, *best_axis) && id < best->id)));
    if (better) {
      best = SubsetHit{id, false, *d};
      best_axis = axis;
    }
  }
  return best;
}

Decimal to_scaled(const Value& v, const char* what) {
  if (std::holds_alternative<Integer>(v)) return Decimal{std::get<Integer>(v).v, 0};
  if (std::holds_alternative<Decimal>(v)) return std::get<Decimal>(v);
  fail(Errc::MixedKinds, std::string(what) + " mixes numeric and non-numeric values");
}

long long pow10ll(int n) {
  long long r = 1;
  while (n-- > 0) r *= 10;
  return r;
}

/* num/den at the requested rounding; den > 0 */
long long rounded_div(long long num, long long den, Rounding mode) {
  const bool neg = num < 0;
  const long long mag = neg ? -num : num;
  long long q = mag / den, rem = mag % den;
  if (2 * rem > den) {
    ++q;
  } else if (2 * rem == den) {
    if (mode == Rounding::HalfAwayFromZero || q % 2 == 1) ++q;
  }
  return neg ? -q : q;
}

std::string bias_label(const Decimal& adjustment) {
  const Decimal mag{adjustment.scaled < 0 ? -adjustment.scaled : adjustment.scaled,
                    adjustment.places};
  return (adjustment.scaled < 0 ? "-" : "+") + value_text(Value{mag});
}

Decimal parse_bias_label(const std::string& label) {
  if (label.empty() || (label[0] != '+' && label[0] != '-')) {
    fail(Errc::CorruptArchive, "bias connection label '" + label + "' has no sign");
  }
  const std::string body = label.substr(1);
  const auto dot = body.find('.');
  const int places = dot == std::string::npos
                         ? 0
                         : static_cast<int>(body.size() - dot - 1);
  const Value v = parse_value(ValueKind::Decimal, body, places);
  Decimal d = std::get<Decimal>(v);
  if (label[0] == '-') d.scaled = -d.scaled;
  return d;
}

}  // namespace

const AttributeSpec& Schema::target() const {
  for (const auto& a : attributes) {
    if (a.role == AttrRole::Target) return a;
  }
  fail(Errc::NoTarget, "schema has no target attribute");
}

std::vector<const AttributeSpec*> Schema::inputs() const {
  std::vector<const AttributeSpec*> out;
  for (const auto& a : attributes) {
    if (a.role == AttrRole::Input) out.push_back(&a);
  }
  return out;
}

const AttributeSpec* Schema::find(const std::string& name) const {
  for (const auto& a : attributes) {
    if (a.name == name) return &a;
  }
  return nullptr;
}

void define_schema(Mesh& mesh, const Schema& schema) {
  int targets = 0;
  for (const auto& a : schema.attributes) {
    if (a.role == AttrRole::Target) ++targets;
  }
  if (targets != 1) {
    fail(Errc::NoTarget, "schema needs exactly one target, found " +
                             std::to_string(targets));
  }
  std::set<std::string> names;
  for (const auto& a : schema.attributes) {
    if (!names.insert(a.name).second) {
      fail(Errc::DuplicateAttribute, "attribute '" + a.name + "' repeats");
    }
  }
  for (const auto& a : schema.attributes) {
    const SubnetId sid = mesh.create_subnet(
        a.name, a.role == AttrRole::Target ? SubnetRole::Target : SubnetRole::Attribute);
    mesh.register_route(a.name, sid);
  }
}

TrainReport train_record(Mesh& mesh, const Schema& schema, const Record& record) {
  if (record.size() != schema.attributes.size()) {
    fail(Errc::SchemaMismatch, "record has " + std::to_string(record.size()) +
                                   " values, schema has " +
                                   std::to_string(schema.attributes.size()));
  }

  TrainReport report;
  std::vector<NeuronId> cells;
  std::vector<NeuronId> fresh;
  for (const auto& spec : schema.attributes) {
    const auto it = record.find(spec.name);
    if (it == record.end()) {
      fail(Errc::SchemaMismatch, "record misses attribute '" + spec.name + "'");
    }
    check_value_kind(spec, it->second);
    const auto [id, created] = mesh.insert_value(routed(mesh, spec.name), it->second);
    cells.push_back(id);
    if (created) {
      ++report.neurons_created;
      fresh.push_back(id);
    }
  }

  for (size_t i = 0; i < cells.size(); ++i) {
    for (size_t j = i + 1; j < cells.size(); ++j) {
      const auto before = mesh.next_connection_ordinal();
      mesh.connect({cells[i], cells[j]}, {kIfThen}, true);
      if (mesh.next_connection_ordinal() > before) {
        ++report.connections_created;
      } else {
        ++report.connections_updated;
      }
    }
  }

  for (const NeuronId id : fresh) {
    report.connections_created += link_neuron_to_prior(mesh, id);
  }
  return report;
}

TrainReport confirm(Mesh& mesh, const Schema& schema, const Record& record) {
  return train_record(mesh, schema, record);
}

void add_bias_rule(Mesh& mesh, const Schema& schema, const BiasRule& rule) {
  const AttributeSpec& target = schema.target();
  if (!is_numeric(target.kind)) {
    fail(Errc::BiasOnCategoricalTarget,
         "target '" + target.name + "' is not numeric");
  }
  SubnetId bias = mesh.find_subnet(kBiasSubnet)
                      ? *mesh.find_subnet(kBiasSubnet)
                      : mesh.create_subnet(kBiasSubnet, SubnetRole::Bias);
  const auto [cell, created] = mesh.insert_value(bias, Token{rule.tag});
  if (!created) fail(Errc::DuplicateBiasTag, "bias tag '" + rule.tag + "'");
  mesh.connect({cell, EndpointRef(routed(mesh, target.name))},
               {bias_label(rule.adjustment)});
}

std::vector<BiasRule> bias_rules(const Mesh& mesh, const Schema& schema) {
  std::vector<BiasRule> out;
  const auto bias = mesh.find_subnet(kBiasSubnet);
  if (!bias) return out;
  const SubnetId target = routed(mesh, schema.target().name);
  for (const NeuronId n : mesh.subnet(*bias).order) {
    for (const ConnectionId cid : mesh.connections_of(n)) {
      const Connection& c = mesh.connection(cid);
      const bool to_target = std::any_of(
          c.endpoints.begin(), c.endpoints.end(), [&](const EndpointRef& e) {
            return !e.is_neuron() && e.subnet() == target;
          });
      if (!to_target || c.labels.empty()) continue;
      out.push_back({std::get<Token>(mesh.neuron(n).payload).text,
                     parse_bias_label(*c.labels.begin())});
    }
  }
  return out;
}

std::vector<NeuronId> candidate_set(const Mesh& mesh, NeuronId anchor,
                                    SubnetId other, SubnetId target) {
  if (mesh.subnet(other).role != SubnetRole::Attribute) {
    fail(Errc::NotAttributeSubnet,
         "'" + mesh.subnet(other).name + "' is not an attribute subnet");
  }
  const std::vector<NeuronId> anchor_targets = mesh.targets_of(anchor, target);
  std::vector<NeuronId> out;
  for (const NeuronId nb : mesh.neighbors(anchor, other)) {
    const std::vector<NeuronId> nb_targets = mesh.targets_of(nb, target);
    const bool shares =
        std::any_of(nb_targets.begin(), nb_targets.end(), [&](NeuronId t) {
          return std::binary_search(anchor_targets.begin(), anchor_targets.end(), t);
        });
    if (shares) out.push_back(nb);
  }
  return out;
}

NeuronId resolve_vote(const Mesh& mesh, NeuronId selected, NeuronId anchor,
                      SubnetId target) {
  const std::vector<NeuronId> anchor_targets = mesh.targets_of(anchor, target);
  std::vector<NeuronId> shared;
  for (const NeuronId t : mesh.targets_of(selected, target)) {
    if (std::binary_search(anchor_targets.begin(), anchor_targets.end(), t)) {
      shared.push_back(t);
    }
  }
  if (shared.empty()) {
    fail(Errc::EmptyIntersection, "selected and anchor share no target");
  }
  auto key = [&](NeuronId t) {
    const auto a = mesh.pair_strength(selected, t);
    const auto b = mesh.pair_strength(anchor, t);
    return std::tuple(a->weight + b->weight,
                      -(a->occurrences + b->occurrences), raw(t));
  };
  NeuronId vote = shared.front();
  for (const NeuronId t : shared) {
    if (key(t) < key(vote)) vote = t;
  }
  return vote;
}

Prediction predict(const Mesh& mesh, const Schema& schema, const Record& inputs,
                   const std::vector<std::string>& bias_tags) {
  const auto input_specs = schema.inputs();
  if (inputs.size() != input_specs.size()) {
    fail(Errc::SchemaMismatch, "prediction wants exactly the input attributes");
  }
  for (const auto* spec : input_specs) {
    const auto it = inputs.find(spec->name);
    if (it == inputs.end()) {
      fail(Errc::SchemaMismatch, "input misses attribute '" + spec->name + "'");
    }
    check_value_kind(*spec, it->second);
  }

  const AttributeSpec& target_spec = schema.target();
  const SubnetId target = routed(mesh, target_spec.name);

  Prediction out;
  struct ElectedResult {
    NeuronId anchor;
    NeuronId result;
  };
  std::vector<ElectedResult> elected;

  for (const auto* spec : input_specs) {
    const SubnetId home = routed(mesh, spec->name);
    const Value& value = inputs.at(spec->name);
    const auto anchors =
        mesh.nearest_members(home, value, std::max(1, mesh.config.nearest_k));

    for (const auto& hit : anchors) {
      AnchorTrace at;
      at.attribute = spec->name;
      at.anchor = hit.id;
      at.exact = hit.exact;
      at.distance = hit.distance;

      const std::vector<NeuronId> anchor_targets = mesh.targets_of(hit.id, target);
      std::vector<NeuronId> votes;

      for (const auto* other : input_specs) {
        if (other == spec) continue;
        ProbeTrace probe;
        probe.other_attribute = other->name;
        probe.candidates =
            candidate_set(mesh, hit.id, routed(mesh, other->name), target);

        if (!probe.candidates.empty()) {
          const auto sel =
              nearest_of(mesh, probe.candidates, inputs.at(other->name));
          if (sel) {
            probe.selected = sel->id;
            probe.selected_exact = sel->exact;
            probe.selected_distance = sel->distance;

            for (const NeuronId t : mesh.targets_of(sel->id, target)) {
              if (std::binary_search(anchor_targets.begin(), anchor_targets.end(),
                                     t)) {
                probe.shared_targets.push_back(t);
              }
            }
            const NeuronId vote = resolve_vote(mesh, sel->id, hit.id, target);
            probe.vote = vote;
            votes.push_back(vote);
          }
        }
        at.probes.push_back(std::move(probe));
      }

      if (!votes.empty()) {
        std::map<NeuronId, int> tally;
        for (const NeuronId v : votes) ++tally[v];
        auto key = [&](NeuronId t) {
          return std::tuple_cat(std::tuple(-tally[t]),
                                strength_key(mesh, hit.id, t));
        };
        NeuronId winner = votes.front();
        for (const auto& [t, n] : tally) {
          (void)n;
          if (key(t) < key(winner)) winner = t;
        }
        at.result = winner;
        elected.push_back({hit.id, winner});
      }
      out.trace.anchors.push_back(std::move(at));
    }
  }

  if (elected.empty()) {
    fail(Errc::NoEvidence, "no attribute could gather evidence");
  }
  for (const auto& e : elected) out.trace.aggregation_inputs.push_back(e.result);

  // aggregate: numeric mean at the target's precision, else plurality
  if (is_numeric(target_spec.kind)) {
    long long sum = 0;
    for (const auto& e : elected) {
      const Decimal d = to_scaled(mesh.neuron(e.result).payload, "aggregation");
      if (d.places != (target_spec.kind == ValueKind::Decimal ? target_spec.places : 0)) {
        fail(Errc::MixedKinds, "aggregation mixes precisions");
      }
      sum += d.scaled;
    }
    const long long mean = rounded_div(sum, static_cast<long long>(elected.size()),
                                       mesh.config.rounding);
    out.trace.raw_value = target_spec.kind == ValueKind::Integer
                              ? Value{Integer{mean}}
                              : Value{Decimal{mean, target_spec.places}};
  } else {
    std::map<NeuronId, int> tally;
    for (const auto& e : elected) ++tally[e.result];
    auto key = [&](NeuronId t) {
      double best_w = 1e9;
      long long total = 0;
      for (const auto& e : elected) {
        if (e.result != t) continue;
        const auto ps = mesh.pair_strength(e.anchor, t);
        best_w = std::min(best_w, ps ? ps->weight : 1e9);
        total += ps ? ps->occurrences : 0;
      }
      return std::tuple(-tally[t], best_w, -total, raw(t));
    };
    NeuronId winner = elected.front().result;
    for (const auto& [t, n] : tally) {
      (void)n;
      if (key(t) < key(winner)) winner = t;
    }
    out.trace.raw_value = mesh.neuron(winner).payload;
  }

  out.value = out.trace.raw_value;
  if (!bias_tags.empty()) {
    if (!is_numeric(target_spec.kind)) {
      fail(Errc::BiasOnCategoricalTarget,
           "target '" + target_spec.name + "' is not numeric");
    }
    const auto rules = bias_rules(mesh, schema);
    Decimal total{0, 0};
    for (const std::string& tag : bias_tags) {
      const auto rule = std::find_if(rules.begin(), rules.end(),
                                     [&](const BiasRule& r) { return r.tag == tag; });
      if (rule == rules.end()) {
        fail(Errc::UnknownBiasTag, "bias tag '" + tag + "'");
      }
      const int places = std::max(total.places, rule->adjustment.places);
      total.scaled = total.scaled * pow10ll(places - total.places) +
                     rule->adjustment.scaled *
                         pow10ll(places - rule->adjustment.places);
      total.places = places;
      out.trace.bias_applied.push_back(*rule);
    }
    const int target_places =
        target_spec.kind == ValueKind::Decimal ? target_spec.places : 0;
    const Decimal base = to_scaled(out.value, "bias");
    const int wide = std::max(target_places, total.places);
    const long long sum = base.scaled * pow10ll(wide - base.places) +
                          total.scaled * pow10ll(wide - total.places);
    const long long scaled =
        rounded_div(sum, pow10ll(wide - target_places), mesh.config.rounding);
    out.value = target_spec.kind == ValueKind::Integer
                    ? Value{Integer{scaled}}
                    : Value{Decimal{scaled, target_places}};
  }
  return out;
}

EvaluationReport evaluate_loo(const Mesh& prototype, const Schema& schema,
                              const std::vector<Record>& records) {
  if (records.size() < 2) {
    fail(Errc::TooFewRecords, "leave-one-out needs at least two records");
  }
  const AttributeSpec& target_spec = schema.target();

  EvaluationReport report;
  double abs_error_sum = 0.0;
  int numeric_folds = 0;

  for (size_t hold = 0; hold < records.size(); ++hold) {
    Mesh fold = prototype;
    for (size_t r = 0; r < records.size(); ++r) {
      if (r != hold) train_record(fold, schema, records[r]);
    }
    Record inputs = records[hold];
    const Value expected = inputs.at(target_spec.name);
    inputs.erase(target_spec.name);

    FoldResult result;
    result.index = static_cast<int>(hold) + 1;
    result.expected = expected;
    try {
      const Prediction p = predict(fold, schema, inputs);
      result.predicted = p.value;
      result.correct = p.value == expected;
      if (is_numeric(target_spec.kind)) {
        const Decimal a = to_scaled(p.value, "evaluation");
        const Decimal b = to_scaled(expected, "evaluation");
        abs_error_sum += std::abs(static_cast<double>(a.scaled) / pow10ll(a.places) -
                                  static_cast<double>(b.scaled) / pow10ll(b.places));
        ++numeric_folds;
      }
    } catch (const Error& e) {
      if (e.code() != Errc::NoEvidence) throw;
    }
    if (result.correct) ++report.correct;
    report.folds.push_back(std::move(result));
  }

  if (is_numeric(target_spec.kind)) {
    if (numeric_folds > 0) report.mean_abs_error = abs_error_sum / numeric_folds;
  } else {
    report.accuracy = static_cast<double>(report.correct) /
                      static_cast<double>(records.size());
  }
  return report;
}

std::string render_trace(const Mesh& mesh, const Prediction& prediction) {
  std::ostringstream os;
  const auto cell = [&mesh](NeuronId id) {
    return value_text(mesh.neuron(id).payload) + " (n" + std::to_string(raw(id)) + ")";
  };
  for (const auto& a : prediction.trace.anchors) {
    os << a.attribute << ": anchor " << cell(a.anchor)
       << (a.exact ? " exact" : " nearest, distance " + axis_text(a.distance))
       << "\n";
    for (const auto& p : a.probes) {
      os << "  via " << p.other_attribute << ": candidates {";
      for (size_t i = 0; i < p.candidates.size(); ++i) {
        os << (i ? ", " : "") << cell(p.candidates[i]);
      }
      os << "}";
      if (p.selected) {
        os << " -> " << cell(*p.selected)
           << (p.selected_exact
                   ? " exact"
                   : " nearest, distance " + axis_text(p.selected_distance));
        os << ", shared targets {";
        for (size_t i = 0; i < p.shared_targets.size(); ++i) {
          os << (i ? ", " : "") << cell(p.shared_targets[i]);
        }
        os << "}, vote " << cell(*p.vote);
      } else {
        os << " -> no vote";
      }
      os << "\n";
    }
    os << "  elects " << (a.result ? cell(*a.result) : std::string("nothing"))
       << "\n";
  }
  os << "aggregate {";
  for (size_t i = 0; i < prediction.trace.aggregation_inputs.size(); ++i) {
    os << (i ? ", " : "") << cell(prediction.trace.aggregation_inputs[i]);
  }
  os << "} -> " << value_text(prediction.trace.raw_value) << "\n";
  for (const auto& rule : prediction.trace.bias_applied) {
    os << "bias " << rule.tag << " " << bias_label(rule.adjustment) << "\n";
  }
  os << "prediction " << value_text(prediction.value) << "\n";
  return os.str();
}

}  // namespace meshnet
