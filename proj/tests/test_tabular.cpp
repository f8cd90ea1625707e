#include <doctest.h>

#include <algorithm>
#include <functional>
#include <string>
#include <vector>

#include "meshnet/csv.hpp"
#include "meshnet/error.hpp"
#include "meshnet/mesh.hpp"
#include "meshnet/prior.hpp"
#include "meshnet/tabular.hpp"

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

std::vector<std::string> texts(const Mesh& mesh, const std::vector<NeuronId>& ids) {
  std::vector<std::string> out;
  for (const NeuronId id : ids) out.push_back(value_text(mesh.neuron(id).payload));
  return out;
}

struct Fixture {
  Mesh mesh;
  Schema schema;
  std::vector<Record> records;
};

/* Bare fixture: schema subnets only, no prior knowledge.  Predictions do not
 * depend on priors (anchors, candidates and votes all live inside the schema
 * subnets), which several tests below exploit. */
Fixture insulin_fixture(size_t train_count, bool with_priors = false) {
  Fixture f;
  if (with_priors) {
    build_integer_subnet(f.mesh, 0, 36);
    build_month_subnet(f.mesh);
    build_time_subnet(f.mesh);
    build_operator_subnets(f.mesh);
    link_prior(f.mesh);
  }
  f.schema = load_schema_file(data_path("insulin.schema"));
  define_schema(f.mesh, f.schema);
  f.records = ingest_csv_file(data_path("insulin.csv"), f.schema);
  REQUIRE(f.records.size() == 30);
  for (size_t i = 0; i < train_count; ++i) {
    train_record(f.mesh, f.schema, f.records[i]);
  }
  return f;
}

Schema toy_schema(std::vector<AttributeSpec> attrs) { return Schema{std::move(attrs)}; }

const AttributeSpec kIntA{"a", ValueKind::Integer, 0, AttrRole::Input};
const AttributeSpec kIntB{"b", ValueKind::Integer, 0, AttrRole::Input};
const AttributeSpec kIntT{"t", ValueKind::Integer, 0, AttrRole::Target};
const AttributeSpec kCatT{"t", ValueKind::Category, 0, AttrRole::Target};

Record row(long long a, long long b, Value t) {
  return Record{{"a", Integer{a}}, {"b", Integer{b}}, {"t", std::move(t)}};
}

}  // namespace

TEST_CASE("a schema needs exactly one target and unique names") {
  Mesh mesh;
  CHECK(fails_with(Errc::NoTarget, [&] {
    define_schema(mesh, toy_schema({kIntA, kIntB}));
  }));
  CHECK(fails_with(Errc::NoTarget, [&] {
    define_schema(mesh, toy_schema({kIntA, kIntT, {"u", ValueKind::Integer, 0, AttrRole::Target}}));
  }));
  CHECK(fails_with(Errc::DuplicateAttribute, [&] {
    define_schema(mesh, toy_schema({kIntA, kIntA, kIntT}));
  }));

  const Schema schema = toy_schema({kIntA, kIntB, kIntT});
  define_schema(mesh, schema);
  const auto a = mesh.find_subnet("a");
  const auto t = mesh.find_subnet("t");
  REQUIRE(a.has_value());
  REQUIRE(t.has_value());
  CHECK(mesh.subnet(*a).role == SubnetRole::Attribute);
  CHECK(mesh.subnet(*t).role == SubnetRole::Target);
  CHECK(mesh.route("a") == *a);
  CHECK(mesh.route("t") == *t);
  CHECK(schema.target().name == "t");
  CHECK(schema.inputs().size() == 2);
  CHECK(schema.find("b") != nullptr);
  CHECK(schema.find("z") == nullptr);
}

TEST_CASE("training dedupes values and reinforces repeated pairs") {
  Fixture f = insulin_fixture(0);
  TrainReport total;
  for (size_t i = 0; i < 10; ++i) {
    const TrainReport r = train_record(f.mesh, f.schema, f.records[i]);
    total.neurons_created += r.neurons_created;
    total.connections_created += r.connections_created;
    total.connections_updated += r.connections_updated;
  }
  // ten records hold 5 distinct dates, 6 times and 6 doses
  CHECK(total.neurons_created == 17);
  CHECK(total.connections_created == 28);  // 30 pairs, 2 of them repeats
  CHECK(total.connections_updated == 2);

  const SubnetId date = *f.mesh.find_subnet("date");
  const SubnetId time = *f.mesh.find_subnet("time");
  const SubnetId insulin = *f.mesh.find_subnet("insulin");
  CHECK(f.mesh.subnet(date).size() == 5);
  CHECK(f.mesh.subnet(time).size() == 6);
  CHECK(f.mesh.subnet(insulin).size() == 6);

  // the evening dose pair appears in records 2 and 10
  const NeuronId evening = *f.mesh.find_neuron(time, TimeHM{18, 0});
  const NeuronId dose32 = *f.mesh.find_neuron(insulin, Integer{32});
  const auto c = f.mesh.find_connection({evening, dose32}, {"If...Then"});
  REQUIRE(c.has_value());
  CHECK(f.mesh.connection(*c).occurrences == 2);
  CHECK(f.mesh.weight_of(*c) == doctest::Approx(0.75));
  CHECK(f.mesh.connection(*c).directed);

  // a pair seen once keeps the initial weight
  const NeuronId first = *f.mesh.find_neuron(date, DateDM{1, 6});
  const NeuronId morning = *f.mesh.find_neuron(time, TimeHM{8, 0});
  const auto once = f.mesh.find_connection({first, morning}, {"If...Then"});
  REQUIRE(once.has_value());
  CHECK(f.mesh.weight_of(*once) == doctest::Approx(1.0));

  CHECK(f.mesh.validate().empty());
}

TEST_CASE("training anchors fresh values to the prior catalog") {
  Fixture f = insulin_fixture(0, /*with_priors=*/true);
  TrainReport total;
  for (size_t i = 0; i < 10; ++i) {
    const TrainReport r = train_record(f.mesh, f.schema, f.records[i]);
    total.neurons_created += r.neurons_created;
    total.connections_created += r.connections_created;
    total.connections_updated += r.connections_updated;
  }
  CHECK(total.neurons_created == 17);
  // 28 record pairs plus prior anchors: 5 dates x2, 6 times x2, 6 doses x1
  CHECK(total.connections_created == 56);
  CHECK(total.connections_updated == 2);

  const SubnetId date = *f.mesh.find_subnet("date");
  const NeuronId d3 = *f.mesh.find_neuron(date, DateDM{3, 6});
  const NeuronId jun = *f.mesh.find_neuron(*f.mesh.prior.months, Month{6});
  const NeuronId three = *f.mesh.find_neuron(*f.mesh.prior.integers, Integer{3});
  CHECK(f.mesh.find_connection({d3, jun}, {}).has_value());
  CHECK(f.mesh.find_connection({d3, three}, {}).has_value());
  CHECK(f.mesh.validate().empty());
}

TEST_CASE("retraining a record reinforces and creates nothing") {
  SUBCASE("in isolation every pair of the record drops to 0.75") {
    Fixture f = insulin_fixture(0);
    train_record(f.mesh, f.schema, f.records[1]);
    const TrainReport again = train_record(f.mesh, f.schema, f.records[1]);
    CHECK(again.neurons_created == 0);
    CHECK(again.connections_created == 0);
    CHECK(again.connections_updated == 3);
    for (const auto& [cid, c] : f.mesh.connections()) {
      CHECK(c.occurrences == 2);
      CHECK(f.mesh.weight_of(cid) == doctest::Approx(0.75));
    }
  }

  SUBCASE("after ten records a shared pair sinks below the rest") {
    Fixture f = insulin_fixture(10);
    const TrainReport again = train_record(f.mesh, f.schema, f.records[1]);
    CHECK(again.neurons_created == 0);
    CHECK(again.connections_created == 0);
    CHECK(again.connections_updated == 3);

    const SubnetId date = *f.mesh.find_subnet("date");
    const SubnetId time = *f.mesh.find_subnet("time");
    const SubnetId insulin = *f.mesh.find_subnet("insulin");
    const NeuronId d1 = *f.mesh.find_neuron(date, DateDM{1, 6});
    const NeuronId evening = *f.mesh.find_neuron(time, TimeHM{18, 0});
    const NeuronId dose32 = *f.mesh.find_neuron(insulin, Integer{32});

    // (1-Jun, 18:00) was unique to record 2: now seen twice
    const auto de = f.mesh.find_connection({d1, evening}, {"If...Then"});
    CHECK(f.mesh.weight_of(*de) == doctest::Approx(0.75));
    // (18:00, 32) was already shared with record 10: now seen three times
    const auto ed = f.mesh.find_connection({evening, dose32}, {"If...Then"});
    CHECK(f.mesh.connection(*ed).occurrences == 3);
    CHECK(f.mesh.weight_of(*ed) == doctest::Approx(0.5));
  }
}

TEST_CASE("the morning and evening golden predictions hold") {
  Fixture f = insulin_fixture(10);

  const Prediction morning = predict(f.mesh, f.schema,
                                     {{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}});
  CHECK(morning.value == Value{Integer{12}});

  const Prediction evening = predict(f.mesh, f.schema,
                                     {{"date", DateDM{6, 6}}, {"time", TimeHM{17, 0}}});
  CHECK(evening.value == Value{Integer{33}});

  // the morning trace step by step
  REQUIRE(morning.trace.anchors.size() == 2);
  const AnchorTrace& via_date = morning.trace.anchors[0];
  CHECK(via_date.attribute == "date");
  CHECK(value_text(f.mesh.neuron(via_date.anchor).payload) == "5-Jun");
  CHECK_FALSE(via_date.exact);
  REQUIRE(via_date.probes.size() == 1);
  CHECK(via_date.probes[0].other_attribute == "time");
  CHECK(texts(f.mesh, via_date.probes[0].candidates) ==
        std::vector<std::string>{"08:00", "18:00"});
  REQUIRE(via_date.probes[0].selected.has_value());
  CHECK(value_text(f.mesh.neuron(*via_date.probes[0].selected).payload) == "08:00");
  REQUIRE(via_date.probes[0].vote.has_value());
  CHECK(value_text(f.mesh.neuron(*via_date.probes[0].vote).payload) == "12");
  REQUIRE(via_date.result.has_value());

  const AnchorTrace& via_time = morning.trace.anchors[1];
  CHECK(via_time.attribute == "time");
  CHECK(value_text(f.mesh.neuron(via_time.anchor).payload) == "10:00");
  CHECK(texts(f.mesh, via_time.probes[0].candidates) ==
        std::vector<std::string>{"2-Jun", "4-Jun"});
  CHECK(value_text(f.mesh.neuron(*via_time.probes[0].selected).payload) == "4-Jun");
  CHECK(value_text(f.mesh.neuron(*via_time.probes[0].vote).payload) == "12");

  CHECK(morning.trace.aggregation_inputs.size() == 2);
  CHECK(morning.trace.raw_value == Value{Integer{12}});
  CHECK(morning.trace.bias_applied.empty());

  // the rendered trace names the anchors and the verdict
  const std::string text = render_trace(f.mesh, morning);
  CHECK(text.find("5-Jun") != std::string::npos);
  CHECK(text.find("10:00") != std::string::npos);
  CHECK(text.find("12") != std::string::npos);
}

TEST_CASE("candidates need both a connection and a shared target") {
  Fixture f = insulin_fixture(10);
  const SubnetId date = *f.mesh.find_subnet("date");
  const SubnetId time = *f.mesh.find_subnet("time");
  const SubnetId insulin = *f.mesh.find_subnet("insulin");

  const NeuronId d5 = *f.mesh.find_neuron(date, DateDM{5, 6});
  CHECK(texts(f.mesh, candidate_set(f.mesh, d5, time, insulin)) ==
        std::vector<std::string>{"08:00", "18:00"});

  const NeuronId t10 = *f.mesh.find_neuron(time, TimeHM{10, 0});
  CHECK(texts(f.mesh, candidate_set(f.mesh, t10, date, insulin)) ==
        std::vector<std::string>{"2-Jun", "4-Jun"});

  CHECK(fails_with(Errc::NotAttributeSubnet,
                   [&] { candidate_set(f.mesh, d5, insulin, insulin); }));

  // a hand-wired connection without a shared target is not a candidate
  Mesh mesh;
  const Schema schema = toy_schema({kIntA, kIntB, kIntT});
  define_schema(mesh, schema);
  train_record(mesh, schema, row(1, 7, Integer{100}));
  train_record(mesh, schema, row(2, 8, Integer{200}));
  const SubnetId a = *mesh.find_subnet("a");
  const SubnetId b = *mesh.find_subnet("b");
  const SubnetId t = *mesh.find_subnet("t");
  const NeuronId a1 = *mesh.find_neuron(a, Integer{1});
  const NeuronId b8 = *mesh.find_neuron(b, Integer{8});
  mesh.connect({a1, b8}, {"sidelink"});
  CHECK(texts(mesh, candidate_set(mesh, a1, b, t)) ==
        std::vector<std::string>{"7"});
}

TEST_CASE("vote resolution walks weight, occurrences, then id") {
  Mesh mesh;
  const Schema schema = toy_schema({kIntA, kIntB, kIntT});
  define_schema(mesh, schema);
  train_record(mesh, schema, row(1, 5, Integer{100}));
  train_record(mesh, schema, row(1, 5, Integer{200}));
  train_record(mesh, schema, row(1, 5, Integer{200}));
  const SubnetId t = *mesh.find_subnet("t");
  const NeuronId a1 = *mesh.find_neuron(*mesh.find_subnet("a"), Integer{1});
  const NeuronId b5 = *mesh.find_neuron(*mesh.find_subnet("b"), Integer{5});

  // 200 was seen twice: summed weight 1.5 beats 2.0
  const NeuronId pick = resolve_vote(mesh, b5, a1, t);
  CHECK(value_text(mesh.neuron(pick).payload) == "200");

  // balance the weights: equal weight, equal occurrences, lower id wins
  train_record(mesh, schema, row(1, 5, Integer{100}));
  const NeuronId tied = resolve_vote(mesh, b5, a1, t);
  CHECK(value_text(mesh.neuron(tied).payload) == "100");

  // a pair with no shared target cannot vote
  train_record(mesh, schema, row(2, 6, Integer{300}));
  const NeuronId b6 = *mesh.find_neuron(*mesh.find_subnet("b"), Integer{6});
  CHECK(fails_with(Errc::EmptyIntersection,
                   [&] { resolve_vote(mesh, b6, a1, t); }));
}

TEST_CASE("numeric aggregation is the mean, rounded half away from zero") {
  SUBCASE("integer target") {
    Mesh mesh;
    const Schema schema = toy_schema({kIntA, kIntB, kIntT});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Integer{10}));
    train_record(mesh, schema, row(2, 6, Integer{11}));
    // anchor a=1 votes 10, anchor b=6 votes 11: mean 10.5 rounds up
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(p.value == Value{Integer{11}});
  }

  SUBCASE("negative values round away from zero") {
    Mesh mesh;
    const Schema schema = toy_schema({kIntA, kIntB, kIntT});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Integer{-10}));
    train_record(mesh, schema, row(2, 6, Integer{-11}));
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(p.value == Value{Integer{-11}});  // -10.5 moves away from zero
  }

  SUBCASE("decimal target keeps its precision") {
    Mesh mesh;
    const Schema schema =
        toy_schema({kIntA, kIntB, {"t", ValueKind::Decimal, 1, AttrRole::Target}});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Decimal{12, 1}));
    train_record(mesh, schema, row(2, 6, Decimal{15, 1}));
    // mean of 1.2 and 1.5 is 1.35: one decimal place, half away from zero
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(p.value == Value{Decimal{14, 1}});
  }
}

TEST_CASE("categorical aggregation is a plurality with strength tie-breaks") {
  SUBCASE("plain majority") {
    Mesh mesh;
    const Schema schema = toy_schema({kIntA, kIntB, kCatT});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Category{"x"}));
    train_record(mesh, schema, row(2, 5, Category{"x"}));
    train_record(mesh, schema, row(2, 6, Category{"y"}));
    // inputs (1, 5): both anchors vote x
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{5}}});
    CHECK(p.value == Value{Category{"x"}});
  }

  SUBCASE("a 1-1 tie goes to the stronger supporter link") {
    Mesh mesh;
    const Schema schema = toy_schema({kIntA, kIntB, kCatT});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Category{"x"}));
    train_record(mesh, schema, row(1, 5, Category{"x"}));  // (a1, x) at 0.75
    train_record(mesh, schema, row(2, 6, Category{"y"}));
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(p.value == Value{Category{"x"}});

    Mesh flip;
    define_schema(flip, schema);
    train_record(flip, schema, row(1, 5, Category{"x"}));
    train_record(flip, schema, row(2, 6, Category{"y"}));
    train_record(flip, schema, row(2, 6, Category{"y"}));  // (b6, y) at 0.75
    const Prediction q = predict(flip, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(q.value == Value{Category{"y"}});
  }

  SUBCASE("a dead-even tie falls back to the older neuron") {
    Mesh mesh;
    const Schema schema = toy_schema({kIntA, kIntB, kCatT});
    define_schema(mesh, schema);
    train_record(mesh, schema, row(1, 5, Category{"x"}));
    train_record(mesh, schema, row(2, 6, Category{"y"}));
    const Prediction p = predict(mesh, schema, {{"a", Integer{1}}, {"b", Integer{6}}});
    CHECK(p.value == Value{Category{"x"}});  // x entered the mesh first
  }
}

TEST_CASE("confirming an outcome stores it like training") {
  Fixture f = insulin_fixture(10);
  const TrainReport r = confirm(f.mesh, f.schema, f.records[10]);  // 6-Jun 11:00 13
  CHECK(r.neurons_created == 2);  // 6-Jun and 11:00; dose 13 already exists

  const Prediction p = predict(f.mesh, f.schema,
                               {{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}});
  CHECK(p.value == Value{Integer{13}});
  CHECK(p.trace.anchors[0].exact);
  CHECK(p.trace.anchors[1].exact);
}

TEST_CASE("bias rules are stored in the graph and applied on request") {
  Fixture f = insulin_fixture(10);
  add_bias_rule(f.mesh, f.schema, {"extra-sugar", Decimal{2, 0}});
  add_bias_rule(f.mesh, f.schema, {"light-meal", Decimal{-1, 0}});

  const auto rules = bias_rules(f.mesh, f.schema);
  REQUIRE(rules.size() == 2);
  CHECK(std::any_of(rules.begin(), rules.end(), [](const BiasRule& r) {
    return r.tag == "extra-sugar" && r.adjustment == Decimal{2, 0};
  }));
  const auto bias_subnet = f.mesh.find_subnet("bias");
  REQUIRE(bias_subnet.has_value());
  CHECK(f.mesh.subnet(*bias_subnet).role == SubnetRole::Bias);

  CHECK(fails_with(Errc::DuplicateBiasTag, [&] {
    add_bias_rule(f.mesh, f.schema, {"extra-sugar", Decimal{9, 0}});
  }));

  const Record inputs{{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}};
  CHECK(predict(f.mesh, f.schema, inputs).value == Value{Integer{12}});

  const Prediction adjusted = predict(f.mesh, f.schema, inputs, {"extra-sugar"});
  CHECK(adjusted.value == Value{Integer{14}});
  CHECK(adjusted.trace.raw_value == Value{Integer{12}});
  REQUIRE(adjusted.trace.bias_applied.size() == 1);
  CHECK(adjusted.trace.bias_applied[0].tag == "extra-sugar");

  // adjustments add up
  const Prediction both = predict(f.mesh, f.schema, inputs, {"extra-sugar", "light-meal"});
  CHECK(both.value == Value{Integer{13}});

  // fractional adjustments round half away from zero at the target precision
  add_bias_rule(f.mesh, f.schema, {"nudge-up", Decimal{5, 1}});    // +0.5
  add_bias_rule(f.mesh, f.schema, {"nudge-down", Decimal{-5, 1}}); // -0.5
  CHECK(predict(f.mesh, f.schema, inputs, {"nudge-up"}).value == Value{Integer{13}});
  CHECK(predict(f.mesh, f.schema, inputs, {"nudge-down"}).value == Value{Integer{12}});

  CHECK(fails_with(Errc::UnknownBiasTag,
                   [&] { predict(f.mesh, f.schema, inputs, {"nonesuch"}); }));
}

TEST_CASE("bias refuses categorical targets") {
  Mesh mesh;
  const Schema schema = toy_schema({kIntA, kIntB, kCatT});
  define_schema(mesh, schema);
  CHECK(fails_with(Errc::BiasOnCategoricalTarget, [&] {
    add_bias_rule(mesh, schema, {"shift", Decimal{1, 0}});
  }));
}

TEST_CASE("prediction reads the mesh without changing it") {
  Fixture f = insulin_fixture(10);
  const size_t neurons = f.mesh.neurons().size();
  const size_t connections = f.mesh.connections().size();

  const Record inputs{{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}};
  const Prediction first = predict(f.mesh, f.schema, inputs);
  const Prediction second = predict(f.mesh, f.schema, inputs);
  CHECK(first.value == second.value);
  CHECK(render_trace(f.mesh, first) == render_trace(f.mesh, second));
  CHECK(f.mesh.neurons().size() == neurons);
  CHECK(f.mesh.connections().size() == connections);

  const SubnetId time = *f.mesh.find_subnet("time");
  const SubnetId insulin = *f.mesh.find_subnet("insulin");
  const NeuronId evening = *f.mesh.find_neuron(time, TimeHM{18, 0});
  const NeuronId dose32 = *f.mesh.find_neuron(insulin, Integer{32});
  const auto c = f.mesh.find_connection({evening, dose32}, {"If...Then"});
  CHECK(f.mesh.connection(*c).occurrences == 2);  // untouched by predicting
}

TEST_CASE("prediction validates its inputs against the schema") {
  Fixture f = insulin_fixture(10);
  // missing attribute
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    predict(f.mesh, f.schema, {{"date", DateDM{6, 6}}});
  }));
  // unknown attribute
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    predict(f.mesh, f.schema,
            {{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}, {"mood", Category{"fine"}}});
  }));
  // the target is not an input
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    predict(f.mesh, f.schema,
            {{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}, {"insulin", Integer{12}}});
  }));
  // wrong kind for an attribute
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    predict(f.mesh, f.schema, {{"date", Integer{6}}, {"time", TimeHM{11, 0}}});
  }));
  // training applies the same checks
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    train_record(f.mesh, f.schema, {{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}});
  }));

  // decimal precision must match the declaration exactly
  Mesh mesh;
  const Schema schema =
      toy_schema({{"x", ValueKind::Decimal, 1, AttrRole::Input}, kIntB, kIntT});
  define_schema(mesh, schema);
  CHECK(fails_with(Errc::SchemaMismatch, [&] {
    train_record(mesh, schema,
                 {{"x", Decimal{490, 2}}, {"b", Integer{1}}, {"t", Integer{2}}});
  }));
}

TEST_CASE("a single-attribute schema can gather no evidence") {
  Mesh mesh;
  const Schema schema = toy_schema({kIntA, kCatT});
  define_schema(mesh, schema);
  train_record(mesh, schema, {{"a", Integer{1}}, {"t", Category{"x"}}});
  train_record(mesh, schema, {{"a", Integer{2}}, {"t", Category{"y"}}});
  CHECK(fails_with(Errc::NoEvidence,
                   [&] { predict(mesh, schema, {{"a", Integer{1}}}); }));
}

TEST_CASE("the training order does not change what is learned") {
  Fixture forward = insulin_fixture(0);
  Fixture backward = insulin_fixture(0);
  for (size_t i = 0; i < 10; ++i) {
    train_record(forward.mesh, forward.schema, forward.records[i]);
    train_record(backward.mesh, backward.schema, backward.records[9 - i]);
  }
  for (const char* name : {"date", "time", "insulin"}) {
    CHECK(forward.mesh.subnet(*forward.mesh.find_subnet(name)).size() ==
          backward.mesh.subnet(*backward.mesh.find_subnet(name)).size());
  }
  for (const auto& inputs :
       {Record{{"date", DateDM{6, 6}}, {"time", TimeHM{11, 0}}},
        Record{{"date", DateDM{6, 6}}, {"time", TimeHM{17, 0}}}}) {
    CHECK(predict(forward.mesh, forward.schema, inputs).value ==
          predict(backward.mesh, backward.schema, inputs).value);
  }
}

TEST_CASE("the iris mesh builds the expected unique-value structure") {
  Mesh mesh;
  const Schema schema = load_schema_file(data_path("iris.schema"));
  define_schema(mesh, schema);
  const auto records = ingest_csv_file(data_path("iris.csv"), schema);
  REQUIRE(records.size() == 150);
  for (const Record& r : records) train_record(mesh, schema, r);

  const SubnetId sl = *mesh.find_subnet("sepal_length");
  const SubnetId sw = *mesh.find_subnet("sepal_width");
  const SubnetId pl = *mesh.find_subnet("petal_length");
  const SubnetId pw = *mesh.find_subnet("petal_width");
  const SubnetId sp = *mesh.find_subnet("species");
  CHECK(mesh.subnet(sl).size() == 35);
  CHECK(mesh.subnet(sw).size() == 23);
  CHECK(mesh.subnet(pl).size() == 43);
  CHECK(mesh.subnet(pw).size() == 22);
  CHECK(mesh.subnet(sp).size() == 3);

  // candidate sets of the value 4.9 probed from the other petal/sepal columns
  const NeuronId a49 = *mesh.find_neuron(sl, Decimal{49, 1});
  CHECK(candidate_set(mesh, a49, sw, sp).size() == 5);
  CHECK(candidate_set(mesh, a49, pl, sp).size() == 4);
  CHECK(candidate_set(mesh, a49, pw, sp).size() == 4);
  // id order = first appearance in the table, so 4.5 precedes 3.3
  CHECK(texts(mesh, candidate_set(mesh, a49, pl, sp)) ==
        std::vector<std::string>{"1.4", "1.5", "4.5", "3.3"});

  const NeuronId a31 = *mesh.find_neuron(sw, Decimal{31, 1});
  CHECK(candidate_set(mesh, a31, sl, sp).size() == 6);
  CHECK(candidate_set(mesh, a31, pl, sp).size() == 9);
  CHECK(candidate_set(mesh, a31, pw, sp).size() == 8);

  const Prediction p = predict(mesh, schema,
                               {{"sepal_length", Decimal{49, 1}},
                                {"sepal_width", Decimal{31, 1}},
                                {"petal_length", Decimal{15, 1}},
                                {"petal_width", Decimal{2, 1}}});
  CHECK(p.value == Value{Category{"setosa"}});
}

TEST_CASE("leave-one-out needs two records and reports per-fold results") {
  Fixture f = insulin_fixture(0);
  CHECK(fails_with(Errc::TooFewRecords, [&] {
    evaluate_loo(f.mesh, f.schema, {f.records[0]});
  }));

  const EvaluationReport report = evaluate_loo(f.mesh, f.schema, f.records);
  REQUIRE(report.folds.size() == 30);
  CHECK_FALSE(report.accuracy.has_value());       // numeric target
  REQUIRE(report.mean_abs_error.has_value());
  CHECK(*report.mean_abs_error >= 0.0);
  for (const FoldResult& fold : report.folds) {
    CHECK(fold.predicted.has_value());  // every fold finds evidence
    if (fold.correct) CHECK(fold.predicted == fold.expected);
  }
  CHECK(report.folds[0].index == 1);
  CHECK(report.folds[0].expected == Value{Integer{13}});
}
