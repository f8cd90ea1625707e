#include "meshnet/prior.hpp"

#include <string>
#include <vector>

#include "meshnet/error.hpp"

namespace meshnet {

namespace {

constexpr const char* kLessThan = "less than";
constexpr const char* kNext = "next";

SubnetId find_or_create(Mesh& mesh, const std::string& name, SubnetRole role) {
  if (const auto existing = mesh.find_subnet(name)) return *existing;
  return mesh.create_subnet(name, role);
}

int connect_counting(Mesh& mesh, const std::vector<EndpointRef>& endpoints,
                     std::set<std::string> labels = {}, bool directed = false) {
  const auto before = mesh.next_connection_ordinal();
  mesh.connect(endpoints, std::move(labels), directed);
  return mesh.next_connection_ordinal() > before ? 1 : 0;
}

}  // namespace

SubnetId build_integer_subnet(Mesh& mesh, long long min, long long max) {
  if (min > max) fail(Errc::InvalidRange, "integer range is backwards");
  const SubnetId sid = find_or_create(mesh, "integers", SubnetRole::Prior);
  mesh.prior.integers = sid;

  NeuronId prev{};
  for (long long v = min; v <= max; ++v) {
    const auto [cur, created] = mesh.insert_value(sid, Integer{v});
    (void)created;
    if (v > min) mesh.connect({prev, cur}, {kLessThan}, true);
    prev = cur;
  }
  // Join composite values to their digits: 10 gets "part 1 of 2" from 1 and
  // "part 2 of 2" from 0.  A digit outside the range has no neuron to join.
  for (long long v = std::max(min, 10LL); v <= max; ++v) {
    const std::string digits = std::to_string(v);
    const NeuronId whole = *mesh.find_neuron(sid, Integer{v});
    for (size_t i = 0; i < digits.size(); ++i) {
      const long long digit = digits[i] - '0';
      const auto part = mesh.find_neuron(sid, Integer{digit});
      if (!part) continue;
      const std::string label = "part " + std::to_string(i + 1) + " of " +
                                std::to_string(digits.size());
      mesh.connect({*part, whole}, {label}, true);
    }
  }
  return sid;
}

SubnetId build_decimal_subnet(Mesh& mesh, const Decimal& min, const Decimal& max,
                              const Decimal& step) {
  if (min.places != max.places || min.places != step.places) {
    fail(Errc::InvalidRange, "decimal range needs one uniform precision");
  }
  if (step.scaled <= 0) fail(Errc::InvalidRange, "decimal step must be positive");
  if (min.scaled > max.scaled) fail(Errc::InvalidRange, "decimal range is backwards");

  const SubnetId sid = find_or_create(mesh, "decimals", SubnetRole::Prior);
  mesh.prior.decimals = sid;

  NeuronId prev{};
  bool first = true;
  for (long long s = min.scaled; s <= max.scaled; s += step.scaled) {
    const auto [cur, created] = mesh.insert_value(sid, Decimal{s, min.places});
    (void)created;
    if (!first) mesh.connect({prev, cur}, {kLessThan}, true);
    prev = cur;
    first = false;
  }
  return sid;
}

SubnetId build_month_subnet(Mesh& mesh) {
  const SubnetId sid = find_or_create(mesh, "months", SubnetRole::Prior);
  mesh.prior.months = sid;
  std::vector<NeuronId> cells;
  for (int m = 1; m <= 12; ++m) {
    cells.push_back(mesh.insert_value(sid, Month{m}).first);
  }
  for (int m = 0; m < 12; ++m) {
    // the cycle closes: December's successor is January
    mesh.connect({cells[m], cells[(m + 1) % 12]}, {kNext}, true);
  }
  return sid;
}

SubnetId build_time_subnet(Mesh& mesh) {
  const SubnetId sid = find_or_create(mesh, "time-structure", SubnetRole::Prior);
  mesh.prior.time_structure = sid;
  const NeuronId hour = mesh.insert_value(sid, Token{"hour"}).first;
  const NeuronId minute = mesh.insert_value(sid, Token{"minute"}).first;
  mesh.connect({hour, minute});
  return sid;
}

std::pair<SubnetId, SubnetId> build_operator_subnets(Mesh& mesh) {
  const SubnetId arith = find_or_create(mesh, "arithmetic-ops", SubnetRole::Operator);
  const SubnetId rel = find_or_create(mesh, "relational-ops", SubnetRole::Operator);
  mesh.prior.arithmetic = arith;
  mesh.prior.relational = rel;

  const auto fill = [&mesh](SubnetId sid, const std::vector<const char*>& symbols) {
    std::vector<NeuronId> cells;
    for (const char* sym : symbols) {
      cells.push_back(mesh.insert_value(sid, OperatorSym{sym}).first);
    }
    for (size_t i = 0; i < cells.size(); ++i) {
      for (size_t j = i + 1; j < cells.size(); ++j) {
        mesh.connect({cells[i], cells[j]});
      }
    }
  };
  fill(arith, {"+", "−", "×", "÷"});
  fill(rel, {"<", ">", "=", "≤", "≥", "≠"});
  return {arith, rel};
}

int link_prior(Mesh& mesh) {
  int created = 0;
  const auto& cat = mesh.prior;

  if (cat.months && cat.integers) {
    for (int m = 1; m <= 12; ++m) {
      const auto month = mesh.find_neuron(*cat.months, Month{m});
      const auto number = mesh.find_neuron(*cat.integers, Integer{m});
      if (month && number) created += connect_counting(mesh, {*month, *number});
    }
  }
  if (cat.time_structure && cat.integers) {
    const auto hour = mesh.find_neuron(*cat.time_structure, Token{"hour"});
    const auto minute = mesh.find_neuron(*cat.time_structure, Token{"minute"});
    for (long long h = 1; h <= 24 && hour; ++h) {
      if (const auto number = mesh.find_neuron(*cat.integers, Integer{h})) {
        created += connect_counting(mesh, {*hour, *number});
      }
    }
    for (long long m = 0; m <= 59 && minute; ++m) {
      if (const auto number = mesh.find_neuron(*cat.integers, Integer{m})) {
        created += connect_counting(mesh, {*minute, *number});
      }
    }
  }

  std::vector<SubnetId> knowledge;
  for (const auto& slot : {cat.integers, cat.decimals, cat.months, cat.time_structure}) {
    if (slot) knowledge.push_back(*slot);
  }
  for (const auto& ops : {cat.arithmetic, cat.relational}) {
    if (!ops) continue;
    for (const SubnetId k : knowledge) {
      created += connect_counting(mesh, {EndpointRef(*ops), EndpointRef(k)});
    }
  }
  return created;
}

int link_neuron_to_prior(Mesh& mesh, NeuronId n) {
  int created = 0;
  const auto& cat = mesh.prior;
  const Value& payload = mesh.neuron(n).payload;

  switch (kind_of(payload)) {
    case ValueKind::Integer:
      if (cat.integers) {
        if (const auto anchor = mesh.find_neuron(*cat.integers, payload)) {
          created += connect_counting(mesh, {n, *anchor});
        }
      }
      break;
    case ValueKind::Decimal:
      if (cat.decimals) {
        if (const auto anchor = mesh.find_neuron(*cat.decimals, payload)) {
          created += connect_counting(mesh, {n, *anchor});
        }
      }
      break;
    case ValueKind::DateDM: {
      const auto& d = std::get<DateDM>(payload);
      if (cat.integers) {
        if (const auto day = mesh.find_neuron(*cat.integers, Integer{d.day})) {
          created += connect_counting(mesh, {n, *day});
        }
      }
      if (cat.months) {
        if (const auto month = mesh.find_neuron(*cat.months, Month{d.month})) {
          created += connect_counting(mesh, {n, *month});
        }
      }
      break;
    }
    case ValueKind::TimeHM: {
      const auto& t = std::get<TimeHM>(payload);
      if (cat.integers) {
        if (const auto hour = mesh.find_neuron(*cat.integers, Integer{t.hour})) {
          created += connect_counting(mesh, {n, *hour});
        }
      }
      if (cat.time_structure) {
        if (const auto hour = mesh.find_neuron(*cat.time_structure, Token{"hour"})) {
          created += connect_counting(mesh, {n, *hour});
        }
      }
      break;
    }
    default:
      break;  // categories and the like have no prior anchor
  }
  return created;
}

int link_attribute_to_prior(Mesh& mesh, SubnetId attribute_subnet) {
  int created = 0;
  const std::vector<NeuronId> members = mesh.subnet(attribute_subnet).order;
  for (const NeuronId n : members) created += link_neuron_to_prior(mesh, n);
  return created;
}

}  // namespace meshnet
