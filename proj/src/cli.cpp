#include "meshnet/cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "meshnet/archive.hpp"
#include "meshnet/csv.hpp"
#include "meshnet/dot.hpp"
#include "meshnet/error.hpp"
#include "meshnet/image.hpp"
#include "meshnet/prior.hpp"
#include "meshnet/tabular.hpp"

namespace meshnet {

namespace {

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// "k=v,k=v,..." against the schema's input attributes
Record parse_inputs(const Schema& schema, const std::string& text) {
  Record record;
  for (const std::string& pair : split_list(text)) {
    const auto eq = pair.find('=');
    if (eq == std::string::npos) {
      fail(Errc::InvalidArgument, "input '" + pair + "' is not name=value");
    }
    const std::string name = pair.substr(0, eq);
    const AttributeSpec* spec = schema.find(name);
    if (!spec) fail(Errc::SchemaMismatch, "unknown attribute '" + name + "'");
    if (spec->role == AttrRole::Target) {
      fail(Errc::SchemaMismatch, "'" + name + "' is the target, not an input");
    }
    record[name] = parse_value(spec->kind, pair.substr(eq + 1), spec->places);
  }
  return record;
}

// "+2" / "-0.5" / "3" at the precision spelled in the text
Decimal parse_signed_decimal(const std::string& text) {
  if (text.empty()) fail(Errc::InvalidArgument, "empty adjustment");
  size_t start = 0;
  bool negative = false;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    start = 1;
  }
  const std::string body = text.substr(start);
  const auto dot = body.find('.');
  const int places =
      dot == std::string::npos ? 0 : static_cast<int>(body.size() - dot - 1);
  Decimal d = std::get<Decimal>(parse_value(ValueKind::Decimal, body, places));
  if (negative) d.scaled = -d.scaled;
  return d;
}

std::string signed_text(const Decimal& d) {
  const Decimal mag{d.scaled < 0 ? -d.scaled : d.scaled, d.places};
  return (d.scaled < 0 ? "-" : "+") + value_text(Value{mag});
}

const Schema& need_schema(const Document& doc) {
  if (!doc.schema) {
    fail(Errc::SchemaMismatch, "mesh archive carries no tabular schema");
  }
  return *doc.schema;
}

void print_report(std::ostream& out, const char* verb, int records,
                  const TrainReport& r) {
  out << verb << " " << records << " record" << (records == 1 ? "" : "s") << ": +"
      << r.neurons_created << " neurons, +" << r.connections_created
      << " connections, " << r.connections_updated << " reinforced\n";
}

int run_init(const std::string& schema_path, const std::string& out_path,
             long long int_min, long long int_max, const std::string& dec_min,
             const std::string& dec_max, const std::string& dec_step,
             std::ostream& out) {
  const Schema schema = load_schema_file(schema_path);

  Document doc;
  Mesh& mesh = doc.mesh;
  build_integer_subnet(mesh, int_min, int_max);
  const bool wants_decimals =
      std::any_of(schema.attributes.begin(), schema.attributes.end(),
                  [](const AttributeSpec& a) { return a.kind == ValueKind::Decimal; });
  if (wants_decimals) {
    Decimal lo = parse_signed_decimal(dec_min);
    Decimal hi = parse_signed_decimal(dec_max);
    Decimal step = parse_signed_decimal(dec_step);
    const int places = std::max({lo.places, hi.places, step.places});
    const auto widen = [places](Decimal& d) {
      while (d.places < places) {
        d.scaled *= 10;
        ++d.places;
      }
    };
    widen(lo);
    widen(hi);
    widen(step);
    build_decimal_subnet(mesh, lo, hi, step);
  }
  build_month_subnet(mesh);
  build_time_subnet(mesh);
  build_operator_subnets(mesh);
  link_prior(mesh);
  define_schema(mesh, schema);

  doc.schema = schema;
  save_document_file(doc, out_path);
  out << "initialised " << out_path << ": " << mesh.subnets().size()
      << " subnets, " << mesh.neurons().size() << " neurons\n";
  return 0;
}

int run_evaluate(const Document& doc, const std::string& data_path,
                 std::ostream& out) {
  const Schema& schema = need_schema(doc);
  const auto records = ingest_csv_file(data_path, schema);
  const EvaluationReport report = evaluate_loo(doc.mesh, schema, records);

  out << "fold\texpected\tpredicted\tresult\n";
  for (const FoldResult& fold : report.folds) {
    out << fold.index << "\t" << value_text(fold.expected) << "\t"
        << (fold.predicted ? value_text(*fold.predicted) : "-") << "\t"
        << (fold.correct ? "ok" : "miss") << "\n";
  }
  if (report.accuracy) {
    out << "accuracy " << std::fixed << std::setprecision(4) << *report.accuracy
        << " (" << report.correct << "/" << report.folds.size() << ")\n";
  }
  if (report.mean_abs_error) {
    out << "mean absolute error " << std::fixed << std::setprecision(3)
        << *report.mean_abs_error << " (exact " << report.correct << "/"
        << report.folds.size() << ")\n";
  }
  return 0;
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out,
                 std::ostream& err) {
  CLI::App app{"mesh-of-subnets associative memory"};
  app.require_subcommand(1);

  // init
  auto* init = app.add_subcommand("init", "build prior knowledge for a schema");
  std::string schema_path, out_path;
  long long int_min = 0, int_max = 36;
  std::string dec_min = "0.1", dec_max = "7.9", dec_step = "0.1";
  init->add_option("--schema", schema_path, "schema file (name:kind:role lines)")
      ->required();
  init->add_option("--out", out_path, "mesh archive to write")->required();
  init->add_option("--int-min", int_min, "smallest prior integer");
  init->add_option("--int-max", int_max, "largest prior integer");
  init->add_option("--dec-min", dec_min, "smallest prior decimal");
  init->add_option("--dec-max", dec_max, "largest prior decimal");
  init->add_option("--dec-step", dec_step, "prior decimal step");

  // train
  auto* train = app.add_subcommand("train", "store a CSV of records");
  std::string mesh_path, data_path;
  train->add_option("--mesh", mesh_path, "mesh archive")->required();
  train->add_option("--data", data_path, "CSV matching the schema")->required();

  // predict
  auto* predict_cmd = app.add_subcommand("predict", "fill in the target value");
  std::string input_text, bias_text;
  bool want_trace = false;
  predict_cmd->add_option("--mesh", mesh_path, "mesh archive")->required();
  predict_cmd->add_option("--input", input_text, "k=v,... for every input attribute")
      ->required();
  predict_cmd->add_option("--bias", bias_text, "bias tags to apply, comma separated");
  predict_cmd->add_flag("--trace", want_trace, "print the full reasoning trace");

  // confirm
  auto* confirm_cmd = app.add_subcommand("confirm", "store a confirmed outcome");
  std::string target_text;
  confirm_cmd->add_option("--mesh", mesh_path, "mesh archive")->required();
  confirm_cmd->add_option("--input", input_text, "k=v,... for every input attribute")
      ->required();
  confirm_cmd->add_option("--target", target_text, "the observed target value")
      ->required();

  // evaluate
  auto* evaluate_cmd = app.add_subcommand("evaluate", "leave-one-out over a CSV");
  std::string template_path, mode = "loo";
  evaluate_cmd->add_option("--mesh-template", template_path, "untrained mesh archive")
      ->required();
  evaluate_cmd->add_option("--data", data_path, "CSV matching the schema")->required();
  evaluate_cmd->add_option("--mode", mode, "evaluation mode")
      ->check(CLI::IsMember({"loo"}));

  // image register / classify
  auto* image = app.add_subcommand("image", "raster image operations");
  image->require_subcommand(1);
  auto* img_register = image->add_subcommand("register", "store a labeled image");
  std::string image_path, image_label;
  bool keep_background = false;
  img_register->add_option("--mesh", mesh_path, "mesh archive")->required();
  img_register->add_option("--file", image_path, "PGM (P2) or palette grid")
      ->required();
  img_register->add_option("--label", image_label, "label for the image")->required();
  img_register->add_flag("--keep-background", keep_background,
                         "store background pixels too");
  auto* img_classify = image->add_subcommand("classify", "label a test image");
  img_classify->add_option("--mesh", mesh_path, "mesh archive")->required();
  img_classify->add_option("--file", image_path, "PGM (P2) or palette grid")
      ->required();
  img_classify->add_flag("--trace", want_trace, "print per-entry scores");

  // export
  auto* export_cmd = app.add_subcommand("export", "write the mesh to a file");
  std::string format, export_path;
  std::vector<std::string> scope_names;
  export_cmd->add_option("--mesh", mesh_path, "mesh archive")->required();
  export_cmd->add_option("--format", format, "dot or archive")
      ->required()
      ->check(CLI::IsMember({"dot", "archive"}));
  export_cmd->add_option("--out", export_path, "output path")->required();
  export_cmd->add_option("--subnet", scope_names,
                         "limit DOT export to these subnets (repeatable)");

  // inspect
  auto* inspect = app.add_subcommand("inspect", "list a subnet's stored values");
  std::string subnet_name;
  inspect->add_option("--mesh", mesh_path, "mesh archive")->required();
  inspect->add_option("--subnet", subnet_name, "subnet name")->required();

  // bias
  auto* bias_cmd = app.add_subcommand("bias", "manage bias rules");
  std::string bias_tag, bias_adjust;
  bool bias_list = false;
  bias_cmd->add_option("--mesh", mesh_path, "mesh archive")->required();
  bias_cmd->add_option("--tag", bias_tag, "new bias tag");
  bias_cmd->add_option("--adjust", bias_adjust, "signed adjustment, e.g. +2");
  bias_cmd->add_flag("--list", bias_list, "list stored bias rules");

  std::vector<const char*> argv;
  argv.push_back("meshnet");
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand(init)) {
      return run_init(schema_path, out_path, int_min, int_max, dec_min, dec_max,
                      dec_step, out);
    }

    if (app.got_subcommand(train)) {
      Document doc = load_document_file(mesh_path);
      const Schema& schema = need_schema(doc);
      const auto records = ingest_csv_file(data_path, schema);
      TrainReport total;
      for (const Record& record : records) {
        const TrainReport r = train_record(doc.mesh, schema, record);
        total.neurons_created += r.neurons_created;
        total.connections_created += r.connections_created;
        total.connections_updated += r.connections_updated;
      }
      save_document_file(doc, mesh_path);
      print_report(out, "trained", static_cast<int>(records.size()), total);
      return 0;
    }

    if (app.got_subcommand(predict_cmd)) {
      const Document doc = load_document_file(mesh_path);
      const Schema& schema = need_schema(doc);
      const Record inputs = parse_inputs(schema, input_text);
      const Prediction p =
          predict(doc.mesh, schema, inputs, split_list(bias_text));
      out << value_text(p.value) << "\n";
      if (want_trace) out << render_trace(doc.mesh, p);
      return 0;
    }

    if (app.got_subcommand(confirm_cmd)) {
      Document doc = load_document_file(mesh_path);
      const Schema& schema = need_schema(doc);
      Record record = parse_inputs(schema, input_text);
      const AttributeSpec& target = schema.target();
      record[target.name] = parse_value(target.kind, target_text, target.places);
      const TrainReport r = confirm(doc.mesh, schema, record);
      save_document_file(doc, mesh_path);
      print_report(out, "confirmed", 1, r);
      return 0;
    }

    if (app.got_subcommand(evaluate_cmd)) {
      return run_evaluate(load_document_file(template_path), data_path, out);
    }

    if (image->got_subcommand(img_register)) {
      Document doc = load_document_file(mesh_path);
      const PixelGrid grid = quantize(load_grid_file(image_path),
                                      doc.mesh.config.binarize_threshold);
      ImageModel model =
          doc.image_model ? *doc.image_model : ensure_image_model(doc.mesh);
      const SubnetId shape =
          register_labeled_image(doc.mesh, model, grid, image_label,
                                 keep_background);
      doc.image_model = model;
      save_document_file(doc, mesh_path);
      out << "registered '" << image_label << "' as subnet '"
          << doc.mesh.subnet(shape).name << "' (" << doc.mesh.subnet(shape).size()
          << " pixels)\n";
      return 0;
    }

    if (image->got_subcommand(img_classify)) {
      const Document doc = load_document_file(mesh_path);
      if (!doc.image_model) fail(Errc::EmptyModel, "no registered images");
      const PixelGrid grid = quantize(load_grid_file(image_path),
                                      doc.mesh.config.binarize_threshold);
      const ClassifyResult result =
          classify_image(doc.mesh, *doc.image_model, grid);
      out << result.label << "\n";
      if (want_trace) out << result.trace;
      return 0;
    }

    if (app.got_subcommand(export_cmd)) {
      const Document doc = load_document_file(mesh_path);
      if (format == "archive") {
        save_document_file(doc, export_path);
      } else {
        std::optional<std::vector<SubnetId>> scope;
        if (!scope_names.empty()) {
          scope.emplace();
          for (const std::string& name : scope_names) {
            const auto sid = doc.mesh.find_subnet(name);
            if (!sid) fail(Errc::UnknownSubnet, "subnet '" + name + "'");
            scope->push_back(*sid);
          }
        }
        export_dot_file(doc.mesh, export_path, scope);
      }
      out << "wrote " << export_path << "\n";
      return 0;
    }

    if (app.got_subcommand(inspect)) {
      const Document doc = load_document_file(mesh_path);
      const auto sid = doc.mesh.find_subnet(subnet_name);
      if (!sid) fail(Errc::UnknownSubnet, "subnet '" + subnet_name + "'");
      const Subnet& s = doc.mesh.subnet(*sid);
      out << "subnet " << s.name << " (s" << raw(*sid) << ") role="
          << role_name(s.role) << " neurons=" << s.size() << "\n";
      for (const NeuronId n : s.order) {
        out << "  " << value_text(doc.mesh.neuron(n).payload) << "\n";
      }
      return 0;
    }

    if (app.got_subcommand(bias_cmd)) {
      Document doc = load_document_file(mesh_path);
      const Schema& schema = need_schema(doc);
      if (bias_list) {
        for (const BiasRule& rule : bias_rules(doc.mesh, schema)) {
          out << rule.tag << " " << signed_text(rule.adjustment) << "\n";
        }
        return 0;
      }
      if (bias_tag.empty() || bias_adjust.empty()) {
        err << "bias needs --tag and --adjust (or --list)\n";
        return 2;
      }
      const BiasRule rule{bias_tag, parse_signed_decimal(bias_adjust)};
      add_bias_rule(doc.mesh, schema, rule);
      save_document_file(doc, mesh_path);
      out << "bias '" << rule.tag << "' " << signed_text(rule.adjustment) << "\n";
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  err << "no subcommand\n";
  return 2;
}

}  // namespace meshnet
