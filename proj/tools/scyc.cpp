#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "scyc/scyc.hpp"

namespace {

using scyc::Json;

constexpr int exit_yes = 0;
constexpr int exit_no = 1;
constexpr int exit_error = 2;
constexpr int exit_unknown = 3;

std::string read_input(const std::string& path) {
  if (path == "-") {
    return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
}

scyc::PetriNet load_net(const std::string& path) {
  std::vector<std::string> warnings;
  auto net = scyc::parse_net(read_input(path), &warnings);
  for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
  return net;
}

Json labels_json(const scyc::PetriNet& net) {
  Json out = Json::array();
  for (std::size_t k = 0; k < net.size(); ++k) out.push_back(net.name(k));
  return out;
}

Json path_json(const std::vector<std::size_t>& path) {
  Json out = Json::array();
  for (auto t : path) out.push_back(t + 1);
  return out;
}

Json config_json(const scyc::Configuration& c) {
  Json out = Json::array();
  for (const auto& e : c.entries()) out.push_back(e.get_str());
  return out;
}

void emit(const Json& j) { std::cout << j.dump(2) << '\n'; }

/// Net to `output` (stdout when empty) and the sidecar to `sidecar`, or to
/// OUTPUT.json when only an output file is given.
void emit_net(const std::string& net_text, const Json& sidecar, const std::string& output, std::string sidecar_path) {
  if (output.empty()) {
    std::cout << net_text;
  } else {
    write_file(output, net_text);
    if (sidecar_path.empty()) sidecar_path = output + ".json";
  }
  if (!sidecar_path.empty()) write_file(sidecar_path, sidecar.dump(2) + "\n");
}

struct AnalyzeArgs {
  std::string input;
  bool text = false;
  bool json = false;
  bool no_witness = false;
  bool rounds = false;
};

int run_analyze(const AnalyzeArgs& a) {
  const auto net = load_net(a.input);
  scyc::LambdaOptions opts;
  opts.synthesize_witness = !a.no_witness;
  opts.certify_input = true;
  const auto report = scyc::lambda(net, opts);
  const scyc::ReportJsonOptions ropts{a.rounds};
  if (a.text) {
    std::cout << scyc::report_to_text(report, net, ropts);
  } else {
    Json j = scyc::report_to_json(report, ropts);
    Json out;
    out["labels"] = labels_json(net);
    for (auto& [k, v] : j.items()) out[k] = v;
    emit(out);
  }
  return report.structurally_cyclic ? exit_yes : exit_no;
}

struct WitnessArgs {
  std::string input;
  std::string verify;
};

int run_witness(const WitnessArgs& a) {
  const auto net = load_net(a.input);
  if (!a.verify.empty()) {
    const auto doc = Json::parse(read_input(a.verify));
    const auto word = scyc::power_word_from_json(doc.contains("witness") ? doc.at("witness") : doc);
    const auto v = scyc::verify_witness(net, word);
    Json out;
    out["verified"] = v.valid;
    out["expanded_length"] = v.expanded_length.get_str();
    out["transitions_used"] = scyc::to_json(v.transitions_used);
    if (!v.valid) out["reason"] = v.reason;
    emit(out);
    return v.valid ? exit_yes : exit_no;
  }
  const auto report = scyc::lambda(net);
  Json out;
  if (!report.witness) {
    out["structurally_cyclic"] = false;
    out["witness"] = nullptr;
    out["verified"] = false;
    emit(out);
    return exit_no;
  }
  const auto v = scyc::verify_witness(net, *report.witness);
  if (!v.valid) throw scyc::ConstructionFailure("synthesized witness rejected: " + v.reason);
  out["structurally_cyclic"] = true;
  out["witness"] = scyc::to_json(*report.witness);
  out["expanded_length"] = v.expanded_length.get_str();
  out["transitions_used"] = scyc::to_json(v.transitions_used);
  out["verified"] = true;
  emit(out);
  return exit_yes;
}

struct OracleArgs {
  std::string input;
  std::string from;
  std::string to;
  std::uint64_t bound = 6;
  std::size_t states = 100000;
  std::size_t depth = 0;
};

int run_oracle(const OracleArgs& a) {
  const auto net = load_net(a.input);
  scyc::SearchBudget budget{a.bound, a.states, std::nullopt};
  if (a.depth != 0) budget.max_depth = a.depth;
  budget.validate();
  const auto from = a.from.empty() ? scyc::Configuration::zero(net.dimension())
                                   : scyc::parse_configuration(a.from, net.dimension());
  Json out;
  out["budget"] = Json{{"coordinate_bound", a.bound}, {"max_states", a.states}};
  if (a.depth != 0) out["budget"]["max_depth"] = a.depth;
  out["from"] = config_json(from);
  std::string verdict;
  if (!a.to.empty()) {
    const auto to = scyc::parse_configuration(a.to, net.dimension());
    out["query"] = "reach";
    out["to"] = config_json(to);
    auto r = scyc::bounded_reach(net, from, to, budget);
    if (auto* hit = std::get_if<scyc::Reached>(&r)) {
      verdict = "found";
      out["path"] = path_json(hit->path);
    } else {
      verdict = std::holds_alternative<scyc::BudgetExhausted>(r) ? "budget_exhausted" : "absent_within_bound";
    }
  } else {
    out["query"] = "cycle";
    auto r = scyc::brute_cyclic(net, from, budget);
    if (auto* hit = std::get_if<scyc::CyclicWithin>(&r)) {
      verdict = "found";
      out["path"] = path_json(hit->path);
    } else {
      verdict = std::holds_alternative<scyc::BudgetExhausted>(r) ? "budget_exhausted" : "absent_within_bound";
    }
    if (a.from.empty()) {
      out["forward_markable"] = scyc::to_json(scyc::brute_forward_markable(net, budget));
      out["zero_cycle_transitions"] = scyc::to_json(scyc::brute_zero_cycle_transitions(net, budget));
    }
  }
  out["verdict"] = verdict;
  emit(out);
  if (verdict == "found") return exit_yes;
  return verdict == "budget_exhausted" ? exit_unknown : exit_no;
}

struct ReduceArgs {
  std::string input;
  std::string output;
  std::string sidecar;
  std::string from;
  std::string to;
  bool auto_insert = false;
};

int run_from_cfg(const ReduceArgs& a) {
  const auto g = scyc::parse_grammar(read_input(a.input));
  const auto net = scyc::cfg_to_net(g);
  Json dims = Json::array();
  for (const auto& s : g.nonterminals) dims.push_back(Json{{"index", *g.index_of(s) + 1}, {"symbol", s}, {"kind", "nonterminal"}});
  for (const auto& s : g.terminals) dims.push_back(Json{{"index", *g.index_of(s) + 1}, {"symbol", s}, {"kind", "terminal"}});
  Json ts = Json::array();
  ts.push_back(Json{{"label", net.name(0)}, {"production", nullptr}});
  for (std::size_t k = 0; k < g.productions.size(); ++k) {
    std::string text = g.productions[k].lhs + " ->";
    for (const auto& s : g.productions[k].rhs) text += " " + s;
    ts.push_back(Json{{"label", net.name(k + 1)}, {"production", text}});
  }
  Json side{{"start", g.start}, {"dimensions", dims}, {"transitions", ts}, {"nullable_epsilon", scyc::nullable_epsilon(g)}};
  emit_net(scyc::serialize_net(net), side, a.output, a.sidecar);
  return exit_yes;
}

int run_from_dag(const ReduceArgs& a) {
  const auto dag = scyc::parse_dag(read_input(a.input));
  const auto net = scyc::dag_automaton_to_net(dag);
  Json dims = Json::array();
  for (std::size_t i = 0; i < dag.states.size(); ++i) dims.push_back(Json{{"index", i + 1}, {"state", dag.states[i]}});
  Json ts = Json::array();
  for (std::size_t k = 0; k < dag.rules.size(); ++k) {
    ts.push_back(Json{{"label", net.name(k)}, {"rule_label", dag.rules[k].label}});
  }
  emit_net(scyc::serialize_net(net), Json{{"dimensions", dims}, {"transitions", ts}}, a.output, a.sidecar);
  return exit_yes;
}

int run_lossy(const ReduceArgs& a) {
  const auto net = load_net(a.input);
  const scyc::LossyInstance inst{net, scyc::parse_configuration(a.from, net.dimension()),
                                 scyc::parse_configuration(a.to, net.dimension())};
  scyc::LossyReduction red;
  try {
    red = scyc::lossy_to_cyclicity(inst, a.auto_insert);
  } catch (const scyc::NotLossy& e) {
    std::cerr << "error: " << e.what() << '\n';
    for (auto i : e.missing) std::cerr << "missing: e" << (i + 1) << " -> 0\n";
    return exit_error;
  }
  const std::size_t n = red.net.size();
  Json inserted = Json::array();
  for (std::size_t k = 0; k < red.inserted.size(); ++k) {
    inserted.push_back(Json{{"index", red.inserted[k] + 1}, {"label", red.net.name(n - 2 - red.inserted.size() + k)}});
  }
  Json side{{"query", config_json(red.query)},
            {"s_down", red.net.name(n - 2)},
            {"s_reset", red.net.name(n - 1)},
            {"inserted_losses", inserted}};
  std::string text = scyc::serialize_net(red.net);
  std::string query;
  for (const auto& e : red.query.entries()) query += " " + e.get_str();
  text += "# query:" + query + "\n";
  emit_net(text, side, a.output, a.sidecar);
  return exit_yes;
}

int run_revreach(const ReduceArgs& a) {
  const auto net = load_net(a.input);
  const auto x = scyc::parse_configuration(a.from, net.dimension());
  Json list = Json::array();
  for (const auto& inst : scyc::cyclicity_to_revreach(net, x)) {
    list.push_back(Json{{"transition", net.name(inst.transition)}, {"x", config_json(inst.x)}, {"y", config_json(inst.y)}});
  }
  emit(Json{{"instances", list}});
  return exit_yes;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Structural cyclicity analysis for Petri nets"};
  app.require_subcommand(1);

  AnalyzeArgs analyze;
  auto* an = app.add_subcommand("analyze", "compute Lambda(T) and decide structural cyclicity");
  an->add_option("net", analyze.input, "net file, or - for stdin")->required();
  auto* as_json = an->add_flag("--json", analyze.json, "JSON output (default)");
  an->add_flag("--text", analyze.text, "plain text output")->excludes(as_json);
  an->add_flag("--no-witness", analyze.no_witness, "skip witness synthesis");
  an->add_flag("--rounds", analyze.rounds, "emit per-round sets");

  WitnessArgs witness;
  auto* wi = app.add_subcommand("witness", "emit a verified zero-to-zero cycle witness");
  wi->add_option("net", witness.input, "net file, or - for stdin")->required();
  wi->add_option("--verify", witness.verify, "check a power-word JSON file instead of synthesizing");

  OracleArgs oracle;
  auto* orc = app.add_subcommand("oracle", "bounded exhaustive search");
  orc->add_option("net", oracle.input, "net file, or - for stdin")->required();
  orc->add_option("--from", oracle.from, "start configuration (default 0)");
  orc->add_option("--to", oracle.to, "target configuration; without it, search for a cycle");
  orc->add_option("--budget-bound", oracle.bound, "coordinate bound B")->capture_default_str();
  orc->add_option("--budget-states", oracle.states, "maximum stored states")->capture_default_str();
  orc->add_option("--budget-depth", oracle.depth, "maximum depth (0 = unbounded)");

  ReduceArgs cfg;
  auto* fc = app.add_subcommand("from-cfg", "grammar to net (epsilon-membership reduction)");
  fc->add_option("grammar", cfg.input, "grammar file, or - for stdin")->required();
  fc->add_option("-o,--output", cfg.output, "net output file (sidecar defaults to OUTPUT.json)");
  fc->add_option("--sidecar", cfg.sidecar, "JSON mapping output file");

  ReduceArgs dag;
  auto* fd = app.add_subcommand("from-dag", "DAG automaton to net (emptiness reduction)");
  fd->add_option("automaton", dag.input, "automaton file, or - for stdin")->required();
  fd->add_option("-o,--output", dag.output, "net output file (sidecar defaults to OUTPUT.json)");
  fd->add_option("--sidecar", dag.sidecar, "JSON mapping output file");

  ReduceArgs lossy;
  auto* lr = app.add_subcommand("lossy-reduce", "lossy reachability x -> y to cyclicity of (x,0)");
  lr->add_option("net", lossy.input, "net file, or - for stdin")->required();
  lr->add_option("--from", lossy.from, "source configuration x")->required();
  lr->add_option("--to", lossy.to, "target configuration y")->required();
  lr->add_flag("--auto-insert", lossy.auto_insert, "add missing unit-loss transitions");
  lr->add_option("-o,--output", lossy.output, "net output file (sidecar defaults to OUTPUT.json)");
  lr->add_option("--sidecar", lossy.sidecar, "JSON mapping output file");

  ReduceArgs rev;
  auto* rr = app.add_subcommand("revreach-instances", "cyclicity of x to reversible-reachability instances");
  rr->add_option("net", rev.input, "net file, or - for stdin")->required();
  rr->add_option("--from", rev.from, "configuration x")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return exit_error;
  }

  try {
    if (*an) return run_analyze(analyze);
    if (*wi) return run_witness(witness);
    if (*orc) return run_oracle(oracle);
    if (*fc) return run_from_cfg(cfg);
    if (*fd) return run_from_dag(dag);
    if (*lr) return run_lossy(lossy);
    if (*rr) return run_revreach(rev);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_error;
  }
  return exit_error;
}
