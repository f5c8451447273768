// delp: command-line front end over .eplan task files.
//
// Exit codes: 0 ok, 1 no solution within the cap, 2 usage or parse error,
// 3 validation failure.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "delp/bisimulation.hpp"
#include "delp/dsl.hpp"
#include "delp/planner.hpp"
#include "delp/semantics.hpp"

using json = nlohmann::ordered_json;
using namespace delp;

namespace {

constexpr int kOk = 0;
constexpr int kNoSolution = 1;
constexpr int kUsage = 2;
constexpr int kInvalid = 3;
constexpr int kSchemaVersion = 1;

enum class Level { debug = 0, info = 1, warn = 2, error = 3 };

Level log_level() {
  const char* env = std::getenv("DELP_LOG");
  if (!env) return Level::warn;
  std::string v = env;
  if (v == "debug") return Level::debug;
  if (v == "info") return Level::info;
  if (v == "error") return Level::error;
  return Level::warn;
}

void log(Level level, const std::string& msg) {
  static const Level threshold = log_level();
  if (level < threshold) return;
  static const char* names[] = {"debug", "info", "warn", "error"};
  std::cerr << "delp: " << names[static_cast<int>(level)] << ": " << msg << "\n";
}

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Global {
  int threads = 0;
  std::string backend = "serial";
  std::string format = "text";
  std::string output;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

TaskDocument load(const std::string& path) {
  auto result = parse_task(read_file(path));
  if (!result.ok()) {
    for (const auto& d : result.diagnostics) std::cerr << path << ":" << format_diagnostic(d) << "\n";
    throw UsageError("could not parse '" + path + "'");
  }
  log(Level::info, "loaded " + path + ": " + std::to_string(result.document->task.actions.size()) +
                       " actions, " + std::to_string(result.document->task.vocab->atom_count()) + " atoms");
  const auto& task = result.document->task;
  if (task.owner) {
    // The owner's local actions close over unguarded edges only.
    std::vector<std::string> flagged;
    for (const auto& a : task.actions) {
      const bool guarded = std::any_of(a.edges().begin(), a.edges().end(), [&](const EdgeGuard& g) {
        return g.agent == *task.owner && !g.condition.is_top() && a.is_designated(g.from) && !a.is_designated(g.to);
      });
      if (guarded) flagged.push_back(a.name());
    }
    if (!flagged.empty()) {
      log(Level::warn, std::to_string(flagged.size()) + " action(s) have guarded " +
                           task.vocab->agent_name(*task.owner) + " edges that localizing does not follow, first " +
                           flagged.front());
    }
  }
  return std::move(*result.document);
}

Formula formula_arg(const std::string& text, const Vocabulary& vocab) {
  try {
    return parse_formula(text, vocab);
  } catch (const FormulaSyntaxError& e) {
    throw UsageError(std::string("formula: ") + e.what());
  }
}

void emit(const Global& g, const std::string& text) {
  if (g.output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(g.output, std::ios::binary);
  if (!out) throw UsageError("cannot write '" + g.output + "'");
  out << text;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

SearchOptions search_options(const Global& g, std::size_t depth) {
  SearchOptions o;
  o.depth_cap = depth;
  o.backend = parse_backend(g.backend);
  return o;
}

json stats_json(const SearchStats& s) {
  return {{"expanded", s.expanded}, {"generated", s.generated}, {"distinct", s.distinct}};
}

std::vector<std::string> split_names(const std::string& list) {
  // Commas separate names, except inside parentheses.
  std::vector<std::string> out;
  std::string cur;
  int depth = 0;
  for (char c : list) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    if (c != ' ') cur += c;
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

const EpistemicAction& action_arg(const EpistemicTask& task, const std::string& name) {
  const auto* a = find_action(task, name);
  if (!a) throw UsageError("unknown action '" + name + "'");
  return *a;
}

// --- policy documents ------------------------------------------------------

json policy_json(const EpistemicTask& task, const Policy& policy) {
  json entries = json::array();
  for (const auto& [key, e] : policy.entries()) {
    entries.push_back({{"local_digest", digest_hex(e.local_key)},
                       {"global_digest", digest_hex(key)},
                       {"summary", summarize(e.state)},
                       {"state", serialize_state(e.state, "s")},
                       {"action", e.action}});
  }
  return {{"format", "delp-policy"},
          {"version", 1},
          {"owner", task.vocab->agent_name(policy.owner())},
          {"entries", entries}};
}

Policy load_policy(const EpistemicTask& task, const std::string& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
    if (doc.contains("policy")) doc = doc["policy"];
    if (doc.value("format", "") != "delp-policy") throw UsageError("'" + path + "' is not a policy document");
    auto owner = task.vocab->find_agent(doc.at("owner").get<std::string>());
    if (!owner) throw UsageError("policy owner is not an agent of the task");
    Policy policy(*owner);
    for (const auto& e : doc.at("entries")) {
      policy.assign(parse_state(e.at("state").get<std::string>(), task.vocab), e.at("action").get<std::string>());
    }
    return policy;
  } catch (const json::exception& e) {
    throw UsageError("malformed policy '" + path + "': " + e.what());
  } catch (const std::invalid_argument& e) {
    throw UsageError("malformed policy '" + path + "': " + e.what());
  }
}

std::vector<std::string> load_plan(const std::string& path) {
  std::istringstream in(read_file(path));
  std::vector<std::string> plan;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string name;
    for (char c : line) {
      if (!std::isspace(static_cast<unsigned char>(c))) name += c;
    }
    if (!name.empty()) plan.push_back(name);
  }
  return plan;
}

std::string render_runs(const PolicyReport& report) {
  std::string out;
  for (const auto& r : report.executions) {
    out += "run from global " + std::to_string(r.start) + ": ";
    out += r.actions.empty() ? "(no actions)" : "";
    for (std::size_t k = 0; k < r.actions.size(); ++k) out += (k ? "; " : "") + r.actions[k];
    out += "  [" + std::string(outcome_name(r.outcome)) + ", " + std::to_string(r.actions.size()) + " steps]\n";
  }
  return out;
}

json runs_json(const PolicyReport& report) {
  json runs = json::array();
  for (const auto& r : report.executions) {
    runs.push_back({{"start", r.start}, {"actions", r.actions}, {"outcome", outcome_name(r.outcome)}});
  }
  return runs;
}

json violations_json(const PolicyReport& report) {
  json out = json::array();
  for (const auto& v : report.violations) {
    out.push_back({{"kind", v.kind}, {"message", v.message}, {"trace", v.trace}});
  }
  return out;
}

std::string render_violations(const PolicyReport& report) {
  std::string out;
  for (const auto& v : report.violations) {
    out += "violation [" + v.kind + "]: " + v.message;
    if (!v.trace.empty()) {
      out += " (after";
      for (const auto& a : v.trace) out += " " + a;
      out += ")";
    }
    out += "\n";
  }
  return out;
}

// --- subcommands -----------------------------------------------------------

int cmd_check(const Global& g, const std::string& path, const std::string& formula) {
  auto doc = load(path);
  const bool value = eval_state(doc.task.initial, formula_arg(formula, *doc.task.vocab));
  if (g.format == "json") {
    emit(g, dump({{"schema_version", kSchemaVersion}, {"command", "check"}, {"formula", formula}, {"value", value}}));
  } else {
    emit(g, value ? "true\n" : "false\n");
  }
  return kOk;
}

int cmd_apply(const Global& g, const std::string& path, const std::string& actions, bool contract, bool dot,
              const std::string& formula) {
  auto doc = load(path);
  const auto& task = doc.task;
  EpistemicState s = task.initial;
  const auto names = split_names(actions);
  for (std::size_t k = 0; k < names.size(); ++k) {
    const auto& a = action_arg(task, names[k]);
    if (auto w = inapplicable_witness(s, a)) {
      std::cerr << "step " << k + 1 << ": " << a.name() << " is not applicable (world "
                << s.model().world_name(*w) << ")\n";
      return kInvalid;
    }
    s = product_update(s, a);
    if (contract) s = bisim_contract(s);
  }
  std::optional<bool> value;
  if (!formula.empty()) value = eval_state(s, formula_arg(formula, *task.vocab));
  if (g.format == "json") {
    json j = {{"schema_version", kSchemaVersion},
              {"command", "apply"},
              {"actions", names},
              {"worlds", s.model().world_count()},
              {"designated", s.designated().size()},
              {"state", dot ? export_dot(s, "result") : serialize_state(s, "result")}};
    if (value) j["value"] = *value;
    emit(g, dump(j));
  } else {
    std::string out = dot ? export_dot(s, "result") : serialize_state(s, "result");
    if (value) out += std::string(*value ? "true" : "false") + "\n";
    emit(g, out);
  }
  return kOk;
}

int cmd_contract(const Global& g, const std::string& path) {
  auto doc = load(path);
  const auto c = bisim_contract(doc.task.initial);
  if (g.format == "json") {
    emit(g, dump({{"schema_version", kSchemaVersion},
                  {"command", "contract"},
                  {"worlds_before", doc.task.initial.model().world_count()},
                  {"worlds_after", c.model().world_count()},
                  {"digest", digest_hex(contracted_key(c))},
                  {"state", serialize_state(c, "contracted")}}));
  } else {
    emit(g, "# " + std::to_string(doc.task.initial.model().world_count()) + " -> " +
                std::to_string(c.model().world_count()) + " worlds, digest " + digest_hex(contracted_key(c)) +
                "\n" + serialize_state(c, "contracted"));
  }
  return kOk;
}

int solve_sequential_cmd(const Global& g, const TaskDocument& doc, std::size_t depth) {
  SearchStats stats;
  auto plan = solve_sequential(doc.task, search_options(g, depth), &stats);
  log(Level::info, "expanded " + std::to_string(stats.expanded) + ", generated " +
                       std::to_string(stats.generated) + ", distinct " + std::to_string(stats.distinct));
  json j = {{"schema_version", kSchemaVersion}, {"command", "solve"}, {"mode", "seq"},
            {"task", doc.task.name},            {"max_depth", depth}, {"solved", plan.has_value()}};
  if (!plan) {
    j["stats"] = stats_json(stats);
    emit(g, g.format == "json" ? dump(j) : "no plan within depth " + std::to_string(depth) + "\n");
    return kNoSolution;
  }
  const auto report = validate_plan(doc.task, *plan);
  if (!report.valid) {
    std::cerr << "internal error: plan failed validation: " << report.message << "\n";
    return kInvalid;
  }
  j["plan"] = *plan;
  j["length"] = plan->size();
  j["stats"] = stats_json(stats);
  j["validation"] = {{"valid", true}};
  std::string text;
  for (const auto& a : *plan) text += a + "\n";
  emit(g, g.format == "json" ? dump(j) : text);
  return kOk;
}

int solve_policy_cmd(const Global& g, const TaskDocument& doc, std::size_t depth) {
  if (!doc.task.owner) throw UsageError("policy mode needs a task with an owner");
  SearchStats stats;
  auto policy = solve_policy(doc.task, search_options(g, depth), &stats);
  json j = {{"schema_version", kSchemaVersion}, {"command", "solve"}, {"mode", "policy"},
            {"task", doc.task.name},            {"max_depth", depth}, {"solved", policy.has_value()}};
  if (!policy) {
    j["stats"] = stats_json(stats);
    emit(g, g.format == "json" ? dump(j) : "no policy within depth " + std::to_string(depth) + "\n");
    return kNoSolution;
  }
  const auto report = validate_policy(doc.task, *policy);
  if (!report.ok()) {
    std::cerr << "internal error: policy failed validation\n" << render_violations(report);
    return kInvalid;
  }
  j["policy"] = policy_json(doc.task, *policy);
  j["executions"] = runs_json(report);
  j["stats"] = stats_json(stats);
  j["validation"] = {{"valid", true}};
  // A policy file has to be readable by `validate` and `execute`, so a
  // file target always gets JSON.
  if (g.format == "json" || !g.output.empty()) {
    emit(g, dump(j));
    return kOk;
  }
  std::string text = "policy for " + doc.task.vocab->agent_name(policy->owner()) + ", " +
                     std::to_string(policy->size()) + " entries\n";
  for (const auto& [key, e] : policy->entries()) {
    text += digest_hex(e.local_key) + "  " + summarize(e.state) + "  -> " + e.action + "\n";
  }
  text += render_runs(report);
  emit(g, text);
  return kOk;
}

int solve_classical_cmd(const Global& g, const TaskDocument& doc, std::size_t depth) {
  auto prop = as_propositional(doc.task);
  if (!prop) throw UsageError("classical mode needs a global, propositional task with single-event actions");
  auto plan = solve_classical(*prop, depth);
  json j = {{"schema_version", kSchemaVersion}, {"command", "solve"}, {"mode", "classical"},
            {"task", doc.task.name},            {"max_depth", depth}, {"solved", plan.has_value()}};
  if (!plan) {
    emit(g, g.format == "json" ? dump(j) : "no plan within depth " + std::to_string(depth) + "\n");
    return kNoSolution;
  }
  const auto report = validate_plan(doc.task, *plan);
  if (!report.valid) {
    std::cerr << "internal error: plan failed validation: " << report.message << "\n";
    return kInvalid;
  }
  j["plan"] = *plan;
  j["length"] = plan->size();
  j["validation"] = {{"valid", true}};
  std::string text;
  for (const auto& a : *plan) text += a + "\n";
  emit(g, g.format == "json" ? dump(j) : text);
  return kOk;
}

int cmd_validate(const Global& g, const std::string& path, const std::string& plan_path,
                 const std::string& policy_path) {
  auto doc = load(path);
  if (plan_path.empty() == policy_path.empty()) throw UsageError("give exactly one of --plan or --policy");
  if (!plan_path.empty()) {
    const auto plan = load_plan(plan_path);
    PlanReport report;
    try {
      report = validate_plan(doc.task, plan);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
    json j = {{"schema_version", kSchemaVersion},
              {"command", "validate"},
              {"kind", "plan"},
              {"valid", report.valid},
              {"goal_reached", report.goal_reached},
              {"message", report.message}};
    if (report.failed_step) j["failed_step"] = *report.failed_step + 1;
    emit(g, g.format == "json" ? dump(j) : (report.valid ? "valid" : "invalid") + std::string(": ") + report.message + "\n");
    return report.valid ? kOk : kInvalid;
  }
  const auto policy = load_policy(doc.task, policy_path);
  const auto report = validate_policy(doc.task, policy);
  json j = {{"schema_version", kSchemaVersion}, {"command", "validate"},        {"kind", "policy"},
            {"valid", report.ok()},             {"violations", violations_json(report)}, {"executions", runs_json(report)}};
  emit(g, g.format == "json" ? dump(j)
                             : std::string(report.ok() ? "valid\n" : "invalid\n") + render_violations(report) +
                                   render_runs(report));
  return report.ok() ? kOk : kInvalid;
}

int cmd_execute(const Global& g, const std::string& path, const std::string& policy_path, std::size_t depth,
                std::uint64_t seed, std::size_t start, std::size_t max_steps) {
  auto doc = load(path);
  std::optional<Policy> policy;
  if (!policy_path.empty()) {
    policy = load_policy(doc.task, policy_path);
  } else {
    if (depth == 0) throw UsageError("give --policy or --max-depth");
    if (!doc.task.owner) throw UsageError("execute needs a task with an owner");
    policy = solve_policy(doc.task, search_options(g, depth));
    if (!policy) {
      std::cerr << "no policy within depth " << depth << "\n";
      return kNoSolution;
    }
  }
  const auto starts = globals(doc.task.initial);
  if (start >= starts.size()) throw UsageError("--start must be below " + std::to_string(starts.size()));
  const auto ex = execute(doc.task, *policy, starts[start], seeded_chooser(seed), max_steps);
  json steps = json::array();
  std::string text;
  for (std::size_t k = 0; k < ex.states.size(); ++k) {
    json step = {{"state", summarize(ex.states[k])}};
    text += "s" + std::to_string(k) + ": " + summarize(ex.states[k]) + "\n";
    if (k < ex.actions.size()) {
      step["action"] = ex.actions[k];
      text += "  " + ex.actions[k] + "\n";
    }
    steps.push_back(step);
  }
  text += std::string("outcome: ") + outcome_name(ex.outcome) + (ex.reason.empty() ? "" : " (" + ex.reason + ")") +
          ", " + std::to_string(ex.actions.size()) + " steps\n";
  json j = {{"schema_version", kSchemaVersion}, {"command", "execute"}, {"seed", seed},
            {"start", start},                   {"steps", steps},       {"outcome", outcome_name(ex.outcome)},
            {"reason", ex.reason}};
  emit(g, g.format == "json" ? dump(j) : text);
  return ex.outcome == Execution::Outcome::success ? kOk : kInvalid;
}

int cmd_dot(const Global& g, const std::string& path, const std::string& action) {
  auto doc = load(path);
  emit(g, action.empty() ? export_dot(doc.task.initial, "initial") : export_dot(action_arg(doc.task, action)));
  return kOk;
}

int cmd_print(const Global& g, const std::string& path) {
  auto doc = load(path);
  emit(g, serialize_task(doc.task));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Epistemic planning over dynamic epistemic logic task files"};
  app.require_subcommand(1);
  Global g;
  app.add_option("--threads", g.threads, "worker threads for the openmp backend (0: runtime default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--backend", g.backend, "search kernel backend")->check(CLI::IsMember({"serial", "openmp"}));

  auto common = [&](CLI::App* sub, std::string& task) {
    sub->add_option("task", task, ".eplan file")->required();
    sub->add_option("--format", g.format, "output format")->check(CLI::IsMember({"text", "json"}));
    sub->add_option("-o,--output", g.output, "write output to a file");
  };

  std::string task;
  std::string formula;
  auto* check = app.add_subcommand("check", "evaluate a formula in the initial state");
  common(check, task);
  check->add_option("--formula", formula, "formula")->required();

  std::string actions;
  bool contract = false;
  bool dot = false;
  auto* apply = app.add_subcommand("apply", "apply actions to the initial state by product update");
  common(apply, task);
  apply->add_option("--actions", actions, "comma-separated action names")->required();
  apply->add_flag("--contract", contract, "contract after every update");
  apply->add_flag("--dot", dot, "print the result as DOT");
  apply->add_option("--formula", formula, "also evaluate this formula in the result");

  auto* contract_cmd = app.add_subcommand("contract", "bisimulation contraction of the initial state");
  common(contract_cmd, task);

  std::string mode;
  std::size_t depth = 0;
  auto* solve = app.add_subcommand("solve", "search for a plan or policy");
  common(solve, task);
  solve->add_option("--mode", mode, "seq, policy or classical")
      ->required()
      ->check(CLI::IsMember({"seq", "policy", "classical"}));
  solve->add_option("--max-depth", depth, "depth cap")->required();

  std::string plan_path;
  std::string policy_path;
  auto* validate = app.add_subcommand("validate", "validate a plan or a policy");
  common(validate, task);
  validate->add_option("--plan", plan_path, "plan file, one action per line");
  validate->add_option("--policy", policy_path, "policy JSON document");

  std::uint64_t seed = 0;
  std::size_t start = 0;
  std::size_t max_steps = 100;
  auto* exec = app.add_subcommand("execute", "simulate a policy");
  common(exec, task);
  exec->add_option("--policy", policy_path, "policy JSON document");
  exec->add_option("--max-depth", depth, "solve for a policy with this cap first");
  exec->add_option("--seed", seed, "outcome chooser seed");
  exec->add_option("--start", start, "index of the initial global state");
  exec->add_option("--max-steps", max_steps, "step bound");

  std::string action;
  auto* dot_cmd = app.add_subcommand("dot", "DOT rendering of the initial state or an action");
  common(dot_cmd, task);
  dot_cmd->add_option("--action", action, "render this action instead");

  auto* print = app.add_subcommand("print", "print the grounded task in canonical form");
  common(print, task);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  set_thread_count(g.threads);
  try {
    if (*check) return cmd_check(g, task, formula);
    if (*apply) return cmd_apply(g, task, actions, contract, dot, formula);
    if (*contract_cmd) return cmd_contract(g, task);
    if (*solve) {
      auto doc = load(task);
      if (mode == "seq") return solve_sequential_cmd(g, doc, depth);
      if (mode == "policy") return solve_policy_cmd(g, doc, depth);
      return solve_classical_cmd(g, doc, depth);
    }
    if (*validate) return cmd_validate(g, task, plan_path, policy_path);
    if (*exec) return cmd_execute(g, task, policy_path, depth, seed, start, max_steps);
    if (*dot_cmd) return cmd_dot(g, task, action);
    if (*print) return cmd_print(g, task);
  } catch (const UsageError& e) {
    std::cerr << "delp: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "delp: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
