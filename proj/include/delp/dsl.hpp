#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "delp/classical.hpp"
#include "delp/task.hpp"

namespace delp {

struct Diagnostic {
  int line = 1;
  int column = 1;
  std::string message;
};

/// "line:column: message"
std::string format_diagnostic(const Diagnostic& d);

struct SourceLocation {
  int line = 1;
  int column = 1;
};

/// Where each named declaration starts: keys are "action:NAME",
/// "state:NAME", "goal:NAME", "schema:NAME", "task".
using SourceMap = std::map<std::string, SourceLocation>;

struct TaskDocument {
  EpistemicTask task;
  std::vector<ActionSchema> schemas;
  ObjectSorts sorts;
  SourceMap source;
};

struct ParseOptions {
  std::size_t max_ground_actions = 10000;
};

/// Either a document or at least one diagnostic, never both.
struct ParseResult {
  std::optional<TaskDocument> document;
  std::vector<Diagnostic> diagnostics;
  bool ok() const { return document.has_value(); }
};

/// Parses a `.eplan` document. Never throws for bad input.
ParseResult parse_task(std::string_view text, const ParseOptions& options = {});

/// Grounded, explicit rendering of the task that parse_task reads back into
/// a structurally equal task.
std::string serialize_task(const EpistemicTask& task);

/// A `state NAME { ... }` block. World names that are not identifiers are
/// replaced by w1..wn.
std::string serialize_state(const EpistemicState& s, const std::string& name);

/// Parses a single `state` block against an existing vocabulary. Throws
/// std::invalid_argument with a positioned message on error.
EpistemicState parse_state(std::string_view text, const VocabularyPtr& vocab);

/// Graphviz renderings: designated nodes double-circled, reflexive edges
/// suppressed, symmetric pairs drawn once without arrowheads.
std::string export_dot(const EpistemicState& s, const std::string& graph_name = "state");
std::string export_dot(const EpistemicAction& a);

}  // namespace delp
