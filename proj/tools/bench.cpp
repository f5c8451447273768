// Serial vs OpenMP kernels on a scaled birthday task: the present is at one
// of N post offices and Father does not know which.

#include <benchmark/benchmark.h>

#include <stdexcept>
#include <string>

#include "delp/dsl.hpp"
#include "delp/kernels.hpp"
#include "delp/planner.hpp"

namespace {

using namespace delp;

std::string offices_task(int n) {
  std::string locs = "Home";
  for (int k = 1; k <= n; ++k) locs += ", PO" + std::to_string(k);
  std::string text = "agents Father;\nsort Agent = { Father };\nsort Obj = { Present };\nsort Loc = { " + locs +
                     " };\natoms At(Agent|Obj, Loc), Has(Agent, Obj), Wrapped(Obj);\n"
                     "schema Go(a: Agent, from: Loc, to: Loc) { pre: At(a, from); eff: At(a, to) & !At(a, from); }\n"
                     "action TryPickUp(a: Agent, o: Obj, l: Loc) {\n"
                     "  event e1 { pre: At(a, l) & At(o, l) & !Has(a, o); post: Has(a, o) & !At(o, l); }\n"
                     "  event e2 { pre: At(a, l) & !At(o, l); }\n  designated e1, e2;\n}\n"
                     "schema Wrap(a: Agent, o: Obj) { pre: Has(a, o) & !Wrapped(o); eff: Wrapped(o); }\n"
                     "state s0 {\n";
  std::string designated;
  for (int k = 1; k <= n; ++k) {
    text += "  world w" + std::to_string(k) + ": At(Father, Home), At(Present, PO" + std::to_string(k) + ");\n";
    for (int j = k + 1; j <= n; ++j) text += "  edge Father: w" + std::to_string(k) + " -- w" + std::to_string(j) + ";\n";
    designated += (k > 1 ? ", w" : "w") + std::to_string(k);
  }
  text += "  designated " + designated + ";\n}\n";
  text += "task offices {\n  initial s0;\n  actions Go, TryPickUp, Wrap;\n"
          "  goal At(Father, Home) & Has(Father, Present) & Wrapped(Present);\n  owner Father;\n}\n";
  return text;
}

EpistemicTask load(int n) {
  auto r = parse_task(offices_task(n));
  if (!r.ok()) throw std::runtime_error(format_diagnostic(r.diagnostics.front()));
  return r.document->task;
}

// A frontier a few levels deep, so there is enough work per expansion.
std::vector<EpistemicState> frontier(const EpistemicTask& t, int levels) {
  std::vector<EpistemicState> level{t.initial};
  for (int d = 0; d < levels; ++d) {
    std::vector<EpistemicState> next;
    for (auto& s : expand_serial(t, level, true)) next.push_back(std::move(s.state));
    level = std::move(next);
  }
  return level;
}

void BM_ExpandLevel(benchmark::State& state, Backend backend) {
  const auto t = load(static_cast<int>(state.range(0)));
  const auto f = frontier(t, 2);
  for (auto _ : state) benchmark::DoNotOptimize(expand_level(t, f, true, backend));
  state.counters["frontier"] = static_cast<double>(f.size());
}

void BM_SolveSequential(benchmark::State& state, Backend backend) {
  const auto t = load(static_cast<int>(state.range(0)));
  SearchOptions o;
  o.depth_cap = static_cast<std::size_t>(2 * state.range(0) + 2);
  o.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(solve_sequential(t, o));
}

void BM_SolvePolicy(benchmark::State& state, Backend backend) {
  const auto t = load(static_cast<int>(state.range(0)));
  SearchOptions o;
  o.depth_cap = static_cast<std::size_t>(2 * state.range(0) + 2);
  o.backend = backend;
  for (auto _ : state) benchmark::DoNotOptimize(solve_policy(t, o));
}

}  // namespace

BENCHMARK_CAPTURE(BM_ExpandLevel, serial, Backend::serial)->Arg(3)->Arg(5);
BENCHMARK_CAPTURE(BM_ExpandLevel, openmp, Backend::openmp)->Arg(3)->Arg(5);
BENCHMARK_CAPTURE(BM_SolveSequential, serial, Backend::serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolveSequential, openmp, Backend::openmp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolvePolicy, serial, Backend::serial)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);
BENCHMARK_CAPTURE(BM_SolvePolicy, openmp, Backend::openmp)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
