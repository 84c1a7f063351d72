#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <random>
#include <set>

#include "beesynth/bee.hpp"
#include "beesynth/search.hpp"
#include "oracle.hpp"

using namespace beesynth;
using nlohmann::json;
using testsupport::Recorder;
using testsupport::source_path;

namespace {

json read_json(const std::string& rel) {
  std::ifstream in(source_path(rel));
  return json::parse(in);
}

Task literal_task(const std::string& out) {
  return parse_task(json{{"name", "lit"},
                         {"domain", "strings"},
                         {"arguments", json::array()},
                         {"examples", {{{"inputs", json::object()}, {"output", out}}}}});
}

Task int_task(std::int64_t out) {
  return parse_task(json{{"name", "int"},
                         {"domain", "strings"},
                         {"arguments", json::array()},
                         {"examples", {{{"inputs", json::object()}, {"output", out}}}}});
}

std::set<std::string> texts(const std::vector<Program>& ps) {
  std::set<std::string> out;
  for (const auto& p : ps) out.insert(to_prefix(p));
  return out;
}

bool nondecreasing(const std::vector<Recorder::Item>& items, std::size_t limit = SIZE_MAX) {
  for (std::size_t i = 1; i < std::min(limit, items.size()); ++i) {
    if (items[i].cost < items[i - 1].cost - 1e-9) return false;
  }
  return true;
}

// Compares the first n recorded costs with the n cheapest oracle programs.
// A shorter record means the engine ran out of programs; then it must match
// the whole (finite) space.
void expect_matches_oracle(const std::vector<Recorder::Item>& got, std::size_t n, const Pcfg& pcfg, const CostModel& model,
                           const Task& task, std::optional<TypeTag> only_type = std::nullopt) {
  const bool complete = got.size() < n;
  if (complete) n = got.size();
  ASSERT_TRUE(nondecreasing(got, n));
  const double bound = complete ? std::numeric_limits<double>::infinity() : got[n - 1].cost;
  const auto oracle = testsupport::exhaustive_by_cost(pcfg, model, task, bound, 2'000'000);
  std::vector<double> want;
  for (const auto& o : oracle) {
    if (!only_type || o.program->rule->ret == *only_type) want.push_back(o.w);
  }
  std::sort(want.begin(), want.end());
  if (complete) {
    ASSERT_EQ(want.size(), n);
  } else {
    ASSERT_GE(want.size(), n);
  }
  for (std::size_t i = 0; i < n; ++i) ASSERT_NEAR(got[i].cost, want[i], 1e-7) << "position " << i;
}

}  // namespace

// ---- BUS -------------------------------------------------------------------------

TEST(Bus, ConcatSolutionHasSizeFive) {
  // 100-literal version of the concatenation example; the 1000-literal one
  // needs about 10^9 size-5 candidates under size ordering.
  const Pcfg p = load_grammar(source_path("data/grammars/concat_100.json"));
  const Task t = load_task(source_path("data/tasks/concat_100.json"));
  SearchOptions so;
  so.trace = true;
  const auto r = bus_synthesize(p, t, so);
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_EQ(size(r.solution), 5u);
  EXPECT_EQ(r.solution_cost, 5.0);
  EXPECT_TRUE(solves(r.solution, t));
  EXPECT_EQ(r.trace.back().cost, 3.0);  // size 5 never completes
}

TEST(Bus, LiteralSolutionAtSizeOne) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const auto r = bus_synthesize(p, literal_task("417"));
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_EQ(size(r.solution), 1u);
  EXPECT_LE(r.evaluations, 1000u);
}

TEST(Bus, MatchesExhaustiveEnumerationBySize) {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testsupport::random_case(rng, 3);
    SearchOptions so;
    so.equivalence = false;
    so.cost_cap = 7.0;
    Recorder rec;
    so.observer = &rec;
    const auto r = bus_synthesize(c.pcfg, c.task, so);
    ASSERT_EQ(r.outcome, Outcome::cap_reached);
    std::map<long, std::set<std::string>> got;
    for (const auto& it : rec.generated) ASSERT_TRUE(got[std::lround(it.cost)].insert(it.text).second) << it.text;
    const auto want = testsupport::enumerate_by_integer_cost(c.pcfg.grammar(), std::vector<long>(c.pcfg.grammar().rules.size(), 1), 7);
    EXPECT_EQ(got, want);
  }
}

// ---- cost-guided levels ------------------------------------------------------------

TEST(Guided, ExampleFourSterileLevels) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const Task t = load_task(source_path("data/tasks/concat_1000.json"));
  const CostModel m(CostModelKind::probe_rounded, p);
  SearchOptions so;
  Recorder rec;
  so.observer = &rec;
  // Level 10 (1000 literals) and level 34 (10^6 pairs) complete; stop early
  // inside level 58.
  so.budget.max_evaluations = 1'000'000 + 1000 + 100;
  const auto r = cost_guided_synthesize(p, t, m, so);
  EXPECT_EQ(r.outcome, Outcome::timeout);
  std::set<long> levels;
  for (const auto& it : rec.generated) levels.insert(std::lround(it.cost));
  EXPECT_EQ(levels, (std::set<long>{10, 34, 58}));
  std::size_t at58 = 0;
  for (const auto& it : rec.generated) at58 += std::lround(it.cost) == 58;
  EXPECT_EQ(at58, 100u);
}

TEST(Guided, NothingBelowCheapestTerminal) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const CostModel m(CostModelKind::probe_rounded, p);
  SearchOptions so;
  so.cost_cap = 9.0;
  so.trace = true;
  const auto r = cost_guided_synthesize(p, literal_task("7"), m, so);
  EXPECT_EQ(r.outcome, Outcome::cap_reached);
  EXPECT_EQ(r.generations, 0u);
  EXPECT_TRUE(r.trace.empty());
}

TEST(Guided, PerLevelSetsMatchExhaustiveFilter) {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testsupport::random_case(rng, 4);
    const CostModel m(CostModelKind::probe_rounded, c.pcfg);
    std::vector<long> rc;
    for (RuleId r = 0; r < c.pcfg.grammar().rules.size(); ++r) rc.push_back(std::lround(m.rule_cost(r)));
    const long cap = 10;
    SearchOptions so;
    so.equivalence = false;
    so.cost_cap = static_cast<double>(cap);
    Recorder rec;
    so.observer = &rec;
    cost_guided_synthesize(c.pcfg, c.task, m, so);
    std::map<long, std::set<std::string>> got;
    for (const auto& it : rec.generated) got[std::lround(it.cost)].insert(it.text);
    auto want = testsupport::enumerate_by_integer_cost(c.pcfg.grammar(), rc, cap);
    for (auto it = want.begin(); it != want.end();) it = it->second.empty() ? want.erase(it) : std::next(it);
    EXPECT_EQ(got, want);
  }
}

TEST(Guided, RejectsRealValuedModels) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_100.json"));
  EXPECT_THROW(cost_guided_synthesize(p, literal_task("1"), CostModel(CostModelKind::probe, p)), ConfigError);
}

// ---- Heap Search -------------------------------------------------------------------

TEST(HeapSearch, ExampleThree) {
  const Pcfg p = load_grammar(source_path("data/grammars/one_two_add.json"));
  const Task t = int_task(1000);
  SearchOptions so;
  so.budget.max_evaluations = 50;
  Recorder rec;
  so.observer = &rec;
  heap_search_synthesize(p, t, CostModel(CostModelKind::probe, p), so);
  ASSERT_GE(rec.evaluated.size(), 3u);
  EXPECT_EQ(rec.evaluated[0].text, "1");
  EXPECT_EQ(rec.evaluated[1].text, "2");
  EXPECT_EQ(rec.evaluated[2].text, "(add 1 1)");
  bool found = false;
  for (const auto& [parent, kids] : rec.children) {
    if (parent && to_prefix(parent) == "(add 1 1)") {
      EXPECT_EQ(texts(kids), (std::set<std::string>{"(add 2 1)", "(add 1 2)"}));
      found = true;
    }
  }
  EXPECT_TRUE(found);
  EXPECT_TRUE(nondecreasing(rec.evaluated));
}

TEST(HeapSearch, TerminalsOnlyInCostOrder) {
  json doc{{"types", {"S"}}, {"rules", json::array()}};
  const std::vector<std::pair<std::string, double>> lits{{"a", 0.1}, {"b", 0.5}, {"c", 0.15}, {"d", 0.25}};
  for (const auto& [s, pr] : lits) doc["rules"].push_back({{"ret", "S"}, {"kind", "literal"}, {"value", s}, {"prob", pr}});
  const Pcfg p = parse_grammar(doc);
  SearchOptions so;
  Recorder rec;
  so.observer = &rec;
  const auto r = heap_search_synthesize(p, literal_task("zzz"), CostModel(CostModelKind::probe, p), so);
  EXPECT_EQ(r.outcome, Outcome::exhausted);
  std::vector<std::string> order;
  for (const auto& it : rec.evaluated) order.push_back(it.text);
  EXPECT_EQ(order, (std::vector<std::string>{"\"b\"", "\"d\"", "\"c\"", "\"a\""}));
}

TEST(HeapSearch, FirstEvaluationsMatchOracle) {
  // Grammars whose start type is rare relative to the others can need more
  // oracle programs than fit in memory; those only get the order check.
  std::mt19937_64 rng(303);
  int checked = 0, skipped = 0;
  while (checked < 30) {
    const auto c = testsupport::random_case(rng);
    const CostModel m(CostModelKind::probe, c.pcfg);
    SearchOptions so;
    so.budget.max_evaluations = 200;
    Recorder rec;
    so.observer = &rec;
    heap_search_synthesize(c.pcfg, c.task, m, so);
    ASSERT_TRUE(nondecreasing(rec.evaluated));
    try {
      // Heap Search enumerates the start type only.
      expect_matches_oracle(rec.evaluated, 200, c.pcfg, m, c.task, c.pcfg.grammar().initial);
      ++checked;
    } catch (const testsupport::OracleTooLarge&) {
      ++skipped;
    }
  }
  EXPECT_LT(skipped, checked);
}

// ---- Brute ---------------------------------------------------------------------------

TEST(Brute, ExampleChildren) {
  const Pcfg p = load_grammar(source_path("data/grammars/one_two_add.json"));
  SearchOptions so;
  so.budget.max_evaluations = 40;
  Recorder rec;
  so.observer = &rec;
  brute_synthesize(p, int_task(1000), CostModel(CostModelKind::probe, p), so);
  ASSERT_GE(rec.children.size(), 2u);
  EXPECT_EQ(rec.children[0].first, nullptr);
  EXPECT_EQ(texts(rec.children[0].second), (std::set<std::string>{"(add 1 2)", "(add 2 2)"}));
  EXPECT_EQ(to_prefix(rec.children[1].first), "(add 1 2)");
  EXPECT_EQ(texts(rec.children[1].second), (std::set<std::string>{"(add 2 (add 1 2))", "(add (add 1 2) (add 2 2))"}));
}

TEST(Brute, PopOrderIsNondecreasing) {
  std::mt19937_64 rng(404);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = testsupport::random_case(rng);
    for (auto kind : {CostModelKind::probe, CostModelKind::bustle_spline}) {
      const CostModel m(kind, c.pcfg);
      SearchOptions so;
      so.budget.max_generations = 20000;
      Recorder rec;
      so.observer = &rec;
      brute_synthesize(c.pcfg, c.task, m, so);
      double last = -1.0;
      for (const auto& [parent, kids] : rec.children) {
        if (!parent) continue;
        // Priority of a node: w for pre-generation models, w' otherwise.
        const double w = rec.cost_of.at(parent.get());
        const double pri = m.post_generation() ? m.post_cost(w, c.task, output_signature(parent, c.task)) : w;
        EXPECT_GE(pri, last - 1e-9);
        last = pri;
      }
    }
  }
}

TEST(Brute, GeneratesMoreThanItEvaluates) {
  const Pcfg p = load_grammar(source_path("data/grammars/one_two_add.json"));
  const auto r = brute_synthesize(p, int_task(23), CostModel(CostModelKind::probe, p));
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_GT(r.generations, r.evaluations);
}

TEST(Brute, SelfCombinationsReachDoubling) {
  // x + x with x = 2 + 2 + ... only appears when a node combines with itself.
  const Pcfg p = load_grammar(source_path("data/grammars/one_two_add.json"));
  SearchOptions so;
  so.brute_self_combinations = true;
  const auto r = brute_synthesize(p, int_task(16), CostModel(CostModelKind::probe, p), so);
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_TRUE(solves(r.solution, int_task(16)));
}

// ---- Bee Search ----------------------------------------------------------------------

TEST(CostTuple, ExpandPairState) {
  const std::vector<double> c{9.8165, 9.9660, 33.9207};
  const double concat = 14.287712;
  const CostTupleState s{0, {1, 1}, state_cost(concat, std::vector<std::uint32_t>{1, 1}, c)};
  const auto kids = expand_cost_tuple(s, concat, c);
  ASSERT_EQ(kids.size(), 2u);
  EXPECT_EQ(kids[0].indices, (std::vector<std::uint32_t>{2, 1}));
  EXPECT_EQ(kids[1].indices, (std::vector<std::uint32_t>{1, 2}));
  EXPECT_NEAR(kids[0].w, 34.0702, 1e-3);
  EXPECT_NEAR(kids[1].w, 34.0702, 1e-3);
}

TEST(CostTuple, TerminalAndUnary) {
  const std::vector<double> c{1.0, 2.0, 3.0, 4.0};
  EXPECT_TRUE(expand_cost_tuple(CostTupleState{0, {}, 1.0}, 1.0, c).empty());
  const auto kids = expand_cost_tuple(CostTupleState{0, {3}, 4.0}, 1.0, c);
  ASSERT_EQ(kids.size(), 1u);
  EXPECT_EQ(kids[0].indices, (std::vector<std::uint32_t>{4}));
  EXPECT_EQ(kids[0].w, 5.0);
  EXPECT_TRUE(std::isinf(state_cost(1.0, std::vector<std::uint32_t>{5}, c)));
}

TEST(CostTuple, ArityThreeCoordinateDiff) {
  std::mt19937_64 rng(9);
  std::vector<double> c;
  for (int i = 1; i <= 20; ++i) c.push_back(i * 0.7);
  for (int t = 0; t < 100; ++t) {
    std::uniform_int_distribution<std::uint32_t> d(1, 15);
    const std::vector<std::uint32_t> idx{d(rng), d(rng), d(rng)};
    const auto kids = expand_cost_tuple(CostTupleState{0, idx, state_cost(2.0, idx, c)}, 2.0, c);
    ASSERT_EQ(kids.size(), 3u);
    for (std::size_t j = 0; j < 3; ++j) {
      for (std::size_t i = 0; i < 3; ++i) EXPECT_EQ(kids[j].indices[i], idx[i] + (i == j ? 1 : 0));
      EXPECT_NEAR(kids[j].w, state_cost(2.0, kids[j].indices, c), 1e-12);
    }
  }
}

TEST(Bee, TableOneTrace) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const Task t = load_task(source_path("data/tasks/concat_1000.json"));
  SearchOptions so;
  so.trace = true;
  const auto r = bee_synthesize(p, t, CostModel(CostModelKind::probe, p), so);
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_EQ(r.evaluations, 1'001'001u);
  EXPECT_EQ(r.generations, r.evaluations);
  const std::vector<std::uint64_t> counts{1, 999, 1, 1998, 998001, 1};
  const std::vector<double> costs{9.8165, 9.9660, 33.9207, 34.0702, 34.2197, 58.0249};
  ASSERT_EQ(r.trace.size(), counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i) {
    EXPECT_EQ(r.trace[i].generated, counts[i]) << i;
    EXPECT_NEAR(r.trace[i].cost, costs[i], 1e-3) << i;
  }
  ASSERT_GE(r.cost_list.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(r.cost_list[i], costs[i], 1e-3);
  EXPECT_EQ(r.trace[1].bank_size, 1000u);
  EXPECT_EQ(to_prefix(r.solution).find("concat") != std::string::npos, true);
  EXPECT_TRUE(solves(r.solution, t));
}

TEST(Bee, TerminalSolutionPopsOnlyCheaperTerminals) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const auto r = bee_synthesize(p, literal_task("7"), CostModel(CostModelKind::probe, p));
  ASSERT_EQ(r.outcome, Outcome::solved);
  EXPECT_EQ(r.evaluations, 8u);  // "1000", then "1" .. "7"
  EXPECT_EQ(r.states_expanded, 0u);
}

TEST(Bee, GenerationOrderMatchesOracle) {
  std::mt19937_64 rng(505);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = testsupport::random_case(rng);
    for (auto kind : {CostModelKind::probe, CostModelKind::bustle_spline, CostModelKind::u}) {
      const CostModel m(kind, c.pcfg);
      SearchOptions so;
      so.equivalence = false;
      so.budget.max_generations = 2000;
      Recorder rec;
      so.observer = &rec;
      const auto r = bee_synthesize(c.pcfg, c.task, m, so);
      if (r.outcome != Outcome::exhausted) EXPECT_EQ(r.generations, 2000u);
      EXPECT_EQ(r.generations, r.evaluations);
      std::set<std::string> seen;
      for (const auto& it : rec.generated) ASSERT_TRUE(seen.insert(it.text).second) << "generated twice: " << it.text;
      expect_matches_oracle(rec.generated, 2000, c.pcfg, m, c.task);
    }
  }
}

TEST(Bee, EquivalenceOnStillNondecreasing) {
  std::mt19937_64 rng(606);
  for (int trial = 0; trial < 20; ++trial) {
    const auto c = testsupport::random_case(rng);
    for (auto kind : {CostModelKind::probe, CostModelKind::u}) {
      SearchOptions so;
      so.budget.max_generations = 3000;
      Recorder rec;
      so.observer = &rec;
      bee_synthesize(c.pcfg, c.task, CostModel(kind, c.pcfg), so);
      EXPECT_TRUE(nondecreasing(rec.generated));
    }
  }
}

TEST(Truncation, BeeBeatsReverseOrderLevels) {
  const json gold = read_json("tests/golden/truncation.json");
  const Pcfg p = load_grammar(source_path("data/grammars/concat_100.json"));
  const Task t = load_task(source_path("data/tasks/concat_100.json"));
  const auto bee = bee_synthesize(p, t, CostModel(CostModelKind::probe, p));
  SearchOptions so;
  so.tie_order = TieOrder::reverse;
  const auto guided = cost_guided_synthesize(p, t, CostModel(CostModelKind::probe_rounded, p), so);
  ASSERT_EQ(bee.outcome, Outcome::solved);
  ASSERT_EQ(guided.outcome, Outcome::solved);
  EXPECT_EQ(bee.evaluations, gold["bee"]["evaluations"].get<std::uint64_t>());
  EXPECT_EQ(guided.evaluations, gold["guided"]["evaluations"].get<std::uint64_t>());
  EXPECT_LT(bee.evaluations, guided.evaluations);
  EXPECT_NEAR(bee.solution_cost, gold["bee"]["solution_cost"].get<double>(), 1e-6);
}

// ---- shared behaviour ------------------------------------------------------------------

TEST(AllEngines, ZeroBudgetTimesOut) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_100.json"));
  const Task t = load_task(source_path("data/tasks/concat_100.json"));
  for (Engine e : {Engine::bus, Engine::guided, Engine::heap, Engine::brute, Engine::bee}) {
    SearchOptions so;
    so.budget.seconds = 0.0;
    const CostModelKind k = e == Engine::bus ? CostModelKind::size : e == Engine::guided ? CostModelKind::probe_rounded : CostModelKind::probe;
    const auto r = synthesize(e, p, t, CostModel(k, p), so);
    EXPECT_EQ(r.outcome, Outcome::timeout) << engine_name(e);
  }
}

TEST(AllEngines, DeterministicCounts) {
  const Pcfg g = specialize(load_grammar(source_path("data/grammars/strings.json")), {"arg0"});
  const Task t = load_task(source_path("suites/strings/add_period.json"));
  for (Engine e : {Engine::bus, Engine::guided, Engine::heap, Engine::brute, Engine::bee}) {
    const CostModelKind k = e == Engine::bus ? CostModelKind::size : e == Engine::guided ? CostModelKind::probe_rounded : CostModelKind::probe;
    const CostModel m(k, g);
    const auto a = synthesize(e, g, t, m);
    const auto b = synthesize(e, g, t, m);
    ASSERT_EQ(a.outcome, Outcome::solved) << engine_name(e);
    EXPECT_EQ(a.evaluations, b.evaluations);
    EXPECT_EQ(a.generations, b.generations);
    EXPECT_EQ(to_prefix(a.solution), to_prefix(b.solution));
    EXPECT_LE(a.evaluations, a.generations);
  }
}

TEST(AllEngines, EngineNames) {
  for (Engine e : {Engine::bus, Engine::guided, Engine::heap, Engine::brute, Engine::bee}) EXPECT_EQ(parse_engine(engine_name(e)), e);
  EXPECT_FALSE(parse_engine("dfs"));
}
