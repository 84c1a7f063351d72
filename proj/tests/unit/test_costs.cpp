#include <gtest/gtest.h>

#include <cmath>
#include <fstream>
#include <random>

#include "beesynth/costs.hpp"
#include "beesynth/spline.hpp"
#include "oracle.hpp"

using namespace beesynth;
using nlohmann::json;
using testsupport::source_path;

namespace {

json read_json(const std::string& rel) {
  std::ifstream in(source_path(rel));
  return json::parse(in);
}

RuleId rule_id(const Grammar& g, std::string_view op) {
  for (const auto& r : g.rules) {
    if (r.op == op) return r.id;
  }
  throw std::runtime_error("no rule");
}

}  // namespace

TEST(WProbe, PublishedSums) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const Grammar& g = p.grammar();
  const double concat = p.cost(rule_id(g, "concat"));
  const std::vector<double> ones{p.cost(rule_id(g, "1")), p.cost(rule_id(g, "2"))};
  const std::vector<double> thousands{p.cost(rule_id(g, "1000")), p.cost(rule_id(g, "1000"))};
  EXPECT_NEAR(w_probe(concat, ones), 34.219736, 1e-5);
  EXPECT_NEAR(w_probe(concat, thousands), 33.920888, 1e-5);
  const std::vector<double> published{9.966013, 9.966013};
  EXPECT_NEAR(w_probe(concat, published), 34.219736, 1e-5);
  EXPECT_EQ(w_probe(3.25, {}), 3.25);
}

TEST(WProbeRounded, PublishedValues) {
  const Pcfg p = load_grammar(source_path("data/grammars/concat_1000.json"));
  const Grammar& g = p.grammar();
  const long concat = rounded_rule_cost(p.cost(rule_id(g, "concat")));
  const long one = rounded_rule_cost(p.cost(rule_id(g, "1")));
  const long two = rounded_rule_cost(p.cost(rule_id(g, "2")));
  const long thousand = rounded_rule_cost(p.cost(rule_id(g, "1000")));
  EXPECT_EQ(w_probe_rounded(concat, std::vector<long>{one, two}), 34);
  EXPECT_EQ(w_probe_rounded(concat, std::vector<long>{thousand, thousand}), 34);
  EXPECT_EQ(thousand, 10);
  EXPECT_EQ(rounded_rule_cost(0.4), 1);
}

TEST(DeltaBinned, Bins) {
  EXPECT_EQ(delta_binned(0.05), 0);
  EXPECT_EQ(delta_binned(1.0), 5);
  EXPECT_EQ(delta_binned(0.1), 1);
  EXPECT_EQ(delta_binned(0.39999), 3);
  EXPECT_EQ(delta_binned(0.6), 5);
  const json doc = read_json("tests/golden/spline.json");
  for (const auto& b : doc["bins"]) {
    EXPECT_EQ(delta_binned(b["p"].get<double>()), b["bin"].get<int>()) << b.dump();
  }
  EXPECT_THROW(delta_binned(-0.1), std::invalid_argument);
  EXPECT_THROW(delta_binned(1.1), std::invalid_argument);
}

TEST(DeltaSpline, KnotsAndReferencePoints) {
  const json doc = read_json("tests/golden/spline.json");
  for (const auto& k : doc["knots"]) EXPECT_NEAR(delta_spline(k["x"].get<double>()), k["y"].get<double>(), 1e-9);
  EXPECT_EQ(delta_spline(0.25), 2.0);
  EXPECT_EQ(delta_spline(0.0), 0.0);
  EXPECT_EQ(delta_spline(1.0), 5.0);
  std::size_t interior = 0;
  for (const auto& pt : doc["points"]) {
    EXPECT_NEAR(delta_spline(pt["x"].get<double>()), pt["y"].get<double>(), 1e-9) << pt.dump();
    ++interior;
  }
  EXPECT_GE(interior, 21u);
  EXPECT_THROW(delta_spline(2.0), std::invalid_argument);
}

TEST(DeltaSpline, AgreesWithBinsAtTheEnds) {
  EXPECT_EQ(delta_spline(0.0), delta_binned(0.0));
  EXPECT_EQ(delta_spline(1.0), delta_binned(1.0));
}

TEST(NaturalCubicSpline, ZeroCurvatureAtEnds) {
  const NaturalCubicSpline s({0.0, 1.0, 2.0, 4.0}, {1.0, 3.0, 2.0, 5.0});
  EXPECT_EQ(s.second_derivatives().front(), 0.0);
  EXPECT_EQ(s.second_derivatives().back(), 0.0);
  EXPECT_NEAR(s(2.0), 2.0, 1e-12);
}

TEST(WBustlePost, Examples) {
  EXPECT_EQ(w_bustle_post(3.0, 0.05, [](double p) { return static_cast<double>(delta_binned(p)); }), 8.0);
  EXPECT_EQ(w_bustle_post(3.0, 1.0, [](double p) { return static_cast<double>(delta_binned(p)); }), 3.0);
  double spline_040 = 0.0;
  const json doc = read_json("tests/golden/spline.json");
  for (const auto& pt : doc["points"]) {
    if (pt["x"].get<double>() == 0.40) spline_040 = pt["y"].get<double>();
  }
  ASSERT_GT(spline_040, 0.0);
  EXPECT_NEAR(w_bustle_post(3.0, 0.40, delta_spline), 8.0 - spline_040, 1e-9);
}

TEST(WUPost, Examples) {
  EXPECT_EQ(w_u_post(1.0, 0.5), 2.0);
  EXPECT_NEAR(w_u_post(4.0, 0.01), 4.0 + std::log2(100.0), 1e-12);
  EXPECT_NEAR(w_u_post(0.0, 0.01), 6.6439, 1e-4);
  EXPECT_THROW(w_u_post(1.0, 0.0), std::invalid_argument);
}

TEST(PostCosts, Penalizing) {
  for (int i = 1; i <= 99; ++i) {
    const double p = i / 100.0;
    EXPECT_GE(w_u_post(3.0, p), 3.0);
    EXPECT_GE(w_bustle_post(3.0, p, delta_spline), 3.0);
    EXPECT_GE(w_bustle_post(3.0, p, [](double q) { return static_cast<double>(delta_binned(q)); }), 3.0);
  }
}

TEST(PropertySignature, FigureFourPairs) {
  const std::vector<std::pair<std::string, std::string>> pairs{{"hello world", "hello"}, {"FOO BAR", "foo"}, {"switch", "switch"}};
  auto lower = [](std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
  };
  const std::vector<StringProperty> ps{
      [&](const std::string& in, const std::string& out) { return lower(in).find(lower(out)) != std::string::npos; },
      [](const std::string& in, const std::string& out) { return in.find(out) != std::string::npos; },
      [](const std::string& in, const std::string& out) { return in.size() < out.size(); },
  };
  EXPECT_EQ(property_signature(pairs, ps), (std::vector<int>{1, 0, -1}));
  for (const auto& pr : pairs) {
    for (int v : property_signature({pr}, ps)) EXPECT_NE(v, 0);
  }
}

TEST(PropertySignature, MatchesPerPairLoop) {
  std::mt19937_64 rng(21);
  const std::string alphabet = "abAB ";
  auto rand_str = [&] {
    std::string s;
    const int n = std::uniform_int_distribution<int>(0, 5)(rng);
    for (int i = 0; i < n; ++i) s += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
    return s;
  };
  const std::vector<StringProperty> ps{
      [](const std::string& i, const std::string& o) { return i == o; },
      [](const std::string& i, const std::string& o) { return i.size() > o.size(); },
      [](const std::string& i, const std::string& o) { return o.find(i) != std::string::npos; },
  };
  for (int t = 0; t < 200; ++t) {
    std::vector<std::pair<std::string, std::string>> pairs;
    const int n = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int k = 0; k < n; ++k) pairs.emplace_back(rand_str(), rand_str());
    const auto got = property_signature(pairs, ps);
    for (std::size_t j = 0; j < ps.size(); ++j) {
      int trues = 0;
      for (const auto& [i, o] : pairs) trues += ps[j](i, o) ? 1 : 0;
      const int expect = trues == n ? 1 : (trues == 0 ? -1 : 0);
      EXPECT_EQ(got[j], expect);
    }
  }
}

namespace {

Task oracle_task(const json& doc) {
  json ex = json::array();
  for (std::size_t i = 0; i < doc["inputs"].size(); ++i) {
    ex.push_back({{"inputs", {{"arg0", doc["inputs"][i]}}}, {"output", doc["targets"][i]}});
  }
  return parse_task(json{{"name", "fig4"}, {"domain", "strings"}, {"arguments", {"arg0"}}, {"examples", ex}});
}

Signature strings(const json& arr) {
  Signature s;
  for (const auto& v : arr) s.emplace_back(v.get<std::string>());
  return s;
}

}  // namespace

TEST(HeuristicOracle, ManualTally) {
  const json doc = read_json("tests/golden/oracle.json");
  const Task task = oracle_task(doc);
  HeuristicOracle oracle;
  EXPECT_EQ(oracle_properties().size(), 10u);
  for (const auto& c : doc["cases"]) {
    const Signature sig = strings(c["outputs"]);
    EXPECT_EQ(agreement_signature(task, sig), c["vector"].get<std::vector<int>>()) << c.dump();
    EXPECT_NEAR(oracle.probability(task, sig), c["probability"].get<double>(), 1e-12) << c.dump();
  }
  // Exact match clamps to the ceiling.
  EXPECT_EQ(oracle.probability(task, task.outputs), ProbabilityOracle::kMax);
}

TEST(Oracles, ClampToRange) {
  const json doc = read_json("tests/golden/oracle.json");
  const Task task = oracle_task(doc);
  const Signature sig = strings(doc["cases"][0]["outputs"]);
  const NetworkOracle low({DenseLayer{1, 20, std::vector<double>(20, 0.0), {-50.0}}});
  const NetworkOracle high({DenseLayer{1, 20, std::vector<double>(20, 0.0), {50.0}}});
  EXPECT_EQ(low.probability(task, sig), ProbabilityOracle::kMin);
  EXPECT_EQ(high.probability(task, sig), ProbabilityOracle::kMax);
}

TEST(HeuristicOracle, Deterministic) {
  const json doc = read_json("tests/golden/oracle.json");
  const Task task = oracle_task(doc);
  HeuristicOracle a, b;
  const Signature sig = strings(doc["cases"][0]["outputs"]);
  EXPECT_EQ(a.probability(task, sig), b.probability(task, sig));
}

TEST(NetworkOracle, ForwardPassAndClamp) {
  // 20 -> 2 (ReLU) -> 1 (logistic).
  DenseLayer hidden{2, 20, std::vector<double>(40, 0.0), {0.5, -1.0}};
  hidden.weights[0] = 1.0;  // first feature feeds unit 0
  DenseLayer out{1, 2, {2.0, 3.0}, {-0.25}};
  const NetworkOracle net({hidden, out});
  std::vector<double> x(20, 0.0);
  x[0] = 1.0;
  // unit0 = relu(1 + 0.5) = 1.5, unit1 = relu(-1) = 0, logit = 3 - 0.25.
  EXPECT_NEAR(net.forward(x), 1.0 / (1.0 + std::exp(-2.75)), 1e-12);

  const json doc = read_json("tests/golden/oracle.json");
  const Task task = oracle_task(doc);
  const Signature sig = strings(doc["cases"][1]["outputs"]);
  const double p = net.probability(task, sig);
  EXPECT_GE(p, ProbabilityOracle::kMin);
  EXPECT_LE(p, ProbabilityOracle::kMax);
  EXPECT_EQ(p, net.probability(task, sig));
}

TEST(NetworkOracle, RejectsMismatchedWeights) {
  EXPECT_THROW(NetworkOracle({DenseLayer{1, 19, std::vector<double>(19, 0.0), {0.0}}}), ConfigError);
  EXPECT_THROW(NetworkOracle({DenseLayer{2, 20, std::vector<double>(40, 0.0), {0.0, 0.0}}}), ConfigError);
  EXPECT_THROW(NetworkOracle::from_json(json{{"layers", {{{"rows", 1}}}}}), ConfigError);
}

TEST(CostModel, AdditiveAndPositive) {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    auto c = testsupport::random_case(rng);
    for (auto kind : {CostModelKind::size, CostModelKind::probe, CostModelKind::probe_rounded, CostModelKind::bustle_binned,
                      CostModelKind::bustle_spline, CostModelKind::u}) {
      const CostModel m(kind, c.pcfg);
      for (RuleId r = 0; r < c.pcfg.grammar().rules.size(); ++r) {
        EXPECT_GT(m.rule_cost(r), 0.0);
        const std::vector<double> kids{1.5, 2.25};
        EXPECT_NEAR(w_probe(m.rule_cost(r), kids) - (1.5 + 2.25), m.rule_cost(r), 1e-12);
      }
      if (m.post_generation()) {
        for (double p : {0.01, 0.2, 0.5, 0.99}) EXPECT_GE(m.post_cost(7.0, p), 7.0);
      } else {
        EXPECT_EQ(m.post_cost(7.0, 0.3), 7.0);
      }
    }
  }
}

TEST(CostModel, NamesRoundTrip) {
  for (auto kind : {CostModelKind::size, CostModelKind::probe, CostModelKind::probe_rounded, CostModelKind::bustle_binned,
                    CostModelKind::bustle_spline, CostModelKind::u}) {
    EXPECT_EQ(parse_cost_model(cost_model_name(kind)), kind);
  }
  EXPECT_FALSE(parse_cost_model("nope"));
}
