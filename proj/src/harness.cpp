#include "beesynth/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace beesynth {

namespace fs = std::filesystem;

Suite load_suite(const fs::path& dir) {
  const fs::path gpath = dir / "grammar.json";
  if (!fs::exists(gpath)) throw ConfigError("suite " + dir.string() + " has no grammar.json");
  Suite s{dir, load_grammar(gpath), {}};
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".json" && e.path().filename() != "grammar.json") files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  for (const auto& f : files) {
    Task t = load_task(f);
    if (t.name.empty()) t.name = f.stem().string();
    s.tasks.push_back(std::move(t));
  }
  std::sort(s.tasks.begin(), s.tasks.end(), [](const Task& a, const Task& b) { return a.name < b.name; });
  return s;
}

nlohmann::json config_to_json(const RunConfig& cfg) {
  nlohmann::json j;
  j["engine"] = engine_name(cfg.engine);
  j["cost"] = cost_model_name(cfg.cost);
  j["timeout"] = cfg.timeout;
  j["reps"] = cfg.reps;
  j["jobs"] = cfg.jobs;
  j["probe_d"] = cfg.probe_d;
  j["equivalence"] = cfg.equivalence;
  j["brute_self_combinations"] = cfg.brute_self_combinations;
  j["max_evaluations"] = cfg.max_evaluations ? nlohmann::json(*cfg.max_evaluations) : nlohmann::json(nullptr);
  j["weights"] = nlohmann::json::array();
  for (const auto& w : cfg.weights) j["weights"].push_back(w.string());
  return j;
}

RunRecord run_task(const Pcfg& grammar, const Task& task, const RunConfig& cfg, int rep) {
  const Pcfg g = specialize(grammar, task.arguments);
  const bool post = cfg.cost == CostModelKind::bustle_binned || cfg.cost == CostModelKind::bustle_spline ||
                    cfg.cost == CostModelKind::u;
  if (post && task.domain == "bitvectors") {
    throw ConfigError("post-generation cost models score string properties and do not apply to bit-vector tasks");
  }
  std::shared_ptr<const ProbabilityOracle> oracle;
  if (post && !cfg.weights.empty()) {
    oracle = std::make_shared<NetworkOracle>(NetworkOracle::load(cfg.weights[rep % cfg.weights.size()]));
  }

  SearchOptions so;
  so.budget.seconds = cfg.timeout;
  so.budget.max_evaluations = cfg.max_evaluations;
  so.equivalence = cfg.equivalence;
  so.brute_self_combinations = cfg.brute_self_combinations;

  SearchResult res;
  if (cfg.probe_d > 0) {
    ProbeOptions po;
    po.d = cfg.probe_d;
    po.engine = cfg.engine;
    po.search = so;
    res = run_probe(g, task, po).result;
  } else {
    const CostModel model(cfg.engine == Engine::bus ? CostModelKind::size : cfg.cost, g, oracle);
    res = synthesize(cfg.engine, g, task, model, so);
  }

  RunRecord r;
  r.task = task.name;
  r.engine = engine_name(cfg.engine);
  r.cost = cost_model_name(cfg.cost);
  r.rep = rep;
  r.outcome = outcome_name(res.outcome);
  r.evaluations = res.evaluations;
  r.generations = res.generations;
  r.elapsed = res.elapsed;
  if (res.solution) {
    r.solution = to_prefix(res.solution);
    r.size = size(res.solution);
    r.cost_value = res.solution_cost;
  }
  return r;
}

std::vector<RunRecord> run_benchmark(const Suite& suite, const RunConfig& cfg) {
  struct Job {
    std::size_t task;
    int rep;
  };
  std::vector<Job> jobs;
  for (std::size_t t = 0; t < suite.tasks.size(); ++t) {
    for (int rep = 0; rep < std::max(1, cfg.reps); ++rep) jobs.push_back({t, rep});
  }
  std::vector<RunRecord> out(jobs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++) {
      const Task& task = suite.tasks[jobs[i].task];
      try {
        out[i] = run_task(suite.grammar, task, cfg, jobs[i].rep);
      } catch (const std::exception& e) {
        RunRecord r;
        r.task = task.name;
        r.engine = engine_name(cfg.engine);
        r.cost = cost_model_name(cfg.cost);
        r.rep = jobs[i].rep;
        r.outcome = "error";
        r.error = e.what();
        out[i] = std::move(r);
      }
    }
  };
  const int n = std::clamp(cfg.jobs, 1, static_cast<int>(std::max<std::size_t>(1, jobs.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(out.begin(), out.end(), [](const RunRecord& a, const RunRecord& b) {
    return std::tie(a.task, a.rep) < std::tie(b.task, b.rep);
  });
  return out;
}

std::vector<std::string> verify_records(const Suite& suite, const std::vector<RunRecord>& records) {
  std::map<std::string, const Task*> by_name;
  for (const auto& t : suite.tasks) by_name[t.name] = &t;
  std::vector<std::string> bad;
  for (const auto& r : records) {
    if (r.outcome != "solved") continue;
    auto it = by_name.find(r.task);
    try {
      if (it == by_name.end()) throw TaskError("unknown task");
      const Pcfg g = specialize(suite.grammar, it->second->arguments);
      if (!solves(parse_prefix(g.grammar(), r.solution), *it->second)) throw TaskError("does not solve");
    } catch (const std::exception&) {
      bad.push_back(r.task);
    }
  }
  return bad;
}

// ---- CSV --------------------------------------------------------------------

namespace {

const char* const kColumns[] = {"task",        "engine",  "cost",     "rep",  "outcome",    "evaluations",
                                "generations", "elapsed", "solution", "size", "cost_value", "error"};

std::string quote(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

// One record; false at end of input. Handles quoted fields spanning lines.
bool read_row(std::istream& is, std::vector<std::string>& row) {
  row.clear();
  std::string field;
  bool quoted = false, any = false;
  char c;
  while (is.get(c)) {
    any = true;
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
    } else if (c == '\n') {
      break;
    } else if (c != '\r') {
      field += c;
    }
  }
  if (!any) return false;
  row.push_back(std::move(field));
  return true;
}

}  // namespace

void write_records_csv(std::ostream& os, const std::vector<RunRecord>& records) {
  for (std::size_t i = 0; i < std::size(kColumns); ++i) os << (i ? "," : "") << kColumns[i];
  os << "\n";
  for (const auto& r : records) {
    os << quote(r.task) << ',' << r.engine << ',' << r.cost << ',' << r.rep << ',' << r.outcome << ',' << r.evaluations << ','
       << r.generations << ',' << format_double(r.elapsed) << ',' << quote(r.solution) << ',' << r.size << ','
       << format_double(r.cost_value) << ',' << quote(r.error) << "\n";
  }
}

std::vector<RunRecord> read_records_csv(std::istream& is) {
  std::vector<std::string> row;
  if (!read_row(is, row)) return {};
  std::map<std::string, std::size_t> col;
  for (std::size_t i = 0; i < row.size(); ++i) col[row[i]] = i;
  for (const char* c : kColumns) {
    if (!col.count(c)) throw ConfigError(std::string("results file lacks column ") + c);
  }
  std::vector<RunRecord> out;
  while (read_row(is, row)) {
    if (row.size() == 1 && row[0].empty()) continue;
    if (row.size() < std::size(kColumns)) throw ConfigError("short row in results file");
    auto f = [&](const char* name) -> const std::string& { return row[col[name]]; };
    RunRecord r;
    r.task = f("task");
    r.engine = f("engine");
    r.cost = f("cost");
    r.rep = std::stoi(f("rep"));
    r.outcome = f("outcome");
    r.evaluations = std::stoull(f("evaluations"));
    r.generations = std::stoull(f("generations"));
    r.elapsed = std::stod(f("elapsed"));
    r.solution = f("solution");
    r.size = static_cast<std::uint32_t>(std::stoul(f("size")));
    r.cost_value = std::stod(f("cost_value"));
    r.error = f("error");
    out.push_back(std::move(r));
  }
  return out;
}

std::vector<SeriesSummary> summarize(const std::vector<RunRecord>& records) {
  std::map<std::pair<std::string, std::string>, std::map<int, int>> solved;  // series -> rep -> count
  for (const auto& r : records) {
    int& n = solved[{r.engine, r.cost}][r.rep];
    if (r.outcome == "solved") ++n;
  }
  std::vector<SeriesSummary> out;
  for (const auto& [series, reps] : solved) {
    SeriesSummary s{series.first, series.second, static_cast<int>(reps.size()), 0.0, 0.0};
    for (const auto& [rep, n] : reps) s.mean_solved += n;
    s.mean_solved /= s.reps;
    if (s.reps > 1) {
      double ss = 0.0;
      for (const auto& [rep, n] : reps) ss += (n - s.mean_solved) * (n - s.mean_solved);
      s.stddev_solved = std::sqrt(ss / (s.reps - 1));
    }
    out.push_back(s);
  }
  return out;
}

std::vector<CurvePoint> emit_curves(const std::vector<RunRecord>& records) {
  std::map<std::string, std::vector<const RunRecord*>> series;
  for (const auto& r : records) {
    if (r.outcome == "solved") series[r.engine + "/" + r.cost].push_back(&r);
  }
  std::vector<CurvePoint> out;
  for (auto& [name, rs] : series) {
    for (const char* metric : {"time", "evaluations"}) {
      const bool time = metric[0] == 't';
      auto x_of = [&](const RunRecord* r) { return time ? r->elapsed : static_cast<double>(r->evaluations); };
      std::stable_sort(rs.begin(), rs.end(), [&](auto* a, auto* b) { return x_of(a) < x_of(b); });
      double x = 0.0;
      std::uint64_t y = 0;
      for (const auto* r : rs) {
        x += x_of(r);
        out.push_back({name, metric, x, ++y});
      }
    }
  }
  return out;
}

void write_curves_csv(std::ostream& os, const std::vector<CurvePoint>& points) {
  os << "series,metric,x,y\n";
  for (const auto& p : points) os << p.series << ',' << p.metric << ',' << format_double(p.x) << ',' << p.y << "\n";
}

void write_results(const fs::path& dir, const std::vector<RunRecord>& records, const RunConfig& cfg) {
  fs::create_directories(dir);
  {
    std::ofstream os(dir / "results.csv");
    write_records_csv(os, records);
  }
  {
    std::ofstream os(dir / "summary.csv");
    os << "engine,cost,reps,mean_solved,stddev_solved\n";
    for (const auto& s : summarize(records)) {
      os << s.engine << ',' << s.cost << ',' << s.reps << ',' << format_double(s.mean_solved) << ','
         << format_double(s.stddev_solved) << "\n";
    }
  }
  std::ofstream os(dir / "config.json");
  os << config_to_json(cfg).dump(2) << "\n";
}

std::vector<RunRecord> read_results(const fs::path& dir) {
  std::vector<fs::path> files;
  if (fs::is_regular_file(dir)) {
    files.push_back(dir);
  } else {
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
      if (e.path().filename() == "results.csv") files.push_back(e.path());
    }
  }
  std::sort(files.begin(), files.end());
  std::vector<RunRecord> out;
  for (const auto& f : files) {
    std::ifstream is(f);
    auto rs = read_records_csv(is);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

}  // namespace beesynth
