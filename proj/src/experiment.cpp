#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "dagopt/harness.hpp"

namespace dagopt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename T>
std::vector<T> json_list(const nlohmann::json& j, const char* key, std::vector<T> fallback) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_array()) return v.get<std::vector<T>>();
  return {v.get<T>()};
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  const nlohmann::json j = nlohmann::json::parse(text);
  ExperimentConfig c;
  if (j.contains("suite") == j.contains("data")) {
    throw std::invalid_argument("config: exactly one of 'suite' or 'data' is required");
  }
  if (j.contains("suite")) {
    c.suite = parse_suite_kind(j.at("suite").get<std::string>());
    c.grid = default_grid(*c.suite);
    c.grid.n_values = json_list<std::size_t>(j, "n", c.grid.n_values);
    c.grid.m_values = json_list<std::size_t>(j, "m", c.grid.m_values);
    c.grid.densities = json_list<double>(j, "density", c.grid.densities);
    c.grid.lambdas = json_list<double>(j, "lambdas", c.grid.lambdas);
    c.grid.replicates = j.value("replicates", c.grid.replicates);
  } else {
    c.data_paths = json_list<std::string>(j, "data", {});
    c.has_header = j.value("has_header", true);
    c.data_lambdas = json_list<double>(j, "lambdas", {1.0, 0.5, 0.1, 0.05});
    LambdaGrid{c.data_lambdas}.validate();
  }
  for (const auto& name : json_list<std::string>(j, "methods", {"GD10", "IR10"})) {
    c.methods.push_back(parse_method(name));
  }
  if (c.methods.empty()) throw std::invalid_argument("config: no methods");
  c.master_seed = j.value("master_seed", std::uint64_t{0});
  c.jobs = j.value("jobs", 1u);
  c.big_m_report = j.value("bigm", false);
  c.exact_max_m = j.value("exact_max_m", std::size_t{6});
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json_text(ss.str());
}

BigMSample big_m_sample(const Instance& inst, double lambda) {
  const PenaltySpec pen(lambda);
  const CoefficientMatrix fit = solve_restricted(inst.data, inst.truth.adjacency, pen);
  return {inst.id, inst.spec.m, inst.spec.density, lambda, max_abs(fit), estimate_big_m(inst.data, pen)};
}

std::vector<BigMRow> validate_big_m(std::span<const BigMSample> samples) {
  std::vector<BigMRow> rows;
  std::map<std::string, std::size_t> index;
  for (const auto& s : samples) {
    std::ostringstream key;
    key << s.m << "|" << s.s << "|" << s.lambda;
    auto [it, fresh] = index.emplace(key.str(), rows.size());
    if (fresh) {
      BigMRow r;
      r.group = key.str();
      r.b_min = r.m_min = std::numeric_limits<double>::infinity();
      r.b_max = r.m_max = -std::numeric_limits<double>::infinity();
      rows.push_back(r);
    }
    BigMRow& r = rows[it->second];
    ++r.count;
    r.b_min = std::min(r.b_min, s.b_hat);
    r.b_max = std::max(r.b_max, s.b_hat);
    r.b_avg += s.b_hat;
    r.m_min = std::min(r.m_min, s.big_m);
    r.m_max = std::max(r.m_max, s.big_m);
    r.m_avg += s.big_m;
    if (s.b_hat >= s.big_m) ++r.violations;
  }
  for (auto& r : rows) {
    r.b_avg /= static_cast<double>(r.count);
    r.m_avg /= static_cast<double>(r.count);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Running

namespace {

struct Source {
  std::string id;
  std::optional<InstanceSpec> spec;  // synthetic
  std::string path;                  // CSV input
  std::vector<double> lambdas;
  std::uint64_t seed = 0;
};

struct SourceResult {
  std::vector<RunRecord> runs;
  std::vector<BigMSample> big_m;
};

std::vector<Source> make_sources(const ExperimentConfig& config) {
  std::vector<Source> out;
  if (config.suite) {
    for (auto& e : suite(*config.suite, config.master_seed, config.grid)) {
      Source s;
      s.id = e.id;
      s.spec = e.spec;
      s.lambdas = e.lambdas.values;
      s.seed = mix_seed(e.spec.seed + 1);
      out.push_back(std::move(s));
    }
  } else {
    for (std::size_t i = 0; i < config.data_paths.size(); ++i) {
      Source s;
      s.id = std::filesystem::path(config.data_paths[i]).stem().string();
      s.path = config.data_paths[i];
      s.lambdas = config.data_lambdas;
      s.seed = mix_seed(mix_seed(config.master_seed) + i);
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::string one_line(std::string s) {
  std::replace_if(s.begin(), s.end(), [](char c) { return c == ',' || c == '\n' || c == '\r'; }, ';');
  return s;
}

void run_method(Method method, const Dataset& x, const Matrix& merit, double lambda, std::uint64_t seed,
                std::size_t exact_max_m, RunRecord& rec) {
  const PenaltySpec pen(lambda);
  const LassoObjective f(x, pen);
  const auto start = std::chrono::steady_clock::now();
  if (is_mip(method)) {
    const ModelKind kind = method == Method::kMipTo ? ModelKind::kTo
                           : method == Method::kMipIn ? ModelKind::kIn
                                                      : ModelKind::kCp;
    const MipModel model = build_model(kind, x, pen, estimate_big_m(x, pen));
    rec.objective = kNaN;
    rec.delta_sol = kNaN;
    rec.mip_binaries = model.binary_count();
    rec.mip_constraints = model.constraints().size();
  } else {
    Solution s;
    if (method == Method::kExact) {
      if (x.m() > exact_max_m) throw std::invalid_argument("EXACT limited to m <= " + std::to_string(exact_max_m));
      s = exhaustive_search(f);
    } else {
      const Algorithm algo = method == Method::kGd || method == Method::kGd10 ? Algorithm::kGd : Algorithm::kIr;
      const auto seeds = method_seeds(method, seed);
      s = multi_start(algo, f, merit, seeds).best;
    }
    rec.objective = s.objective;
    rec.arc_count = arc_count(s);
    rec.order_hash = s.order.hash();
  }
  rec.wall_time_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

SourceResult run_source(const ExperimentConfig& config, const Source& src) {
  SourceResult out;
  std::optional<Instance> inst;
  std::optional<Dataset> loaded;
  if (src.spec) {
    inst = make_instance(*src.spec, src.id);
  } else {
    loaded = load_csv(src.path, config.has_header);
  }
  const Dataset& x = inst ? inst->data : *loaded;
  const Matrix merit = merit_scores(x);

  for (std::size_t li = 0; li < src.lambdas.size(); ++li) {
    const double lambda = src.lambdas[li];
    const std::uint64_t seed = mix_seed(src.seed + li);
    const std::size_t first = out.runs.size();
    for (Method method : config.methods) {
      if (method == Method::kExact && x.m() > config.exact_max_m) continue;
      RunRecord rec;
      rec.instance_id = src.id;
      rec.method = to_string(method);
      rec.n = x.n();
      rec.m = x.m();
      if (src.spec) {
        rec.density_kind = src.spec->mode == DensityMode::kSparse ? "s" : "d";
        rec.density = src.spec->density;
      }
      rec.lambda = lambda;
      rec.seed = seed;
      try {
        run_method(method, x, merit, lambda, seed, config.exact_max_m, rec);
      } catch (const std::exception& e) {
        rec.ok = false;
        rec.objective = kNaN;
        rec.delta_sol = kNaN;
        rec.error = one_line(e.what());
      }
      out.runs.push_back(std::move(rec));
    }
    // Gaps among the order-based methods on this (instance, lambda).
    std::vector<double> objectives;
    std::vector<std::size_t> slots;
    for (std::size_t i = first; i < out.runs.size(); ++i) {
      if (out.runs[i].ok && !std::isnan(out.runs[i].objective)) {
        objectives.push_back(out.runs[i].objective);
        slots.push_back(i);
      }
    }
    if (!objectives.empty()) {
      const auto gaps = delta_sol(objectives);
      for (std::size_t i = 0; i < slots.size(); ++i) out.runs[slots[i]].delta_sol = gaps[i];
    }
    if (config.big_m_report && inst) out.big_m.push_back(big_m_sample(*inst, lambda));
  }
  return out;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config) {
  const std::vector<Source> sources = make_sources(config);
  std::vector<SourceResult> results(sources.size());
  std::vector<std::string> failures(sources.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < sources.size(); i = next++) {
      try {
        results[i] = run_source(config, sources[i]);
      } catch (const std::exception& e) {
        failures[i] = one_line(e.what());
      }
    }
  };
  const unsigned width = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(sources.size())));
  if (width <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < width; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  // Collected in source order so the output does not depend on the pool width.
  ExperimentResult out;
  for (std::size_t i = 0; i < sources.size(); ++i) {
    if (!failures[i].empty()) {
      RunRecord rec;
      rec.instance_id = sources[i].id;
      rec.method = "*";
      rec.ok = false;
      rec.objective = kNaN;
      rec.delta_sol = kNaN;
      rec.error = failures[i];
      out.runs.push_back(std::move(rec));
      continue;
    }
    for (auto& r : results[i].runs) out.runs.push_back(std::move(r));
    for (auto& b : results[i].big_m) out.big_m.push_back(b);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Aggregation

namespace {

std::string short_number(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

std::optional<std::pair<double, std::string>> group_of(const RunRecord& r, const std::string& key) {
  if (key == "n") return std::make_pair(static_cast<double>(r.n), std::to_string(r.n));
  if (key == "m") return std::make_pair(static_cast<double>(r.m), std::to_string(r.m));
  if (key == "lambda") return std::make_pair(r.lambda, short_number(r.lambda));
  if ((key == "s" || key == "d") && r.density_kind == key) return std::make_pair(r.density, short_number(r.density));
  return std::nullopt;
}

double mean_finite(const std::vector<double>& v) {
  double s = 0.0;
  std::size_t c = 0;
  for (double x : v) {
    if (std::isfinite(x)) {
      s += x;
      ++c;
    }
  }
  return c ? s / static_cast<double>(c) : kNaN;
}

std::vector<std::string> method_order(std::span<const RunRecord> runs) {
  std::vector<std::string> out;
  for (const auto& r : runs) {
    if (r.method != "*" && std::find(out.begin(), out.end(), r.method) == out.end()) out.push_back(r.method);
  }
  return out;
}

}  // namespace

std::vector<AggregateRow> aggregate(std::span<const RunRecord> runs, const std::string& key) {
  struct Acc {
    std::string label;
    std::vector<double> time, delta, arcs;
  };
  // group value -> method -> accumulators; std::map keeps groups ascending.
  std::map<double, std::map<std::string, Acc>> groups;
  for (const auto& r : runs) {
    if (!r.ok) continue;
    auto g = group_of(r, key);
    if (!g) continue;
    Acc& a = groups[g->first][r.method];
    a.label = g->second;
    a.time.push_back(r.wall_time_seconds);
    a.delta.push_back(r.delta_sol);
    a.arcs.push_back(static_cast<double>(r.arc_count));
  }
  const auto methods = method_order(runs);
  std::vector<AggregateRow> out;
  for (const auto& [value, per_method] : groups) {
    for (const auto& method : methods) {
      auto it = per_method.find(method);
      if (it == per_method.end()) continue;
      const Acc& a = it->second;
      out.push_back({key, a.label, method, a.time.size(), mean_finite(a.time), mean_finite(a.delta), mean_finite(a.arcs)});
    }
  }
  return out;
}

std::vector<ScatterRow> scatter(std::span<const RunRecord> runs) {
  struct Acc {
    std::vector<double> density;
    std::map<std::string, std::vector<double>> delta;
  };
  std::vector<std::string> order;
  std::map<std::string, Acc> groups;
  for (const auto& r : runs) {
    if (!r.ok || std::isnan(r.objective)) continue;
    const std::string g = std::to_string(r.n) + "|" + std::to_string(r.m) + "|" + r.density_kind +
                          short_number(r.density) + "|" + short_number(r.lambda);
    if (!groups.count(g)) order.push_back(g);
    Acc& a = groups[g];
    const double cells = static_cast<double>(r.m) * static_cast<double>(r.m - 1);
    a.density.push_back(100.0 * static_cast<double>(r.arc_count) / cells);
    a.delta[r.method].push_back(r.delta_sol);
  }
  const auto methods = method_order(runs);
  std::vector<ScatterRow> out;
  for (const auto& g : order) {
    const Acc& a = groups[g];
    const double den = mean_finite(a.density);
    for (const auto& method : methods) {
      auto it = a.delta.find(method);
      if (it == a.delta.end()) continue;
      const double delta = mean_finite(it->second);
      // delta is a percentage, so 100 * (delta / 100) = delta.
      out.push_back({g, method, delta, den, std::log1p(den), std::log1p(delta)});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

namespace {

const char* kRunsHeader =
    "instance_id,method,n,m,density_kind,density,lambda,objective,arc_count,wall_time_seconds,seed,order_hash,"
    "delta_sol,mip_binaries,mip_constraints,ok,error";

std::ofstream open_out(const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  return f;
}

std::string num(double v) { return std::isnan(v) ? "" : format_double(v); }

}  // namespace

void write_runs_csv(std::span<const RunRecord> runs, const std::string& path) {
  auto f = open_out(path);
  f << kRunsHeader << "\n";
  for (const auto& r : runs) {
    f << r.instance_id << ',' << r.method << ',' << r.n << ',' << r.m << ',' << r.density_kind << ','
      << num(r.density) << ',' << num(r.lambda) << ',' << num(r.objective) << ',' << r.arc_count << ','
      << num(r.wall_time_seconds) << ',' << r.seed << ',' << r.order_hash << ',' << num(r.delta_sol) << ','
      << r.mip_binaries << ',' << r.mip_constraints << ',' << (r.ok ? 1 : 0) << ',' << one_line(r.error) << "\n";
  }
}

std::vector<RunRecord> read_runs_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(f, line);
  if (line != kRunsHeader) throw std::runtime_error(path + ": unexpected header");
  std::vector<RunRecord> out;
  auto dbl = [](const std::string& s) { return s.empty() ? kNaN : std::stod(s); };
  while (std::getline(f, line)) {
    std::vector<std::string> c;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) c.push_back(cell);
    if (!line.empty() && line.back() == ',') c.emplace_back();
    if (c.size() != 17) throw std::runtime_error(path + ": malformed row");
    RunRecord r;
    r.instance_id = c[0];
    r.method = c[1];
    r.n = std::stoul(c[2]);
    r.m = std::stoul(c[3]);
    r.density_kind = c[4];
    r.density = dbl(c[5]);
    r.lambda = dbl(c[6]);
    r.objective = dbl(c[7]);
    r.arc_count = std::stoul(c[8]);
    r.wall_time_seconds = dbl(c[9]);
    r.seed = std::stoull(c[10]);
    r.order_hash = std::stoull(c[11]);
    r.delta_sol = dbl(c[12]);
    r.mip_binaries = std::stoul(c[13]);
    r.mip_constraints = std::stoul(c[14]);
    r.ok = c[15] == "1";
    r.error = c[16];
    out.push_back(std::move(r));
  }
  return out;
}

void write_reports(const ExperimentResult& result, const ExperimentConfig& config, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const fs::path dir(out_dir);
  write_runs_csv(result.runs, (dir / "runs.csv").string());

  std::vector<std::string> keys = {"n", "m"};
  if (config.suite) keys.push_back(*config.suite == SuiteKind::kDense ? "d" : "s");
  keys.push_back("lambda");
  for (const auto& key : keys) {
    auto f = open_out((dir / ("agg_" + key + ".csv")).string());
    f << key << ",method,runs,mean_time,mean_delta_sol,mean_arc_count\n";
    for (const auto& a : aggregate(result.runs, key)) {
      f << a.group << ',' << a.method << ',' << a.runs << ',' << num(a.mean_time) << ',' << num(a.mean_delta_sol)
        << ',' << num(a.mean_arc_count) << "\n";
    }
  }

  auto sf = open_out((dir / "scatter.csv").string());
  sf << "group,method,mean_delta_sol,avg_density,ln1p_avg_density,ln1p_100_delta_sol\n";
  for (const auto& s : scatter(result.runs)) {
    sf << s.group << ',' << s.method << ',' << num(s.mean_delta_sol) << ',' << num(s.avg_density) << ','
       << num(s.ln1p_avg_density) << ',' << num(s.ln1p_100_delta) << "\n";
  }

  if (config.big_m_report) {
    auto bf = open_out((dir / "bigm.csv").string());
    bf << "group,B_hat_min,B_hat_avg,B_hat_max,M_min,M_avg,M_max,count,violations\n";
    for (const auto& r : validate_big_m(result.big_m)) {
      bf << r.group << ',' << num(r.b_min) << ',' << num(r.b_avg) << ',' << num(r.b_max) << ',' << num(r.m_min) << ','
         << num(r.m_avg) << ',' << num(r.m_max) << ',' << r.count << ',' << r.violations << "\n";
    }
  }
}

}  // namespace dagopt
