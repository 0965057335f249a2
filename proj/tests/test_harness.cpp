#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dagopt/harness.hpp"
#include "test_support.hpp"

using namespace dagopt;
using namespace testing;

namespace fs = std::filesystem;

namespace {

ExperimentConfig small_config(unsigned jobs = 1) {
  return ExperimentConfig::from_json_text(R"({
    "suite": "sparse", "n": [40], "m": [3, 4, 5, 6], "density": [1], "lambdas": [0.5, 0.1],
    "replicates": 1, "methods": ["GD10", "IR10", "EXACT", "MIPin"], "master_seed": 3, "jobs": )" +
                                          std::to_string(jobs) + "}");
}

std::string read_file(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("delta_sol") {
    const std::vector<double> obj{2.0, 2.02, 3.0};
    const auto d = delta_sol(obj);
    CHECK(d[0] == 0.0);
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(50.0));

    const std::vector<double> with_zero{0.0, 0.5};
    CHECK(delta_sol(with_zero)[1] == doctest::Approx(50.0));

    const std::vector<double> with_nan{std::nan(""), 4.0};
    const auto n = delta_sol(with_nan);
    CHECK(std::isnan(n[0]));
    CHECK(n[1] == 0.0);
    CHECK_THROWS_AS(delta_sol(std::vector<double>{std::nan("")}), std::invalid_argument);
  }

  TEST_CASE("true_positive") {
    const auto truth = BinaryAdjacency::from_rows({{0, 1, 0}, {0, 0, 1}, {0, 0, 0}});
    CHECK(true_positive(truth, truth).dtp == 1.0);
    const auto reversed = BinaryAdjacency::from_rows({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}});
    const TruePositive r = true_positive(reversed, truth);
    CHECK(r.dtp == 0.0);
    CHECK(r.utp == 1.0);
    const auto half = BinaryAdjacency::from_rows({{0, 1, 0}, {0, 0, 0}, {1, 0, 0}});
    CHECK(true_positive(half, truth).dtp == 0.5);
    CHECK(true_positive(half, truth).utp == 0.5);
    CHECK_THROWS(true_positive(truth, BinaryAdjacency(3)));
    CHECK_THROWS(true_positive(BinaryAdjacency(2), truth));
  }

  TEST_CASE("method names and seeds") {
    CHECK(parse_method("gd10") == Method::kGd10);
    CHECK(parse_method("MIPto-export") == Method::kMipTo);
    CHECK(parse_method("mipcp") == Method::kMipCp);
    CHECK(to_string(Method::kIr10) == "IR10");
    CHECK_THROWS(parse_method("dist"));
    CHECK(is_mip(Method::kMipIn));
    CHECK(!is_mip(Method::kExact));
    CHECK(method_seeds(Method::kGd, 5) == std::vector<std::uint64_t>{5});
    CHECK(method_seeds(Method::kIr10, 5) == derive_seeds(5, 10));
  }

  TEST_CASE("experiment run, aggregation and scatter") {
    const ExperimentConfig config = small_config();
    const ExperimentResult result = run_experiment(config);
    REQUIRE(result.runs.size() == 4 * 2 * 4);
    for (const auto& r : result.runs) {
      CAPTURE(r.error);
      CHECK(r.ok);
      if (r.method == "MIPin-export") {
        CHECK(std::isnan(r.objective));
        CHECK(r.mip_binaries == r.m * (r.m - 1) / 2);
      } else {
        CHECK(r.delta_sol >= 0.0);
      }
    }
    // EXACT is optimal, so nothing beats it and it has zero gap.
    for (std::size_t i = 0; i < result.runs.size(); i += 4) {
      const auto& gd = result.runs[i];
      const auto& ir = result.runs[i + 1];
      const auto& ex = result.runs[i + 2];
      REQUIRE(ex.method == "EXACT");
      CHECK(ex.delta_sol == doctest::Approx(0.0).epsilon(1e-9));
      CHECK(gd.objective >= ex.objective - 1e-9);
      CHECK(ir.objective >= ex.objective - 1e-9);
    }

    const auto by_m = aggregate(result.runs, "m");
    std::map<std::string, int> rows_per_method;
    for (const auto& row : by_m) {
      rows_per_method[row.method]++;
      CHECK(row.runs == 2);
    }
    CHECK(rows_per_method["GD10"] == 4);
    CHECK(rows_per_method["IR10"] == 4);
    CHECK(rows_per_method["MIPin-export"] == 4);
    CHECK(by_m.front().group == "3");
    CHECK(aggregate(result.runs, "d").empty());
    CHECK(aggregate(result.runs, "s").size() == 4);

    const auto sc = scatter(result.runs);
    CHECK(sc.size() == 8 * 3);
    for (const auto& row : sc) {
      CHECK(row.method != "MIPin-export");
      CHECK(row.ln1p_avg_density == doctest::Approx(std::log1p(row.avg_density)));
      CHECK(row.ln1p_100_delta == doctest::Approx(std::log1p(row.mean_delta_sol)));
      CHECK(row.avg_density >= 0.0);
      CHECK(row.avg_density <= 50.0);
    }
  }

  TEST_CASE("reports do not depend on the pool width") {
    const auto a = run_experiment(small_config(1));
    const auto b = run_experiment(small_config(3));
    REQUIRE(a.runs.size() == b.runs.size());
    for (std::size_t i = 0; i < a.runs.size(); ++i) {
      CHECK(a.runs[i].instance_id == b.runs[i].instance_id);
      CHECK(a.runs[i].method == b.runs[i].method);
      CHECK(a.runs[i].seed == b.runs[i].seed);
      CHECK(a.runs[i].order_hash == b.runs[i].order_hash);
      CHECK((a.runs[i].objective == b.runs[i].objective || std::isnan(a.runs[i].objective)));
    }
  }

  TEST_CASE("runs.csv round trip and report files") {
    const auto dir = fs::temp_directory_path() / "dagopt_test_harness";
    fs::remove_all(dir);
    ExperimentConfig config = small_config();
    config.big_m_report = true;
    const ExperimentResult result = run_experiment(config);
    CHECK(result.big_m.size() == 8);
    write_reports(result, config, dir.string());
    for (const char* name : {"runs.csv", "agg_n.csv", "agg_m.csv", "agg_s.csv", "agg_lambda.csv", "scatter.csv", "bigm.csv"}) {
      CHECK(fs::exists(dir / name));
    }
    CHECK(read_file(dir / "scatter.csv").rfind("group,method,mean_delta_sol,avg_density,ln1p_avg_density,ln1p_100_delta_sol", 0) == 0);
    CHECK(read_file(dir / "bigm.csv").rfind("group,B_hat_min,B_hat_avg,B_hat_max,M_min,M_avg,M_max,count,violations", 0) == 0);

    const auto back = read_runs_csv((dir / "runs.csv").string());
    REQUIRE(back.size() == result.runs.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
      const auto& x = result.runs[i];
      const auto& y = back[i];
      CHECK(x.instance_id == y.instance_id);
      CHECK(x.seed == y.seed);
      CHECK(x.order_hash == y.order_hash);
      CHECK(x.arc_count == y.arc_count);
      CHECK(x.ok == y.ok);
      CHECK((x.objective == y.objective || (std::isnan(x.objective) && std::isnan(y.objective))));
      CHECK((x.delta_sol == y.delta_sol || (std::isnan(x.delta_sol) && std::isnan(y.delta_sol))));
    }
    fs::remove_all(dir);
  }

  TEST_CASE("big-M summary") {
    std::vector<BigMSample> samples{{"a", 10, 1, 0.5, 0.4, 1.0}, {"b", 10, 1, 0.5, 0.6, 1.2}, {"c", 10, 2, 0.5, 2.0, 1.5}};
    const auto rows = validate_big_m(samples);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].count == 2);
    CHECK(rows[0].b_avg == doctest::Approx(0.5));
    CHECK(rows[0].m_max == 1.2);
    CHECK(rows[0].violations == 0);
    CHECK(rows[1].violations == 1);

    // With an overwhelming penalty every fit is empty and M falls back to 1.
    const Instance inst = make_instance(InstanceSpec{6, 40, DensityMode::kSparse, 2, 4}, "i");
    const BigMSample s = big_m_sample(inst, 1e6);
    CHECK(s.b_hat == 0.0);
    CHECK(s.big_m == 1.0);
  }

  TEST_CASE("CSV data sources") {
    const auto dir = fs::temp_directory_path() / "dagopt_test_harness_csv";
    fs::create_directories(dir);
    const Instance inst = make_instance(InstanceSpec{5, 40, DensityMode::kSparse, 2, 8}, "i");
    write_csv(inst.data.values(), {"a", "b", "c", "d", "e"}, (dir / "d.csv").string());
    const auto config = ExperimentConfig::from_json_text(R"({"data": [")" + (dir / "d.csv").string() +
                                                         R"("], "lambdas": [0.2], "methods": ["GD", "IR"]})");
    const auto result = run_experiment(config);
    REQUIRE(result.runs.size() == 2);
    CHECK(result.runs[0].instance_id == "d");
    CHECK(result.runs[0].density_kind.empty());
    CHECK(result.runs[1].ok);

    const auto missing = ExperimentConfig::from_json_text(R"({"data": ["/nonexistent.csv"], "methods": ["GD"]})");
    const auto failed = run_experiment(missing);
    REQUIRE(failed.runs.size() == 1);
    CHECK(!failed.runs[0].ok);
    CHECK(!failed.runs[0].error.empty());
    fs::remove_all(dir);
  }

  TEST_CASE("config errors") {
    CHECK_THROWS(ExperimentConfig::from_json_text("{}"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"suite": "sparse", "data": ["x.csv"]})"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"suite": "tiny"})"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"suite": "sparse", "methods": ["DIST"]})"));
    CHECK_THROWS(ExperimentConfig::from_json_text(R"({"data": ["x.csv"], "lambdas": [0.1, 0.5]})"));
    CHECK_THROWS(ExperimentConfig::from_json_text("not json"));
    CHECK_THROWS(ExperimentConfig::load("/nonexistent/config.json"));
    const auto c = ExperimentConfig::from_json_text(R"({"suite": "dense", "m": [20]})");
    CHECK(c.grid.m_values == std::vector<std::size_t>{20});
    CHECK(c.grid.n_values == std::vector<std::size_t>{100, 200, 300});
    CHECK(c.methods == std::vector<Method>{Method::kGd10, Method::kIr10});
  }
}
