#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "anyonca/experiments.hpp"

using namespace anyonca;

TEST_CASE("decimal fractions parse exactly") {
  auto f = DecimalFraction::parse("0.8");
  REQUIRE(f.num == 8);
  REQUIRE(f.den == 10);
  REQUIRE(DecimalFraction::parse("1").num == 1);
  REQUIRE(DecimalFraction::parse("0.25").den == 100);
  REQUIRE_THROWS_AS(DecimalFraction::parse("0.x"), std::invalid_argument);
}

TEST_CASE("config files parse and override") {
  std::string path = "/tmp/anyonca_test_config.txt";
  {
    std::ofstream out(path);
    out << "# comment\n"
        << "Q = 3\n"
        << "n = 1\n"
        << "b = 7\n"
        << "f_c = 0.8\n"
        << "f_n = 0.2\n"
        << "p = 0.002,0.004\n"
        << "q = p\n"
        << "instances = 3\n"
        << "t_max = 500\n"
        << "seed = 11\n";
  }
  auto cfg = load_config(path);
  REQUIRE(cfg.Q == 3);
  REQUIRE(cfg.p_list == std::vector<double>{0.002, 0.004});
  REQUIRE(cfg.q_value == -1);
  REQUIRE(cfg.instances == 3);
  apply_config_key(cfg, "q", "0.001");
  REQUIRE(cfg.q_value == 0.001);
  REQUIRE_THROWS_AS(apply_config_key(cfg, "bogus", "1"),
                    std::invalid_argument);
}

TEST_CASE("defaults mirror the empirical protocol") {
  ExperimentConfig cfg;
  REQUIRE(cfg.Q == 3);
  REQUIRE(cfg.b == 7);
  REQUIRE(cfg.decoder().U == 49);
  REQUIRE(cfg.f_c.text == "0.8");
  REQUIRE(cfg.f_n.text == "0.2");
  REQUIRE(cfg.q_value == -1);  // q = p
  REQUIRE(cfg.instances == 60);
  NoiseConfig nc = cfg.noise_for(3e-3);
  REQUIRE(nc.q == 3e-3);
  REQUIRE(nc.pair_weight_sigma == 0.5);
}

TEST_CASE("sweep runs are reproducible byte for byte") {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.p_list = {0.02, 0.05};
  cfg.instances = 4;
  cfg.t_max = 3000;
  cfg.seed = 5;
  std::string first, second;
  for (std::string* out : {&first, &second}) {
    auto records = run_sweep(cfg);
    std::ostringstream os;
    write_csv(records, os);
    *out = os.str();
  }
  REQUIRE(first == second);
  REQUIRE(first.rfind(kCsvHeader, 0) == 0);

  // Threaded execution produces the identical file.
  ExperimentConfig threaded = cfg;
  threaded.threads = 2;
  auto records = run_sweep(threaded);
  std::ostringstream os;
  write_csv(records, os);
  REQUIRE(os.str() == first);
}

TEST_CASE("p = 0 lifetimes censor at t_max") {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.p_list = {0.0};
  cfg.instances = 2;
  cfg.t_max = 400;
  auto records = run_sweep(cfg);
  REQUIRE(records.size() == 2);
  for (const auto& r : records) {
    REQUIRE(r.lifetime == 400);
    REQUIRE(r.failure_detail == "none");
    REQUIRE(r.wall_ms == 0);  // deterministic output by default
  }
}

TEST_CASE("csv round trip") {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.p_list = {0.05};
  cfg.instances = 3;
  cfg.t_max = 2000;
  cfg.seed = 9;
  auto records = run_sweep(cfg);
  std::ostringstream os;
  write_csv(records, os);
  std::istringstream is(os.str());
  auto back = read_csv(is);
  REQUIRE(back.size() == records.size());
  for (size_t i = 0; i < back.size(); ++i) {
    REQUIRE(back[i].seed == records[i].seed);
    REQUIRE(back[i].lifetime == records[i].lifetime);
    REQUIRE(back[i].p == records[i].p);
    REQUIRE(back[i].failure_detail == records[i].failure_detail);
  }
}

TEST_CASE("event log matches the classifier input format") {
  ExperimentConfig cfg;
  cfg.n = 1;
  cfg.p_list = {0.05};
  cfg.instances = 1;
  cfg.t_max = 50;
  std::ostringstream events;
  run_sweep(cfg, &events);
  std::istringstream is(events.str());
  auto parsed = read_events(is);
  REQUIRE(!parsed.empty());
  for (const auto& ev : parsed) {
    if (ev.kind == ErrorEvent::Kind::ChargeError) {
      REQUIRE((ev.x2 % 2 != 0) != (ev.y2 % 2 != 0));
      REQUIRE(ev.t2 % 2 == 0);
    } else {
      REQUIRE(ev.t2 % 2 != 0);
    }
  }
}

TEST_CASE("exact synthetic data is fitted exactly") {
  // lifetime = 7 x with x = (1/(p(1-p)))^2 at n = 1: zero residual, and the
  // log-log slope sits near -2.
  std::vector<LifetimeRecord> records;
  for (double p : {1e-3, 2e-3, 4e-3, 8e-3}) {
    LifetimeRecord r;
    r.n = 1;
    r.p = p;
    double x = std::pow(1.0 / (p * (1.0 - p)), 2.0);
    r.lifetime = static_cast<long>(7.0 * x);
    records.push_back(r);
  }
  auto fit = fit_lifetime(records, 1);
  REQUIRE_THAT(fit.slope_x, Catch::Matchers::WithinRel(7.0, 1e-6));
  REQUIRE(fit.rss < 1.0);
  REQUIRE_THAT(fit.loglog_slope, Catch::Matchers::WithinAbs(-2.0, 0.05));
}

TEST_CASE("constant data fits a flat line") {
  std::vector<LifetimeRecord> records;
  for (double p : {1e-3, 2e-3, 4e-3}) {
    LifetimeRecord r;
    r.n = 1;
    r.p = p;
    r.lifetime = 1000;
    records.push_back(r);
  }
  auto fit = fit_lifetime(records, 1);
  REQUIRE_THAT(fit.loglog_slope, Catch::Matchers::WithinAbs(0.0, 1e-9));
  REQUIRE_THAT(fit.slope_x, Catch::Matchers::WithinAbs(0.0, 1e-9));
  REQUIRE_THROWS_AS(fit_lifetime({}, 1), std::invalid_argument);
}

TEST_CASE("config hash tracks physics-relevant fields") {
  ExperimentConfig a, b;
  REQUIRE(config_hash(a) == config_hash(b));
  b.t_max += 1;
  REQUIRE(config_hash(a) != config_hash(b));
  b = a;
  b.record_wall = true;  // not part of the physics
  REQUIRE(config_hash(a) == config_hash(b));
}
