#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "anyonca/classifier.hpp"
#include "anyonca/verifier.hpp"

namespace anyonca {

/// Exact rational parsed from a decimal literal like "0.8" (-> 8/10), so
/// occupancy thresholds never depend on binary rounding.
struct DecimalFraction {
  long num = 0;
  long den = 1;
  std::string text = "0";

  static DecimalFraction parse(const std::string& s) {
    DecimalFraction f;
    f.text = s;
    auto dot = s.find('.');
    std::string whole = (dot == std::string::npos) ? s : s.substr(0, dot);
    std::string frac = (dot == std::string::npos) ? "" : s.substr(dot + 1);
    if (whole.empty() && frac.empty()) {
      throw std::invalid_argument("bad decimal: " + s);
    }
    long num = whole.empty() ? 0 : std::stol(whole);
    long den = 1;
    for (char c : frac) {
      if (c < '0' || c > '9') {
        throw std::invalid_argument("bad decimal: " + s);
      }
      num = num * 10 + (c - '0');
      den *= 10;
    }
    f.num = num;
    f.den = den;
    return f;
  }

  double value() const { return static_cast<double>(num) / den; }
};

/// Everything one Monte Carlo sweep needs. Config files use key=value lines
/// with exactly these keys; CLI flags override file values.
struct ExperimentConfig {
  int Q = 3;
  int n = 1;      // lattice exponent, L = Q^n
  int b = 7;      // U = b^2
  DecimalFraction f_c = DecimalFraction::parse("0.8");
  DecimalFraction f_n = DecimalFraction::parse("0.2");
  std::vector<double> p_list{1e-3};
  double q_value = -1;  // -1 means q = p
  double pair_weight_sigma = 0.5;
  int instances = 60;
  long t_max = 1000000;
  long verify_every = 1;
  uint64_t seed = 1;
  int threads = 1;
  bool record_wall = false;  // wall_ms is 0 unless opted in, so equal
                             // (config, seed) runs yield identical bytes

  LatticeGeom geometry() const { return LatticeGeom(Q, n); }

  DecoderConfig decoder() const {
    return DecoderConfig::from_fractions(Q, b, f_c.num, f_c.den, f_n.num,
                                         f_n.den);
  }

  NoiseConfig noise_for(double p) const {
    NoiseConfig nc;
    nc.p = p;
    nc.q = (q_value < 0) ? p : q_value;
    nc.pair_weight_sigma = pair_weight_sigma;
    return nc;
  }

  std::string canonical_text() const {
    std::ostringstream os;
    os << "Q=" << Q << ";n=" << n << ";b=" << b << ";f_c=" << f_c.text
       << ";f_n=" << f_n.text << ";q="
       << (q_value < 0 ? std::string("p") : format_double(q_value))
       << ";w_sigma=" << format_double(pair_weight_sigma)
       << ";instances=" << instances << ";t_max=" << t_max
       << ";verify_every=" << verify_every << ";seed=" << seed << ";p=";
    for (size_t i = 0; i < p_list.size(); ++i) {
      os << (i ? "," : "") << format_double(p_list[i]);
    }
    return os.str();
  }

  static std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
  }
};

inline uint64_t fnv1a(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::string config_hash(const ExperimentConfig& cfg) {
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0')
     << fnv1a(cfg.canonical_text());
  return os.str();
}

/// Applies one key=value assignment to a config.
inline void apply_config_key(ExperimentConfig& cfg, const std::string& key,
                             const std::string& value) {
  auto parse_p_list = [](const std::string& v) {
    std::vector<double> ps;
    std::istringstream is(v);
    std::string tok;
    while (std::getline(is, tok, ',')) {
      if (!tok.empty()) {
        ps.push_back(std::stod(tok));
      }
    }
    if (ps.empty()) {
      throw std::invalid_argument("empty p list");
    }
    return ps;
  };
  if (key == "Q") {
    cfg.Q = std::stoi(value);
  } else if (key == "n") {
    cfg.n = std::stoi(value);
  } else if (key == "b") {
    cfg.b = std::stoi(value);
  } else if (key == "f_c") {
    cfg.f_c = DecimalFraction::parse(value);
  } else if (key == "f_n") {
    cfg.f_n = DecimalFraction::parse(value);
  } else if (key == "p") {
    cfg.p_list = parse_p_list(value);
  } else if (key == "q") {
    cfg.q_value = (value == "p") ? -1 : std::stod(value);
  } else if (key == "pair_weight_sigma") {
    cfg.pair_weight_sigma = std::stod(value);
  } else if (key == "instances") {
    cfg.instances = std::stoi(value);
  } else if (key == "t_max") {
    cfg.t_max = std::stol(value);
  } else if (key == "verify_every") {
    cfg.verify_every = std::stol(value);
  } else if (key == "seed") {
    cfg.seed = std::stoull(value);
  } else if (key == "threads") {
    cfg.threads = std::stoi(value);
  } else if (key == "record_wall") {
    cfg.record_wall = value == "1" || value == "true";
  } else {
    throw std::invalid_argument("unknown config key: " + key);
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open config file: " + path);
  }
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    auto first = line.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) {
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config line " + std::to_string(lineno) +
                                  " is not key=value");
    }
    auto trim = [](std::string s) {
      auto b = s.find_first_not_of(" \t\r\n");
      auto e = s.find_last_not_of(" \t\r\n");
      return (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
    };
    apply_config_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

/// One lifetime sample. Reproducible from (config, seed): the per-instance
/// seed is base seed + global instance index, rows are emitted in index
/// order regardless of the thread count.
struct LifetimeRecord {
  std::string config_hash;
  uint64_t seed = 0;
  int Q = 0;
  int n = 0;
  int U = 0;
  std::string f_c, f_n;
  double p = 0;
  double q = 0;
  long lifetime = 0;
  std::string failure_detail;
  long wall_ms = 0;
};

inline constexpr const char* kCsvHeader =
    "config_hash,seed,Q,n,U,f_c,f_n,p,q,lifetime,failure_detail,wall_ms";

inline std::string csv_line(const LifetimeRecord& r) {
  std::ostringstream os;
  os << r.config_hash << ',' << r.seed << ',' << r.Q << ',' << r.n << ','
     << r.U << ',' << r.f_c << ',' << r.f_n << ','
     << ExperimentConfig::format_double(r.p) << ','
     << ExperimentConfig::format_double(r.q) << ',' << r.lifetime << ','
     << r.failure_detail << ',' << r.wall_ms;
  return os.str();
}

/// Runs the full sweep: for every p and instance, an independent state and
/// RNG stream. Instance-level parallelism only; each worker owns its state.
/// Optional sinks receive the error-event log and the decoder trace (these
/// force single-threaded execution so line order stays deterministic).
inline std::vector<LifetimeRecord> run_sweep(
    const ExperimentConfig& cfg, std::ostream* event_log = nullptr,
    std::ostream* trace_log = nullptr) {
  LatticeGeom geom = cfg.geometry();
  DecoderConfig dec = cfg.decoder();
  AnyonModel model = ising_model();
  std::string hash = config_hash(cfg);

  size_t total = cfg.p_list.size() * static_cast<size_t>(cfg.instances);
  std::vector<LifetimeRecord> records(total);
  bool logging = event_log != nullptr || trace_log != nullptr;
  int workers = logging ? 1 : std::max(1, cfg.threads);

  auto run_one = [&](size_t row) {
    size_t p_index = row / cfg.instances;
    double p = cfg.p_list[p_index];
    NoiseConfig noise = cfg.noise_for(p);
    noise.check(model.charge_count());
    uint64_t seed = cfg.seed + static_cast<uint64_t>(row);
    SystemState state(geom, seed);
    std::vector<ErrorEvent> events;
    DecoderTrace trace{trace_log};
    auto t0 = std::chrono::steady_clock::now();
    LifetimeResult res = lifetime_run(
        state, model, noise, dec, cfg.t_max, cfg.verify_every,
        event_log ? &events : nullptr, trace_log ? &trace : nullptr);
    auto t1 = std::chrono::steady_clock::now();
    LifetimeRecord rec;
    rec.config_hash = hash;
    rec.seed = seed;
    rec.Q = cfg.Q;
    rec.n = cfg.n;
    rec.U = dec.U;
    rec.f_c = cfg.f_c.text;
    rec.f_n = cfg.f_n.text;
    rec.p = p;
    rec.q = noise.q;
    rec.lifetime = res.lifetime;
    rec.failure_detail = res.censored ? (res.approx_matching
                                             ? "none;approx_mwpm"
                                             : "none")
                                      : res.status.detail();
    rec.wall_ms =
        cfg.record_wall
            ? std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0)
                  .count()
            : 0;
    records[row] = std::move(rec);
    if (event_log) {
      for (const auto& ev : events) {
        (*event_log) << (ev.kind == ErrorEvent::Kind::ChargeError
                             ? "charge"
                             : "measurement")
                     << ',' << std::fixed << std::setprecision(1) << ev.x()
                     << ',' << ev.y() << ',' << ev.t() << '\n';
        event_log->unsetf(std::ios::fixed);
      }
    }
  };

  if (workers <= 1) {
    for (size_t row = 0; row < total; ++row) {
      run_one(row);
    }
  } else {
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        for (;;) {
          size_t row = next.fetch_add(1);
          if (row >= total) {
            return;
          }
          run_one(row);
        }
      });
    }
    for (auto& th : pool) {
      th.join();
    }
  }
  return records;
}

inline void write_csv(const std::vector<LifetimeRecord>& records,
                      std::ostream& out, bool with_summary = true) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << csv_line(r) << '\n';
  }
  if (with_summary) {
    std::map<std::pair<double, int>, std::pair<double, int>> acc;
    for (const auto& r : records) {
      auto& slot = acc[{r.p, r.n}];
      slot.first += static_cast<double>(r.lifetime);
      slot.second += 1;
    }
    for (const auto& [key, sum] : acc) {
      out << "# mean p=" << ExperimentConfig::format_double(key.first)
          << " n=" << key.second << " instances=" << sum.second
          << " mean_lifetime="
          << ExperimentConfig::format_double(sum.first / sum.second) << '\n';
    }
  }
}

inline std::vector<LifetimeRecord> read_csv(std::istream& in) {
  std::vector<LifetimeRecord> records;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (header) {
      header = false;
      continue;
    }
    std::istringstream is(line);
    std::string field;
    std::vector<std::string> fields;
    while (std::getline(is, field, ',')) {
      fields.push_back(field);
    }
    if (fields.size() < 12) {
      throw std::invalid_argument("bad CSV row: " + line);
    }
    LifetimeRecord r;
    r.config_hash = fields[0];
    r.seed = std::stoull(fields[1]);
    r.Q = std::stoi(fields[2]);
    r.n = std::stoi(fields[3]);
    r.U = std::stoi(fields[4]);
    r.f_c = fields[5];
    r.f_n = fields[6];
    r.p = std::stod(fields[7]);
    r.q = std::stod(fields[8]);
    r.lifetime = std::stol(fields[9]);
    r.failure_detail = fields[10];
    r.wall_ms = std::stol(fields[11]);
    records.push_back(std::move(r));
  }
  return records;
}

/// Least-squares fit of mean lifetime against x = (1/(p(1-p)))^(2^n), plus
/// the log-log slope of lifetime against p as the asymptotic-scaling check.
struct LifetimeFit {
  double intercept = 0;  // constant term
  double slope_x = 0;    // coefficient of the polynomial argument
  double rss = 0;        // residual sum of squares of the linear fit
  double loglog_slope = 0;
  int points = 0;
};

inline LifetimeFit fit_lifetime(const std::vector<LifetimeRecord>& records,
                                int n) {
  std::map<double, std::pair<double, int>> by_p;
  for (const auto& r : records) {
    if (r.n != n) {
      continue;
    }
    auto& slot = by_p[r.p];
    slot.first += static_cast<double>(r.lifetime);
    slot.second += 1;
  }
  if (by_p.size() < 3) {
    throw std::invalid_argument("fit needs at least 3 distinct p values");
  }
  std::vector<double> xs, ys, lps, lys;
  double power = std::pow(2.0, n);
  for (const auto& [p, sum] : by_p) {
    double mean = sum.first / sum.second;
    xs.push_back(std::pow(1.0 / (p * (1.0 - p)), power));
    ys.push_back(mean);
    lps.push_back(std::log(p));
    lys.push_back(std::log(std::max(mean, 1e-300)));
  }
  auto linear_fit = [](const std::vector<double>& x,
                       const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    size_t k = x.size();
    for (size_t i = 0; i < k; ++i) {
      sx += x[i];
      sy += y[i];
      sxx += x[i] * x[i];
      sxy += x[i] * y[i];
    }
    double denom = k * sxx - sx * sx;
    double slope = (k * sxy - sx * sy) / denom;
    double intercept = (sy - slope * sx) / k;
    return std::pair<double, double>(intercept, slope);
  };
  auto [c0, c1] = linear_fit(xs, ys);
  auto [l0, l1] = linear_fit(lps, lys);
  (void)l0;
  LifetimeFit fit;
  fit.intercept = c0;
  fit.slope_x = c1;
  fit.loglog_slope = l1;
  fit.points = static_cast<int>(by_p.size());
  for (size_t i = 0; i < xs.size(); ++i) {
    double r = ys[i] - (c0 + c1 * xs[i]);
    fit.rss += r * r;
  }
  return fit;
}

/// Parses an events CSV (lines "kind,x,y,t") back into ErrorEvents.
inline std::vector<ErrorEvent> read_events(std::istream& in) {
  std::vector<ErrorEvent> events;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("kind", 0) == 0) {
      continue;
    }
    std::istringstream is(line);
    std::string kind, xs, ys, ts;
    if (!std::getline(is, kind, ',') || !std::getline(is, xs, ',') ||
        !std::getline(is, ys, ',') || !std::getline(is, ts, ',')) {
      throw std::invalid_argument("bad event row: " + line);
    }
    ErrorEvent ev;
    ev.kind = (kind == "charge") ? ErrorEvent::Kind::ChargeError
                                 : ErrorEvent::Kind::MeasurementError;
    auto doubled = [](const std::string& s) {
      return static_cast<int64_t>(std::llround(std::stod(s) * 2.0));
    };
    ev.x2 = doubled(xs);
    ev.y2 = doubled(ys);
    ev.t2 = doubled(ts);
    events.push_back(ev);
  }
  return events;
}

}  // namespace anyonca
