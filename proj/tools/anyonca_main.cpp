// Command-line front end: Monte Carlo sweeps, event classification,
// proof-mode parameter evaluation, and lifetime fits.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "anyonca/anyonca.hpp"

namespace {

int cmd_simulate(const std::string& config_path, anyonca::ExperimentConfig cfg,
                 const std::vector<std::string>& overrides,
                 const std::string& out_path, const std::string& events_path,
                 const std::string& trace_path) {
  if (!config_path.empty()) {
    cfg = anyonca::load_config(config_path);
  }
  for (const auto& kv : overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("override must be key=value: " + kv);
    }
    anyonca::apply_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }

  auto dec = cfg.decoder();
  std::cerr << "lattice L=" << cfg.geometry().L << " (Q=" << cfg.Q
            << ", n=" << cfg.n << "), U=" << dec.U
            << ", thresholds c>=" << dec.min_count_c
            << "/b n>=" << dec.min_count_n << "/b\n";
  std::cerr << "Lemma-2 convergence bound: p+q < 1/"
            << anyonca::convergence_denominator(cfg.Q, dec.U) << '\n';

  std::ofstream events_file, trace_file;
  std::ostream* events = nullptr;
  std::ostream* trace = nullptr;
  if (!events_path.empty()) {
    events_file.open(events_path);
    events_file << "kind,x,y,t\n";
    events = &events_file;
  }
  if (!trace_path.empty()) {
    trace_file.open(trace_path);
    trace = &trace_file;
  }

  auto records = anyonca::run_sweep(cfg, events, trace);
  if (out_path.empty()) {
    anyonca::write_csv(records, std::cout);
  } else {
    std::ofstream out(out_path);
    anyonca::write_csv(records, out);
    std::cerr << records.size() << " records -> " << out_path << '\n';
  }
  return 0;
}

int cmd_classify(const std::string& events_path, int a, int b, int Q,
                 int n_max, const std::string& out_path) {
  std::ifstream in(events_path);
  if (!in) {
    throw std::runtime_error("cannot open events file: " + events_path);
  }
  auto events = anyonca::read_events(in);
  auto assign = anyonca::classify(events, a, b, Q, b * b, n_max);
  std::ofstream out_file;
  std::ostream& out = out_path.empty() ? std::cout : (out_file.open(out_path), out_file);
  out << "event,kind,x,y,t,level\n";
  for (size_t i = 0; i < events.size(); ++i) {
    const auto& ev = events[i];
    out << i << ','
        << (ev.kind == anyonca::ErrorEvent::Kind::ChargeError ? "charge"
                                                              : "measurement")
        << ',' << ev.x() << ',' << ev.y() << ',' << ev.t() << ','
        << assign.level_of[i] << '\n';
  }
  std::cerr << assign.actuals.size() << " actual errors extracted; "
            << "unclassified events: "
            << std::count(assign.level_of.begin(), assign.level_of.end(), -1)
            << '\n';
  return 0;
}

int cmd_params(int Q, int D, int a, int b) {
  auto p = anyonca::proof_parameters(Q, D, a, b);
  std::cout << "Q              = " << p.Q << '\n'
            << "D              = " << p.D << '\n'
            << "a              = " << p.a_sep << '\n'
            << "b              = " << p.b << '\n'
            << "U = b^2        = " << p.U << '\n'
            << "f_c b          = " << p.fc_b << '\n'
            << "f_n b          = " << p.fn_b << '\n'
            << "f_c            = " << p.f_c << '\n'
            << "f_n            = " << p.f_n << '\n'
            << "b0             = " << p.b0 << '\n'
            << "p_c            = " << p.p_c << '\n'
            << "b >= b0        = " << (p.b_at_least_b0 ? "yes" : "no") << '\n'
            << "b > 2(f_n b)   = "
            << (p.b_large_enough_for_fractions ? "yes" : "no") << '\n'
            << "Q odd          = " << (p.Q_odd ? "yes" : "no") << '\n';
  return 0;
}

int cmd_fit(const std::string& in_path, int n) {
  std::ifstream in(in_path);
  if (!in) {
    throw std::runtime_error("cannot open results file: " + in_path);
  }
  auto records = anyonca::read_csv(in);
  auto fit = anyonca::fit_lifetime(records, n);
  std::cout << "points          = " << fit.points << '\n'
            << "intercept       = " << fit.intercept << '\n'
            << "coeff((1/p(1-p))^(2^n)) = " << fit.slope_x << '\n'
            << "rss             = " << fit.rss << '\n'
            << "loglog_slope    = " << fit.loglog_slope << '\n';
  return 0;
}

int cmd_model(const std::string& path) {
  auto model = path.empty() ? anyonca::ising_model() : anyonca::load_model(path);
  auto violations = anyonca::validate_model(model);
  std::cout << "charges:";
  for (const auto& l : model.labels()) {
    std::cout << ' ' << l.name;
  }
  std::cout << '\n';
  if (!violations.empty()) {
    std::cout << "INVALID:\n";
    for (const auto& v : violations) {
      std::cout << "  - " << v << '\n';
    }
    return 1;
  }
  bool noncyclic = anyonca::is_non_cyclic(model);
  std::cout << "valid: yes\nnon-cyclic: " << (noncyclic ? "yes" : "no")
            << '\n';
  if (noncyclic) {
    std::cout << "fusion-graph diameter D = " << anyonca::graph_diameter(model)
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Torus memory simulator for non-cyclic anyons"};
  app.require_subcommand(1);

  // simulate
  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo lifetime sweep");
  std::string config_path, out_path, events_path, trace_path;
  std::vector<std::string> overrides;
  anyonca::ExperimentConfig defaults;
  sim->add_option("--config", config_path, "key=value config file");
  sim->add_option("--set", overrides,
                  "override config entries, e.g. --set t_max=10000");
  sim->add_option("--out", out_path, "results CSV path (default stdout)");
  sim->add_option("--log-events", events_path, "error-event CSV path");
  sim->add_option("--trace", trace_path, "decoder action trace path");
  std::string p_csv, q_str;
  long t_max = -1, verify_every = -1;
  int instances = -1, n_exp = -1, threads = -1;
  uint64_t seed = 0;
  bool have_seed = false;
  sim->add_option("--p", p_csv, "comma-separated charge error rates");
  sim->add_option("--q", q_str, "measurement error rate (number or 'p')");
  sim->add_option("--n", n_exp, "lattice exponent (L = Q^n)");
  sim->add_option("--instances", instances, "instances per p value");
  sim->add_option("--t-max", t_max, "step cap per instance");
  sim->add_option("--verify-every", verify_every, "verification cadence");
  sim->add_option("--threads", threads, "worker threads");
  sim->add_option("--seed", seed, "base seed")->each([&](const std::string&) {
    have_seed = true;
  });

  // classify
  auto* cls = app.add_subcommand("classify", "Classify an error-event log");
  std::string cls_events, cls_out;
  int cls_a = 2, cls_b = 7, cls_Q = 3, cls_nmax = 4;
  cls->add_option("--events", cls_events, "events CSV (kind,x,y,t)")
      ->required();
  cls->add_option("--a", cls_a, "separation constant a");
  cls->add_option("--b", cls_b, "bin count b (U = b^2)");
  cls->add_option("--Q", cls_Q, "colony size Q");
  cls->add_option("--n-max", cls_nmax, "classification level cutoff");
  cls->add_option("--out", cls_out, "output CSV path (default stdout)");

  // params
  auto* par = app.add_subcommand("params", "Print proof-mode decoder constants");
  int par_Q = 78, par_D = 2, par_a = 3, par_b = 0;
  par->add_option("--Q", par_Q, "colony size");
  par->add_option("--D", par_D, "fusion-graph diameter");
  par->add_option("--a", par_a, "separation constant");
  par->add_option("--b", par_b, "bin count (default 9(3D+1)Q)");

  // fit
  auto* fit = app.add_subcommand("fit", "Fit lifetime scaling from a results CSV");
  std::string fit_in;
  int fit_n = 1;
  fit->add_option("--in", fit_in, "results CSV")->required();
  fit->add_option("--n", fit_n, "lattice exponent to fit");

  // model
  auto* mdl = app.add_subcommand("model", "Validate and describe a model file");
  std::string model_path;
  mdl->add_option("--file", model_path, "model definition file (default Ising)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim) {
      if (!p_csv.empty()) {
        overrides.push_back("p=" + p_csv);
      }
      if (!q_str.empty()) {
        overrides.push_back("q=" + q_str);
      }
      if (n_exp >= 0) {
        overrides.push_back("n=" + std::to_string(n_exp));
      }
      if (instances >= 0) {
        overrides.push_back("instances=" + std::to_string(instances));
      }
      if (t_max >= 0) {
        overrides.push_back("t_max=" + std::to_string(t_max));
      }
      if (verify_every >= 0) {
        overrides.push_back("verify_every=" + std::to_string(verify_every));
      }
      if (threads >= 0) {
        overrides.push_back("threads=" + std::to_string(threads));
      }
      if (have_seed) {
        overrides.push_back("seed=" + std::to_string(seed));
      }
      return cmd_simulate(config_path, defaults, overrides, out_path,
                          events_path, trace_path);
    }
    if (*cls) {
      return cmd_classify(cls_events, cls_a, cls_b, cls_Q, cls_nmax, cls_out);
    }
    if (*par) {
      return cmd_params(par_Q, par_D, par_a, par_b);
    }
    if (*fit) {
      return cmd_fit(fit_in, fit_n);
    }
    if (*mdl) {
      return cmd_model(model_path);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
