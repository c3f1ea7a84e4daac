#pragma once

#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace anyonca {

/// Topological charge, stored as an index into the model's label list.
/// Index 0 is always the vacuum.
using Charge = uint8_t;

inline constexpr Charge kVacuum = 0;

struct ChargeLabel {
  int id = 0;
  std::string name;
};

/// An anyon model as data: labels, duals, fusion multiplicities N[a][b][c]
/// and quantum dimensions. No F/R/S-matrix data is kept; the simulator only
/// consumes fusion rules and d^2 (as an inverse fusion-to-vacuum probability).
///
/// Immutable after construction; safe to share across threads.
class AnyonModel {
 public:
  AnyonModel() = default;

  AnyonModel(std::vector<std::string> names,
             std::vector<Charge> duals,
             std::vector<double> qdims)
      : duals_(std::move(duals)), qdims_(std::move(qdims)) {
    labels_.reserve(names.size());
    for (size_t i = 0; i < names.size(); ++i) {
      labels_.push_back({static_cast<int>(i), std::move(names[i])});
    }
    size_t n = labels_.size();
    fusion_.assign(n * n * n, 0);
    for (size_t a = 0; a < n; ++a) {
      set_fusion(static_cast<Charge>(a), kVacuum, static_cast<Charge>(a), 1);
    }
  }

  size_t charge_count() const { return labels_.size(); }
  const std::vector<ChargeLabel>& labels() const { return labels_; }
  const std::string& name_of(Charge c) const { return labels_.at(c).name; }

  Charge charge_by_name(const std::string& name) const {
    for (const auto& l : labels_) {
      if (l.name == name) {
        return static_cast<Charge>(l.id);
      }
    }
    throw std::invalid_argument("unknown charge label: " + name);
  }

  Charge dual(Charge a) const { return duals_.at(a); }
  double qdim(Charge a) const { return qdims_.at(a); }

  int fusion(Charge a, Charge b, Charge c) const {
    return fusion_[index(a, b, c)];
  }

  /// Sets N[a][b][c] and N[b][a][c] together (fusion is commutative).
  void set_fusion(Charge a, Charge b, Charge c, int multiplicity) {
    fusion_[index(a, b, c)] = multiplicity;
    fusion_[index(b, a, c)] = multiplicity;
  }

  /// All charges c with N[a][b][c] > 0.
  std::vector<Charge> fusion_outcomes(Charge a, Charge b) const {
    std::vector<Charge> out;
    for (size_t c = 0; c < charge_count(); ++c) {
      if (fusion(a, b, static_cast<Charge>(c)) > 0) {
        out.push_back(static_cast<Charge>(c));
      }
    }
    return out;
  }

 private:
  size_t index(Charge a, Charge b, Charge c) const {
    size_t n = charge_count();
    return (static_cast<size_t>(a) * n + b) * n + c;
  }

  std::vector<ChargeLabel> labels_;
  std::vector<Charge> duals_;
  std::vector<double> qdims_;
  std::vector<int> fusion_;  // n^3 multiplicities
};

/// Checks every AnyonModel invariant and reports each violation as text.
/// Violations are data, not failures: an empty list means the model is valid.
inline std::vector<std::string> validate_model(const AnyonModel& m) {
  std::vector<std::string> bad;
  size_t n = m.charge_count();
  if (n == 0) {
    bad.push_back("model has no charges");
    return bad;
  }
  if (m.name_of(kVacuum) != "1") {
    bad.push_back("charge 0 must be the vacuum label \"1\", got \"" +
                  m.name_of(kVacuum) + "\"");
  }
  for (size_t a = 0; a < n; ++a) {
    Charge ca = static_cast<Charge>(a);
    // Unique dual: exactly one b with N[a][b][1] = 1, and it must match the
    // declared dual map.
    int dual_count = 0;
    Charge found_dual = kVacuum;
    for (size_t b = 0; b < n; ++b) {
      int mult = m.fusion(ca, static_cast<Charge>(b), kVacuum);
      if (mult > 0) {
        dual_count += mult;
        found_dual = static_cast<Charge>(b);
      }
    }
    if (dual_count != 1) {
      bad.push_back("no unique dual for " + m.name_of(ca));
    } else if (found_dual != m.dual(ca)) {
      bad.push_back("declared dual of " + m.name_of(ca) +
                    " disagrees with fusion table");
    }
    if (m.dual(m.dual(ca)) != ca) {
      bad.push_back("dual map is not an involution at " + m.name_of(ca));
    }
    // Vacuum acts as the identity.
    for (size_t c = 0; c < n; ++c) {
      int expect = (c == a) ? 1 : 0;
      if (m.fusion(ca, kVacuum, static_cast<Charge>(c)) != expect) {
        bad.push_back("vacuum not identity on " + m.name_of(ca));
        break;
      }
    }
    // Commutativity.
    for (size_t b = 0; b < n; ++b) {
      for (size_t c = 0; c < n; ++c) {
        if (m.fusion(ca, static_cast<Charge>(b), static_cast<Charge>(c)) !=
            m.fusion(static_cast<Charge>(b), ca, static_cast<Charge>(c))) {
          bad.push_back("fusion not commutative at " + m.name_of(ca) + "," +
                        m.name_of(static_cast<Charge>(b)));
        }
      }
    }
    if (m.qdim(ca) <= 0) {
      bad.push_back("nonpositive quantum dimension for " + m.name_of(ca));
    }
    if (std::abs(m.qdim(ca) - m.qdim(m.dual(ca))) > 1e-12) {
      bad.push_back("qdim(" + m.name_of(ca) + ") != qdim of its dual");
    }
  }
  if (std::abs(m.qdim(kVacuum) - 1.0) > 1e-12) {
    bad.push_back("vacuum quantum dimension must be 1");
  }
  return bad;
}

/// Ising anyons {1, eps, sigma}: eps x eps = 1, sigma x eps = sigma,
/// sigma x sigma = 1 + eps. All charges self-dual, qdim(sigma) = sqrt(2).
inline AnyonModel ising_model() {
  AnyonModel m({"1", "eps", "sigma"}, {0, 1, 2}, {1.0, 1.0, std::sqrt(2.0)});
  m.set_fusion(1, 1, 0, 1);
  m.set_fusion(2, 1, 2, 1);
  m.set_fusion(2, 2, 0, 1);
  m.set_fusion(2, 2, 1, 1);
  return m;
}

/// Charge indices of ising_model(), for code that hardwires the dynamics.
inline constexpr Charge kEps = 1;
inline constexpr Charge kSigma = 2;

/// Fibonacci anyons {1, tau}: tau x tau = 1 + tau. The canonical cyclic model.
inline AnyonModel fibonacci_model() {
  AnyonModel m({"1", "tau"}, {0, 1}, {1.0, (1.0 + std::sqrt(5.0)) / 2.0});
  m.set_fusion(1, 1, 0, 1);
  m.set_fusion(1, 1, 1, 1);
  return m;
}

// --- Model definition files -------------------------------------------------
//
// Plain-text grammar, one directive per line, '#' starts a comment:
//
//   charges <name0> <name1> ...     (required first directive; name0 = "1")
//   dual <a> <b>                    (optional; charges default to self-dual)
//   qdim <a> <value>                (optional; defaults to 1)
//   fusion <a> <b> <c> <mult>       (sets N[a][b][c] = N[b][a][c] = mult)
//
// Identity fusions N[a][1][a] = 1 are implicit and need not be listed.

inline AnyonModel parse_model(std::istream& in) {
  std::vector<std::string> names;
  std::vector<std::pair<std::string, std::string>> dual_lines;
  std::vector<std::pair<std::string, double>> qdim_lines;
  struct FusionLine {
    std::string a, b, c;
    int mult;
  };
  std::vector<FusionLine> fusion_lines;

  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      line.erase(hash);
    }
    std::istringstream ls(line);
    std::string kw;
    if (!(ls >> kw)) {
      continue;
    }
    auto fail = [&](const std::string& why) {
      throw std::invalid_argument("model file line " + std::to_string(lineno) +
                                  ": " + why);
    };
    if (kw == "charges") {
      std::string name;
      while (ls >> name) {
        names.push_back(name);
      }
      if (names.empty()) {
        fail("charges directive lists no labels");
      }
    } else if (kw == "dual") {
      std::string a, b;
      if (!(ls >> a >> b)) {
        fail("dual needs two labels");
      }
      dual_lines.emplace_back(a, b);
    } else if (kw == "qdim") {
      std::string a;
      double v;
      if (!(ls >> a >> v)) {
        fail("qdim needs a label and a value");
      }
      qdim_lines.emplace_back(a, v);
    } else if (kw == "fusion") {
      FusionLine f;
      if (!(ls >> f.a >> f.b >> f.c >> f.mult)) {
        fail("fusion needs three labels and a multiplicity");
      }
      fusion_lines.push_back(f);
    } else {
      fail("unknown directive \"" + kw + "\"");
    }
  }
  if (names.empty()) {
    throw std::invalid_argument("model file has no charges directive");
  }

  size_t n = names.size();
  std::vector<Charge> duals(n);
  for (size_t i = 0; i < n; ++i) {
    duals[i] = static_cast<Charge>(i);  // self-dual unless overridden
  }
  std::vector<double> qdims(n, 1.0);
  AnyonModel proto(std::vector<std::string>(names), duals, qdims);
  for (const auto& [a, b] : dual_lines) {
    duals[proto.charge_by_name(a)] = proto.charge_by_name(b);
    duals[proto.charge_by_name(b)] = proto.charge_by_name(a);
  }
  for (const auto& [a, v] : qdim_lines) {
    qdims[proto.charge_by_name(a)] = v;
  }
  AnyonModel m(std::move(names), std::move(duals), std::move(qdims));
  for (const auto& f : fusion_lines) {
    m.set_fusion(m.charge_by_name(f.a), m.charge_by_name(f.b),
                 m.charge_by_name(f.c), f.mult);
  }
  return m;
}

inline AnyonModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open model file: " + path);
  }
  return parse_model(in);
}

inline void write_model(const AnyonModel& m, std::ostream& out) {
  out << "charges";
  for (const auto& l : m.labels()) {
    out << ' ' << l.name;
  }
  out << '\n';
  for (size_t a = 0; a < m.charge_count(); ++a) {
    if (m.dual(static_cast<Charge>(a)) != a) {
      if (m.dual(static_cast<Charge>(a)) > a) {
        out << "dual " << m.name_of(static_cast<Charge>(a)) << ' '
            << m.name_of(m.dual(static_cast<Charge>(a))) << '\n';
      }
    }
  }
  for (size_t a = 1; a < m.charge_count(); ++a) {
    out << "qdim " << m.name_of(static_cast<Charge>(a)) << ' '
        << m.qdim(static_cast<Charge>(a)) << '\n';
  }
  for (size_t a = 1; a < m.charge_count(); ++a) {
    for (size_t b = a; b < m.charge_count(); ++b) {
      for (size_t c = 0; c < m.charge_count(); ++c) {
        int mult = m.fusion(static_cast<Charge>(a), static_cast<Charge>(b),
                            static_cast<Charge>(c));
        if (mult > 0) {
          out << "fusion " << m.name_of(static_cast<Charge>(a)) << ' '
              << m.name_of(static_cast<Charge>(b)) << ' '
              << m.name_of(static_cast<Charge>(c)) << ' ' << mult << '\n';
        }
      }
    }
  }
}

}  // namespace anyonca
