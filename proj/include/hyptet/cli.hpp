#pragma once

// Command-line surface: single-shot tetrahedron/prism computations, Jacobian
// output, and parameter scans, with structured (JSON) or tabular (CSV)
// output.  Exit codes: 0 success, 1 parse error, 2 invalid configuration,
// 3 solver failure.

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jacobian.hpp"
#include "prism.hpp"
#include "volume.hpp"

namespace hyptet::cli {

using json = nlohmann::ordered_json;

inline constexpr const char* kSchemaVersion = "1.0";

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

inline double parse_number(const std::string& s) {
  std::size_t idx = 0;
  double v;
  try {
    v = std::stod(s, &idx);
  } catch (const std::exception&) {
    throw std::invalid_argument("cannot parse number '" + s + "'");
  }
  if (idx != s.size()) throw std::invalid_argument("cannot parse number '" + s + "'");
  return v;
}

}  // namespace detail

// Accepts plain radians ("1.2566") and rational multiples of pi:
// "pi", "pi/3", "2pi/5", "2*pi/5", "0.5pi", "-pi/6".
inline double parse_angle(const std::string& raw) {
  const std::string s = detail::trim(raw);
  if (s.empty()) throw std::invalid_argument("empty angle");
  const auto pos = s.find("pi");
  if (pos == std::string::npos) return detail::parse_number(s);
  std::string pre = s.substr(0, pos);
  const std::string post = s.substr(pos + 2);
  if (!pre.empty() && pre.back() == '*') pre.pop_back();
  double coef = 1.0;
  if (pre == "-")
    coef = -1.0;
  else if (!pre.empty() && pre != "+")
    coef = detail::parse_number(pre);
  double den = 1.0;
  if (!post.empty()) {
    if (post[0] != '/') throw std::invalid_argument("bad angle syntax '" + raw + "'");
    den = detail::parse_number(post.substr(1));
    if (den == 0.0) throw std::invalid_argument("zero denominator in '" + raw + "'");
  }
  return coef * kPi / den;
}

namespace detail {

inline std::vector<double> parse_angle_tuple(const std::string& raw, int n,
                                             const char* name) {
  std::vector<double> vals;
  std::size_t start = 0;
  while (start <= raw.size()) {
    const auto comma = raw.find(',', start);
    const std::string piece =
        raw.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    vals.push_back(parse_angle(piece));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (static_cast<int>(vals.size()) == 1) vals.assign(n, vals[0]);  // broadcast
  if (static_cast<int>(vals.size()) != n)
    throw std::invalid_argument(std::string(name) + ": expected 1 or " +
                                std::to_string(n) + " comma-separated angles");
  return vals;
}

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// CSV rendering: scalar records become key,value lines; scan tables become
// a two-column table.
inline void emit_tabular(const json& rec, std::ostream& out) {
  if (rec.contains("results") && rec["results"].contains("table")) {
    const auto& inputs = rec["inputs"];
    out << "ell," << inputs["quantity"].get<std::string>() << "\n";
    for (const auto& row : rec["results"]["table"]) {
      out << fmt17(row["ell"].get<double>()) << ",";
      if (row["value"].is_null())
        out << "gap";
      else
        out << fmt17(row["value"].get<double>());
      out << "\n";
    }
    return;
  }
  out << "key,value\n";
  const auto emit_group = [&out](const json& group, const std::string& prefix) {
    for (auto it = group.begin(); it != group.end(); ++it) {
      const json& v = it.value();
      if (v.is_number_float())
        out << prefix << it.key() << "," << fmt17(v.get<double>()) << "\n";
      else if (v.is_array()) {
        int i = 0;
        for (const auto& x : v) {
          out << prefix << it.key() << "[" << i++ << "],";
          if (x.is_number_float())
            out << fmt17(x.get<double>());
          else
            out << x.dump();
          out << "\n";
        }
      } else
        out << prefix << it.key() << "," << v.dump() << "\n";
    }
  };
  if (rec.contains("results")) emit_group(rec["results"], "");
  if (rec.contains("diagnostics")) emit_group(rec["diagnostics"], "diagnostics.");
}

inline void emit(const json& rec, bool tabular, std::ostream& out) {
  if (tabular)
    emit_tabular(rec, out);
  else
    out << rec.dump(2) << "\n";
}

inline json record_header(const std::string& command) {
  json rec;
  rec["schema_version"] = kSchemaVersion;
  rec["command"] = command;
  rec["units"] = {{"angles", "radians"},
                  {"lengths", "hyperbolic length"},
                  {"volumes", "hyperbolic volume"}};
  return rec;
}

struct TetArgs {
  std::string theta1, theta2, theta3, theta5, theta6;
  double ell = 0;
  double tol = 1e-8;

  PrismTetConfig config() const {
    PrismTetConfig cfg;
    cfg.theta1 = parse_angle(theta1);
    cfg.theta2 = parse_angle(theta2);
    cfg.theta3 = parse_angle(theta3);
    cfg.theta5 = parse_angle(theta5);
    cfg.theta6 = parse_angle(theta6);
    cfg.ell = ell;
    return cfg;
  }
};

inline void add_tet_flags(CLI::App* cmd, TetArgs& a, bool need_ell) {
  cmd->add_option("--theta1", a.theta1, "dihedral angle theta1 (radians or pi syntax)")
      ->required();
  cmd->add_option("--theta2", a.theta2, "dihedral angle theta2")->required();
  cmd->add_option("--theta3", a.theta3, "dihedral angle theta3")->required();
  cmd->add_option("--theta5", a.theta5, "dihedral angle theta5")->required();
  cmd->add_option("--theta6", a.theta6, "dihedral angle theta6")->required();
  if (need_ell)
    cmd->add_option("--ell", a.ell, "length of the intense-truncation edge")->required();
  cmd->add_option("--tol", a.tol, "critical-point verification tolerance");
}

struct PrismArgs {
  int n = 0;
  std::string alpha, beta, gamma;
  double tol = 1e-10;
  double max_expand = 32.0;
  bool mirrored = false;

  PrismSpec spec() const {
    PrismSpec s;
    s.n = n;
    s.alpha = parse_angle_tuple(alpha, n, "--alpha");
    s.beta = parse_angle_tuple(beta, n, "--beta");
    s.gamma = parse_angle_tuple(gamma, n, "--gamma");
    s.mirrored = mirrored;
    return s;
  }
};

inline void add_prism_flags(CLI::App* cmd, PrismArgs& a) {
  cmd->add_option("--n", a.n, "number of sides")->required();
  cmd->add_option("--alpha", a.alpha, "bottom-face angles (single value or n-tuple)")
      ->required();
  cmd->add_option("--beta", a.beta, "top-face angles (single value or n-tuple)")->required();
  cmd->add_option("--gamma", a.gamma, "vertical-edge angles (single value or n-tuple)")
      ->required();
  cmd->add_option("--tol", a.tol, "solver tolerance for |phi'| <= tol*pi");
  cmd->add_option("--max-expand", a.max_expand, "bracket expansion cap for ell");
  cmd->add_flag("--mirrored", a.mirrored, "mirrored per-side angle-slot orientation");
}

inline json jacobian_json(const DualJacobian& j) {
  json rows = json::array();
  for (int r = 0; r < 6; ++r) {
    json row = json::array();
    for (int c = 0; c < 6; ++c) row.push_back(j.m[r][c]);
    rows.push_back(row);
  }
  return rows;
}

inline double max_abs(const DualJacobian& j) {
  double m = 0;
  for (const auto& row : j.m)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

}  // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"dual Jacobians, volumes and dihedral angles of generalised "
               "(prism truncated) hyperbolic tetrahedra and n-gonal prisms"};
  app.require_subcommand(1);
  std::string format = "structured";
  app.add_option("--format", format, "output format: structured (JSON) or tabular (CSV)")
      ->check(CLI::IsMember({"structured", "tabular"}));

  detail::TetArgs tet_args;
  CLI::App* tet = app.add_subcommand("tet", "volume, angle and edge lengths of one "
                                            "prism truncated tetrahedron");
  detail::add_tet_flags(tet, tet_args, true);

  // jacobian
  struct {
    bool mild = false, prism = false, check_fd = false;
    std::string angles, signs;
    double fd_step = 1e-5;
  } jac_args;
  detail::TetArgs jac_tet;
  CLI::App* jac = app.add_subcommand("jacobian", "6x6 dual Jacobian d(lengths)/d(angles)");
  jac->add_flag("--mild", jac_args.mild, "mildly truncated case");
  jac->add_flag("--prism", jac_args.prism, "prism truncated case");
  jac->add_option("--angles", jac_args.angles,
                  "mild case: six angles a12,a13,a14,a23,a24,a34");
  jac->add_option("--signs", jac_args.signs,
                  "mild case: four vertex signs from {-1,0,1}");
  jac->add_option("--theta1", jac_tet.theta1, "prism case angles");
  jac->add_option("--theta2", jac_tet.theta2, "");
  jac->add_option("--theta3", jac_tet.theta3, "");
  jac->add_option("--theta5", jac_tet.theta5, "");
  jac->add_option("--theta6", jac_tet.theta6, "");
  jac->add_option("--ell", jac_tet.ell, "prism case edge length");
  jac->add_flag("--check-fd", jac_args.check_fd,
                "compare against central finite differences");
  jac->add_option("--fd-step", jac_args.fd_step, "finite-difference step");

  detail::PrismArgs prism_args;
  CLI::App* prism = app.add_subcommand("prism", "volume of a hyperbolic n-gonal prism");
  detail::add_prism_flags(prism, prism_args);

  // scan
  struct {
    std::string quantity;
    double from = 0, to = 0;
    int steps = 0;
  } scan_args;
  detail::TetArgs scan_tet;
  detail::PrismArgs scan_prism;
  CLI::App* scan = app.add_subcommand("scan", "tabulate a quantity over a range of ell");
  scan->add_option("--quantity", scan_args.quantity, "tet-volume, phi-prime or mu")
      ->required()
      ->check(CLI::IsMember({"tet-volume", "phi-prime", "mu"}));
  scan->add_option("--from", scan_args.from, "scan start")->required();
  scan->add_option("--to", scan_args.to, "scan end")->required();
  scan->add_option("--steps", scan_args.steps, "number of intervals (steps+1 rows)")
      ->required();
  scan->add_option("--theta1", scan_tet.theta1, "tet-volume/mu configuration");
  scan->add_option("--theta2", scan_tet.theta2, "");
  scan->add_option("--theta3", scan_tet.theta3, "");
  scan->add_option("--theta5", scan_tet.theta5, "");
  scan->add_option("--theta6", scan_tet.theta6, "");
  scan->add_option("--n", scan_prism.n, "phi-prime configuration");
  scan->add_option("--alpha", scan_prism.alpha, "");
  scan->add_option("--beta", scan_prism.beta, "");
  scan->add_option("--gamma", scan_prism.gamma, "");
  scan->add_flag("--mirrored", scan_prism.mirrored, "");

  std::vector<const char*> argv;
  argv.push_back("hyptet");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help and friends
      out << app.help();
      return 0;
    }
    err << "parse error: " << e.what() << "\n";
    return 1;
  }
  const bool tabular = (format == "tabular");

  try {
    if (tet->parsed()) {
      const PrismTetConfig cfg = tet_args.config();
      const TetEvaluation ev = evaluate_tet(cfg, tet_args.tol);
      const EdgeQuantities eq = edge_quantities(gram_prism(cfg), kPrismSigns);
      json rec = detail::record_header("tet");
      rec["inputs"] = {{"theta1", cfg.theta1}, {"theta2", cfg.theta2},
                       {"theta3", cfg.theta3}, {"theta5", cfg.theta5},
                       {"theta6", cfg.theta6}, {"ell", cfg.ell},
                       {"tol", tet_args.tol}};
      rec["results"] = {{"volume", ev.volume},
                        {"mu", ev.mu},
                        {"l1", eq.edge[5].length},
                        {"l2", eq.edge[1].length},
                        {"l3", eq.edge[3].length},
                        {"l5", eq.edge[4].length},
                        {"l6", eq.edge[2].length}};
      rec["diagnostics"] = {{"valid", true},
                            {"mu_from_gram", eq.mu()},
                            {"roots_swapped", ev.roots_swapped},
                            {"variant_discriminant", ev.crit.variant_discriminant},
                            {"m_minus", ev.crit.m_minus},
                            {"m_plus", ev.crit.m_plus},
                            {"quad_residual", ev.crit.quad_residual},
                            {"exp_residual", ev.crit.exp_residual}};
      detail::emit(rec, tabular, out);
      return 0;
    }

    if (jac->parsed()) {
      if (jac_args.mild == jac_args.prism)
        throw std::invalid_argument("jacobian: pass exactly one of --mild / --prism");
      json rec = detail::record_header("jacobian");
      DualJacobian j;
      if (jac_args.mild) {
        MildTetConfig cfg;
        const auto angles = detail::parse_angle_tuple(jac_args.angles, 6, "--angles");
        for (int e = 0; e < 6; ++e) cfg.angles[e] = angles[e];
        std::vector<int> signs;
        {
          std::size_t start = 0;
          const std::string& s = jac_args.signs;
          while (start <= s.size()) {
            const auto comma = s.find(',', start);
            signs.push_back(static_cast<int>(detail::parse_number(s.substr(
                start, comma == std::string::npos ? std::string::npos : comma - start))));
            if (comma == std::string::npos) break;
            start = comma + 1;
          }
        }
        if (signs.size() != 4)
          throw std::invalid_argument("--signs: expected four values from {-1,0,1}");
        for (int i = 0; i < 4; ++i) {
          if (signs[i] < -1 || signs[i] > 1)
            throw std::invalid_argument("--signs: values must be in {-1,0,1}");
          cfg.signs[i] = static_cast<VertexSign>(signs[i]);
        }
        rec["inputs"] = {{"mode", "mild"}, {"angles", angles}, {"signs", signs}};
        j = dual_jacobian_mild(cfg);
        rec["results"]["row_order"] = {"l12", "l13", "l14", "l23", "l24", "l34"};
        rec["results"]["column_order"] = {"a12", "a13", "a14", "a23", "a24", "a34"};
        if (jac_args.check_fd) {
          const DualJacobian fd = finite_difference_jacobian(cfg, jac_args.fd_step);
          double dev = 0;
          for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
              dev = std::max(dev, std::fabs(j.m[r][c] - fd.m[r][c]));
          rec["diagnostics"]["max_relative_deviation"] =
              dev / std::max(1.0, detail::max_abs(j));
        }
      } else {
        const PrismTetConfig cfg = jac_tet.config();
        rec["inputs"] = {{"mode", "prism"},     {"theta1", cfg.theta1},
                         {"theta2", cfg.theta2}, {"theta3", cfg.theta3},
                         {"theta5", cfg.theta5}, {"theta6", cfg.theta6},
                         {"ell", cfg.ell}};
        j = dual_jacobian_prism(cfg);
        rec["results"]["row_order"] = {"mu", "l1", "l2", "l3", "l5", "l6"};
        rec["results"]["column_order"] = {"ell", "theta1", "theta2",
                                          "theta3", "theta5", "theta6"};
        if (jac_args.check_fd) {
          const DualJacobian fd = finite_difference_jacobian(cfg, jac_args.fd_step);
          double dev = 0;
          for (int r = 0; r < 6; ++r)
            for (int c = 0; c < 6; ++c)
              dev = std::max(dev, std::fabs(j.m[r][c] - fd.m[r][c]));
          rec["diagnostics"]["max_relative_deviation"] =
              dev / std::max(1.0, detail::max_abs(j));
        }
      }
      rec["results"]["matrix"] = detail::jacobian_json(j);
      detail::emit(rec, tabular, out);
      return 0;
    }

    if (prism->parsed()) {
      const PrismSpec spec = prism_args.spec();
      SolveOptions opt;
      opt.max_ell = prism_args.max_expand;
      const PrismSolution sol = prism_volume(spec, prism_args.tol, opt);
      json rec = detail::record_header("prism");
      rec["inputs"] = {{"n", spec.n},         {"alpha", spec.alpha},
                       {"beta", spec.beta},   {"gamma", spec.gamma},
                       {"tol", prism_args.tol}, {"mirrored", spec.mirrored}};
      rec["results"] = {{"ell_star", sol.ell_star},
                        {"mu", sol.mu},
                        {"tet_volumes", sol.tet_volumes},
                        {"total_volume", sol.total_volume}};
      rec["diagnostics"] = {{"iterations", sol.iterations}, {"residual", sol.residual}};
      detail::emit(rec, tabular, out);
      return 0;
    }

    if (scan->parsed()) {
      if (scan_args.steps < 1) throw std::invalid_argument("scan: --steps must be >= 1");
      json rec = detail::record_header("scan");
      rec["inputs"] = {{"quantity", scan_args.quantity},
                       {"from", scan_args.from},
                       {"to", scan_args.to},
                       {"steps", scan_args.steps}};
      const bool is_phi = (scan_args.quantity == "phi-prime");
      PrismSpec spec;
      PrismTetConfig base;
      if (is_phi) {
        spec = scan_prism.spec();
        rec["inputs"]["n"] = spec.n;
        rec["inputs"]["alpha"] = spec.alpha;
        rec["inputs"]["beta"] = spec.beta;
        rec["inputs"]["gamma"] = spec.gamma;
      } else {
        base = scan_tet.config();  // ell overwritten per point
        rec["inputs"]["theta1"] = base.theta1;
        rec["inputs"]["theta2"] = base.theta2;
        rec["inputs"]["theta3"] = base.theta3;
        rec["inputs"]["theta5"] = base.theta5;
        rec["inputs"]["theta6"] = base.theta6;
      }
      json table = json::array();
      for (int i = 0; i <= scan_args.steps; ++i) {
        const double ell =
            scan_args.from +
            (scan_args.to - scan_args.from) * static_cast<double>(i) / scan_args.steps;
        json row;
        row["ell"] = ell;
        try {
          double v;
          if (is_phi) {
            v = phi_prime(spec, ell);
          } else {
            PrismTetConfig cfg = base;
            cfg.ell = ell;
            v = (scan_args.quantity == "mu") ? mu_angle(cfg) : tet_volume(cfg);
          }
          row["value"] = v;
        } catch (const InvalidConfiguration& e) {
          row["value"] = nullptr;
          row["error"] = e.what();
        }
        table.push_back(row);
      }
      rec["results"]["table"] = table;
      detail::emit(rec, tabular, out);
      return 0;
    }
  } catch (const InvalidConfiguration& e) {
    err << "invalid configuration: " << e.what() << "\n";
    return 2;
  } catch (const SolverFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    return 3;
  } catch (const std::invalid_argument& e) {
    err << "parse error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace hyptet::cli
