#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "npent/canon.hpp"
#include "npent/dynamics.hpp"
#include "npent/error.hpp"
#include "npent/invariants.hpp"
#include "npent/qudit.hpp"
#include "npent/state.hpp"

using json = nlohmann::json;
using namespace npent;

namespace {

json jc(cplx z) { return json::array({z.real(), z.imag()}); }

// Nonzero coefficients keyed by the decimal shorthand of the multi-index.
json coeff_json(const NilPoly& f, double thresh = 1e-9) {
  json out = json::object();
  for (uint64_t m = 1; m < f.size(); ++m)
    if (std::abs(f[m]) > thresh) out[std::to_string(m)] = jc(f[m]);
  return out;
}

json tanglemeter_json(const Tanglemeter& tm) {
  json out;
  out["beta"] = coeff_json(tm.poly);
  out["group"] = tm.group == CanonGroup::SU ? "su" : "sl";
  out["vacuum"] = jc(tm.vacuum_factor);
  out["iterations"] = tm.iterations;
  out["residual"] = tm.residual;
  return out;
}

json class_json(const ClassLabel& label) {
  json out;
  out["class"] = label.name;
  out["gamma_zeros"] = label.gamma_zero_count;
  json params = json::array();
  for (const cplx& p : label.params) params.push_back(jc(p));
  out["params"] = params;
  if (label.canonic_form.size() > 0)
    out["canonic_beta"] = coeff_json(label.canonic_form);
  return out;
}

// State reconstructed from a tanglemeter (canonic representative).
StateVector canonic_state(const Tanglemeter& tm,
                          const std::vector<uint32_t>& dims) {
  StateVector s = from_poly(exp_nil(tm.poly), dims);
  for (cplx& a : s.amps) a *= tm.vacuum_factor;
  return s;
}

Partition parse_groups(const std::string& text, uint32_t n) {
  Partition part;
  std::istringstream is(text);
  std::string grp;
  while (std::getline(is, grp, ';')) {
    std::vector<uint32_t> g;
    std::istringstream gs(grp);
    std::string tok;
    while (std::getline(gs, tok, ',')) {
      if (tok.empty()) continue;
      g.push_back(static_cast<uint32_t>(std::stoul(tok)));
    }
    if (!g.empty()) part.groups.push_back(std::move(g));
  }
  uint32_t total = 0;
  for (const auto& g : part.groups) total += static_cast<uint32_t>(g.size());
  if (total != n)
    throw std::invalid_argument("--groups must cover every element once");
  return part;
}

// Same per-row computation and formatting as measures4_csv, but rows are
// distributed over threads; output is identical for any job count.
std::string figpoly_csv(uint32_t samples, uint64_t seed0, uint32_t jobs) {
  std::vector<std::string> rows(samples);
  auto work = [&](uint32_t lo, uint32_t hi) {
    for (uint32_t k = lo; k < hi; ++k) {
      const uint64_t seed = seed0 + k;
      std::ostringstream os;
      os.precision(12);
      const StateVector s = random_state({2, 2, 2, 2}, seed);
      try {
        const Measures4 m = measures4(s);
        os << seed << ',' << m.poly_su << ',' << m.nonunitarity << ','
           << m.poly_sl << ',' << m.sl_measure << '\n';
      } catch (const DomainError&) {
        os << seed << ",nan,nan,nan,nan\n";
      }
      rows[k] = os.str();
    }
  };
  jobs = std::max<uint32_t>(1, std::min(jobs, samples));
  if (jobs == 1) {
    work(0, samples);
  } else {
    std::vector<std::thread> pool;
    for (uint32_t j = 0; j < jobs; ++j)
      pool.emplace_back(work, samples * j / jobs, samples * (j + 1) / jobs);
    for (auto& t : pool) t.join();
  }
  std::string out = "seed,poly_su,nonunitarity,poly_sl,sl_measure\n";
  for (const std::string& r : rows) out += r;
  return out;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Nilpotent-polynomial characterization of multipartite "
               "entanglement of pure states"};
  app.require_subcommand(1);
  app.fallthrough();

  double tol = -1.0;  // negative = module default
  uint32_t max_iter = 10000;
  uint64_t seed = 0;
  uint32_t jobs = 1;
  std::string format;
  app.add_option("--tol", tol, "Convergence / acceptance tolerance");
  app.add_option("--max-iter", max_iter, "Iteration cap for canonicalization");
  app.add_option("--seed", seed, "RNG seed (mandatory for sampling)");
  app.add_option("--jobs", jobs, "Threads for independent samples");
  app.add_option("--format", format, "Output format: json|csv|dot");

  auto canon_opt = [&]() {
    CanonOptions opt;
    if (tol > 0.0) opt.tol = tol;
    opt.max_iter = max_iter;
    return opt;
  };
  auto user_tol = [&](double dflt) { return tol > 0.0 ? tol : dflt; };

  std::string path, groups;
  double T = 1.0, dt = 1e-3, g_coupling = 1.0, drive = 0.0, tau_crit = 1e-6;
  uint32_t n_samples = 100;
  bool log_output = false;

  auto* c_tm = app.add_subcommand("tanglemeter",
                                  "Unitary canonic nilpotential");
  c_tm->add_option("state", path, "Input state JSON")->required();
  c_tm->callback([&]() {
    const StateVector s = load_state(path);
    const Tanglemeter tm = s.is_qubit_assembly()
                               ? su_canonicalize(s, canon_opt())
                               : qudit_su_canonicalize(s, canon_opt());
    emit(tanglemeter_json(tm));
  });

  auto* c_sl = app.add_subcommand("sl-canon",
                                  "Determinant-1 canonic nilpotential");
  c_sl->add_option("state", path, "Input state JSON")->required();
  c_sl->callback([&]() {
    const StateVector s = load_state(path);
    auto [tm, label] = sl_canonicalize(s, canon_opt());
    json out = tanglemeter_json(tm);
    out.update(class_json(label));
    emit(out);
  });

  auto* c_cls = app.add_subcommand("classify", "Orbit-class label");
  c_cls->add_option("state", path, "Input state JSON")->required();
  c_cls->callback([&]() {
    const StateVector s = load_state(path);
    if (s.num_elements() == 3 && s.is_qubit_assembly()) {
      emit(class_json(classify3(s, canon_opt())));
    } else {
      emit(class_json(sl_canonicalize(s, canon_opt()).second));
    }
  });

  auto* c_inv = app.add_subcommand("invariants", "Local invariants");
  c_inv->add_option("state", path, "Input state JSON")->required();
  c_inv->callback([&]() {
    StateVector s = load_state(path);
    s.normalize();
    json out;
    switch (s.num_elements()) {
      case 2:
        out["I"] = jc(invariants2(s));
        break;
      case 3: {
        const Invariants3 v = invariants3(s);
        out["I1"] = v.i1;
        out["I2"] = v.i2;
        out["I3"] = v.i3;
        out["I4"] = v.i4;
        out["I5"] = v.i5;
        break;
      }
      case 4: {
        const Invariants4 v = invariants4(s);
        out["I2"] = jc(v.i2);
        out["I4_12"] = jc(v.i4_12);
        out["I4_13"] = jc(v.i4_13);
        out["I4_14"] = jc(v.i4_14);
        out["I6_12"] = jc(v.i6_12);
        out["I6_23"] = jc(v.i6_23);
        out["I6_13"] = jc(v.i6_13);
        break;
      }
      default:
        throw std::invalid_argument("invariants: 2, 3 or 4 qubits required");
    }
    emit(out);
  });

  auto* c_meas = app.add_subcommand("measures", "Entanglement measures");
  c_meas->add_option("state", path, "Input state JSON")->required();
  c_meas->callback([&]() {
    StateVector s = load_state(path);
    s.normalize();
    json out;
    switch (s.num_elements()) {
      case 2:
        out["concurrence"] = 2.0 * std::abs(invariants2(s));
        out["linear_entropy"] = entropies(s, {0}).linear;
        break;
      case 3:
        out["concurrence_12"] = concurrence(s, 0, 1, canon_opt());
        out["concurrence_13"] = concurrence(s, 0, 2, canon_opt());
        out["concurrence_23"] = concurrence(s, 1, 2, canon_opt());
        out["three_tangle"] = three_tangle(s, canon_opt());
        break;
      case 4: {
        const Measures4 m = measures4(s, user_tol(1e-8));
        out["nonunitarity"] = m.nonunitarity;
        out["sl_measure"] = m.sl_measure;
        out["poly_su"] = m.poly_su;
        out["poly_sl"] = m.poly_sl;
        break;
      }
      default:
        throw std::invalid_argument("measures: 2, 3 or 4 qubits required");
    }
    emit(out);
  });

  auto* c_ev = app.add_subcommand(
      "evolve", "Integrate the nilpotential under an XY exchange model");
  c_ev->add_option("state", path, "Input state JSON")->required();
  c_ev->add_option("--T", T, "Final time");
  c_ev->add_option("--dt", dt, "Integration step");
  c_ev->add_option("--g", g_coupling, "Uniform flip-flop coupling");
  c_ev->add_option("--drive", drive, "Uniform transverse drive amplitude");
  c_ev->callback([&]() {
    const StateVector s = load_state(path);
    const uint32_t n = s.num_elements();
    Eigen::MatrixXd g = Eigen::MatrixXd::Constant(n, n, g_coupling);
    g.diagonal().setZero();
    const HamiltonianSpec H = make_xy_hamiltonian(
        n,
        [&](uint32_t, double) {
          return std::array<cplx, 3>{drive, 0.0, 0.0};
        },
        g);
    IntegratorCfg cfg;
    cfg.dt = dt;
    const PolyTrajectory traj = evolve_nilpotential(nilpotential(s), H, T, cfg);
    if (format == "json") {
      json out;
      out["t"] = traj.back().first;
      out["f"] = coeff_json(traj.back().second, 1e-12);
      emit(out);
    } else {
      std::cout << trajectory_to_csv(traj);
    }
  });

  auto* c_merge = app.add_subcommand("merge",
                                     "Regroup elements into composites");
  c_merge->add_option("state", path, "Input state JSON")->required();
  c_merge->add_option("--groups", groups,
                      "Semicolon-separated element groups, e.g. \"0,1;2\"")
      ->required();
  c_merge->callback([&]() {
    const StateVector s = load_state(path);
    std::cout << state_to_json(merge(s, parse_groups(groups, s.num_elements())))
              << "\n";
  });

  auto* c_graph = app.add_subcommand("graph",
                                     "Hypergraph view of the tanglemeter");
  c_graph->add_option("state", path, "Input state JSON")->required();
  c_graph->add_option("--tau-crit", tau_crit, "Edge weight cutoff");
  c_graph->callback([&]() {
    const StateVector s = load_state(path);
    const Tanglemeter tm = su_canonicalize(s, canon_opt());
    const EntanglementGraph gr = graph_from_tanglemeter(tm, tau_crit);
    if (format == "dot")
      std::cout << graph_dot(gr);
    else
      std::cout << graph_json(gr);
  });

  auto* c_fig = app.add_subcommand(
      "sample-figpoly", "Scatter of four-qubit measures over random states");
  c_fig->add_option("--n", n_samples, "Number of samples");
  c_fig->callback([&]() {
    if (app.count("--seed") == 0) throw CLI::RequiredError("--seed");
    std::cout << figpoly_csv(n_samples, seed, jobs);
  });

  auto* c_ghz = app.add_subcommand(
      "ghz-filter", "Cross ratio and dressing triples of a three-qubit state");
  c_ghz->add_option("state", path, "Input state JSON")->required();
  c_ghz->callback([&]() {
    const StateVector s = load_state(path);
    const Tanglemeter tm = su_canonicalize(s, canon_opt());
    const ZetaFilter zf =
        zeta_filter(canonic_state(tm, s.dims), user_tol(1e-6));
    json out;
    out["zeta"] = jc(zf.zeta);
    out["z"] = jc(zf.z);
    out["z_roots"] = json::array({jc(zf.z_roots[0]), jc(zf.z_roots[1])});
    json ops = json::array();
    for (const AbcTriple& t : zf.ops)
      ops.push_back({{"A", jc(t.A)}, {"B", jc(t.B)}, {"C", jc(t.C)}});
    out["ops"] = ops;
    emit(out);
  });

  auto* c_gen = app.add_subcommand(
      "genfun", "Spin-1 generating function of a qutrit assembly");
  c_gen->add_option("state", path, "Input state JSON")->required();
  c_gen->add_flag("--log", log_output, "Emit the logarithm instead");
  c_gen->callback([&]() {
    const StateVector s = load_state(path);
    NilPoly F = generating_function(s, spin1_algebra());
    if (log_output) {
      F = log_unit(F);
      F[0] = 0.0;
    }
    json out;
    out[log_output ? "f" : "F"] = coeff_json(F, 1e-12);
    emit(out);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const DomainError& e) {
    json err;
    err["error"] = e.code();
    err["message"] = e.what();
    std::cerr << err.dump() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
