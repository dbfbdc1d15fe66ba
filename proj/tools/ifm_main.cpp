// Command-line front end: every library operation behind one binary with
// CSV/JSON output. stdout carries data only; diagnostics go to stderr.
// Exit codes: 0 success, 2 usage or validation error, 1 internal error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifm/analytic.hpp"
#include "ifm/io.hpp"
#include "ifm/material.hpp"
#include "ifm/shotnoise.hpp"
#include "ifm/sweep.hpp"
#include "ifm/trajectory.hpp"
#include "ifm/wkb.hpp"

namespace {

using nlohmann::json;
using ifm::ScalarRow;

struct GlobalOpts {
  std::string format = "csv";
  std::string out_path;
  std::string config_path;
  json config = json::object();
  bool config_loaded = false;

  void load_config() {
    if (config_loaded) return;
    config_loaded = true;
    if (config_path.empty()) return;
    std::ifstream f(config_path);
    if (!f) throw std::invalid_argument("cannot read config file: " + config_path);
    try {
      config = json::parse(f);
    } catch (const json::exception& e) {
      throw std::invalid_argument(std::string("invalid config JSON: ") + e.what());
    }
  }
};

json base_meta(const std::string& command) {
  return {{"command", command}, {"version", ifm::version}};
}

void write_text(const GlobalOpts& g, const std::string& text) {
  if (g.out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(g.out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + g.out_path);
    f << text;
  }
}

void emit_table(const GlobalOpts& g, json meta, const std::vector<ScalarRow>& rows,
                json data) {
  if (g.format == "json") {
    const json full = {{"meta", std::move(meta)}, {"data", std::move(data)}};
    write_text(g, full.dump(2) + "\n");
  } else {
    write_text(g, ifm::table_to_csv(rows));
  }
}

void emit_surface(const GlobalOpts& g, const ifm::SurfaceGrid& grid, json meta) {
  if (g.format == "json")
    write_text(g, ifm::surface_to_json(grid, std::move(meta)).dump(2) + "\n");
  else
    write_text(g, ifm::surface_to_csv(grid));
}

unsigned resolve_threads() {
  unsigned n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* cap_env = std::getenv("IFM_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(cap_env, &end, 10);
    if (end == cap_env || *end != '\0' || cap < 1)
      throw std::invalid_argument("IFM_THREADS must be a positive integer");
    if (cap < n) n = static_cast<unsigned>(cap);
  }
  return n;
}

double resolve_distance(GlobalOpts& g, const std::optional<double>& flag) {
  if (flag) return *flag;
  g.load_config();
  if (g.config.contains("default_distance_m"))
    return g.config["default_distance_m"].get<double>();
  return ifm::default_tunnelling_distance;
}

// --eta directly, or --delta-w (+ --distance) through the WKB map
double resolve_eta(GlobalOpts& g, const std::optional<double>& eta,
                   const std::optional<double>& delta_w,
                   const std::optional<double>& distance) {
  if (eta && delta_w)
    throw std::invalid_argument("give either --eta or --delta-w, not both");
  if (eta) return *eta;
  if (delta_w)
    return ifm::transparency(ifm::make_absorber(*delta_w, resolve_distance(g, distance)));
  throw std::invalid_argument("need --eta or --delta-w");
}

ifm::MaterialParams resolve_material(GlobalOpts& g, const std::string& preset,
                                     const std::optional<double>& m_eff,
                                     const std::optional<double>& fermi_energy,
                                     const std::optional<double>& mobility,
                                     const std::optional<double>& work_function) {
  double m = 0.0, ef = 0.0, mu = 0.0, phi = 5.0;
  bool have_base = false;
  if (!preset.empty()) {
    g.load_config();
    if (g.config.contains("presets") && g.config["presets"].contains(preset)) {
      const json& p = g.config["presets"][preset];
      try {
        m = p.at("m_eff_kg").get<double>();
        ef = p.at("fermi_energy_ev").get<double>();
        mu = p.at("mobility_m2_per_vs").get<double>();
        phi = p.value("work_function_ev", 5.0);
      } catch (const json::exception& e) {
        throw std::invalid_argument("malformed preset '" + preset + "': " + e.what());
      }
    } else if (preset == "gaas") {
      const ifm::MaterialParams gp = ifm::gaas();
      m = gp.m_eff_kg;
      ef = gp.fermi_energy_ev;
      mu = gp.mobility_m2_per_vs;
      phi = gp.work_function_ev;
    } else {
      throw std::invalid_argument("unknown material preset: " + preset);
    }
    have_base = true;
  }
  if (!have_base && !(m_eff && fermi_energy && mobility))
    throw std::invalid_argument(
        "need --preset or all of --m-eff, --fermi-energy, --mobility");
  if (m_eff) m = *m_eff;
  if (fermi_energy) ef = *fermi_energy;
  if (mobility) mu = *mobility;
  if (work_function) phi = *work_function;
  return ifm::make_material(m, ef, mu, phi);
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chained-interferometer transport calculator: analytic chain "
               "propagation, WKB absorber map, shot noise, parameter sweeps, "
               "and seeded Monte Carlo trajectories"};
  app.require_subcommand(1);
  app.fallthrough();

  GlobalOpts g;
  app.add_option("--format", g.format, "output encoding")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  app.add_option("--out", g.out_path, "write output to FILE instead of stdout");
  app.add_option("--config", g.config_path,
                 "JSON config with material presets and default tunnelling distance");
  app.set_version_flag("--version", ifm::version);

  // material
  struct {
    std::string preset;
    std::optional<double> m_eff, fermi_energy, mobility, work_function;
  } mat;
  auto* cmd_material =
      app.add_subcommand("material", "2DEG transport numbers: tau, v_F, l, k_F");
  cmd_material->add_option("--preset", mat.preset, "named preset (built in: gaas)");
  cmd_material->add_option("--m-eff", mat.m_eff, "effective mass [kg]");
  cmd_material->add_option("--fermi-energy", mat.fermi_energy, "Fermi energy [eV]");
  cmd_material->add_option("--mobility", mat.mobility, "mobility [m^2/(V s)]");
  cmd_material->add_option("--work-function", mat.work_function, "work function [eV]");
  cmd_material->callback([&] {
    const ifm::MaterialParams m = resolve_material(g, mat.preset, mat.m_eff,
                                                   mat.fermi_energy, mat.mobility,
                                                   mat.work_function);
    const double tau = ifm::relaxation_time(m);
    const double vf = ifm::fermi_velocity(m);
    const double l = ifm::mean_free_path(m);
    const double kf = ifm::fermi_wavenumber(m);
    json meta = base_meta("material");
    if (!mat.preset.empty()) meta["preset"] = mat.preset;
    meta["m_eff_kg"] = m.m_eff_kg;
    meta["fermi_energy_ev"] = m.fermi_energy_ev;
    meta["mobility_m2_per_vs"] = m.mobility_m2_per_vs;
    meta["units"] = {{"tau", "s"}, {"v_f", "m/s"}, {"l", "m"}, {"k_f", "1/m"}};
    emit_table(g, std::move(meta),
               {ifm::scalar_row("tau", tau, "s"), ifm::scalar_row("v_f", vf, "m/s"),
                ifm::scalar_row("l", l, "m"), ifm::scalar_row("k_f", kf, "1/m")},
               json{{"tau", tau}, {"v_f", vf}, {"l", l}, {"k_f", kf}});
  });

  // wkb
  struct {
    std::optional<double> delta_w, phi, bias, distance;
  } wkb;
  auto* cmd_wkb = app.add_subcommand(
      "wkb", "tunnelling map: kappa, J/J0, eta from the barrier parameters");
  cmd_wkb->add_option("--delta-w", wkb.delta_w, "effective barrier <Phi> - e|V|/2 [eV]");
  cmd_wkb->add_option("--phi", wkb.phi, "mean work function <Phi> [eV]");
  cmd_wkb->add_option("--bias", wkb.bias, "tip bias |V| [V]");
  cmd_wkb->add_option("--distance", wkb.distance, "tunnelling distance s [m]");
  cmd_wkb->callback([&] {
    double dw;
    if (wkb.delta_w) {
      if (wkb.phi || wkb.bias)
        throw std::invalid_argument("give either --delta-w or --phi/--bias, not both");
      dw = *wkb.delta_w;
    } else if (wkb.phi && wkb.bias) {
      dw = ifm::barrier_from_bias(*wkb.phi, *wkb.bias);
      if (dw < 0.0)
        throw std::invalid_argument(
            "negative effective barrier: e|V|/2 = " + ifm::format_double(0.5 * std::fabs(*wkb.bias)) +
            " eV exceeds <Phi> = " + ifm::format_double(*wkb.phi) +
            " eV; the WKB map assumes <Phi> - e|V|/2 > 0");
    } else {
      throw std::invalid_argument("need --delta-w or both --phi and --bias");
    }
    const double s = resolve_distance(g, wkb.distance);
    const ifm::AbsorberModel absorber = ifm::make_absorber(dw, s);
    const double kappa = ifm::decay_constant(absorber);
    const double ratio = ifm::tunnelling_ratio(absorber);
    const double eta = ifm::transparency(absorber);
    json meta = base_meta("wkb");
    meta["delta_w_ev"] = dw;
    meta["distance_m"] = s;
    meta["units"] = {{"kappa", "1/m"}, {"j_ratio", "1"}, {"eta", "1"}};
    emit_table(g, std::move(meta),
               {ifm::scalar_row("kappa", kappa, "1/m"),
                ifm::scalar_row("j_ratio", ratio, "1"), ifm::scalar_row("eta", eta, "1")},
               json{{"kappa", kappa}, {"j_ratio", ratio}, {"eta", eta}});
  });

  // ifm
  struct {
    int n = 0;
    std::optional<double> eta, delta_w, distance;
  } ifm_opts;
  auto* cmd_ifm = app.add_subcommand(
      "ifm", "detection probability and port statistics of the chain");
  cmd_ifm->add_option("--n", ifm_opts.n, "number of stages")->required();
  cmd_ifm->add_option("--eta", ifm_opts.eta, "absorber transparency in [0, 1]");
  cmd_ifm->add_option("--delta-w", ifm_opts.delta_w, "barrier height [eV] (WKB eta)");
  cmd_ifm->add_option("--distance", ifm_opts.distance, "tunnelling distance s [m]");
  cmd_ifm->callback([&] {
    const double eta = resolve_eta(g, ifm_opts.eta, ifm_opts.delta_w, ifm_opts.distance);
    const ifm::InterferometerSpec spec = ifm::make_interferometer(ifm_opts.n, eta);
    const double p = ifm::success_probability(spec);
    const ifm::PortProbabilities ports = ifm::port_probabilities(spec);
    json meta = base_meta("ifm");
    meta["n"] = spec.n_stages;
    meta["eta"] = spec.eta;
    meta["theta"] = spec.theta;
    emit_table(g, std::move(meta),
               {ifm::scalar_row("p", p, "1"), ifm::scalar_row("p_exit_a", ports.exit_a, "1"),
                ifm::scalar_row("p_exit_b", ports.exit_b, "1"),
                ifm::scalar_row("p_absorbed", ports.absorbed, "1")},
               json{{"p", p},
                    {"p_exit_a", ports.exit_a},
                    {"p_exit_b", ports.exit_b},
                    {"p_absorbed", ports.absorbed}});
  });

  // noise
  struct {
    int n = 0;
    std::optional<double> eta, delta_w, distance, bias;
  } noise;
  auto* cmd_noise =
      app.add_subcommand("noise", "zero-frequency shot noise at the lower-right port");
  cmd_noise->add_option("--n", noise.n, "number of stages")->required();
  cmd_noise->add_option("--eta", noise.eta, "absorber transparency in [0, 1]");
  cmd_noise->add_option("--delta-w", noise.delta_w, "barrier height [eV] (WKB eta)");
  cmd_noise->add_option("--distance", noise.distance, "tunnelling distance s [m]");
  cmd_noise->add_option("--bias", noise.bias, "bias |V| [V] for the dimensionful S(0)");
  cmd_noise->callback([&] {
    const double eta = resolve_eta(g, noise.eta, noise.delta_w, noise.distance);
    const ifm::InterferometerSpec spec = ifm::make_interferometer(noise.n, eta);
    const ifm::NoiseResult r = ifm::normalized_noise(spec);
    std::vector<ScalarRow> rows = {ifm::scalar_row("s_ll_sq", r.s_ll_sq, "1"),
                                   ifm::scalar_row("s_lu_sq", r.s_lu_sq, "1"),
                                   ifm::scalar_row("normalized", r.normalized, "1")};
    json data = {{"s_ll_sq", r.s_ll_sq}, {"s_lu_sq", r.s_lu_sq},
                 {"normalized", r.normalized}};
    json meta = base_meta("noise");
    meta["n"] = spec.n_stages;
    meta["eta"] = spec.eta;
    if (noise.bias) {
      const double s0 = ifm::dimensionful_noise(spec, *noise.bias);
      rows.push_back(ifm::scalar_row("s0", s0, "A^2/Hz"));
      data["s0"] = s0;
      meta["bias_v"] = *noise.bias;
    }
    emit_table(g, std::move(meta), rows, std::move(data));
  });

  // sweep-noise
  struct {
    int n_max = 50;
    int eta_steps = 101;
  } sweep_noise;
  auto* cmd_sweep_noise =
      app.add_subcommand("sweep-noise", "normalized noise surface over (N, eta)");
  cmd_sweep_noise->add_option("--n-max", sweep_noise.n_max, "largest stage count")
      ->capture_default_str();
  cmd_sweep_noise->add_option("--eta-steps", sweep_noise.eta_steps, "eta grid points")
      ->capture_default_str();
  cmd_sweep_noise->callback([&] {
    const ifm::SurfaceGrid grid = ifm::noise_surface(sweep_noise.n_max, sweep_noise.eta_steps);
    json meta = base_meta("sweep-noise");
    meta["n_max"] = sweep_noise.n_max;
    meta["eta_steps"] = sweep_noise.eta_steps;
    emit_surface(g, grid, std::move(meta));
  });

  // sweep-prob
  struct {
    int n_max = 50;
    double dw_max = 3.0e-4;
    int dw_steps = 101;
    std::optional<double> distance;
  } sweep_prob;
  auto* cmd_sweep_prob = app.add_subcommand(
      "sweep-prob", "detection probability surface over (N, delta_w)");
  cmd_sweep_prob->add_option("--n-max", sweep_prob.n_max, "largest stage count")
      ->capture_default_str();
  cmd_sweep_prob->add_option("--dw-max", sweep_prob.dw_max, "largest barrier height [eV]")
      ->capture_default_str();
  cmd_sweep_prob->add_option("--dw-steps", sweep_prob.dw_steps, "delta_w grid points")
      ->capture_default_str();
  cmd_sweep_prob->add_option("--distance", sweep_prob.distance, "tunnelling distance s [m]");
  cmd_sweep_prob->callback([&] {
    const double s = resolve_distance(g, sweep_prob.distance);
    const ifm::SurfaceGrid grid =
        ifm::probability_surface(sweep_prob.n_max, sweep_prob.dw_max, sweep_prob.dw_steps, s);
    json meta = base_meta("sweep-prob");
    meta["n_max"] = sweep_prob.n_max;
    meta["dw_max_ev"] = sweep_prob.dw_max;
    meta["dw_steps"] = sweep_prob.dw_steps;
    emit_surface(g, grid, std::move(meta));
  });

  // mc
  struct {
    int n = 0;
    std::optional<double> eta, delta_w, distance;
    std::uint64_t samples = 100000;
    std::uint64_t seed = 1;
  } mc;
  auto* cmd_mc =
      app.add_subcommand("mc", "Monte Carlo trajectory estimate of the port statistics");
  cmd_mc->add_option("--n", mc.n, "number of stages")->required();
  cmd_mc->add_option("--eta", mc.eta, "absorber transparency in [0, 1]");
  cmd_mc->add_option("--delta-w", mc.delta_w, "barrier height [eV] (WKB eta)");
  cmd_mc->add_option("--distance", mc.distance, "tunnelling distance s [m]");
  cmd_mc->add_option("--samples", mc.samples, "number of trajectories")
      ->capture_default_str();
  cmd_mc->add_option("--seed", mc.seed, "master RNG seed")->capture_default_str();
  cmd_mc->callback([&] {
    const double eta = resolve_eta(g, mc.eta, mc.delta_w, mc.distance);
    const ifm::InterferometerSpec spec = ifm::make_interferometer(mc.n, eta);
    const ifm::McEstimate est =
        ifm::estimate_probabilities(spec, mc.samples, mc.seed, resolve_threads());
    json meta = base_meta("mc");
    meta["n"] = spec.n_stages;
    meta["eta"] = spec.eta;
    meta["samples"] = est.n_samples;
    meta["seed"] = est.seed;
    emit_table(
        g, std::move(meta),
        {ifm::scalar_row("p_exit_a", est.p_exit_a, "1"),
         ifm::scalar_row("stderr_a", est.stderr_a, "1"),
         ifm::scalar_row("p_exit_b", est.p_exit_b, "1"),
         ifm::scalar_row("stderr_b", est.stderr_b, "1"),
         ifm::scalar_row("p_absorbed", est.p_absorbed, "1"),
         ifm::scalar_row("stderr_absorbed", est.stderr_absorbed, "1"),
         {"n_samples", std::to_string(est.n_samples), "1"},
         {"seed", std::to_string(est.seed), "1"}},
        json{{"p_exit_a", est.p_exit_a}, {"stderr_a", est.stderr_a},
             {"p_exit_b", est.p_exit_b}, {"stderr_b", est.stderr_b},
             {"p_absorbed", est.p_absorbed}, {"stderr_absorbed", est.stderr_absorbed},
             {"count_a", est.count_a}, {"count_b", est.count_b},
             {"count_absorbed", est.count_absorbed}, {"n_samples", est.n_samples},
             {"seed", est.seed}});
  });

  // ev
  struct {
    double reflectivity = 0.5;
    bool repeated = false;
  } ev;
  auto* cmd_ev = app.add_subcommand(
      "ev", "single Mach-Zehnder interrogation baseline (Elitzur-Vaidman)");
  cmd_ev->add_option("--reflectivity", ev.reflectivity, "splitter reflectivity R")
      ->required();
  cmd_ev->add_flag("--repeated", ev.repeated,
                   "total detection probability with retries on inconclusive outcomes");
  cmd_ev->callback([&] {
    json meta = base_meta("ev");
    meta["reflectivity"] = ev.reflectivity;
    if (ev.repeated) {
      const double p = ifm::ev_repeated(ev.reflectivity);
      emit_table(g, std::move(meta), {ifm::scalar_row("p_repeated", p, "1")},
                 json{{"p_repeated", p}});
    } else {
      const ifm::PortProbabilities p = ifm::ev_single_shot(ev.reflectivity);
      emit_table(g, std::move(meta),
                 {ifm::scalar_row("p_dark", p.exit_b, "1"),
                  ifm::scalar_row("p_bright", p.exit_a, "1"),
                  ifm::scalar_row("p_absorbed", p.absorbed, "1")},
                 json{{"p_dark", p.exit_b}, {"p_bright", p.exit_a},
                      {"p_absorbed", p.absorbed}});
    }
  });

  // min-n
  struct {
    double target = 0.0;
    double eta = 0.0;
    int n_cap = 10000;
  } min_n;
  auto* cmd_min_n = app.add_subcommand(
      "min-n", "smallest stage count reaching a target detection probability");
  cmd_min_n->add_option("--target", min_n.target, "target probability in (0, 1)")
      ->required();
  cmd_min_n->add_option("--eta", min_n.eta, "absorber transparency")->capture_default_str();
  cmd_min_n->add_option("--n-cap", min_n.n_cap, "largest stage count to scan")
      ->capture_default_str();
  cmd_min_n->callback([&] {
    const std::optional<int> n = ifm::min_stages_for_target(min_n.target, min_n.eta, min_n.n_cap);
    json meta = base_meta("min-n");
    meta["target"] = min_n.target;
    meta["eta"] = min_n.eta;
    meta["n_cap"] = min_n.n_cap;
    std::vector<ScalarRow> rows = {{"found", n ? "1" : "0", "1"}};
    json data = {{"found", n.has_value()}, {"n", nullptr}};
    if (n) {
      rows.push_back({"n", std::to_string(*n), "1"});
      data["n"] = *n;
    }
    emit_table(g, std::move(meta), rows, std::move(data));
  });

  // required-dw
  struct {
    double target = 0.0;
    int n = 0;
    std::optional<double> distance;
    double tol = 1e-9;
  } req_dw;
  auto* cmd_req_dw = app.add_subcommand(
      "required-dw", "largest barrier height still reaching a target probability");
  cmd_req_dw->add_option("--target", req_dw.target, "target probability in (0, 1)")
      ->required();
  cmd_req_dw->add_option("--n", req_dw.n, "number of stages")->required();
  cmd_req_dw->add_option("--distance", req_dw.distance, "tunnelling distance s [m]");
  cmd_req_dw->add_option("--tol", req_dw.tol, "bisection tolerance [eV]")
      ->capture_default_str();
  cmd_req_dw->callback([&] {
    const double s = resolve_distance(g, req_dw.distance);
    const std::optional<double> dw =
        ifm::required_dw_for_target(req_dw.target, req_dw.n, s, req_dw.tol);
    json meta = base_meta("required-dw");
    meta["target"] = req_dw.target;
    meta["n"] = req_dw.n;
    meta["distance_m"] = s;
    meta["tol_ev"] = req_dw.tol;
    std::vector<ScalarRow> rows = {{"found", dw ? "1" : "0", "1"}};
    json data = {{"found", dw.has_value()}, {"delta_w", nullptr}};
    if (dw) {
      rows.push_back(ifm::scalar_row("delta_w", *dw, "eV"));
      data["delta_w"] = *dw;
    }
    emit_table(g, std::move(meta), rows, std::move(data));
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
