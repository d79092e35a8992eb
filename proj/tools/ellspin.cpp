// Command-line front end. Talks to the library only through ellspin.h.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "ellspin/ellspin.h"

using nlohmann::json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitInfra = 2;
constexpr int kExitUsage = 64;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// "a+bi", "a-bi", "a", "bi", "i", "-i"
ellspin_complex parse_complex(const std::string& text) {
  auto bad = [&] { return UsageError("cannot parse complex number '" + text + "' (expected a+bi)"); };
  if (text.empty()) throw bad();
  const char* s = text.c_str();
  const char* end = s + text.size();
  auto imag_unit = [&](const char* p, double sign, double& out) {
    // p points at "i" or "<number>i"
    if (*p == 'i' && p + 1 == end) {
      out = sign;
      return true;
    }
    char* q = nullptr;
    double v = std::strtod(p, &q);
    if (q == p || q + 1 != end || *q != 'i') return false;
    out = sign * v;
    return true;
  };
  if (text == "i" || text == "+i" || text == "-i") return {0.0, text == "-i" ? -1.0 : 1.0};
  char* q = nullptr;
  double first = std::strtod(s, &q);
  if (q == s) throw bad();
  if (q == end) return {first, 0.0};
  if (*q == 'i' && q + 1 == end) return {0.0, first};
  if (*q != '+' && *q != '-') throw bad();
  double sign = *q == '-' ? -1.0 : 1.0;
  double im = 0;
  const char* p = q + 1;
  if (*p == '+' || *p == '-') throw bad();
  if (!imag_unit(p, sign, im)) throw bad();
  if (!std::isfinite(first) || !std::isfinite(im)) throw bad();
  return {first, im};
}

json cjson(ellspin_complex z) { return json::array({z.re, z.im}); }

const std::map<std::string, ellspin_model> kModels = {
    {"deformed-L", ELLSPIN_MODEL_DEFORMED_L}, {"deformed-R", ELLSPIN_MODEL_DEFORMED_R},
    {"inozemtsev", ELLSPIN_MODEL_INOZEMTSEV}, {"intermediate", ELLSPIN_MODEL_INTERMEDIATE},
    {"xxz", ELLSPIN_MODEL_XXZ},               {"hs", ELLSPIN_MODEL_HS},
    {"deformed-hs", ELLSPIN_MODEL_DEFORMED_HS}};

// the parameters that define the given model
json params_json(const ellspin_model_params& p) {
  json j = {{"N", p.n}};
  switch (p.model) {
    case ELLSPIN_MODEL_DEFORMED_L:
    case ELLSPIN_MODEL_DEFORMED_R:
      j["kappa"] = p.kappa;
      j["eta"] = cjson(p.eta);
      j["a"] = cjson(p.a);
      break;
    case ELLSPIN_MODEL_INOZEMTSEV: j["kappa"] = p.kappa; break;
    case ELLSPIN_MODEL_INTERMEDIATE:
      j["kappa"] = p.kappa;
      j["a_prime"] = cjson(p.a_prime);
      break;
    case ELLSPIN_MODEL_XXZ:
      j["gamma"] = p.gamma;
      j["a"] = cjson(p.a);
      break;
    case ELLSPIN_MODEL_HS: break;
    case ELLSPIN_MODEL_DEFORMED_HS:
      j["eta"] = cjson(p.eta);
      j["chirality"] = p.chirality == ELLSPIN_RIGHT ? "R" : "L";
      break;
  }
  return j;
}

json chain_params_json(const ellspin_model_params& p) {
  return {{"N", p.n}, {"kappa", p.kappa}, {"eta", cjson(p.eta)}, {"a", cjson(p.a)}};
}

// Library failure: parameter-like errors are usage errors, the rest infrastructure.
struct LibError : std::runtime_error {
  ellspin_status status;
  LibError(ellspin_status s, const std::string& what) : std::runtime_error(what), status(s) {}
};

void check(ellspin_status s) {
  if (s != ELLSPIN_OK) throw LibError(s, std::string(ellspin_status_name(s)) + " error: " + ellspin_last_error());
}

int exit_code_for(ellspin_status s) {
  switch (s) {
    case ELLSPIN_ERR_POLE:
    case ELLSPIN_ERR_PARAMETER:
    case ELLSPIN_ERR_CONTRACT:
    case ELLSPIN_ERR_DEGENERATE:
    case ELLSPIN_ERR_SIZE:
    case ELLSPIN_ERR_ARGUMENT: return kExitUsage;
    case ELLSPIN_ERR_GATE: return kExitFail;
    default: return kExitInfra;
  }
}

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct Options {
  std::string suite = "all";
  std::uint64_t seed = 1;
  std::optional<int> n;
  std::optional<double> kappa, gamma;
  std::optional<std::string> eta, a, a_prime;
  std::string model = "deformed-L";
  std::optional<int> sector;
  std::string chirality;
  std::string param;
  std::string from, to;
  int steps = 0;
  bool log = false;
  std::string output;
  std::string format = "json";
  int jobs = 1;
  int draws = 0;
  double step = 1e-5;
};

ellspin_model_params model_params(const Options& o) {
  ellspin_model_params p;
  ellspin_model_params_default(&p);
  auto it = kModels.find(o.model);
  if (it == kModels.end()) throw UsageError("unknown model '" + o.model + "'");
  p.model = it->second;
  if (o.n) p.n = *o.n;
  if (o.kappa) p.kappa = *o.kappa;
  if (o.gamma) p.gamma = *o.gamma;
  if (o.eta) p.eta = parse_complex(*o.eta);
  if (o.a) p.a = parse_complex(*o.a);
  if (o.a_prime) p.a_prime = parse_complex(*o.a_prime);
  if (o.chirality == "R") p.chirality = ELLSPIN_RIGHT;
  return p;
}

void write_output(const Options& o, const std::string& text) {
  if (o.output.empty() || o.output == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  std::ofstream f(o.output, std::ios::binary);
  if (!f) throw LibError(ELLSPIN_ERR_INTERNAL, "cannot open output file " + o.output);
  f << text;
  if (!text.empty() && text.back() != '\n') f << '\n';
  if (!f) throw LibError(ELLSPIN_ERR_INTERNAL, "cannot write output file " + o.output);
}

struct OperatorHandle {
  ellspin_operator* op = nullptr;
  ~OperatorHandle() { ellspin_operator_free(op); }
};

std::vector<ellspin_complex> eigenvalues(const ellspin_model_params& p, std::optional<int> sector, bool xxz_linked) {
  OperatorHandle h;
  check(xxz_linked ? ellspin_operator_build_xxz_linked(&p, &h.op) : ellspin_operator_build(&p, &h.op));
  ellspin_values* v = nullptr;
  check(ellspin_operator_spectrum(h.op, sector ? *sector : -1, &v));
  std::vector<ellspin_complex> out(ellspin_values_size(v));
  for (size_t i = 0; i < out.size(); ++i) out[i] = ellspin_values_get(v, i);
  ellspin_values_free(v);
  return out;
}

json eigen_json(const std::vector<ellspin_complex>& ev) {
  json a = json::array();
  for (const ellspin_complex& z : ev) a.push_back(cjson(z));
  return a;
}

void check_format(const Options& o) {
  if (o.format != "json" && o.format != "csv") throw UsageError("--format must be json or csv");
}

// ---- commands ----

int cmd_verify(const Options& o) {
  ellspin_overrides ov;
  ellspin_overrides_default(&ov);
  ellspin_model_params probe;
  ellspin_model_params_default(&probe);
  if (o.n) ov.has_n = 1, ov.n = probe.n = *o.n;
  if (o.kappa) ov.has_kappa = 1, ov.kappa = probe.kappa = *o.kappa;
  if (o.eta) ov.has_eta = 1, ov.eta = probe.eta = parse_complex(*o.eta);
  if (o.a) ov.has_a = 1, ov.a = probe.a = parse_complex(*o.a);
  if (o.gamma) ov.has_gamma = 1, ov.gamma = *o.gamma;
  if (o.a_prime) ov.has_a_prime = 1, ov.a_prime = parse_complex(*o.a_prime);
  if (o.draws > 0) ov.draws = o.draws;
  ov.jobs = o.jobs;
  // overrides must respect the chain invariants before any check runs
  check(ellspin_model_params_validate(&probe));
  if (o.gamma && !(*o.gamma > 0)) throw UsageError("--gamma must be positive");

  char* report = nullptr;
  int all_pass = 0;
  check(ellspin_verify(o.suite.c_str(), o.seed, &ov, &report, &all_pass));
  std::string text(report);
  ellspin_string_free(report);
  write_output(o, text);
  return all_pass ? 0 : kExitFail;
}

int cmd_spectrum(const Options& o) {
  check_format(o);
  ellspin_model_params p = model_params(o);
  std::vector<ellspin_complex> ev = eigenvalues(p, o.sector, false);
  if (o.format == "csv") {
    std::string s = "re,im\n";
    for (const ellspin_complex& z : ev) s += fmt17(z.re) + "," + fmt17(z.im) + "\n";
    write_output(o, s);
  } else {
    json j = {{"model", o.model},
              {"params", params_json(p)},
              {"sector", o.sector ? json(*o.sector) : json(nullptr)},
              {"eigenvalues", eigen_json(ev)}};
    write_output(o, j.dump(2));
  }
  return 0;
}

int cmd_sweep(const Options& o) {
  check_format(o);
  if (o.steps < 2) throw UsageError("--steps must be at least 2");
  const std::vector<std::string> params = {"kappa", "eta", "a", "gamma", "a-prime"};
  if (std::find(params.begin(), params.end(), o.param) == params.end())
    throw UsageError("--param must be one of kappa, eta, a, gamma, a-prime");
  const bool real_param = o.param == "kappa" || o.param == "gamma";
  ellspin_complex from = parse_complex(o.from), to = parse_complex(o.to);
  if (real_param && (from.im != 0 || to.im != 0)) throw UsageError("--param " + o.param + " takes real bounds");
  std::complex<double> zf(from.re, from.im), zt(to.re, to.im);
  if (o.log && (std::abs(zf) == 0 || std::abs(zt) == 0)) throw UsageError("--log needs nonzero bounds");
  if (o.log && real_param && (from.re < 0 || to.re < 0)) throw UsageError("--log needs positive bounds");

  ellspin_model_params base = model_params(o);
  // the xxz model swept in kappa is the rescaled deformed chain with eta = -i pi gamma / kappa
  const bool xxz_linked = base.model == ELLSPIN_MODEL_XXZ && o.param == "kappa";

  std::vector<ellspin_model_params> grid(o.steps, base);
  std::vector<std::complex<double>> values(o.steps);
  for (int k = 0; k < o.steps; ++k) {
    double t = double(k) / (o.steps - 1);
    std::complex<double> z = o.log ? zf * std::pow(zt / zf, t) : zf + (zt - zf) * t;
    if (k == 0) z = zf;
    if (k == o.steps - 1) z = zt;
    values[k] = z;
    ellspin_complex c{z.real(), z.imag()};
    ellspin_model_params& p = grid[k];
    if (o.param == "kappa") p.kappa = z.real();
    if (o.param == "gamma") p.gamma = z.real();
    if (o.param == "eta") p.eta = c;
    if (o.param == "a") p.a = c;
    if (o.param == "a-prime") p.a_prime = c;
  }

  std::vector<std::vector<ellspin_complex>> spectra(o.steps);
  std::vector<std::optional<LibError>> errors(o.steps);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k; (k = next.fetch_add(1)) < o.steps;) {
      try {
        spectra[k] = eigenvalues(grid[k], o.sector, xxz_linked);
      } catch (const LibError& e) {
        errors[k] = e;
      }
    }
  };
  int jobs = std::max(1, std::min(o.jobs, o.steps));
  std::vector<std::thread> pool;
  for (int k = 1; k < jobs; ++k) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();
  for (int k = 0; k < o.steps; ++k)
    if (errors[k]) throw LibError(errors[k]->status, "grid point " + std::to_string(k) + ": " + errors[k]->what());

  if (o.format == "csv") {
    std::string s = "point,value_re,value_im,re,im\n";
    for (int k = 0; k < o.steps; ++k)
      for (const ellspin_complex& z : spectra[k])
        s += std::to_string(k) + "," + fmt17(values[k].real()) + "," + fmt17(values[k].imag()) + "," + fmt17(z.re) +
             "," + fmt17(z.im) + "\n";
    write_output(o, s);
    return 0;
  }
  json points = json::array();
  for (int k = 0; k < o.steps; ++k) {
    ellspin_model_params p = grid[k];
    json pj = params_json(p);
    if (xxz_linked) {
      pj["kappa"] = p.kappa;
      pj["eta"] = json::array({0.0, -M_PI * p.gamma / p.kappa});
    }
    json value = real_param ? json(values[k].real()) : json::array({values[k].real(), values[k].imag()});
    points.push_back({{"value", value}, {"params", pj}, {"eigenvalues", eigen_json(spectra[k])}});
  }
  json j = {{"model", o.model},
            {"param", o.param},
            {"log", o.log},
            {"xxz_linked", xxz_linked},
            {"sector", o.sector ? json(*o.sector) : json(nullptr)},
            {"points", points}};
  write_output(o, j.dump(2));
  return 0;
}

int cmd_magnons(const Options& o) {
  check_format(o);
  ellspin_model_params p = model_params(o);
  ellspin_magnon_table* t = nullptr;
  check(ellspin_magnons(&p, &t));
  std::vector<ellspin_magnon> rows(ellspin_magnon_table_size(t));
  for (size_t i = 0; i < rows.size(); ++i) ellspin_magnon_table_get(t, i, &rows[i]);
  ellspin_magnon_table_free(t);
  if (o.format == "csv") {
    std::string s = "momentum_index,g_re,g_im,energy_left_re,energy_left_im,energy_right_re,energy_right_im\n";
    for (const ellspin_magnon& m : rows)
      s += std::to_string(m.momentum_index) + "," + fmt17(m.g_eigenvalue.re) + "," + fmt17(m.g_eigenvalue.im) + "," +
           fmt17(m.energy_left.re) + "," + fmt17(m.energy_left.im) + "," + fmt17(m.energy_right.re) + "," +
           fmt17(m.energy_right.im) + "\n";
    write_output(o, s);
    return 0;
  }
  json a = json::array();
  for (const ellspin_magnon& m : rows)
    a.push_back({{"momentum_index", m.momentum_index},
                 {"g_eigenvalue", cjson(m.g_eigenvalue)},
                 {"energy_left", cjson(m.energy_left)},
                 {"energy_right", cjson(m.energy_right)}});
  write_output(o, json({{"params", chain_params_json(p)}, {"magnons", a}}).dump(2));
  return 0;
}

int cmd_freeze(const Options& o) {
  if (o.format != "json") throw UsageError("freeze writes json only");
  ellspin_model_params p = model_params(o);
  std::vector<ellspin_chirality> which;
  if (o.chirality.empty() || o.chirality == "both") which = {ELLSPIN_LEFT, ELLSPIN_RIGHT};
  else if (o.chirality == "L") which = {ELLSPIN_LEFT};
  else if (o.chirality == "R") which = {ELLSPIN_RIGHT};
  else throw UsageError("--chirality must be L, R or both");
  json results = json::array();
  bool gate_ok = true;
  for (ellspin_chirality c : which) {
    ellspin_freeze_result r;
    ellspin_status s = ellspin_freeze(&p, c, o.step, &r);
    json j = {{"chirality", c == ELLSPIN_LEFT ? "L" : "R"}};
    if (s == ELLSPIN_ERR_GATE) {
      j["gate_failure"] = ellspin_last_error();
      gate_ok = false;
    } else {
      check(s);
      j["deviation"] = r.deviation;
      j["gate_residual"] = r.gate_residual;
      j["unweighted_spread"] = r.unweighted_spread;
      j["a_star"] = cjson(r.a_star);
      j["fitted_constant"] = cjson(r.fitted_constant);
    }
    results.push_back(j);
  }
  write_output(o, json({{"params", chain_params_json(p)}, {"step", o.step}, {"results", results}}).dump(2));
  return gate_ok ? 0 : kExitFail;
}

int default_jobs() {
  if (const char* e = std::getenv("ELLSPIN_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(e, &end, 10);
    if (end != e && *end == '\0' && v > 0 && v < 1024) return int(v);
  }
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deformed Inozemtsev chains and elliptic spin-Ruijsenaars operators"};
  app.require_subcommand(1);
  Options o;
  o.jobs = default_jobs();

  auto chain_flags = [&](CLI::App* c) {
    c->add_option("--n", o.n, "number of sites (2..12)");
    c->add_option("--kappa", o.kappa, "elliptic parameter, >= 0");
    c->add_option("--eta", o.eta, "anisotropy, complex a+bi");
    c->add_option("--a", o.a, "dynamical parameter, complex a+bi");
    c->add_option("--gamma", o.gamma, "XXZ anisotropy");
    c->add_option("--a-prime", o.a_prime, "intermediate-chain parameter, complex a+bi");
    c->add_option("--output,-o", o.output, "output file (default stdout)");
  };
  auto model_flags = [&](CLI::App* c) {
    c->add_option("--model", o.model, "deformed-L, deformed-R, inozemtsev, intermediate, xxz, hs, deformed-hs");
    c->add_option("--format", o.format, "json or csv");
  };

  CLI::App* verify = app.add_subcommand("verify", "run a verification suite and write the JSON report");
  verify->add_option("--suite", o.suite, "elliptic, rmatrix, chain, qmbs, limits or all");
  verify->add_option("--seed", o.seed, "base seed");
  verify->add_option("--draws", o.draws, "random draws per check");
  verify->add_option("--jobs", o.jobs, "concurrent checks (default $ELLSPIN_JOBS or 1)");
  chain_flags(verify);

  CLI::App* spectrum = app.add_subcommand("spectrum", "eigenvalues of a model");
  chain_flags(spectrum);
  model_flags(spectrum);
  spectrum->add_option("--sector", o.sector, "number of down spins");
  spectrum->add_option("--chirality", o.chirality, "L or R (deformed-hs)");

  CLI::App* sweep = app.add_subcommand("sweep", "spectra along a parameter grid");
  chain_flags(sweep);
  model_flags(sweep);
  sweep->add_option("--sector", o.sector, "number of down spins");
  sweep->add_option("--chirality", o.chirality, "L or R (deformed-hs)");
  sweep->add_option("--param", o.param, "kappa, eta, a, gamma or a-prime")->required();
  sweep->add_option("--from", o.from, "start value")->required();
  sweep->add_option("--to", o.to, "end value")->required();
  sweep->add_option("--steps", o.steps, "grid points, >= 2")->required();
  sweep->add_flag("--log", o.log, "geometric grid");
  sweep->add_option("--jobs", o.jobs, "concurrent grid points (default $ELLSPIN_JOBS or 1)");
  sweep->add_option("--seed", o.seed, "accepted for uniformity; sweeps draw nothing at random");

  CLI::App* magnons = app.add_subcommand("magnons", "one-magnon momenta, G' eigenvalues and energies");
  chain_flags(magnons);
  magnons->add_option("--format", o.format, "json or csv");

  CLI::App* freeze = app.add_subcommand("freeze", "freezing diagnostics at the first equilibrium");
  chain_flags(freeze);
  freeze->add_option("--chirality", o.chirality, "L, R or both");
  freeze->add_option("--step", o.step, "finite-difference step in epsilon");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (verify->parsed()) return cmd_verify(o);
    if (spectrum->parsed()) return cmd_spectrum(o);
    if (sweep->parsed()) return cmd_sweep(o);
    if (magnons->parsed()) return cmd_magnons(o);
    if (freeze->parsed()) return cmd_freeze(o);
  } catch (const UsageError& e) {
    std::cerr << "ellspin: " << e.what() << "\n";
    return kExitUsage;
  } catch (const LibError& e) {
    std::cerr << "ellspin: " << e.what() << "\n";
    return exit_code_for(e.status);
  } catch (const std::exception& e) {
    std::cerr << "ellspin: " << e.what() << "\n";
    return kExitInfra;
  }
  return kExitUsage;
}
