#include "ellspin/ellspin.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <optional>
#include <string>
#include <vector>

#include "ellspin/chain.hpp"
#include "ellspin/error.hpp"
#include "ellspin/harness.hpp"
#include "ellspin/qmbs.hpp"

using namespace ellspin;

struct ellspin_operator {
  SpinOperator op;
};

struct ellspin_values {
  std::vector<cplx> v;
};

struct ellspin_magnon_table {
  std::vector<ellspin_magnon> rows;
};

namespace {

thread_local std::string last_error;

ellspin_status fail(ellspin_status s, const std::string& msg) {
  last_error = msg;
  return s;
}

ellspin_status from_code(ErrorCode c) {
  switch (c) {
    case ErrorCode::Pole: return ELLSPIN_ERR_POLE;
    case ErrorCode::Accuracy: return ELLSPIN_ERR_ACCURACY;
    case ErrorCode::Parameter: return ELLSPIN_ERR_PARAMETER;
    case ErrorCode::Contract: return ELLSPIN_ERR_CONTRACT;
    case ErrorCode::Degenerate: return ELLSPIN_ERR_DEGENERATE;
    case ErrorCode::Gate: return ELLSPIN_ERR_GATE;
    case ErrorCode::Size: return ELLSPIN_ERR_SIZE;
  }
  return ELLSPIN_ERR_INTERNAL;
}

template <class F>
ellspin_status guarded(F f) {
  try {
    f();
    last_error.clear();
    return ELLSPIN_OK;
  } catch (const Error& e) {
    return fail(from_code(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ELLSPIN_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(ELLSPIN_ERR_INTERNAL, e.what());
  }
}

cplx to_cplx(ellspin_complex z) { return {z.re, z.im}; }
ellspin_complex to_c(cplx z) { return {z.real(), z.imag()}; }

ChainParams chain_of(const ellspin_model_params& p) {
  ChainParams c;
  c.N = p.n;
  c.kappa = p.kappa;
  c.eta = to_cplx(p.eta);
  c.a = to_cplx(p.a);
  return c;
}

void check_sites(int n) {
  if (n > kMaxSites) throw SizeError("N = " + std::to_string(n) + " exceeds the cap of 12 sites");
  if (n < 2) throw ParameterError("N must be at least 2");
}

void check_finite(const ellspin_model_params& p) {
  for (double v : {p.kappa, p.eta.re, p.eta.im, p.a.re, p.a.im, p.a_prime.re, p.a_prime.im, p.gamma})
    if (!std::isfinite(v)) throw ParameterError("parameters must be finite");
}

void validate(const ellspin_model_params& p) {
  check_finite(p);
  check_sites(p.n);
  switch (p.model) {
    case ELLSPIN_MODEL_DEFORMED_L:
    case ELLSPIN_MODEL_DEFORMED_R:
      chain_of(p).validate();
      break;
    case ELLSPIN_MODEL_INOZEMTSEV:
      if (p.kappa < 0) throw ParameterError("kappa must be nonnegative");
      break;
    case ELLSPIN_MODEL_INTERMEDIATE:
      if (p.kappa < 0) throw ParameterError("kappa must be nonnegative");
      if (p.a_prime.re == 0 && p.a_prime.im == 0) throw PoleError("a' = 0 is a pole of the intermediate chain");
      break;
    case ELLSPIN_MODEL_XXZ:
      if (!(p.gamma > 0)) throw ParameterError("gamma must be positive");
      break;
    case ELLSPIN_MODEL_HS:
      break;
    case ELLSPIN_MODEL_DEFORMED_HS:
      if (p.eta.re == 0 && p.eta.im == 0) throw ParameterError("eta must be nonzero");
      break;
    default:
      throw ParameterError("unknown model");
  }
}

SpinOperator build(const ellspin_model_params& p) {
  validate(p);
  ChainParams c = chain_of(p);
  switch (p.model) {
    case ELLSPIN_MODEL_DEFORMED_L: return h_left(c);
    case ELLSPIN_MODEL_DEFORMED_R: return h_right(c);
    case ELLSPIN_MODEL_INOZEMTSEV: return h_inozemtsev(c);
    case ELLSPIN_MODEL_INTERMEDIATE: return h_intermediate(to_cplx(p.a_prime), c);
    case ELLSPIN_MODEL_XXZ: return h_xxz(p.gamma, c.a, c.N).hamiltonian();
    case ELLSPIN_MODEL_HS: return h_haldane_shastry(c.N);
    case ELLSPIN_MODEL_DEFORMED_HS:
      return h_deformed_hs(p.chirality == ELLSPIN_RIGHT ? Chirality::Right : Chirality::Left, c.N, c.eta);
  }
  throw ParameterError("unknown model");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

Suite suite_of(const char* name) {
  if (!name) throw ParameterError("suite name is null");
  auto s = parse_suite(name);
  if (!s) throw ParameterError(std::string("unknown suite '") + name + "'");
  return *s;
}

}  // namespace

extern "C" {

void ellspin_model_params_default(ellspin_model_params* p) {
  if (!p) return;
  p->model = ELLSPIN_MODEL_DEFORMED_L;
  p->n = 4;
  p->kappa = 1.0;
  p->eta = {0.3, 0.1};
  p->a = {0.7, 0.2};
  p->a_prime = {0.3, 0.4};
  p->gamma = 0.23;
  p->chirality = ELLSPIN_LEFT;
}

ellspin_status ellspin_model_params_validate(const ellspin_model_params* p) {
  if (!p) return fail(ELLSPIN_ERR_ARGUMENT, "null parameters");
  return guarded([&] { validate(*p); });
}

const char* ellspin_last_error(void) { return last_error.c_str(); }

const char* ellspin_status_name(ellspin_status s) {
  switch (s) {
    case ELLSPIN_OK: return "ok";
    case ELLSPIN_ERR_POLE: return "pole";
    case ELLSPIN_ERR_ACCURACY: return "accuracy";
    case ELLSPIN_ERR_PARAMETER: return "parameter";
    case ELLSPIN_ERR_CONTRACT: return "contract";
    case ELLSPIN_ERR_DEGENERATE: return "degenerate";
    case ELLSPIN_ERR_GATE: return "gate";
    case ELLSPIN_ERR_SIZE: return "size";
    case ELLSPIN_ERR_ARGUMENT: return "argument";
    case ELLSPIN_ERR_INTERNAL: return "internal";
  }
  return "unknown";
}

ellspin_status ellspin_operator_build(const ellspin_model_params* p, ellspin_operator** out) {
  if (!p || !out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] { *out = new ellspin_operator{build(*p)}; });
}

ellspin_status ellspin_operator_build_xxz_linked(const ellspin_model_params* p, ellspin_operator** out) {
  if (!p || !out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    if (!(p->kappa > 0)) throw ParameterError("the XXZ-linked chain needs kappa > 0");
    if (!(p->gamma > 0)) throw ParameterError("gamma must be positive");
    if (p->model != ELLSPIN_MODEL_DEFORMED_L && p->model != ELLSPIN_MODEL_DEFORMED_R && p->model != ELLSPIN_MODEL_XXZ)
      throw ParameterError("the XXZ link applies to the deformed chains");
    ellspin_model_params q = *p;
    q.model = p->model == ELLSPIN_MODEL_DEFORMED_R ? ELLSPIN_MODEL_DEFORMED_R : ELLSPIN_MODEL_DEFORMED_L;
    q.eta = to_c(cplx(0, -kPi * p->gamma / p->kappa));
    SpinOperator h = build(q);
    const double s = std::sinh(p->kappa) / p->kappa;
    h.matrix *= s * s;
    *out = new ellspin_operator{std::move(h)};
  });
}

void ellspin_operator_free(ellspin_operator* op) { delete op; }

int ellspin_operator_sites(const ellspin_operator* op) { return op ? op->op.n_sites : 0; }

int ellspin_operator_conserves_sz(const ellspin_operator* op) { return op && sz_violation(op->op) <= 1e-10; }

ellspin_status ellspin_operator_spectrum(const ellspin_operator* op, int sector, ellspin_values** out) {
  if (!op || !out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    std::optional<int> s;
    if (sector >= 0) s = sector;
    *out = new ellspin_values{spectrum(op->op, s)};
  });
}

size_t ellspin_values_size(const ellspin_values* v) { return v ? v->v.size() : 0; }

ellspin_complex ellspin_values_get(const ellspin_values* v, size_t i) {
  if (!v || i >= v->v.size()) return {NAN, NAN};
  return to_c(v->v[i]);
}

void ellspin_values_free(ellspin_values* v) { delete v; }

ellspin_status ellspin_magnons(const ellspin_model_params* p, ellspin_magnon_table** out) {
  if (!p || !out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *out = nullptr;
  return guarded([&] {
    check_finite(*p);
    check_sites(p->n);
    ChainParams c = chain_of(*p);
    c.validate();
    Matrix hl = h_left(c).matrix, hr = h_right(c).matrix;
    auto t = std::make_unique<ellspin_magnon_table>();
    for (const MagnonState& m : magnon_states(c)) {
      const double nv = m.vector.squaredNorm();
      ellspin_magnon row;
      row.momentum_index = m.momentum_index;
      row.g_eigenvalue = to_c(std::exp(I * (2.0 * kPi * m.momentum_index / c.N)));
      row.energy_left = to_c(m.vector.dot(hl * m.vector) / nv);
      row.energy_right = to_c(m.vector.dot(hr * m.vector) / nv);
      t->rows.push_back(row);
    }
    *out = t.release();
  });
}

size_t ellspin_magnon_table_size(const ellspin_magnon_table* t) { return t ? t->rows.size() : 0; }

ellspin_status ellspin_magnon_table_get(const ellspin_magnon_table* t, size_t i, ellspin_magnon* out) {
  if (!t || !out || i >= t->rows.size()) return fail(ELLSPIN_ERR_ARGUMENT, "magnon index out of range");
  *out = t->rows[i];
  return ELLSPIN_OK;
}

void ellspin_magnon_table_free(ellspin_magnon_table* t) { delete t; }

ellspin_status ellspin_freeze(const ellspin_model_params* p, ellspin_chirality c, double step,
                               ellspin_freeze_result* out) {
  if (!p || !out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  return guarded([&] {
    check_finite(*p);
    check_sites(p->n);
    ChainParams cp = chain_of(*p);
    cp.validate();
    FreezeResult r = freeze_check(c == ELLSPIN_RIGHT ? Chirality::Right : Chirality::Left, cp, step > 0 ? step : 1e-5);
    out->deviation = r.deviation;
    out->gate_residual = r.gate_residual;
    out->unweighted_spread = r.unweighted_spread;
    out->a_star = to_c(r.a_star);
    out->fitted_constant = to_c(r.fitted_constant);
  });
}

void ellspin_overrides_default(ellspin_overrides* o) {
  if (!o) return;
  *o = ellspin_overrides{};
  o->draws = 20;
  o->jobs = 1;
}

ellspin_status ellspin_check_names(const char* suite, char** json_out) {
  if (!json_out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guarded([&] { *json_out = dup_string(nlohmann::json(suite_checks(suite_of(suite))).dump()); });
}

ellspin_status ellspin_verify(const char* suite, uint64_t seed, const ellspin_overrides* o, char** json_out,
                               int* all_pass) {
  if (!json_out) return fail(ELLSPIN_ERR_ARGUMENT, "null argument");
  *json_out = nullptr;
  return guarded([&] {
    Suite s = suite_of(suite);
    Overrides ov;
    if (o) {
      if (o->has_n) ov.N = o->n;
      if (o->has_kappa) ov.kappa = o->kappa;
      if (o->has_eta) ov.eta = to_cplx(o->eta);
      if (o->has_a) ov.a = to_cplx(o->a);
      if (o->has_gamma) ov.gamma = o->gamma;
      if (o->has_a_prime) ov.a_prime = to_cplx(o->a_prime);
      if (o->draws > 0) ov.draws = o->draws;
      ov.jobs = o->jobs > 0 ? o->jobs : 1;
    }
    std::vector<CheckResult> results = run_suite(s, seed, ov);
    bool ok = true;
    for (const CheckResult& r : results) ok = ok && r.pass;
    if (all_pass) *all_pass = ok;
    *json_out = dup_string(report_json(results).dump(2));
  });
}

void ellspin_string_free(char* s) { std::free(s); }

}  // extern "C"
