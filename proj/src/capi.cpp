#include "dpskit/dpskit.h"

#include <cstdlib>
#include <cstring>
#include <exception>
#include <new>
#include <string>

#include "dpskit/applications.hpp"
#include "dpskit/bounds.hpp"
#include "dpskit/extension.hpp"
#include "dpskit/json_io.hpp"
#include "dpskit/optimality.hpp"

struct dps_operator {
  dpskit::HermitianOperator op;
};

struct dps_problem {
  dpskit::EstimationProblem problem;
};

namespace {

thread_local std::string last_error;

dps_status status_of(dpskit::ErrorCode c) {
  switch (c) {
    case dpskit::ErrorCode::invalid_argument:
    case dpskit::ErrorCode::parse_error:
    case dpskit::ErrorCode::not_ppt: return DPS_ERR_INPUT;
    case dpskit::ErrorCode::budget_exceeded: return DPS_ERR_BUDGET;
    case dpskit::ErrorCode::solver_failure: return DPS_ERR_SOLVER;
    case dpskit::ErrorCode::internal: return DPS_ERR_INTERNAL;
  }
  return DPS_ERR_INTERNAL;
}

template <class F>
dps_status guard(F&& f) {
  try {
    f();
    last_error.clear();
    return DPS_OK;
  } catch (const dpskit::Error& e) {
    last_error = e.what();
    return status_of(e.code());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return DPS_ERR_BUDGET;
  } catch (const std::exception& e) {
    last_error = e.what();
    return DPS_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown error";
    return DPS_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  dpskit::require(p != nullptr, std::string(what) + " must not be NULL");
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

dpskit::Dims dims_from(int nfactors, const int* dims) {
  dpskit::require(nfactors >= 1, "need at least one factor");
  need(dims, "dims");
  dpskit::Dims out(dims, dims + nfactors);
  for (int d : out) dpskit::require(d >= 1, "dimensions must be positive");
  return out;
}

dpskit::ExtensionOptions ext_options(const dps_options* o) {
  dpskit::ExtensionOptions e;
  if (!o) return e;
  e.solver.tol = o->tol;
  e.solver.max_iter = o->max_iter;
  if (o->log_path) e.solver.log_path = o->log_path;
  e.budget_dim = o->budget_dim;
  return e;
}

void fill(dps_bound_pair* out, const dpskit::BoundPair& b) {
  out->upper = b.upper;
  out->lower = b.lower;
  out->N = b.N;
  out->ppt = b.ppt ? 1 : 0;
  out->solver_status = static_cast<int>(b.status);
}

}  // namespace

extern "C" {

const char* dps_last_error(void) { return last_error.c_str(); }

const char* dps_version(void) { return "0.1.0"; }

void dps_options_default(dps_options* opts) {
  if (!opts) return;
  const dpskit::ExtensionOptions e;
  opts->tol = e.solver.tol;
  opts->max_iter = e.solver.max_iter;
  opts->budget_dim = e.budget_dim;
  opts->all_cuts = 0;
  opts->log_path = nullptr;
}

void dps_string_free(char* s) { std::free(s); }

const char* dps_solver_status_name(int status) {
  if (status < 0 || status > static_cast<int>(dpskit::SolveStatus::numerical_error)) return "unknown";
  return dpskit::to_string(static_cast<dpskit::SolveStatus>(status));
}

dps_status dps_operator_create(int nfactors, const int* dims, const double* re, const double* im,
                               dps_operator** out) {
  return guard([&] {
    need(out, "out");
    need(re, "re");
    auto d = dims_from(nfactors, dims);
    const auto n = static_cast<int>(dpskit::product(d));
    dpskit::Matrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = {re[r * n + c], im ? im[r * n + c] : 0.0};
    *out = new dps_operator{dpskit::HermitianOperator(std::move(d), std::move(m))};
  });
}

dps_status dps_operator_from_json(const char* json, dps_operator** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new dps_operator{dpskit::operator_from_json(json)};
  });
}

dps_status dps_operator_to_json(const dps_operator* op, char** out) {
  return guard([&] {
    need(op, "operator");
    need(out, "out");
    *out = dup_string(dpskit::operator_to_json(op->op));
  });
}

void dps_operator_free(dps_operator* op) { delete op; }

int dps_operator_side(const dps_operator* op) { return op ? op->op.side() : 0; }

int dps_operator_nfactors(const dps_operator* op) { return op ? op->op.num_factors() : 0; }

dps_status dps_operator_dims(const dps_operator* op, int* dims, int capacity) {
  return guard([&] {
    need(op, "operator");
    need(dims, "dims");
    dpskit::require(capacity >= op->op.num_factors(), "dims buffer too small");
    for (int i = 0; i < op->op.num_factors(); ++i) dims[i] = op->op.dims()[i];
  });
}

dps_status dps_operator_entries(const dps_operator* op, double* re, double* im) {
  return guard([&] {
    need(op, "operator");
    const int n = op->op.side();
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) {
        if (re) re[r * n + c] = op->op(r, c).real();
        if (im) im[r * n + c] = op->op(r, c).imag();
      }
  });
}

dps_status dps_operator_pure(int nfactors, const int* dims, const double* re, const double* im,
                             dps_operator** out) {
  return guard([&] {
    need(out, "out");
    need(re, "re");
    auto d = dims_from(nfactors, dims);
    const auto n = static_cast<int>(dpskit::product(d));
    dpskit::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = {re[i], im ? im[i] : 0.0};
    *out = new dps_operator{dpskit::HermitianOperator::projector(std::move(d), v)};
  });
}

dps_status dps_state_random(int nfactors, const int* dims, int rank, uint64_t seed, dps_operator** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_operator{dpskit::random_state(dims_from(nfactors, dims), rank, seed)};
  });
}

dps_status dps_state_example(int K, dps_operator** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_operator{dpskit::example_state(K)};
  });
}

dps_status dps_negativity(const dps_operator* rho, double* out) {
  return guard([&] {
    need(rho, "rho");
    need(out, "out");
    *out = dpskit::negativity(rho->op, {1});
  });
}

dps_status dps_disentangle(const dps_operator* rho, int N, int ppt, dps_operator** out) {
  return guard([&] {
    need(rho, "rho");
    need(out, "out");
    *out = new dps_operator{ppt ? dpskit::disentangle_ppt(rho->op, N) : dpskit::disentangle_sym(rho->op, N)};
  });
}

dps_status dps_membership(const dps_operator* rho, int N, int ppt, const dps_options* opts,
                          dps_membership_info* info, dps_operator** witness) {
  return guard([&] {
    need(rho, "rho");
    need(info, "info");
    if (witness) *witness = nullptr;
    auto q = dpskit::ExtensionQuery::membership(rho->op, N, ppt != 0);
    q.all_cuts = opts && opts->all_cuts;
    const auto r = dpskit::check_membership(q, ext_options(opts));
    info->verdict = static_cast<int>(r.verdict);
    info->solver_status = static_cast<int>(r.solver_status);
    info->iterations = r.iterations;
    info->primal_res = r.residuals.primal;
    info->dual_res = r.residuals.dual;
    info->gap = r.residuals.gap;
    info->witness_value = r.witness_value;
    if (witness && r.witness) *witness = new dps_operator{*r.witness};
  });
}

dps_status dps_verify_witness(const dps_operator* w, int N, int ppt, const dps_options* opts, double* min_value) {
  return guard([&] {
    need(w, "witness");
    need(min_value, "min_value");
    *min_value = dpskit::verify_witness(w->op, N, ppt != 0, ext_options(opts));
  });
}

dps_status dps_g_N(int d, int N, int route, double* out) {
  return guard([&] {
    need(out, "out");
    switch (route) {
      case DPS_GN_TRIDIAGONAL: *out = dpskit::g_N(d, N); break;
      case DPS_GN_ROOTS: *out = dpskit::g_N_root_refinement(d, N); break;
      case DPS_GN_PENCIL: *out = dpskit::g_N_via_pencil(d, N); break;
      default: dpskit::fail(dpskit::ErrorCode::invalid_argument, "unknown g_N route");
    }
  });
}

dps_status dps_bessel_zero(double nu, double* out) {
  return guard([&] {
    need(out, "out");
    *out = dpskit::bessel_zero_first(nu);
  });
}

dps_status dps_bound_report_get(int d_A, int d_B, int N, dps_bound_report* out) {
  return guard([&] {
    need(out, "out");
    const auto r = dpskit::bound_report(d_A, d_B, N);
    *out = dps_bound_report{r.d_A,
                            r.d_B,
                            r.N,
                            r.g_N,
                            r.p_c_sym,
                            r.p_c_ppt,
                            r.robustness_sym,
                            r.robustness_ppt,
                            r.dist_trace_sym,
                            r.dist_op_sym,
                            r.dist_trace_ppt,
                            r.dist_op_ppt,
                            r.g_N_asymptotic,
                            r.bessel_zero,
                            r.ppt_distance_valid ? 1 : 0};
  });
}

dps_status dps_required_N(double delta, int d_B, int ppt, int* out) {
  return guard([&] {
    need(out, "out");
    *out = dpskit::required_N(delta, d_B, ppt != 0);
  });
}

dps_status dps_complexity_get(int d_A, int d_B, double delta, dps_complexity* out) {
  return guard([&] {
    need(out, "out");
    const auto c = dpskit::complexity_estimate(d_A, d_B, delta);
    *out = dps_complexity{c.N_sym, c.N_ppt, c.sym_ops, c.ppt_ops, c.sym_simplified, c.ppt_simplified};
  });
}

dps_status dps_ppt_alone(const dps_operator* rho, double* p_A, double* p_B, double* rg_bound, double* trace_bound,
                         dps_operator** tilde) {
  return guard([&] {
    need(rho, "rho");
    auto r = dpskit::ppt_alone(rho->op);
    if (p_A) *p_A = r.p_A;
    if (p_B) *p_B = r.p_B;
    if (rg_bound) *rg_bound = r.rg_bound;
    if (trace_bound) *trace_bound = r.trace_bound;
    if (tilde) *tilde = new dps_operator{std::move(r.tilde)};
  });
}

dps_status dps_problem_from_json(const char* json, dps_problem** out) {
  return guard([&] {
    need(json, "json");
    need(out, "out");
    *out = new dps_problem{dpskit::problem_from_json(json)};
  });
}

dps_status dps_problem_to_json(const dps_problem* p, char** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    *out = dup_string(dpskit::problem_to_json(p->problem));
  });
}

dps_status dps_problem_bb84(double eps, dps_problem** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_problem{dpskit::bb84_two_copy_problem(eps)};
  });
}

dps_status dps_problem_qutrit_grid(double eps, dps_problem** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_problem{dpskit::qutrit_grid_problem(eps)};
  });
}

void dps_problem_free(dps_problem* p) { delete p; }

dps_status dps_problem_operator(const dps_problem* p, dps_operator** out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    *out = new dps_operator{dpskit::estimation_operator(p->problem)};
  });
}

dps_status dps_fidelity_bounds(const dps_problem* p, int N, int ppt, const dps_options* opts, dps_bound_pair* out) {
  return guard([&] {
    need(p, "problem");
    need(out, "out");
    fill(out, dpskit::fidelity_bounds(p->problem, N, ppt != 0, ext_options(opts)));
  });
}

dps_status dps_choi_identity(int d, dps_operator** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_operator{dpskit::choi_identity(d)};
  });
}

dps_status dps_choi_depolarizing(int d, double p, dps_operator** out) {
  return guard([&] {
    need(out, "out");
    *out = new dps_operator{dpskit::choi_depolarizing(d, p)};
  });
}

dps_status dps_purity_bounds(const dps_operator* choi, int N, int ppt, const dps_options* opts, dps_bound_pair* out) {
  return guard([&] {
    need(choi, "choi");
    need(out, "out");
    fill(out, dpskit::output_purity_bounds(choi->op, N, ppt != 0, ext_options(opts)));
  });
}

dps_status dps_geometric_bounds(const int* dims, const double* re, const double* im, int N, int ppt,
                                const dps_options* opts, dps_bound_pair* out) {
  return guard([&] {
    need(re, "re");
    need(out, "out");
    const auto d = dims_from(3, dims);
    const auto n = static_cast<int>(dpskit::product(d));
    dpskit::Vector v(n);
    for (int i = 0; i < n; ++i) v(i) = {re[i], im ? im[i] : 0.0};
    fill(out, dpskit::geometric_entanglement_bounds(v, d, N, ppt != 0, ext_options(opts)));
  });
}

dps_status dps_named_state(const char* name, double* re, double* im) {
  return guard([&] {
    need(name, "name");
    need(re, "re");
    const std::string s = name;
    dpskit::Vector v;
    if (s == "ghz") v = dpskit::ghz_state();
    else if (s == "w") v = dpskit::w_state();
    else if (s == "product") v = dpskit::product_state_000();
    else dpskit::fail(dpskit::ErrorCode::invalid_argument, "unknown state '" + s + "' (ghz, w, product)");
    for (int i = 0; i < 8; ++i) {
      re[i] = v(i).real();
      if (im) im[i] = v(i).imag();
    }
  });
}

dps_status dps_certify(const dps_operator* rho, int max_N, double delta, const dps_options* opts, int* verdict,
                       char** json) {
  return guard([&] {
    need(rho, "rho");
    const auto r = dpskit::certify(rho->op, max_N, delta, ext_options(opts), opts && opts->all_cuts);
    if (verdict) *verdict = static_cast<int>(r.verdict);
    if (json) *json = dup_string(dpskit::certify_to_json(r));
  });
}

}  // extern "C"
