// Command-line front end. Talks to the library only through dpskit.h.
#include <CLI11.hpp>
#include <json.hpp>

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "dpskit/dpskit.h"

namespace {

constexpr int kExitInput = 2;

// Thrown to unwind with a library status; main turns it into an exit code.
struct Failure {
  int code;
  std::string message;
};

void check(dps_status s) {
  if (s != DPS_OK) throw Failure{s, dps_last_error()};
}

[[noreturn]] void input_error(const std::string& msg) { throw Failure{kExitInput, msg}; }

struct OperatorPtr {
  dps_operator* p = nullptr;
  OperatorPtr() = default;
  OperatorPtr(const OperatorPtr&) = delete;
  OperatorPtr& operator=(const OperatorPtr&) = delete;
  ~OperatorPtr() { dps_operator_free(p); }
  dps_operator** out() { return &p; }
};

struct ProblemPtr {
  dps_problem* p = nullptr;
  ProblemPtr() = default;
  ProblemPtr(const ProblemPtr&) = delete;
  ProblemPtr& operator=(const ProblemPtr&) = delete;
  ~ProblemPtr() { dps_problem_free(p); }
};

std::string take(char* s) {
  std::string out = s ? s : "";
  dps_string_free(s);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) input_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// "3" or "2..5"
std::vector<int> parse_range(const std::string& s) {
  int lo = 0, hi = 0;
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(s, &used);
      if (used != s.size()) input_error("bad range '" + s + "'");
    } else {
      lo = std::stoi(s.substr(0, dots), &used);
      if (used != dots) input_error("bad range '" + s + "'");
      const std::string rest = s.substr(dots + 2);
      hi = std::stoi(rest, &used);
      if (used != rest.size()) input_error("bad range '" + s + "'");
    }
  } catch (const std::logic_error&) {
    input_error("bad range '" + s + "'");
  }
  if (lo < 1 || hi < lo) input_error("empty or nonpositive range '" + s + "'");
  std::vector<int> out;
  for (int n = lo; n <= hi; ++n) out.push_back(n);
  return out;
}

struct Common {
  std::string out_path;
  double tol = 1e-8;
  int max_iter = 200;
  long long budget = 0;
  std::string log_path;
  int jobs = 1;
  std::uint64_t seed = 1;
  bool all_cuts = false;

  dps_options options() const {
    dps_options o;
    dps_options_default(&o);
    o.tol = tol;
    o.max_iter = max_iter;
    if (budget > 0) o.budget_dim = budget;
    o.all_cuts = all_cuts ? 1 : 0;
    o.log_path = log_path.empty() ? nullptr : log_path.c_str();
    return o;
  }
};

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_.open(path);
      if (!file_) input_error("cannot write " + path);
    }
  }
  std::ostream& stream() { return file_.is_open() ? file_ : std::cout; }

 private:
  std::ofstream file_;
};

// Runs tasks on a small pool; results land at their own index.
void run_pool(int jobs, std::size_t n, const std::function<void(std::size_t)>& task) {
  jobs = std::max(1, std::min<int>(jobs, static_cast<int>(n)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next++) < n;) task(i);
    });
  for (auto& th : pool) th.join();
}

void load_state(const std::string& input, int random_rank, const std::vector<int>& dims, std::uint64_t seed,
                OperatorPtr& rho) {
  if (random_rank > 0) {
    check(dps_state_random(static_cast<int>(dims.size()), dims.data(), random_rank, seed, rho.out()));
  } else {
    if (input.empty()) input_error("an input operator file or --random is required");
    check(dps_operator_from_json(read_file(input).c_str(), rho.out()));
  }
  if (dps_operator_nfactors(rho.p) != 2) input_error("input must be a bipartite operator");
}

int cmd_membership(const Common& c, const std::string& input, const std::string& range, bool ppt, int random_rank,
                   const std::vector<int>& dims) {
  OperatorPtr rho;
  load_state(input, random_rank, dims, c.seed, rho);
  const auto Ns = parse_range(range);
  const dps_options o = c.options();
  std::vector<dps_membership_info> info(Ns.size());
  std::vector<Failure> errors(Ns.size(), Failure{0, ""});
  run_pool(c.jobs, Ns.size(), [&](std::size_t i) {
    const dps_status s = dps_membership(rho.p, Ns[i], ppt ? 1 : 0, &o, &info[i], nullptr);
    if (s != DPS_OK) errors[i] = {s, dps_last_error()};
  });
  for (const auto& e : errors)
    if (e.code != 0) throw e;
  nlohmann::ordered_json j;
  static const char* names[] = {"feasible", "infeasible", "undecided"};
  for (std::size_t i = 0; i < Ns.size(); ++i) j[std::to_string(Ns[i])] = names[info[i].verdict];
  Output out(c.out_path);
  out.stream() << j.dump() << "\n";
  return 0;
}

int cmd_bounds(const Common& c, const std::string& dA_range, const std::string& dB_range, const std::string& range,
               double delta) {
  const auto dAs = parse_range(dA_range), dBs = parse_range(dB_range), Ns = parse_range(range);
  if (delta != 0 && !(delta > 0 && delta < 2)) input_error("--delta must lie in (0,2)");
  Output out(c.out_path);
  auto& os = out.stream();
  os << "dA,dB,N,gN,pc_sym,pc_ppt,R_sym,R_ppt,dtr_sym,dtr_ppt";
  if (delta > 0) os << ",delta,N_req_sym,N_req_ppt,log_ops_sym,log_ops_ppt";
  os << "\n";
  char buf[512];
  for (int dA : dAs)
    for (int dB : dBs) {
      if (dB < 2) input_error("--dB must be at least 2");
      dps_complexity cx{};
      if (delta > 0) check(dps_complexity_get(dA, dB, delta, &cx));
      for (int N : Ns) {
        dps_bound_report r{};
        check(dps_bound_report_get(dA, dB, N, &r));
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g", dA, dB, N, r.g_N,
                      r.p_c_sym, r.p_c_ppt, r.robustness_sym, r.robustness_ppt, r.dist_trace_sym, r.dist_trace_ppt);
        os << buf;
        if (delta > 0) {
          std::snprintf(buf, sizeof buf, ",%.17g,%d,%d,%.17g,%.17g", delta, cx.N_sym, cx.N_ppt, cx.sym_ops, cx.ppt_ops);
          os << buf;
        }
        os << "\n";
      }
    }
  return 0;
}

int cmd_complexity(const Common& c, const std::string& dA_range, const std::string& dB_range,
                   const std::vector<double>& deltas) {
  const auto dAs = parse_range(dA_range), dBs = parse_range(dB_range);
  Output out(c.out_path);
  auto& os = out.stream();
  os << "dA,dB,delta,N_sym,N_ppt,log_ops_sym,log_ops_ppt,log_simplified_sym,log_simplified_ppt\n";
  char buf[512];
  for (int dA : dAs)
    for (int dB : dBs)
      for (double delta : deltas) {
        if (!(delta > 0 && delta < 2)) input_error("--delta must lie in (0,2)");
        dps_complexity cx{};
        check(dps_complexity_get(dA, dB, delta, &cx));
        std::snprintf(buf, sizeof buf, "%d,%d,%.17g,%d,%d,%.17g,%.17g,%.17g,%.17g\n", dA, dB, delta, cx.N_sym,
                      cx.N_ppt, cx.sym_ops, cx.ppt_ops, cx.sym_simplified, cx.ppt_simplified);
        os << buf;
      }
  return 0;
}

// Shared driver for the three application sweeps.
int sweep(const Common& c, const std::string& range, bool want_sym, bool want_ppt,
          const std::function<dps_status(int, int, const dps_options*, dps_bound_pair*)>& point) {
  const auto Ns = parse_range(range);
  if (!want_sym && !want_ppt) want_sym = want_ppt = true;
  struct Row {
    int N, ppt;
    dps_bound_pair b{};
    dps_status s = DPS_OK;
    std::string err;
    double secs = 0;
  };
  std::vector<Row> rows;
  for (int N : Ns) {
    if (want_sym) rows.push_back({N, 0, {}, DPS_OK, {}, 0});
    if (want_ppt) rows.push_back({N, 1, {}, DPS_OK, {}, 0});
  }
  const dps_options o = c.options();
  run_pool(c.jobs, rows.size(), [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    rows[i].s = point(rows[i].N, rows[i].ppt, &o, &rows[i].b);
    if (rows[i].s != DPS_OK) rows[i].err = dps_last_error();
    rows[i].secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  });

  Output out(c.out_path);
  auto& os = out.stream();
  os << "N,ppt,upper,lower,status,wall_time_s\n";
  int code = 0;
  char buf[256];
  for (const auto& r : rows) {
    if (r.s == DPS_OK) {
      std::snprintf(buf, sizeof buf, "%d,%d,%.10f,%.10f,%s,%.3f\n", r.N, r.ppt, r.b.upper, r.b.lower,
                    dps_solver_status_name(r.b.solver_status), r.secs);
    } else {
      const char* what = r.s == DPS_ERR_BUDGET ? "budget_exceeded" : r.s == DPS_ERR_SOLVER ? "solver_failure" : "error";
      std::snprintf(buf, sizeof buf, "%d,%d,nan,nan,%s,%.3f\n", r.N, r.ppt, what, r.secs);
      std::cerr << "N=" << r.N << " ppt=" << r.ppt << ": " << r.err << "\n";
      if (r.s == DPS_ERR_INPUT) throw Failure{r.s, r.err};
      code = std::max(code, static_cast<int>(r.s));
    }
    os << buf;
  }
  return code;
}

int cmd_fidelity(const Common& c, const std::string& range, bool sym, bool ppt, double bb84, double qutrit,
                 const std::string& problem_path) {
  const int sources = (bb84 >= 0) + (qutrit >= 0) + !problem_path.empty();
  if (sources != 1) input_error("give exactly one of --bb84, --qutrit-grid, --problem");
  ProblemPtr p;
  if (bb84 >= 0) check(dps_problem_bb84(bb84, &p.p));
  else if (qutrit >= 0) check(dps_problem_qutrit_grid(qutrit, &p.p));
  else check(dps_problem_from_json(read_file(problem_path).c_str(), &p.p));
  return sweep(c, range, sym, ppt, [&](int N, int k, const dps_options* o, dps_bound_pair* b) {
    return dps_fidelity_bounds(p.p, N, k, o, b);
  });
}

int cmd_purity(const Common& c, const std::string& range, bool sym, bool ppt, const std::string& channel,
               const std::string& choi_path) {
  OperatorPtr choi;
  if (!choi_path.empty()) {
    check(dps_operator_from_json(read_file(choi_path).c_str(), choi.out()));
  } else if (channel == "identity-qubit") {
    check(dps_choi_identity(2, choi.out()));
  } else if (channel.rfind("depolarizing:", 0) == 0) {
    double prob = 0;
    try {
      prob = std::stod(channel.substr(13));
    } catch (const std::logic_error&) {
      input_error("bad depolarizing parameter in '" + channel + "'");
    }
    check(dps_choi_depolarizing(2, prob, choi.out()));
  } else {
    input_error("unknown channel '" + channel + "' (identity-qubit, depolarizing:p, or --choi file)");
  }
  return sweep(c, range, sym, ppt, [&](int N, int k, const dps_options* o, dps_bound_pair* b) {
    return dps_purity_bounds(choi.p, N, k, o, b);
  });
}

int cmd_geometric(const Common& c, const std::string& range, bool sym, bool ppt, const std::string& state,
                  const std::string& vector_path) {
  std::vector<int> dims = {2, 2, 2};
  std::vector<double> re(8), im(8);
  if (!vector_path.empty()) {
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(read_file(vector_path));
      dims = j.at("dims").get<std::vector<int>>();
      re = j.at("re").get<std::vector<double>>();
      im = j.contains("im") ? j.at("im").get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    } catch (const nlohmann::json::exception& e) {
      input_error(std::string("bad state file: ") + e.what());
    }
    if (dims.size() != 3) input_error("state must have three factors");
    const long long n = 1LL * dims[0] * dims[1] * dims[2];
    if (static_cast<long long>(re.size()) != n || static_cast<long long>(im.size()) != n)
      input_error("state length does not match dims");
  } else {
    check(dps_named_state(state.c_str(), re.data(), im.data()));
  }
  return sweep(c, range, sym, ppt, [&](int N, int k, const dps_options* o, dps_bound_pair* b) {
    return dps_geometric_bounds(dims.data(), re.data(), im.data(), N, k, o, b);
  });
}

int cmd_certify(const Common& c, const std::string& input, int max_N, double delta, int random_rank,
                const std::vector<int>& dims) {
  OperatorPtr rho;
  load_state(input, random_rank, dims, c.seed, rho);
  const dps_options o = c.options();
  int verdict = 0;
  char* json = nullptr;
  check(dps_certify(rho.p, max_N, delta, &o, &verdict, &json));
  Output out(c.out_path);
  out.stream() << take(json) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpskit: symmetric-extension separability tests and bounds"};
  app.require_subcommand(1);
  Common c;
  if (const char* env = std::getenv("DPSKIT_BUDGET_DIM")) {
    try {
      c.budget = std::stoll(env);
    } catch (const std::logic_error&) {
      std::cerr << "error: DPSKIT_BUDGET_DIM is not an integer\n";
      return kExitInput;
    }
  }
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out,-o", c.out_path, "Write output here instead of stdout");
    sub->add_option("--tol", c.tol, "Solver tolerance")->capture_default_str();
    sub->add_option("--max-iter", c.max_iter, "Solver iteration cap")->capture_default_str();
    sub->add_option("--budget", c.budget, "Cap on dA*sym_dim(dB,N) (overrides DPSKIT_BUDGET_DIM)");
    sub->add_option("--log", c.log_path, "Solver iteration log (CSV)");
    sub->add_option("--jobs,-j", c.jobs, "Worker threads for sweeps")->capture_default_str();
    sub->add_option("--seed", c.seed, "Seed for --random inputs")->capture_default_str();
    sub->add_flag("--all-cuts", c.all_cuts, "Impose PPT on every cut of the extension");
  };

  std::string input, range = "2", dA_range = "2", dB_range = "2", channel = "identity-qubit", state = "ghz";
  std::string problem_path, choi_path, vector_path;
  bool ppt = false, sym = false;
  double delta = 0, bb84 = -1, qutrit = -1;
  int max_N = 3, random_rank = 0;
  std::vector<int> dims = {2, 2};
  std::vector<double> deltas;

  auto* mem = app.add_subcommand("membership", "Decide membership in the extension hierarchy for N in a range");
  add_common(mem);
  mem->add_option("input", input, "Operator JSON file");
  mem->add_option("--N", range, "N or lo..hi")->capture_default_str();
  mem->add_flag("--ppt", ppt, "Add the PPT condition");
  mem->add_option("--random", random_rank, "Use a random state of this rank instead of a file");
  mem->add_option("--dims", dims, "Factor dimensions for --random")->delimiter(',');

  auto* bnd = app.add_subcommand("bounds", "Analytic noise, robustness and distance bounds");
  add_common(bnd);
  bnd->add_option("--dA", dA_range, "dA or lo..hi")->capture_default_str();
  bnd->add_option("--dB", dB_range, "dB or lo..hi")->capture_default_str();
  bnd->add_option("--N", range, "N or lo..hi")->capture_default_str();
  bnd->add_option("--delta", delta, "Add required-N and complexity columns for this accuracy");

  auto* cpx = app.add_subcommand("complexity", "Operation-count estimates for the weak membership problem");
  add_common(cpx);
  cpx->add_option("--dA", dA_range, "dA or lo..hi")->capture_default_str();
  cpx->add_option("--dB", dB_range, "dB or lo..hi")->capture_default_str();
  cpx->add_option("--delta", deltas, "Accuracy values")->required()->delimiter(',');

  auto* fid = app.add_subcommand("fidelity", "State-estimation fidelity bounds over N");
  add_common(fid);
  fid->add_option("--N", range, "N or lo..hi")->capture_default_str();
  fid->add_flag("--ppt", ppt, "Only the PPT relaxation");
  fid->add_flag("--sym", sym, "Only the plain relaxation");
  fid->add_option("--bb84", bb84, "Two-copy BB84 problem with this depolarizing noise");
  fid->add_option("--qutrit-grid", qutrit, "Qutrit grid problem with this depolarizing noise");
  fid->add_option("--problem", problem_path, "Estimation problem JSON file");

  auto* pur = app.add_subcommand("purity", "Maximal output purity bounds over N");
  add_common(pur);
  pur->add_option("--N", range, "N or lo..hi")->capture_default_str();
  pur->add_flag("--ppt", ppt, "Only the PPT relaxation");
  pur->add_flag("--sym", sym, "Only the plain relaxation");
  pur->add_option("--channel", channel, "identity-qubit or depolarizing:p")->capture_default_str();
  pur->add_option("--choi", choi_path, "Choi operator JSON file");

  auto* geo = app.add_subcommand("geometric", "Geometric entanglement bounds over N");
  add_common(geo);
  geo->add_option("--N", range, "N or lo..hi")->capture_default_str();
  geo->add_flag("--ppt", ppt, "Only the PPT relaxation");
  geo->add_flag("--sym", sym, "Only the plain relaxation");
  geo->add_option("--state", state, "ghz, w or product")->capture_default_str();
  geo->add_option("--vector", vector_path, "Tripartite pure state JSON {dims, re, im}");

  auto* cer = app.add_subcommand("certify", "Entangled via witness, separable via rank loop, or undecided");
  add_common(cer);
  cer->add_option("input", input, "Operator JSON file");
  cer->add_option("--maxN", max_N, "Largest extension size")->capture_default_str();
  cer->add_option("--delta", delta, "Rank-heuristic regularization");
  cer->add_option("--random", random_rank, "Use a random state of this rank instead of a file");
  cer->add_option("--dims", dims, "Factor dimensions for --random")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInput;
  }

  try {
    if (*mem) return cmd_membership(c, input, range, ppt, random_rank, dims);
    if (*bnd) return cmd_bounds(c, dA_range, dB_range, range, delta);
    if (*cpx) return cmd_complexity(c, dA_range, dB_range, deltas);
    if (*fid) return cmd_fidelity(c, range, sym, ppt, bb84, qutrit, problem_path);
    if (*pur) return cmd_purity(c, range, sym, ppt, channel, choi_path);
    if (*geo) return cmd_geometric(c, range, sym, ppt, state, vector_path);
    if (*cer) return cmd_certify(c, input, max_N, delta > 0 ? delta : 1e-3, random_rank, dims);
  } catch (const Failure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return 0;
}
