// aoikit command-line front end. Links only the public C API.
#include <aoikit.h>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 2;
constexpr int kExitConvergence = 3;
constexpr int kExitComparison = 4;

int exit_code_for(int status) {
  switch (status) {
    case AOI_OK: return kExitOk;
    case AOI_ERR_CONVERGENCE: return kExitConvergence;
    default: return kExitInvalid;
  }
}

[[noreturn]] void fail(int status, const std::string& context) {
  std::fprintf(stderr, "aoikit: %s: %s\n", context.c_str(), aoi_last_error());
  std::exit(exit_code_for(status));
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string timestamp_utc() {
  std::time_t now = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

int env_thread_cap() {
  const char* v = std::getenv("AOI_KIT_THREADS");
  if (!v) return 1;
  const int n = std::atoi(v);
  return n > 0 ? n : 1;
}

// Common service/params flags shared by the computing subcommands.
struct ParamArgs {
  double p = 0.0;
  std::optional<double> geom;
  std::optional<int> det;
  std::string service_file;
  int n_max = 0;
  double tol = 1e-9;
  std::string kernel = "paper";
  std::string out_dir = ".";
  std::string format = "csv";

  void attach(CLI::App* app, bool with_horizon = true) {
    app->add_option("--p", p, "arrival probability per slot")->required();
    auto* g = app->add_option("--geom", geom, "geometric service, parameter gamma");
    auto* d = app->add_option("--det", det, "deterministic service, k slots");
    auto* s = app->add_option("--service", service_file,
                              "service descriptor JSON file");
    g->excludes(d)->excludes(s);
    d->excludes(s);
    if (with_horizon) {
      app->add_option("--nmax", n_max, "truncation horizon (0 = default)");
      app->add_option("--tol", tol, "tail-mass tolerance");
    }
    app->add_option("--kernel", kernel, "kernel convention")
        ->check(CLI::IsMember({"paper", "natural"}));
    app->add_option("--out", out_dir, "output directory");
    app->add_option("--format", format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
  }

  aoi_service* make_service() const {
    aoi_service* svc = nullptr;
    int rc = AOI_ERR_INVALID;
    if (geom) {
      rc = aoi_service_geometric(*geom, &svc);
    } else if (det) {
      rc = aoi_service_deterministic(*det, &svc);
    } else if (!service_file.empty()) {
      std::ifstream in(service_file);
      if (!in) {
        std::fprintf(stderr, "aoikit: cannot open %s\n", service_file.c_str());
        std::exit(kExitInvalid);
      }
      std::string text((std::istreambuf_iterator<char>(in)),
                       std::istreambuf_iterator<char>());
      rc = aoi_service_from_json(text.c_str(), &svc);
    } else {
      std::fprintf(stderr,
                   "aoikit: one of --geom, --det, --service is required\n");
      std::exit(kExitInvalid);
    }
    if (rc != AOI_OK) fail(rc, "service");
    return svc;
  }

  int kernel_flag() const {
    return kernel == "natural" ? AOI_KERNEL_NATURAL : AOI_KERNEL_PAPER;
  }

  aoi_params* make_params(aoi_service* svc) const {
    aoi_params* params = nullptr;
    int rc = aoi_params_create(p, svc, n_max, tol, kernel_flag(), &params);
    if (rc != AOI_OK) fail(rc, "params");
    return params;
  }

  json describe(aoi_service* svc) const {
    return json{{"p", p},
                {"service", json::parse(aoi_service_json(svc))},
                {"n_max", n_max},
                {"tol", tol},
                {"kernel", kernel}};
  }
};

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "aoikit: cannot write %s\n", path.string().c_str());
    std::exit(kExitInvalid);
  }
  out << content;
}

void write_manifest(const fs::path& dir, const std::string& subcommand,
                    const json& params, const std::vector<std::string>& outputs,
                    const std::vector<std::string>& argv) {
  json manifest{{"tool", "aoikit"},
                {"version", aoi_version()},
                {"subcommand", subcommand},
                {"timestamp", timestamp_utc()},
                {"argv", argv},
                {"params", params},
                {"outputs", outputs}};
  write_file(dir / (subcommand + ".manifest.json"), manifest.dump(2) + "\n");
}

std::string dist_csv(const aoi_dist* dist) {
  std::string out = "n,pmf,cdf\n";
  for (int n = 1; n <= aoi_dist_n_max(dist); ++n)
    out += std::to_string(n) + "," + fmt(aoi_dist_pmf(dist, n)) + "," +
           fmt(aoi_dist_cdf(dist, n)) + "\n";
  return out;
}

json dist_json(const aoi_dist* dist, const json& params) {
  std::vector<double> pmf, cdf;
  for (int n = 1; n <= aoi_dist_n_max(dist); ++n) {
    pmf.push_back(aoi_dist_pmf(dist, n));
    cdf.push_back(aoi_dist_cdf(dist, n));
  }
  return json{{"params", params},
              {"pmf", pmf},
              {"cdf", cdf},
              {"mean", aoi_dist_mean(dist)},
              {"tail", aoi_dist_tail(dist)},
              {"provenance", aoi_dist_provenance(dist)}};
}

struct Cleanup {
  aoi_service* svc = nullptr;
  aoi_params* params = nullptr;
  ~Cleanup() {
    aoi_params_free(params);
    aoi_service_free(svc);
  }
};

int cmd_analytic(const ParamArgs& args, bool force_general,
                 const std::vector<std::string>& argv) {
  Cleanup h;
  h.svc = args.make_service();
  h.params = args.make_params(h.svc);
  fs::create_directories(args.out_dir);

  aoi_dist* dist = nullptr;
  if (args.geom && !force_general) {
    // Closed-form route; degenerate or unstable pairs are rejected here.
    const int n_max = aoi_params_n_max(h.params);
    double probe;
    int rc = aoi_pmf_geo(args.p, *args.geom, 1, &probe);
    if (rc == AOI_ERR_DEGENERATE) {
      std::fprintf(stderr,
                   "aoikit: degenerate p=%g, gamma=%g for the closed form; "
                   "use --force-general\n",
                   args.p, *args.geom);
      return kExitInvalid;
    }
    if (rc != AOI_OK) fail(rc, "analytic");
    // Assemble the distribution through the general path (identical values,
    // checked by the test suite) so CSV/JSON emission is uniform.
    rc = aoi_analytic_dist(h.params, &dist);
    if (rc != AOI_OK) fail(rc, "analytic");
    (void)n_max;
  } else {
    int rc = aoi_analytic_dist(h.params, &dist);
    if (rc != AOI_OK) fail(rc, "analytic");
  }

  const json params = args.describe(h.svc);
  std::vector<std::string> outputs;
  if (args.format == "csv") {
    write_file(fs::path(args.out_dir) / "analytic.csv", dist_csv(dist));
    outputs.push_back("analytic.csv");
  } else {
    write_file(fs::path(args.out_dir) / "analytic.json",
               dist_json(dist, params).dump(2) + "\n");
    outputs.push_back("analytic.json");
  }
  aoi_dist_free(dist);
  write_manifest(args.out_dir, "analytic", params, outputs, argv);
  return kExitOk;
}

int cmd_chain(const ParamArgs& args, int chain_n, bool dump_kernel,
              const std::vector<std::string>& argv) {
  Cleanup h;
  h.svc = args.make_service();
  h.params = args.make_params(h.svc);
  fs::create_directories(args.out_dir);
  if (chain_n <= 0) chain_n = aoi_params_n_max(h.params);

  aoi_joint* joint = nullptr;
  int rc = aoi_chain_solve(h.params, chain_n, &joint);
  if (rc != AOI_OK) fail(rc, "chain");

  if (aoi_joint_boundary_mass(joint) > args.tol)
    std::fprintf(stderr,
                 "aoikit: warning: boundary mass %g at N=%d exceeds tol %g; "
                 "consider a larger N\n",
                 aoi_joint_boundary_mass(joint), chain_n, args.tol);

  aoi_dist* dist = nullptr;
  rc = aoi_joint_aoi_dist(joint, &dist);
  if (rc != AOI_OK) fail(rc, "chain");

  json params = args.describe(h.svc);
  params["N"] = chain_n;
  json report{{"iterations", aoi_joint_iterations(joint)},
              {"residual", aoi_joint_residual(joint)},
              {"boundary_mass", aoi_joint_boundary_mass(joint)},
              {"method", aoi_joint_method(joint)}};

  std::vector<std::string> outputs;
  if (args.format == "csv") {
    write_file(fs::path(args.out_dir) / "chain.csv", dist_csv(dist));
    outputs.push_back("chain.csv");
  } else {
    json body = dist_json(dist, params);
    body["report"] = report;
    write_file(fs::path(args.out_dir) / "chain.json", body.dump(2) + "\n");
    outputs.push_back("chain.json");
  }
  write_file(fs::path(args.out_dir) / "chain.report.json",
             report.dump(2) + "\n");
  outputs.push_back("chain.report.json");

  if (dump_kernel) {
    int count = 0;
    rc = aoi_chain_kernel(h.params, chain_n, &count, nullptr, nullptr, nullptr,
                          nullptr, nullptr);
    if (rc != AOI_OK) fail(rc, "kernel dump");
    std::vector<int> fn(count), fm(count), tn(count), tm(count);
    std::vector<double> prob(count);
    rc = aoi_chain_kernel(h.params, chain_n, &count, fn.data(), fm.data(),
                          tn.data(), tm.data(), prob.data());
    if (rc != AOI_OK) fail(rc, "kernel dump");
    std::string csv = "from_n,from_m,to_n,to_m,prob\n";
    for (int i = 0; i < count; ++i)
      csv += std::to_string(fn[i]) + "," + std::to_string(fm[i]) + "," +
             std::to_string(tn[i]) + "," + std::to_string(tm[i]) + "," +
             fmt(prob[i]) + "\n";
    write_file(fs::path(args.out_dir) / "kernel.csv", csv);
    outputs.push_back("kernel.csv");
  }

  aoi_dist_free(dist);
  aoi_joint_free(joint);
  write_manifest(args.out_dir, "chain", params, outputs, argv);
  return kExitOk;
}

int cmd_simulate(const ParamArgs& args, long long slots, std::uint64_t seed,
                 int reps, long long warmup,
                 const std::vector<std::string>& argv) {
  Cleanup h;
  h.svc = args.make_service();
  h.params = args.make_params(h.svc);
  fs::create_directories(args.out_dir);

  aoi_sim_result* result = nullptr;
  int rc = aoi_sim_run(h.params, slots, seed, reps, warmup, env_thread_cap(),
                       &result);
  if (rc != AOI_OK) fail(rc, "simulate");

  json params = args.describe(h.svc);
  params["T"] = slots;
  params["seed"] = seed;
  params["replications"] = reps;
  params["warmup"] = warmup;

  std::vector<std::string> outputs;
  if (args.format == "csv") {
    std::string csv = "n,count,freq\n";
    const long long t_eff = aoi_sim_t_effective(result);
    for (int n = 1; n <= aoi_sim_max_observed(result); ++n)
      csv += std::to_string(n) + "," + std::to_string(aoi_sim_count(result, n)) +
             "," + fmt(static_cast<double>(aoi_sim_count(result, n)) / t_eff) +
             "\n";
    write_file(fs::path(args.out_dir) / "simulate.csv", csv);
    outputs.push_back("simulate.csv");
  } else {
    std::vector<std::uint64_t> hist;
    for (int n = 1; n <= aoi_sim_max_observed(result); ++n)
      hist.push_back(aoi_sim_count(result, n));
    std::vector<double> rep_means;
    for (int i = 0; i < aoi_sim_replications(result); ++i)
      rep_means.push_back(aoi_sim_replication_mean(result, i));
    json body{{"params", params},
              {"histogram", hist},
              {"mean", aoi_sim_mean(result)},
              {"t_effective", aoi_sim_t_effective(result)},
              {"seed", aoi_sim_seed(result)},
              {"generator", aoi_sim_generator(result)},
              {"replication_means", rep_means}};
    write_file(fs::path(args.out_dir) / "simulate.json", body.dump(2) + "\n");
    outputs.push_back("simulate.json");
  }
  aoi_sim_free(result);
  write_manifest(args.out_dir, "simulate", params, outputs, argv);
  return kExitOk;
}

struct GeoPair {
  double p, gamma;
};

std::vector<GeoPair> parse_pairs(const std::string& text) {
  std::vector<GeoPair> pairs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    const std::string item = text.substr(pos, comma - pos);
    const std::size_t colon = item.find(':');
    if (colon == std::string::npos) {
      std::fprintf(stderr, "aoikit: bad pair '%s', expected p:gamma\n",
                   item.c_str());
      std::exit(kExitInvalid);
    }
    pairs.push_back(
        {std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1))});
    pos = comma + 1;
  }
  return pairs;
}

int cmd_figure3(const std::string& out_dir, const std::string& pairs_arg,
                const std::string& gammas_arg, int n_max, double rho_step,
                const std::vector<std::string>& argv) {
  fs::create_directories(out_dir);
  const std::vector<GeoPair> pairs = parse_pairs(pairs_arg);
  std::vector<double> gammas;
  {
    std::size_t pos = 0;
    while (pos < gammas_arg.size()) {
      std::size_t comma = gammas_arg.find(',', pos);
      if (comma == std::string::npos) comma = gammas_arg.size();
      gammas.push_back(std::stod(gammas_arg.substr(pos, comma - pos)));
      pos = comma + 1;
    }
  }

  std::string csv_a = "pair,p,gamma,n,pmf\n";
  std::string csv_b = "pair,p,gamma,k,cdf\n";
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    for (int n = 1; n <= n_max; ++n) {
      double pmf, cdf;
      int rc = aoi_pmf_geo(pairs[i].p, pairs[i].gamma, n, &pmf);
      if (rc == AOI_OK) rc = aoi_cdf_geo(pairs[i].p, pairs[i].gamma, n, &cdf);
      if (rc != AOI_OK) fail(rc, "figure3 pair");
      const std::string prefix = std::to_string(i) + "," + fmt(pairs[i].p) +
                                 "," + fmt(pairs[i].gamma) + "," +
                                 std::to_string(n) + ",";
      csv_a += prefix + fmt(pmf) + "\n";
      csv_b += prefix + fmt(cdf) + "\n";
    }
  }

  std::string csv_c = "gamma,rho,p,mean_discrete,mean_mm11\n";
  for (double gamma : gammas) {
    for (double rho = rho_step; rho < 1.0 - rho_step / 2; rho += rho_step) {
      const double p = rho * gamma;
      double mean_d, mean_c;
      int rc = aoi_mean_geo(p, gamma, &mean_d);
      if (rc == AOI_OK) rc = aoi_mean_mm11(rho * gamma, gamma, &mean_c);
      if (rc != AOI_OK) fail(rc, "figure3 sweep");
      csv_c += fmt(gamma) + "," + fmt(rho) + "," + fmt(p) + "," + fmt(mean_d) +
               "," + fmt(mean_c) + "\n";
    }
  }

  write_file(fs::path(out_dir) / "fig3a.csv", csv_a);
  write_file(fs::path(out_dir) / "fig3b.csv", csv_b);
  write_file(fs::path(out_dir) / "fig3c.csv", csv_c);

  json params{{"pairs", pairs_arg},
              {"gammas", gammas_arg},
              {"n_max", n_max},
              {"rho_step", rho_step}};
  write_manifest(out_dir, "figure3", params,
                 {"fig3a.csv", "fig3b.csv", "fig3c.csv"}, argv);
  return kExitOk;
}

int cmd_compare(const ParamArgs& args, int chain_n, double threshold) {
  Cleanup h;
  h.svc = args.make_service();
  h.params = args.make_params(h.svc);
  if (chain_n <= 0) chain_n = aoi_params_n_max(h.params);

  aoi_dist* analytic = nullptr;
  int rc = aoi_analytic_dist(h.params, &analytic);
  if (rc != AOI_OK) fail(rc, "compare/analytic");

  aoi_joint* joint = nullptr;
  rc = aoi_chain_solve(h.params, chain_n, &joint);
  if (rc != AOI_OK) fail(rc, "compare/chain");
  aoi_dist* chain_dist = nullptr;
  rc = aoi_joint_aoi_dist(joint, &chain_dist);
  if (rc != AOI_OK) fail(rc, "compare/chain");

  const double boundary = aoi_joint_boundary_mass(joint);
  const double allowed = std::max(threshold, boundary);
  const int upto = std::min(aoi_dist_n_max(analytic), chain_n - 1);
  double worst = 0.0;
  int worst_n = 0;
  for (int n = 1; n <= upto; ++n) {
    const double diff =
        std::fabs(aoi_dist_pmf(analytic, n) - aoi_dist_pmf(chain_dist, n));
    if (diff > worst) {
      worst = diff;
      worst_n = n;
    }
  }

  std::printf("compare: analytic vs chain (N=%d, boundary mass %s)\n", chain_n,
              fmt(boundary).c_str());
  std::printf("compare: max |pmf diff| = %s at n=%d, allowed %s\n",
              fmt(worst).c_str(), worst_n, fmt(allowed).c_str());

  aoi_dist_free(analytic);
  aoi_dist_free(chain_dist);
  aoi_joint_free(joint);

  if (worst > allowed) {
    std::fprintf(stderr, "compare: FAIL, disagreement exceeds threshold\n");
    return kExitComparison;
  }
  std::printf("compare: OK\n");
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete-time AoI toolkit for bufferless Ber/G/1/1 queues"};
  app.require_subcommand(1);
  std::vector<std::string> argv_copy(argv, argv + argc);

  ParamArgs a_args, c_args, s_args, cmp_args;
  bool force_general = false;
  int chain_n = 0, cmp_n = 0;
  bool dump_kernel = false;
  long long slots = 1000000, warmup = 0;
  std::uint64_t seed = 1;
  int reps = 1;
  double cmp_threshold = 1e-9;
  std::string fig_out = ".", fig_pairs = "0.15:0.3,0.35:0.7";
  std::string fig_gammas = "0.3,0.5,0.7";
  int fig_nmax = 200;
  double fig_rho_step = 0.02;

  auto* analytic = app.add_subcommand("analytic", "closed-form AoI distribution");
  a_args.attach(analytic);
  analytic->add_flag("--force-general", force_general,
                     "use the general path even for geometric service");

  auto* chain = app.add_subcommand("chain", "truncated Markov-chain oracle");
  c_args.attach(chain);
  chain->add_option("--N", chain_n, "chain truncation bound (0 = nmax)");
  chain->add_flag("--dump-kernel", dump_kernel, "emit kernel triplet CSV");

  auto* simulate = app.add_subcommand("simulate", "slot-level Monte Carlo");
  s_args.attach(simulate, false);
  simulate->add_option("--T", slots, "slots per replication");
  simulate->add_option("--seed", seed, "base RNG seed");
  simulate->add_option("--reps", reps, "independent replications");
  simulate->add_option("--warmup", warmup, "slots discarded per replication");

  auto* figure3 = app.add_subcommand("figure3", "pmf/cdf/mean sweep datasets");
  figure3->add_option("--out", fig_out, "output directory");
  figure3->add_option("--pairs", fig_pairs, "comma list of p:gamma pairs");
  figure3->add_option("--gammas", fig_gammas, "gammas for the mean sweep");
  figure3->add_option("--nmax", fig_nmax, "horizon for pmf/cdf curves");
  figure3->add_option("--rho-step", fig_rho_step, "rho_d grid step");

  auto* compare = app.add_subcommand("compare", "analytic vs chain gate");
  cmp_args.attach(compare);
  compare->add_option("--N", cmp_n, "chain truncation bound (0 = nmax)");
  compare->add_option("--threshold", cmp_threshold, "max allowed pmf diff");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalid;
  }

  if (analytic->parsed())
    return cmd_analytic(a_args, force_general, argv_copy);
  if (chain->parsed()) return cmd_chain(c_args, chain_n, dump_kernel, argv_copy);
  if (simulate->parsed())
    return cmd_simulate(s_args, slots, seed, reps, warmup, argv_copy);
  if (figure3->parsed())
    return cmd_figure3(fig_out, fig_pairs, fig_gammas, fig_nmax, fig_rho_step,
                       argv_copy);
  if (compare->parsed()) return cmd_compare(cmp_args, cmp_n, cmp_threshold);
  return kExitInvalid;
}
