#include "fracrd/app.hpp"

#include "fracrd/acceptance.hpp"
#include "fracrd/errors.hpp"
#include "fracrd/mlf.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

namespace fracrd {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

void write_norms_csv(const fs::path& path, const RunReport& rep) {
  std::ofstream os(path);
  os << "t,L1,L2,Linf,mass,envelope\n" << std::setprecision(17);
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    const Norms& n = rep.norms[i];
    os << rep.times[i] << ',' << n.l1 << ',' << n.l2 << ',' << n.linf << ',' << n.mass << ',';
    if (i < rep.envelope.size())
      os << rep.envelope[i];
    else
      os << "nan";
    os << '\n';
  }
}

std::string config_key_of(const std::exception& e) {
  if (const auto* c = dynamic_cast<const ConfigError*>(&e))
    return c->key();
  return "";
}

} // namespace

RunOutcome execute_run(const RunConfig& cfg, const std::string& outdir) {
  RunOutcome out;
  RunReport rep;
  rep.scheme = scheme_name(cfg.run.scheme);
  json kernel_json = nullptr;
  json cgn_json = nullptr;
  std::string error_key;

  std::error_code ec;
  fs::create_directories(outdir, ec);
  try {
    if (ec)
      throw ConfigError("run.output", "cannot create output directory '" + outdir + "'");
    cfg.validate();
    BasisPtr basis;
    try {
      basis = build_basis(cfg.domain, cfg.n_modes);
    } catch (const ResolutionError& e) {
      throw ConfigError("domain.n_modes", e.what());
    }
    KernelSpec J = make_kernel(cfg);
    const ValidationReport vr = J.validate(cfg.domain);
    kernel_json = json::parse(vr.to_json());
    if (!vr.pass() && cfg.run.scheme != Scheme::pme)
      throw ConfigError("kernel", "kernel fails its checks: " + vr.to_json());

    const SpectralField u0 = project(make_initial(cfg, basis), basis);
    AnalysisConstants consts;
    consts.eta = cfg.kernel.eta;
    consts.C_GN = cfg.c_gn ? *cfg.c_gn : gn_probe(basis, 200, cfg.seed);
    cgn_json = {{"value", consts.C_GN}, {"source", cfg.c_gn ? "config" : "probe"}};

    const RunResult res = run_scheme(u0, cfg.model, J, cfg.run);
    ReportExtras ex;
    ex.blowup = res.blowup;
    ex.scheme = rep.scheme;
    rep = run_report(res.traj, cfg.model, consts, ex);

    write_norms_csv(fs::path(outdir) / "norms.csv", rep);
    std::ofstream cf(fs::path(outdir) / "coeffs_final.csv");
    write_csv(cf, res.traj.back());

    out.exit_code = rep.blowup.detected ? exit_blowup : exit_ok;
    out.status = rep.status;
    out.final_norms = rep.norms.back();
    out.t_final = rep.times.back();
    out.sup_linf = rep.sup_linf;
    out.blowup = rep.blowup.detected;
    out.t_blow = rep.blowup.t_blow_numeric;
    out.envelope_dominated = rep.envelope_dominated;
  } catch (const StepSizeError& e) {
    out.exit_code = exit_failure;
    out.status = "error";
    out.message = std::string(e.what()) + "; suggested run.dt <= " + std::to_string(e.suggested_dt());
    error_key = "run.dt";
  } catch (const ConfigError& e) {
    out.exit_code = exit_failure;
    out.status = "config_error";
    out.message = e.what();
    error_key = e.key();
  } catch (const DomainError& e) {
    out.exit_code = exit_failure;
    out.status = "config_error";
    out.message = e.what();
  } catch (const std::exception& e) {
    out.exit_code = exit_failure;
    out.status = "error";
    out.message = e.what();
  }
  if (out.exit_code == exit_failure) {
    rep.status = out.status;
    rep.message = out.message;
  }

  json j = json::parse(rep.to_json());
  j["exit_code"] = out.exit_code;
  j["error_key"] = error_key.empty() ? json(nullptr) : json(error_key);
  j["kernel"] = kernel_json;
  j["c_gn"] = cgn_json;
  out.report_json = j.dump(2);
  std::ofstream rf(fs::path(outdir) / "report.json");
  rf << out.report_json << '\n';
  return out;
}

int cmd_run(const std::string& config_path, const std::string& outdir_override, std::ostream& out,
            std::ostream& err) {
  RunConfig cfg;
  std::string outdir = outdir_override;
  try {
    cfg = load_config(config_path);
  } catch (const std::exception& e) {
    if (outdir.empty())
      outdir = "fracrd_out";
    err << "fracrd: " << e.what() << '\n';
    // still leave a report behind
    std::error_code ec;
    fs::create_directories(outdir, ec);
    json j = {{"status", "config_error"}, {"message", e.what()}, {"exit_code", exit_failure},
              {"error_key", config_key_of(e).empty() ? json(nullptr) : json(config_key_of(e))}};
    std::ofstream(fs::path(outdir) / "report.json") << j.dump(2) << '\n';
    return exit_failure;
  }
  if (outdir.empty())
    outdir = cfg.output;
  const RunOutcome r = execute_run(cfg, outdir);
  if (r.exit_code == exit_failure)
    err << "fracrd: " << r.message << '\n';
  else
    out << "status=" << r.status << " t_final=" << r.t_final << " sup_linf=" << r.sup_linf
        << " output=" << outdir << '\n';
  return r.exit_code;
}

int cmd_verify(const std::string& suite, std::ostream& out, std::ostream& err) {
  std::vector<std::string> ids;
  try {
    ids = suite_criteria(suite);
  } catch (const DomainError& e) {
    err << "fracrd: " << e.what() << '\n';
    return exit_failure;
  }
  bool all = true;
  for (const auto& id : ids) {
    const CriterionResult r = run_criterion(id);
    out << r.json_line() << std::endl;
    all = all && r.pass;
  }
  return all ? exit_ok : exit_failure;
}

unsigned thread_cap() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACRD_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      n = static_cast<unsigned>(v);
  }
  return n;
}

int cmd_sweep(const std::string& config_path, const std::string& key,
              const std::vector<std::string>& values, const std::string& outdir_override,
              std::ostream& out, std::ostream& err) {
  RunConfig base;
  std::string canon;
  struct Item {
    double value;
    std::string text;
    RunOutcome result;
  };
  std::vector<Item> items;
  try {
    base = load_config(config_path);
    canon = canonical_sweep_key(key);
    if (values.empty())
      throw ConfigError(canon, "empty value list");
    for (const auto& v : values) {
      RunConfig probe = base;
      set_config_value(probe, canon, v);
      probe.validate();
      items.push_back({std::stod(v), v, {}});
    }
  } catch (const std::exception& e) {
    err << "fracrd: " << e.what() << '\n';
    return exit_failure;
  }
  std::stable_sort(items.begin(), items.end(),
                   [](const Item& a, const Item& b) { return a.value < b.value; });

  const fs::path root = outdir_override.empty() ? fs::path(base.output) : fs::path(outdir_override);
  std::vector<std::string> dirs;
  for (std::size_t i = 0; i < items.size(); ++i) {
    std::ostringstream name;
    name << "run_" << std::setw(3) << std::setfill('0') << i;
    dirs.push_back((root / name.str()).string());
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < items.size(); i = next++) {
      RunConfig c = base;
      set_config_value(c, canon, items[i].text);
      items[i].result = execute_run(c, dirs[i]);
    }
  };
  const unsigned n = std::min<unsigned>(thread_cap(), static_cast<unsigned>(items.size()));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < n; ++t)
    pool.emplace_back(worker);
  worker();
  for (auto& t : pool)
    t.join();

  std::ofstream idx(root / "index.csv");
  idx << "value,exit_code,status,t_final,L1,L2,Linf,mass,sup_linf,blowup_detected,t_blow,"
         "envelope_dominated,dir\n"
      << std::setprecision(17);
  bool errors = false;
  for (std::size_t i = 0; i < items.size(); ++i) {
    const RunOutcome& r = items[i].result;
    errors = errors || r.exit_code == exit_failure;
    idx << items[i].value << ',' << r.exit_code << ',' << r.status << ',' << r.t_final << ','
        << r.final_norms.l1 << ',' << r.final_norms.l2 << ',' << r.final_norms.linf << ','
        << r.final_norms.mass << ',' << r.sup_linf << ',' << (r.blowup ? 1 : 0) << ',';
    if (r.t_blow)
      idx << *r.t_blow;
    else
      idx << "nan";
    idx << ',' << (r.envelope_dominated ? 1 : 0) << ',' << fs::path(dirs[i]).filename().string()
        << '\n';
  }
  out << "sweep " << canon << ": " << items.size() << " runs, index " << (root / "index.csv").string()
      << '\n';
  return errors ? exit_failure : exit_ok;
}

int cmd_mlf_eval(double alpha, double beta, double z, std::ostream& out, std::ostream& err) {
  try {
    const double v = mlf(alpha, beta, z);
    out << std::setprecision(17) << v << '\n';
    return exit_ok;
  } catch (const std::exception& e) {
    err << "fracrd: " << e.what() << '\n';
    return exit_failure;
  }
}

int cli_main(int argc, char** argv) {
  CLI::App app{"Time-space fractional nonlocal reaction-diffusion laboratory", "fracrd"};
  app.require_subcommand(1);

  std::string cfg_path, outdir, suite, key;
  std::vector<std::string> values;
  double alpha = 0.0, beta = 0.0, z = 0.0;

  auto* run = app.add_subcommand("run", "Run one configuration");
  run->add_option("config", cfg_path, "INI configuration file")->required();
  run->add_option("--out", outdir, "Output directory (overrides run.output)");

  auto* verify = app.add_subcommand("verify", "Run an acceptance suite");
  verify->add_option("suite", suite, "mlf, gronwall, blowup, decay, pme or all")->required();

  auto* sweep = app.add_subcommand("sweep", "Run a configuration over a list of values");
  sweep->add_option("config", cfg_path, "INI configuration file")->required();
  sweep->add_option("--key", key, "Key to vary, e.g. model.k")->required();
  sweep->add_option("--values", values, "Comma-separated values")->delimiter(',')->required();
  sweep->add_option("--out", outdir, "Root output directory (overrides run.output)");

  auto* mlf_cmd = app.add_subcommand("mlf", "Mittag-Leffler function");
  mlf_cmd->require_subcommand(1);
  auto* eval = mlf_cmd->add_subcommand("eval", "Evaluate E_{alpha,beta}(z)");
  eval->add_option("--alpha", alpha)->required();
  eval->add_option("--beta", beta)->required();
  eval->add_option("--z", z)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? exit_ok : exit_failure;
  }

  if (*run)
    return cmd_run(cfg_path, outdir, std::cout, std::cerr);
  if (*verify)
    return cmd_verify(suite, std::cout, std::cerr);
  if (*sweep)
    return cmd_sweep(cfg_path, key, values, outdir, std::cout, std::cerr);
  if (*eval)
    return cmd_mlf_eval(alpha, beta, z, std::cout, std::cerr);
  return exit_failure;
}

} // namespace fracrd
