// Command-line front end: reproducible design/analysis jobs driven by
// key=value configs, every run echoed into a manifest.
#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "e2rc/config.hpp"
#include "e2rc/degree_optimizer.hpp"
#include "e2rc/e2rc_structure.hpp"
#include "e2rc/exit_engine.hpp"
#include "e2rc/lifted_code.hpp"
#include "e2rc/proto_builder.hpp"
#include "e2rc/proto_de.hpp"
#include "e2rc/simulate.hpp"

namespace fs = std::filesystem;
using namespace e2rc;

namespace {

struct CommonArgs {
  std::string config_path;
  std::vector<std::string> overrides;
  std::string out_dir = "out";
  uint64_t seed = 1;
  int threads = 1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "key=value job file");
  cmd->add_option("-D,--set", args.overrides, "override: key=value (repeatable)");
  cmd->add_option("--out", args.out_dir, "output directory");
  cmd->add_option("--seed", args.seed, "global seed");
  cmd->add_option("--threads", args.threads, "worker cap");
}

JobConfig load_config(const CommonArgs& args) {
  JobConfig cfg =
      args.config_path.empty() ? JobConfig() : JobConfig::from_file(args.config_path);
  for (const std::string& kv : args.overrides) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::runtime_error("override needs key=value: " + kv);
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

void finish_run(const CommonArgs& args, const JobConfig& cfg, const std::string& command) {
  std::ostringstream os;
  os << "command = " << command << "\nseed = " << args.seed << "\nthreads = " << args.threads
     << "\n" << cfg.manifest();
  write_text_file((fs::path(args.out_dir) / "manifest.txt").string(), os.str());
}

DegreeDistribution parse_degree_dist(const std::string& text) {
  if (text.find(':') == std::string::npos) return DegreeDistribution::single(std::stoi(text));
  std::vector<std::pair<int, double>> entries;
  std::string item;
  std::istringstream is(text);
  while (std::getline(is, item, ',')) {
    auto colon = item.find(':');
    if (colon == std::string::npos) throw std::runtime_error("expected degree:fraction");
    entries.emplace_back(std::stoi(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
  }
  return DegreeDistribution(entries);
}

std::string degree_dist_csv(const DegreeDistribution& dist) {
  std::string out = "degree,fraction\n";
  char buf[64];
  for (auto& [d, f] : dist.entries()) {
    std::snprintf(buf, sizeof buf, "%d,%.17g\n", d, f);
    out += buf;
  }
  return out;
}

std::string threshold_report_csv(const std::vector<ThresholdRow>& rows) {
  std::string out = "rate,sigma2,ebn0_db,gap_db\n";
  char buf[128];
  for (auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g,%.10g\n", r.rate, r.sigma2, r.ebn0, r.gap);
    out += buf;
  }
  return out;
}

E2rcStructure structure_from(JobConfig& cfg) {
  int m = int(cfg.get_int("m"));
  DegreeDistribution checks = parse_degree_dist(cfg.get_string("check_degrees"));
  int k_sys = int(cfg.get_int("k_sys", m));
  return E2rcStructure(m, checks, k_sys);
}

StructuredComponent component_from(JobConfig& cfg, uint64_t /*seed*/) {
  std::string structure = cfg.get_string("structure", "e2rc");
  double sigma2;
  if (cfg.has("sigma2")) {
    sigma2 = cfg.get_real("sigma2");
  } else {
    double rate = parse_rational(cfg.get_string("rate"));
    sigma2 = channel_at_ebn0_db(cfg.get_real("ebn0_db"), rate).noise_variance;
  }
  if (structure == "ira") {
    return make_ira_component(int(cfg.get_int("m")), int(cfg.get_int("check_degree", 8)), sigma2);
  }
  if (structure != "e2rc") throw std::runtime_error("structure must be e2rc or ira");
  int m = int(cfg.get_int("m"));
  DegreeDistribution checks = parse_degree_dist(cfg.get_string("check_degrees"));
  std::vector<uint8_t> mask;
  if (cfg.has("mask_rate")) {
    double rate = parse_rational(cfg.get_string("mask_rate"));
    mask = puncture_mask_for_rate(m, int(cfg.get_int("k_sys", m)), rate);
    return make_e2rc_component(m, checks, sigma2, &mask);
  }
  return make_e2rc_component(m, checks, sigma2);
}

int cmd_exit_curve(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  StructuredComponent comp = component_from(cfg, args.seed);
  int points = int(cfg.get_int("points", 10000));
  long mc_samples = cfg.get_int("mc_samples", 0);
  int mc_points = int(cfg.get_int("mc_points", 21));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  ExitCurve curve = structured_exit_curve(comp, points, args.threads);
  write_text_file((fs::path(args.out_dir) / "curve.csv").string(), curve_csv(curve));
  if (mc_samples > 0) {
    ExitCurve mc;
    double mae = 0.0;
    for (int k = 0; k < mc_points; ++k) {
      double ia = double(k) / mc_points;
      double est = monte_carlo_exit(comp, ia, mc_samples, args.seed + k, args.threads);
      mc.ia.push_back(ia);
      mc.ie.push_back(est);
      mae = std::max(mae, std::abs(est - curve.eval(ia)));
    }
    write_text_file((fs::path(args.out_dir) / "mc.csv").string(), curve_csv(mc));
    char buf[64];
    std::snprintf(buf, sizeof buf, "mae = %.8f\n", mae);
    write_text_file((fs::path(args.out_dir) / "mae.txt").string(), buf);
    std::cout << buf;
  }
  finish_run(args, cfg, "exit-curve");
  return 0;
}

std::vector<ThresholdRow> verify_rates(const SemiStructuredSpec& spec,
                                       const std::vector<double>& rates, int grid) {
  std::vector<ThresholdRow> rows;
  for (double r : rates) {
    ChannelParam th = predict_threshold(spec, r, grid);
    rows.push_back({r, th.noise_variance, ebn0_db(th, r), gap_db(th, r)});
  }
  return rows;
}

int cmd_design(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  E2rcStructure structure = structure_from(cfg);
  double target = parse_rational(cfg.get_string("target_rate", "1/2"));
  int d_v_max = int(cfg.get_int("d_v_max"));
  int grid = int(cfg.get_int("grid", 10000));
  double gap_cap = cfg.get_real("gap_cap_db", 2.0);
  int min_degree = int(cfg.get_int("min_degree", 3));
  auto rates = cfg.get_rationals("rates", cfg.get_string("target_rate", "1/2"));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  DesignResult d = design_at_rate(target, structure, d_v_max, grid, gap_cap, min_degree);
  write_text_file((fs::path(args.out_dir) / "lambda.csv").string(), degree_dist_csv(d.lambda));
  SemiStructuredSpec spec{structure, d.lambda, d_v_max};
  write_text_file((fs::path(args.out_dir) / "report.csv").string(),
                  threshold_report_csv(verify_rates(spec, rates, grid)));
  std::printf("design gap = %.4f dB, achieved rate = %.6f\n", d.gap_db, d.achieved_rate);
  finish_run(args, cfg, "design");
  return 0;
}

int cmd_design_joint(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  E2rcStructure structure = structure_from(cfg);
  JointDesignSpec js;
  js.rates = cfg.get_rationals("rates");
  js.g_min = cfg.get_real("g_min", 0.05);
  js.g_max = cfg.get_real("g_max", 1.0);
  js.g_step = cfg.get_real("g_step", 0.01);
  js.rate_tol = cfg.get_real("rate_tol", 0.005);
  int d_v_max = int(cfg.get_int("d_v_max"));
  int grid = int(cfg.get_int("grid", 10000));
  int min_degree = int(cfg.get_int("min_degree", 3));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  DesignResult d = joint_optimize(js, structure, d_v_max, grid, min_degree);
  write_text_file((fs::path(args.out_dir) / "lambda.csv").string(), degree_dist_csv(d.lambda));
  SemiStructuredSpec spec{structure, d.lambda, d_v_max};
  auto rows = verify_rates(spec, js.rates, grid);
  write_text_file((fs::path(args.out_dir) / "gaps.csv").string(), threshold_report_csv(rows));
  std::printf("accepted g = %.4f dB, mother rate = %.6f\n", d.gap_db, d.achieved_rate);
  finish_run(args, cfg, "design-joint");
  return 0;
}

int cmd_predict(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  E2rcStructure structure = structure_from(cfg);
  DegreeDistribution lambda = parse_degree_dist(cfg.get_string("lambda"));
  int d_v_max = int(cfg.get_int("d_v_max", lambda.max_degree()));
  int grid = int(cfg.get_int("grid", 10000));
  auto rates = cfg.get_rationals("rates");
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  SemiStructuredSpec spec{structure, lambda, d_v_max};
  auto rows = verify_rates(spec, rates, grid);
  write_text_file((fs::path(args.out_dir) / "report.csv").string(), threshold_report_csv(rows));
  for (auto& r : rows)
    std::printf("rate %.6f: threshold %.4f dB (gap %.4f dB)\n", r.rate, r.ebn0, r.gap);
  finish_run(args, cfg, "predict");
  return 0;
}

int cmd_proto_search(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  int m0 = int(cfg.get_int("m0", 1));
  int n0 = int(cfg.get_int("n0"));
  int d_v_max = int(cfg.get_int("d_v_max"));
  int min_deg = int(cfg.get_int("min_deg", 3));
  int top_k = int(cfg.get_int("top_k", 10));
  int de_iters = int(cfg.get_int("de_max_iters", 4000));
  double res_db = cfg.get_real("resolution_db", 0.01);
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  auto score = [&](const Protograph& g) { return rca_threshold_db(g, de_iters, res_db); };
  auto ranked = search_starting_protographs_ranked(m0, n0, d_v_max, min_deg, score, top_k,
                                                   args.threads);
  std::string csv = "rank,threshold_db,degrees\n";
  for (size_t i = 0; i < ranked.size(); ++i) {
    csv += std::to_string(i + 1) + "," + std::to_string(ranked[i].score) + ",";
    for (size_t j = 0; j < ranked[i].degrees.size(); ++j)
      csv += (j ? " " : "") + std::to_string(ranked[i].degrees[j]);
    csv += "\n";
  }
  write_text_file((fs::path(args.out_dir) / "ranked.csv").string(), csv);
  save_protograph(protograph_from_degrees(m0, ranked.front().degrees),
                  (fs::path(args.out_dir) / "best.proto").string());
  std::printf("best threshold %.4f dB\n", ranked.front().score);
  finish_run(args, cfg, "proto-search");
  return 0;
}

int cmd_proto_family(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  Protograph start;
  if (cfg.has("start")) {
    start = load_protograph(cfg.get_string("start"));
  } else {
    std::vector<int> degrees;
    for (double d : cfg.get_rationals("degrees")) degrees.push_back(int(d));
    start = protograph_from_degrees(int(cfg.get_int("m0", 1)), degrees);
  }
  int stages = int(cfg.get_int("stages"));
  int budget = int(cfg.get_int("pattern_budget", 256));
  int de_iters = int(cfg.get_int("de_max_iters", 4000));
  double res_db = cfg.get_real("resolution_db", 0.01);
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  auto score = [&](const Protograph& g) { return rca_threshold_db(g, de_iters, res_db); };
  ProtographFamily fam = build_family(start, stages, budget, score);
  save_protograph(fam.mother, (fs::path(args.out_dir) / "mother.proto").string());
  for (size_t i = 0; i < fam.members.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "member_%02zu.proto", i);
    save_protograph(fam.members[i], (fs::path(args.out_dir) / name).string());
  }
  std::ostringstream log;
  log << "stage check new_var pattern\n";
  for (auto& e : fam.stage_log) {
    log << e.stage << ' ' << e.check << ' ' << e.new_var << ' ';
    for (size_t i = 0; i < e.pattern.s01.size(); ++i) log << e.pattern.s01[i] << (i + 1 < e.pattern.s01.size() ? "," : "");
    log << '|';
    for (size_t i = 0; i < e.pattern.s02.size(); ++i) log << e.pattern.s02[i] << (i + 1 < e.pattern.s02.size() ? "," : "");
    log << '\n';
  }
  write_text_file((fs::path(args.out_dir) / "stage_log.txt").string(), log.str());

  std::vector<std::pair<Protograph, std::vector<uint8_t>>> family;
  for (int j = int(fam.stage_log.size()); j >= 0; --j)
    family.emplace_back(fam.mother, fam.mask_for(j));
  auto rows = family_threshold_report(family, 10000, 1e-4);
  write_text_file((fs::path(args.out_dir) / "report.csv").string(), threshold_report_csv(rows));
  std::printf("family of %zu rates written\n", family.size());
  finish_run(args, cfg, "proto-family");
  return 0;
}

int cmd_lift(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  Protograph g = load_protograph(cfg.get_string("proto"));
  int q = int(cfg.get_int("q"));
  int retry = int(cfg.get_int("retry_budget", 25));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  LiftedCode code = lift(g, q, args.seed, retry);
  save_alist(code, (fs::path(args.out_dir) / "code.alist").string());
  std::ostringstream shifts;
  shifts << "check var shifts\n";
  for (int c = 0; c < g.num_checks(); ++c)
    for (int v = 0; v < g.num_vars(); ++v) {
      if (code.shifts[c][v].empty()) continue;
      shifts << c << ' ' << v << ' ';
      for (size_t i = 0; i < code.shifts[c][v].size(); ++i)
        shifts << code.shifts[c][v][i] << (i + 1 < code.shifts[c][v].size() ? "," : "");
      shifts << '\n';
    }
  write_text_file((fs::path(args.out_dir) / "shifts.txt").string(), shifts.str());
  std::printf("lifted code: n=%d k=%d\n", code.n(), code.k());
  finish_run(args, cfg, "lift");
  return 0;
}

int cmd_simulate(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  Protograph g = load_protograph(cfg.get_string("proto"));
  int q = int(cfg.get_int("q"));
  auto rates = cfg.get_rationals("rates");
  auto ebn0 = cfg.get_rationals("ebn0_db");
  SimStop stop;
  stop.min_frame_errors = cfg.get_int("min_frame_errors", 100);
  stop.max_frames = cfg.get_int("max_frames", 10000000);
  int max_iters = int(cfg.get_int("decoder_iters", 100));
  int retry = int(cfg.get_int("retry_budget", 25));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  LiftedCode code = lift(g, q, args.seed, retry);
  auto order = puncture_order(sr_classify(g), g);
  const int k_proto = g.num_vars() - g.num_checks();
  std::vector<std::vector<uint8_t>> masks;
  for (double r : rates) {
    int tx = int(std::lround(k_proto / r));
    int punct = g.num_vars() - tx;
    if (punct < 0 || punct > int(order.size()))
      throw std::runtime_error("rate not reachable by the designed pattern");
    masks.push_back(mask_from_order(order, punct, g.num_vars()));
  }
  auto results = simulate(code, masks, ebn0, stop, args.seed, args.threads, max_iters);
  for (size_t i = 0; i < results.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "sim_rate_%02zu.csv", i);
    write_text_file((fs::path(args.out_dir) / name).string(), sim_rows_csv(results[i].rows));
    std::printf("rate %.6f: measured threshold %.4f dB\n", results[i].rate,
                measured_threshold_db(results[i].rows));
  }
  finish_run(args, cfg, "simulate");
  return 0;
}

int cmd_sr_classify(const CommonArgs& args) {
  JobConfig cfg = load_config(args);
  Protograph g = load_protograph(cfg.get_string("proto"));
  cfg.reject_unknown();
  fs::create_directories(args.out_dir);

  SRProfile prof = sr_classify(g);
  std::ostringstream os;
  os << "var level\n";
  for (int v = 0; v < g.num_vars(); ++v) {
    os << v << ' ';
    if (prof.level[v] == 0)
      os << "known\n";
    else if (prof.level[v] == SRProfile::kNever)
      os << "never\n";
    else
      os << prof.level[v] << '\n';
  }
  os << "census:";
  for (auto& [level, count] : prof.census()) os << ' ' << level << ':' << count;
  os << "\npuncture_order:";
  for (int v : puncture_order(prof, g)) os << ' ' << v;
  os << '\n';
  write_text_file((fs::path(args.out_dir) / "sr.txt").string(), os.str());
  std::cout << os.str();
  finish_run(args, cfg, "sr-classify");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rate-compatible LDPC design toolkit"};
  app.require_subcommand(1);

  CommonArgs args;
  int (*run)(const CommonArgs&) = nullptr;
  struct Entry {
    const char* name;
    const char* help;
    int (*fn)(const CommonArgs&);
  };
  const Entry entries[] = {
      {"exit-curve", "structured-component EXIT curve (optionally vs Monte Carlo)", cmd_exit_curve},
      {"design", "single-rate degree optimization", cmd_design},
      {"design-joint", "joint multi-rate degree optimization", cmd_design_joint},
      {"predict", "thresholds of a given degree distribution under puncturing", cmd_predict},
      {"proto-search", "exhaustive starting-protograph search", cmd_proto_search},
      {"proto-family", "rate-compatible protograph family by check-splitting", cmd_proto_family},
      {"lift", "quasi-cyclic lift of a protograph", cmd_lift},
      {"simulate", "BER/FER simulation of a lifted code", cmd_simulate},
      {"sr-classify", "recovery-depth classification and puncture order", cmd_sr_classify},
  };
  for (const Entry& e : entries) {
    CLI::App* cmd = app.add_subcommand(e.name, e.help);
    add_common(cmd, args);
    cmd->callback([&run, &e]() { run = e.fn; });
  }

  CLI11_PARSE(app, argc, argv);
  try {
    return run(args);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 1;
  }
}
