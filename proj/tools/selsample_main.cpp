// selsample: reproducible selective-sampling experiments from the command
// line. Subcommands: run, render, compare, failure-demo. Every invocation is
// a pure function of its flags and seed; artifacts are written atomically.
//
// Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 self-check failure.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "selsample/csv.hpp"
#include "selsample/evaluation.hpp"
#include "selsample/image_io.hpp"
#include "selsample/sampler.hpp"
#include "selsample/threads.hpp"

namespace fs = std::filesystem;
using namespace selsample;

namespace {

struct ExperimentSpec {
  std::string truth;
  std::string heuristic = "dist";
  std::string kappa = "iid";
  std::uint32_t n = 1000;
  std::uint64_t seed = 1;
  std::int64_t seed_initial = -1;  // -1: default of 20
  double seed_p = 0.0;             // > 0: initial count from component measure
  std::uint32_t probes = 20000;
  std::uint32_t stride = 0;  // 0: about ten curve rows
  int width = 256;
  int height = 256;
  bool overlay_samples = false;
};

struct TruthSetup {
  DomainSpace domain = DomainSpace::unit_square();
  TrueFunction truth = TrueFunction::disk(0.5, 0.5, 0.25);
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

double parse_num(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::invalid_argument(what + ": bad number '" + s + "'");
  }
}

TruthSetup parse_truth(const std::string& selector) {
  if (selector.empty()) {
    throw std::invalid_argument("--truth is required (disk:cx,cy,r | checker:k | image:<path> | adv1d[:i_max])");
  }
  const auto head = selector.substr(0, selector.find(':'));
  const std::string rest =
      selector.size() > head.size() ? selector.substr(head.size() + 1) : "";
  TruthSetup setup;
  if (head == "disk") {
    const auto f = split(rest, ',');
    if (f.size() != 3) throw std::invalid_argument("truth disk wants disk:cx,cy,r");
    setup.domain = DomainSpace::unit_square();
    setup.truth = TrueFunction::disk(parse_num(f[0], "disk"),
                                     parse_num(f[1], "disk"),
                                     parse_num(f[2], "disk"));
  } else if (head == "checker") {
    if (rest.empty()) throw std::invalid_argument("truth checker wants checker:k");
    setup.domain = DomainSpace::unit_square();
    setup.truth = TrueFunction::checkerboard(
        static_cast<int>(parse_num(rest, "checker")));
  } else if (head == "image") {
    if (rest.empty()) throw std::invalid_argument("truth image wants image:<path>");
    setup.domain = DomainSpace::unit_square();
    setup.truth = TrueFunction::image(labels_from_image(read_pnm_file(rest)));
  } else if (head == "adv1d") {
    setup.domain = DomainSpace::unit_interval();
    const int i_max = rest.empty() ? 20 : static_cast<int>(parse_num(rest, "adv1d"));
    setup.truth = TrueFunction::adversarial_1d(i_max);
  } else {
    throw std::invalid_argument("unknown truth selector '" + selector + "'");
  }
  return setup;
}

HeuristicSpec parse_heuristic(const std::string& selector, int dimension) {
  if (selector == "dist") return HeuristicSpec::distance();
  if (selector == "nmc-vor") {
    if (dimension != 2) throw std::invalid_argument("nmc-vor needs a 2D domain");
    return HeuristicSpec::nmc_voronoi();
  }
  if (selector == "nmc-knn") {
    return HeuristicSpec::nmc_knn(HeuristicSpec::default_k(dimension));
  }
  if (selector.rfind("nmc-knn:", 0) == 0) {
    return HeuristicSpec::nmc_knn(
        static_cast<std::uint32_t>(parse_num(selector.substr(8), "nmc-knn")));
  }
  throw std::invalid_argument("unknown heuristic selector '" + selector + "'");
}

KappaSchedule parse_kappa(const std::string& selector) {
  if (selector == "iid") return KappaSchedule::iid();
  if (selector == "hlog") return KappaSchedule::harmonic_log();
  if (selector.rfind("const:", 0) == 0) {
    return KappaSchedule::constant(
        static_cast<std::uint32_t>(parse_num(selector.substr(6), "kappa")));
  }
  throw std::invalid_argument("unknown kappa selector '" + selector + "'");
}

std::uint32_t resolve_seed_count(const ExperimentSpec& spec) {
  std::uint32_t count = 20;
  if (spec.seed_p > 0.0) {
    count = seed_count_from_p(spec.seed_p);
  } else if (spec.seed_initial >= 0) {
    count = static_cast<std::uint32_t>(spec.seed_initial);
  }
  if (count > spec.n) {
    throw std::invalid_argument("initial seed count exceeds --n");
  }
  return count;
}

ExperimentSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file '" + path + "'");
  ExperimentSpec spec;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                  ": expected key=value");
    }
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "truth") spec.truth = value;
    else if (key == "heuristic") spec.heuristic = value;
    else if (key == "kappa") spec.kappa = value;
    else if (key == "n") spec.n = static_cast<std::uint32_t>(parse_num(value, key));
    else if (key == "seed") spec.seed = static_cast<std::uint64_t>(parse_num(value, key));
    else if (key == "seed-initial") spec.seed_initial = static_cast<std::int64_t>(parse_num(value, key));
    else if (key == "seed-p") spec.seed_p = parse_num(value, key);
    else if (key == "probes") spec.probes = static_cast<std::uint32_t>(parse_num(value, key));
    else if (key == "stride") spec.stride = static_cast<std::uint32_t>(parse_num(value, key));
    else if (key == "width") spec.width = static_cast<int>(parse_num(value, key));
    else if (key == "height") spec.height = static_cast<int>(parse_num(value, key));
    else if (key == "overlay-samples") spec.overlay_samples = parse_num(value, key) != 0;
    else throw std::invalid_argument(path + ": unknown key '" + key + "'");
  }
  return spec;
}

void atomic_write(const fs::path& path, const std::string& payload) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + tmp.string() + "'");
    out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) {
    throw std::runtime_error("rename failed for '" + path.string() + "': " +
                             ec.message());
  }
}

struct RunOutput {
  TruthSetup setup;
  ProcessConfig cfg;
  RunTrace trace;
  ProbeSet probes;
  std::uint64_t tie_seed = 0;
};

RunOutput execute(const ExperimentSpec& spec, std::uint64_t seed) {
  RunOutput out{parse_truth(spec.truth), {}, {}, {}, 0};
  out.cfg.heuristic = parse_heuristic(spec.heuristic, out.setup.domain.dimension());
  out.cfg.kappa = parse_kappa(spec.kappa);
  out.cfg.total_samples = spec.n;
  out.cfg.initial_seed_count = resolve_seed_count(spec);
  out.cfg.seed = seed;
  out.trace = run_process(out.cfg, out.setup.domain, out.setup.truth);
  out.probes = ProbeSet::draw(out.setup.domain, out.setup.truth, spec.probes, seed);
  out.tie_seed = derive_seed(seed, stream_id::kEval);
  return out;
}

int cmd_run(const ExperimentSpec& spec, const std::string& out_dir) {
  RunOutput run = execute(spec, spec.seed);
  const std::uint32_t stride =
      spec.stride > 0
          ? spec.stride
          : std::max<std::uint32_t>(
                1, (spec.n - run.cfg.initial_seed_count) / 10);
  const ErrorCurve curve = error_curve(run.trace, run.cfg.heuristic,
                                       run.probes, stride, run.tie_seed);
  std::ostringstream trace_csv;
  const auto rows = trace_rows(run.trace);
  write_trace_csv(trace_csv, rows);
  std::ostringstream curve_csv;
  write_curve_csv(curve_csv, curve);
  const fs::path dir(out_dir);
  atomic_write(dir / "trace.csv", trace_csv.str());
  atomic_write(dir / "curve.csv", curve_csv.str());
  std::cout << "final_error=" << format_double(curve.rows.back().error) << "\n";
  return 0;
}

int cmd_render(const ExperimentSpec& spec, const std::string& out_dir) {
  TruthSetup probe_setup = parse_truth(spec.truth);
  if (probe_setup.domain.dimension() != 2) {
    throw std::invalid_argument("render requires a 2D truth");
  }
  RunOutput run = execute(spec, spec.seed);
  const PredictionRaster raster =
      raster_predict(run.trace.samples.view(), spec.width, spec.height,
                     PredictionRule::nn(), derive_seed(spec.seed, stream_id::kRaster));
  std::vector<std::pair<int, int>> marks;
  if (spec.overlay_samples) {
    for (const LabeledSample& s : run.trace.samples.view()) {
      int col = static_cast<int>(s.point.x * spec.width);
      int row = static_cast<int>((1.0 - s.point.y) * spec.height);
      col = std::clamp(col, 0, spec.width - 1);
      row = std::clamp(row, 0, spec.height - 1);
      marks.emplace_back(row, col);
    }
  }
  std::ostringstream ppm;
  write_ppm(ppm, raster, run.setup.truth.label_count(), marks);
  atomic_write(fs::path(out_dir) / "prediction.ppm", ppm.str());
  const double err = estimate_error(run.trace.samples.view(), run.probes,
                                    PredictionRule::nn(), run.tie_seed);
  std::cout << "final_error=" << format_double(err) << "\n";
  return 0;
}

int cmd_compare(const std::vector<std::string>& spec_files,
                std::uint32_t seeds, const std::string& out_dir) {
  if (spec_files.size() < 2) {
    throw std::invalid_argument("compare needs at least two --spec files");
  }
  if (seeds < 1) throw std::invalid_argument("--seeds must be >= 1");
  std::vector<ExperimentSpec> specs;
  specs.reserve(spec_files.size());
  for (const auto& f : spec_files) specs.push_back(parse_spec_file(f));
  for (const auto& s : specs) {
    if (s.truth != specs[0].truth || s.n != specs[0].n ||
        s.probes != specs[0].probes ||
        resolve_seed_count(s) != resolve_seed_count(specs[0])) {
      throw std::invalid_argument(
          "compare specs must differ only in heuristic/kappa/seed");
    }
  }

  struct Row {
    std::size_t spec;
    std::uint64_t seed;
    double error;
    std::optional<double> q;
  };
  std::vector<Row> table(specs.size() * seeds);
  std::vector<std::exception_ptr> failures(table.size());
  parallel_for(table.size(), [&](std::size_t j) {
    try {
      const std::size_t si = j / seeds;
      const std::uint64_t seed = specs[si].seed + (j % seeds);
      RunOutput run = execute(specs[si], seed);
      Row row{si, seed, 0.0, std::nullopt};
      row.error = estimate_error(run.trace.samples.view(), run.probes,
                                 PredictionRule::nn(), run.tie_seed);
      if (run.cfg.heuristic.is_nmc()) {
        row.q = estimate_q_measure(run.trace.samples.view(),
                                   run.cfg.heuristic, run.probes);
      }
      table[j] = row;
    } catch (...) {
      failures[j] = std::current_exception();
    }
  });
  for (const auto& f : failures) {
    if (f) std::rethrow_exception(f);
  }

  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
  };

  std::ostringstream csv;
  csv << "spec,seed,final_error,q_measure\n";
  for (const Row& r : table) {
    csv << spec_files[r.spec] << ',' << r.seed << ','
        << format_double(r.error) << ',';
    if (r.q.has_value()) csv << format_double(*r.q);
    csv << '\n';
  }
  for (std::size_t si = 0; si < specs.size(); ++si) {
    std::vector<double> errs, qs;
    for (const Row& r : table) {
      if (r.spec != si) continue;
      errs.push_back(r.error);
      if (r.q.has_value()) qs.push_back(*r.q);
    }
    csv << spec_files[si] << ",median," << format_double(median(errs)) << ',';
    if (!qs.empty()) csv << format_double(median(qs));
    csv << '\n';
    std::cout << spec_files[si]
              << ": median_final_error=" << format_double(median(errs)) << "\n";
  }
  atomic_write(fs::path(out_dir) / "compare.csv", csv.str());
  return 0;
}

int cmd_failure_demo(int i_max, int steps, std::uint32_t mc_probes,
                     std::uint64_t seed, const std::string& out_dir) {
  const FailureDemoResult result = failure_demo(i_max, steps, mc_probes, seed);
  std::ostringstream csv;
  write_failure_csv(csv, result);
  atomic_write(fs::path(out_dir) / "failure.csv", csv.str());
  std::cout << "   n  analytic_error        mc_error\n";
  for (const FailureDemoRow& r : result.rows) {
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%4d  %-20.12g  %-12.6g\n", r.n,
                  r.analytic_error, r.mc_error);
    std::cout << buf;
  }
  if (!result.strictly_increasing) {
    std::cerr << "self-check failed: analytic error is not strictly increasing\n";
    return 3;
  }
  return 0;
}

void add_experiment_options(CLI::App* sub, ExperimentSpec& spec,
                            std::string& spec_file, bool with_raster) {
  sub->add_option("--spec", spec_file,
                  "flat key=value file; explicit flags override its entries");
  sub->add_option("--truth", spec.truth,
                  "disk:cx,cy,r | checker:k | image:<path> | adv1d[:i_max]");
  sub->add_option("--heuristic", spec.heuristic, "dist | nmc-knn[:K] | nmc-vor");
  sub->add_option("--kappa", spec.kappa, "const:k | hlog | iid");
  sub->add_option("--n", spec.n, "total number of samples");
  sub->add_option("--seed", spec.seed, "experiment seed");
  sub->add_option("--seed-initial", spec.seed_initial,
                  "initial iid sample count (default 20)");
  sub->add_option("--seed-p", spec.seed_p,
                  "derive the initial count from a smallest-component measure p");
  sub->add_option("--probes", spec.probes, "Monte Carlo probe count");
  sub->add_option("--stride", spec.stride, "curve stride (0 = about 10 rows)");
  if (with_raster) {
    sub->add_option("--width", spec.width, "raster width");
    sub->add_option("--height", spec.height, "raster height");
    sub->add_flag("--overlay-samples", spec.overlay_samples,
                  "mark sample pixels in the raster");
  }
}

ExperimentSpec resolve_spec(CLI::App* sub, const ExperimentSpec& flags,
                            const std::string& spec_file) {
  if (spec_file.empty()) return flags;
  ExperimentSpec spec = parse_spec_file(spec_file);
  auto passed = [&](const std::string& name) {
    const CLI::Option* opt = sub->get_option_no_throw(name);
    return opt != nullptr && opt->count() > 0;
  };
  if (passed("--truth")) spec.truth = flags.truth;
  if (passed("--heuristic")) spec.heuristic = flags.heuristic;
  if (passed("--kappa")) spec.kappa = flags.kappa;
  if (passed("--n")) spec.n = flags.n;
  if (passed("--seed")) spec.seed = flags.seed;
  if (passed("--seed-initial")) spec.seed_initial = flags.seed_initial;
  if (passed("--seed-p")) spec.seed_p = flags.seed_p;
  if (passed("--probes")) spec.probes = flags.probes;
  if (passed("--stride")) spec.stride = flags.stride;
  if (passed("--width")) spec.width = flags.width;
  if (passed("--height")) spec.height = flags.height;
  if (passed("--overlay-samples")) spec.overlay_samples = flags.overlay_samples;
  return spec;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"selective-sampling nearest-neighbor experiments"};
  app.require_subcommand(1);

  ExperimentSpec run_spec, render_spec;
  std::string run_spec_file, render_spec_file;
  std::string run_out = ".", render_out = ".", compare_out = ".", fail_out = ".";

  CLI::App* run = app.add_subcommand(
      "run", "run the sampling process; writes trace.csv and curve.csv");
  add_experiment_options(run, run_spec, run_spec_file, false);
  run->add_option("--out", run_out, "output directory");

  CLI::App* render = app.add_subcommand(
      "render", "run and rasterize predictions; writes prediction.ppm");
  add_experiment_options(render, render_spec, render_spec_file, true);
  render->add_option("--out", render_out, "output directory");

  CLI::App* compare = app.add_subcommand(
      "compare", "run several specs over a seed range; writes compare.csv");
  std::vector<std::string> compare_specs;
  std::uint32_t compare_seeds = 20;
  compare->add_option("--spec", compare_specs, "spec file (repeat, >= 2)")
      ->required();
  compare->add_option("--seeds", compare_seeds, "seeds per spec");
  compare->add_option("--out", compare_out, "output directory");

  CLI::App* fail = app.add_subcommand(
      "failure-demo", "1D monotone-failure construction; writes failure.csv");
  int fail_i_max = 20, fail_steps = 10;
  std::uint32_t fail_probes = 100000;
  std::uint64_t fail_seed = 1;
  fail->add_option("--i-max", fail_i_max, "truth truncation depth");
  fail->add_option("--steps", fail_steps, "number of samples to place");
  fail->add_option("--mc-probes", fail_probes, "Monte Carlo probe count");
  fail->add_option("--seed", fail_seed, "probe seed");
  fail->add_option("--out", fail_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) {
      return cmd_run(resolve_spec(run, run_spec, run_spec_file), run_out);
    }
    if (render->parsed()) {
      return cmd_render(resolve_spec(render, render_spec, render_spec_file),
                        render_out);
    }
    if (compare->parsed()) {
      return cmd_compare(compare_specs, compare_seeds, compare_out);
    }
    if (fail->parsed()) {
      return cmd_failure_demo(fail_i_max, fail_steps, fail_probes, fail_seed,
                              fail_out);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
