#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include <CLI11.hpp>

#include "datacurv/adaptive_radius.hpp"
#include "datacurv/cloud_io.hpp"
#include "datacurv/clustering.hpp"
#include "datacurv/curvature.hpp"
#include "datacurv/errors.hpp"
#include "datacurv/spatial_index.hpp"
#include "datacurv/synthetic.hpp"
#include "report.hpp"
#include "svg.hpp"

namespace datacurv::cli {

namespace {

class IoError : public Error {
 public:
  using Error::Error;
};

std::ofstream open_output(const std::string& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + path + "'");
  return f;
}

void close_output(std::ofstream& f, const std::string& path) {
  f.close();
  if (!f) throw IoError("failed writing '" + path + "'");
}

template <typename Writer>
void write_file(const std::string& path, Writer&& writer) {
  std::ofstream f = open_output(path);
  writer(f);
  close_output(f, path);
}

std::string with_extension(const std::string& path, const char* ext) {
  std::filesystem::path p(path);
  p.replace_extension(ext);
  return p.string();
}

void write_json(const std::string& path, const Json& j) {
  write_file(path, [&](std::ostream& o) { o << j.dump(2) << '\n'; });
}

CloudFormat output_format(const std::string& flag, const std::string& path) {
  if (!flag.empty()) return parse_format(flag);
  return format_from_path(path).value_or(CloudFormat::xyz);
}

const std::map<std::string, MeanSurface> kSurfaces = {
    {"plane", MeanSurface::plane},
    {"upper", MeanSurface::upper_hemisphere},
    {"lower", MeanSurface::lower_hemisphere},
};

// ---------------------------------------------------------------------------

struct GenerateArgs {
  std::string kind;
  std::string sign = "-";
  std::size_t n = 0;
  double radius = 0.5;
  std::string caps = "disc";
  std::size_t n_side = 1500;
  std::size_t n_cap = 750;
  double cap_height = kDefaultCapHeight;
  std::string surface = "plane";
  double sigma = 0.1;
  std::size_t run = 0;
  bool labels = false;
  Seed seed = 0;
  std::string output;
  std::string format;
};

int parse_sign(const std::string& s) {
  if (s == "-" || s == "-1") return -1;
  if (s == "+" || s == "1" || s == "+1") return 1;
  throw InvalidArgument("sign must be '+' or '-'");
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
  const auto count = [&](std::size_t fallback) { return a.n ? a.n : fallback; };
  PointCloud cloud({0.0}, 1);
  std::vector<int> labels;
  if (a.kind == "paraboloid") {
    cloud = gen_paraboloid(parse_sign(a.sign), count(3000), a.seed);
  } else if (a.kind == "sphere") {
    cloud = gen_sphere(a.radius, count(3000), a.seed);
  } else if (a.kind == "cylinder") {
    const CapKind cap = a.caps == "hemi" ? CapKind::hemi_ellipsoid : CapKind::disc;
    LabeledCloud lc =
        gen_cylinder_with_caps(cap, a.n_side, a.n_cap, a.seed, a.cap_height);
    labels = lc.part_labels();
    cloud = std::move(lc.cloud);
  } else {
    const GrfModel model =
        make_grf_model(kSurfaces.at(a.surface), count(1000), a.sigma, a.seed);
    cloud = gen_noisy_manifold(model, lln_run_seed(a.seed, a.run));
  }
  if (a.labels && labels.empty())
    throw InvalidArgument("--labels is only available for cylinder clouds");

  const CloudFormat fmt = output_format(a.format, a.output);
  write_file(a.output, [&](std::ostream& o) {
    write_cloud(o, cloud, fmt, a.labels ? &labels : nullptr);
  });
  out << "n=" << cloud.size() << " diameter=" << format_double(diameter(cloud))
      << " seed=" << a.seed << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
  std::string input;
  std::string input_format;
  std::optional<double> eta;
  std::optional<unsigned> eta_mult;
  double delta = 1e-3;
  std::string output;
  std::string summary;
  std::size_t bins = 50;
  std::string svg;
  std::string hist_svg;
  unsigned threads = 1;
};

struct Estimated {
  PointCloud cloud;
  RadiusAssignment radii;
  std::vector<PointRecord> records;
};

Estimated run_estimation(const EstimateArgs& a, std::ostream& err) {
  std::optional<CloudFormat> fmt;
  if (!a.input_format.empty()) fmt = parse_format(a.input_format);
  PointCloud cloud = load_cloud_file(a.input, fmt);
  const SpatialIndex index(cloud);
  const double eta = a.eta ? *a.eta
                           : static_cast<double>(a.eta_mult.value_or(3)) *
                                 diameter(cloud);
  RadiusAssignment radii = adaptive_radii(cloud, index, eta);
  FieldOptions options;
  options.delta = a.delta;
  options.threads = a.threads;
  std::vector<PointRecord> records = curvature_field(cloud, index, radii, options);
  const auto sparse = std::count_if(records.begin(), records.end(),
                                    [](const PointRecord& r) { return r.sparse_fit; });
  if (sparse > 0)
    err << "note: " << sparse
        << " point(s) fitted with fewer than twice the minimum neighbor count\n";
  return {std::move(cloud), std::move(radii), std::move(records)};
}

Json run_parameters(const Estimated& e, double delta) {
  Json j;
  j["eta"] = e.radii.eta;
  j["delta"] = delta;
  j["diameter"] = e.radii.diameter;
  j["density_radius"] = e.radii.radius;
  return j;
}

std::vector<double> curvature_or_nan(const std::vector<PointRecord>& records) {
  std::vector<double> v;
  v.reserve(records.size());
  for (const auto& r : records) v.push_back(r.curvature.value_or(std::nan("")));
  return v;
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
  const Estimated e = run_estimation(a, err);
  write_file(a.output, [&](std::ostream& o) { write_estimate_csv(o, e.cloud, e.records); });

  Json summary;
  summary["input"] = a.input;
  summary["parameters"] = run_parameters(e, a.delta);
  summary.update(estimate_summary(e.records, a.bins));
  write_json(a.summary.empty() ? with_extension(a.output, ".json") : a.summary,
             summary);

  if (!a.svg.empty())
    write_file(a.svg, [&](std::ostream& o) {
      write_curvature_svg(o, e.cloud, curvature_or_nan(e.records));
    });
  if (!a.hist_svg.empty())
    write_file(a.hist_svg, [&](std::ostream& o) {
      write_histogram_svg(o, make_histogram(ok_curvatures(e.records), a.bins),
                          "curvature");
    });
  out << "points=" << e.records.size() << " ok="
      << summary["status_counts"]["ok"].get<std::size_t>() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct ClusterArgs {
  EstimateArgs estimate;
  double t = 4.0;
  double d = 0.5;
  std::optional<double> d_prime;
  bool merge_heights = false;
};

int cmd_cluster(const ClusterArgs& a, std::ostream& out, std::ostream& err) {
  ClusterParams params = ClusterParams::with_default_link(a.t, a.d);
  if (a.d_prime) params.link_distance = *a.d_prime;
  if (!params.link_below_scale())
    err << "warning: d' >= t, so the curvature coordinate cannot separate "
           "clusters\n";

  const Estimated e = run_estimation(a.estimate, err);
  const CurvatureClustering c =
      curvature_clustering(e.cloud, e.records, params, a.merge_heights);
  write_file(a.estimate.output, [&](std::ostream& o) {
    write_cluster_csv(o, e.cloud, e.records, c);
  });

  Json summary;
  summary["input"] = a.estimate.input;
  Json p = run_parameters(e, a.estimate.delta);
  p["t"] = params.scale;
  p["d"] = params.curvature_threshold;
  p["d_prime"] = params.link_distance;
  summary["parameters"] = std::move(p);
  summary["points"] = e.cloud.size();
  summary["flagged"] = std::count(c.flagged.begin(), c.flagged.end(), true);
  summary["clusters"] = c.labeling.cluster_count();
  summary["sizes"] = c.labeling.sizes;
  if (a.merge_heights) summary["merge_heights"] = c.labeling.merge_heights;
  write_json(a.estimate.summary.empty()
                 ? with_extension(a.estimate.output, ".json")
                 : a.estimate.summary,
             summary);

  if (!a.estimate.svg.empty())
    write_file(a.estimate.svg, [&](std::ostream& o) {
      write_label_svg(o, e.cloud, c.labeling.labels);
    });
  out << "points=" << e.cloud.size() << " clusters=" << c.labeling.cluster_count()
      << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

struct LlnArgs {
  std::string surface = "plane";
  double sigma = 0.1;
  std::size_t runs = 50;
  double eta = 1.0;
  double delta = 0.005;
  std::size_t n = 1000;
  Seed seed = 0;
  std::string output;
  std::string summary;
  unsigned threads = 1;
};

Json spread(const std::vector<double>& values) {
  Json j;
  j["count"] = values.size();
  if (values.empty()) {
    j["mean"] = nullptr;
    j["median"] = nullptr;
    j["std"] = nullptr;
    return j;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / static_cast<double>(values.size());
  double sq = 0.0;
  for (double v : values) sq += (v - mean) * (v - mean);
  j["mean"] = mean;
  j["median"] = median(values);
  j["std"] = std::sqrt(sq / static_cast<double>(values.size()));
  return j;
}

int cmd_lln(const LlnArgs& a, std::ostream& out) {
  const GrfModel model = make_grf_model(kSurfaces.at(a.surface), a.n, a.sigma, a.seed);
  const LlnResult r = lln_experiment(model, a.runs, a.eta, a.delta, a.seed, a.threads);

  write_file(a.output, [&](std::ostream& o) {
    o << "idx,ax,ay,mean_curv,ok_runs\n";
    for (std::size_t i = 0; i < model.size(); ++i) {
      o << i << ',' << format_double(model.base_points(i, 0)) << ','
        << format_double(model.base_points(i, 1)) << ',';
      if (r.ok_runs[i] > 0) o << format_double(r.mean_curvature[i]);
      o << ',' << r.ok_runs[i] << '\n';
    }
  });

  std::vector<double> means;
  std::vector<double> abs_means;
  for (std::size_t i = 0; i < model.size(); ++i) {
    if (r.ok_runs[i] == 0) continue;
    means.push_back(r.mean_curvature[i]);
    abs_means.push_back(std::abs(r.mean_curvature[i]));
  }
  std::vector<double> first_run_abs;
  for (double c : r.run_curvature.front())
    if (std::isfinite(c)) first_run_abs.push_back(std::abs(c));

  Json summary;
  Json p;
  p["surface"] = std::string(to_string(kSurfaces.at(a.surface)));
  p["sigma"] = a.sigma;
  p["runs"] = a.runs;
  p["eta"] = a.eta;
  p["delta"] = a.delta;
  p["n"] = a.n;
  p["seed"] = a.seed;
  summary["parameters"] = std::move(p);
  summary["mean_curvature"] = spread(means);
  summary["median_abs_mean_curvature"] = median(abs_means);
  summary["single_run_median_abs_curvature"] = median(first_run_abs);
  write_json(a.summary.empty() ? with_extension(a.output, ".json") : a.summary,
             summary);
  out << "base_points=" << model.size() << " with_data=" << means.size() << '\n';
  return kOk;
}

// ---------------------------------------------------------------------------

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

bool mentions(const std::vector<std::string>& args, const CLI::Option* opt) {
  for (const auto& name : opt->get_lnames()) {
    const std::string flag = "--" + name;
    for (const auto& a : args)
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
  }
  return false;
}

/// Appends `--key value` for every line of the subcommand's --config file
/// whose option was not given on the command line.
std::vector<std::string> expand_config(CLI::App& app,
                                       std::vector<std::string> args) {
  if (args.empty()) return args;
  CLI::App* sub = nullptr;
  for (auto* candidate : app.get_subcommands({}))
    if (candidate->get_name() == args.front()) sub = candidate;
  if (sub == nullptr) return args;

  std::string path;
  for (std::size_t k = 1; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) path = args[k + 1];
    if (args[k].rfind("--config=", 0) == 0) path = args[k].substr(9);
  }
  if (path.empty()) return args;

  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::vector<std::string> extra;
  std::string line;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument("config line without '=': " + text);
    std::string key = trim(std::string_view(text).substr(0, eq));
    std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
        value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt == nullptr || key == "config")
      throw InvalidArgument("unknown config key '" + key + "'");
    if (mentions(args, opt)) continue;
    if (opt->get_expected_min() == 0) {
      if (value == "true" || value == "1" || value == "yes" || value == "on")
        extra.push_back("--" + key);
    } else {
      extra.push_back("--" + key);
      extra.push_back(value);
    }
  }
  args.insert(args.end(), extra.begin(), extra.end());
  return args;
}

void add_estimate_options(CLI::App* sub, EstimateArgs& a) {
  sub->add_option("-i,--input", a.input, "Input point cloud")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--input-format", a.input_format, "xyz, csv or ply")
      ->check(CLI::IsMember({"xyz", "csv", "ply", "ply-ascii"}));
  auto* eta = sub->add_option("--eta", a.eta, "Absolute eta")
                  ->check(CLI::PositiveNumber);
  auto* mult = sub->add_option("--eta-mult", a.eta_mult,
                               "eta as k times the cloud diameter (default 3)")
                   ->check(CLI::Range(1u, 1000000u));
  eta->excludes(mult);
  sub->add_option("--delta", a.delta, "Eigenvalue threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sub->add_option("-o,--output", a.output, "Output CSV")->required();
  sub->add_option("--summary", a.summary,
                  "Summary JSON (default: output with .json extension)");
  sub->add_option("--threads", a.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  std::string config_path;
  CLI::App app{"Local dimension and curvature estimation for point clouds", "datacurv"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "Write a synthetic point cloud");
  g->add_option("--config", config_path, "key=value defaults for this command");
  g->add_option("kind", gen.kind, "paraboloid, sphere, cylinder or noisy")
      ->required()
      ->check(CLI::IsMember({"paraboloid", "sphere", "cylinder", "noisy"}));
  g->add_option("--sign", gen.sign, "Paraboloid: '-' for z=-x^2-y^2, '+' for z=x^2-y^2")
      ->capture_default_str();
  g->add_option("--n", gen.n, "Point count (paraboloid/sphere 3000, noisy 1000)");
  g->add_option("--radius", gen.radius, "Sphere radius")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  g->add_option("--caps", gen.caps, "Cylinder caps: disc or hemi")
      ->check(CLI::IsMember({"disc", "hemi"}))
      ->capture_default_str();
  g->add_option("--n-side", gen.n_side, "Cylinder side points")->capture_default_str();
  g->add_option("--n-cap", gen.n_cap, "Points per cylinder cap")->capture_default_str();
  g->add_option("--cap-height", gen.cap_height, "Polar semi-axis of hemi caps")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  g->add_option("--surface", gen.surface, "Noisy mean surface: plane, upper, lower")
      ->check(CLI::IsMember({"plane", "upper", "lower"}))
      ->capture_default_str();
  g->add_option("--sigma", gen.sigma, "Noise scale")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  g->add_option("--run", gen.run, "Noise draw index (same as lln run r)")
      ->capture_default_str();
  g->add_flag("--labels", gen.labels, "Append the cylinder part label column");
  g->add_option("--seed", gen.seed, "Random seed")->capture_default_str();
  g->add_option("-o,--output", gen.output, "Output file")->required();
  g->add_option("--format", gen.format, "xyz or csv (default from extension)")
      ->check(CLI::IsMember({"xyz", "csv"}));

  EstimateArgs est;
  auto* e = app.add_subcommand("estimate", "Per-point dimension and curvature");
  e->add_option("--config", config_path, "key=value defaults for this command");
  add_estimate_options(e, est);
  e->add_option("--bins", est.bins, "Curvature histogram bins")
      ->check(CLI::Range(std::size_t{1}, std::size_t{100000}))
      ->capture_default_str();
  e->add_option("--svg", est.svg, "Scatter plot colored by curvature");
  e->add_option("--hist-svg", est.hist_svg, "Curvature histogram plot");

  ClusterArgs clu;
  auto* c = app.add_subcommand("cluster", "Curvature-aware single-linkage clustering");
  c->add_option("--config", config_path, "key=value defaults for this command");
  add_estimate_options(c, clu.estimate);
  c->add_option("--t", clu.t, "Height of the curvature coordinate")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--d", clu.d, "Curvature threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c->add_option("--d-prime", clu.d_prime, "Linkage distance (default t/2)")
      ->check(CLI::PositiveNumber);
  c->add_flag("--merge-heights", clu.merge_heights,
              "Report single-linkage merge distances in the summary");
  c->add_option("--svg", clu.estimate.svg, "Scatter plot colored by cluster");

  LlnArgs lln;
  auto* l = app.add_subcommand("lln", "Average curvature over noisy resamples");
  l->add_option("--config", config_path, "key=value defaults for this command");
  l->add_option("--surface", lln.surface, "plane, upper or lower")
      ->check(CLI::IsMember({"plane", "upper", "lower"}))
      ->capture_default_str();
  l->add_option("--sigma", lln.sigma, "Noise scale")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  l->add_option("--runs", lln.runs, "Number of noisy samples")
      ->check(CLI::Range(std::size_t{1}, std::size_t{1000000}))
      ->capture_default_str();
  l->add_option("--eta", lln.eta, "Absolute eta")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  l->add_option("--delta", lln.delta, "Eigenvalue threshold")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  l->add_option("--n", lln.n, "Base points")
      ->check(CLI::Range(std::size_t{2}, std::size_t{100000}))
      ->capture_default_str();
  l->add_option("--seed", lln.seed, "Random seed")->capture_default_str();
  l->add_option("-o,--output", lln.output, "Output CSV")->required();
  l->add_option("--summary", lln.summary,
                "Summary JSON (default: output with .json extension)");
  l->add_option("--threads", lln.threads, "Worker threads, 0 = all cores")
      ->capture_default_str();

  std::vector<std::string> expanded;
  try {
    expanded = expand_config(app, args);
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kData;
  }

  try {
    std::vector<std::string> reversed(expanded.rbegin(), expanded.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& ex) {
    const int code = app.exit(ex, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*g) return cmd_generate(gen, out);
    if (*e) return cmd_estimate(est, out, err);
    if (*c) return cmd_cluster(clu, out, err);
    return cmd_lln(lln, out);
  } catch (const InvalidArgument& ex) {
    err << "error: " << ex.what() << '\n';
    return kUsage;
  } catch (const EstimationError& ex) {
    err << "numerical failure: " << ex.what() << '\n';
    return kNumerical;
  } catch (const CholeskyFailure& ex) {
    err << "numerical failure: " << ex.what() << '\n';
    return kNumerical;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << '\n';
    return kData;
  }
}

}  // namespace datacurv::cli
