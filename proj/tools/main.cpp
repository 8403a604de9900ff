// graphheat: graph generation, heat-kernel computation, validation suites,
// and closed-form comparisons on weighted graphs.
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "graphheat/closed_forms.hpp"
#include "graphheat/engine.hpp"
#include "graphheat/generators.hpp"
#include "graphheat/graph_io.hpp"
#include "graphheat/metrics.hpp"
#include "graphheat/parametrix.hpp"
#include "graphheat/validation.hpp"

namespace {

using namespace graphheat;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitConfig = 2;
constexpr int kExitResource = 3;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int thread_count(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("GRAPHHEAT_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

std::vector<double> parse_times(const std::string& list) {
  std::vector<double> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stod(item));
  }
  if (out.empty()) raise(Errc::config_error, "no time values given");
  return out;
}

std::vector<std::pair<std::string, std::string>> parse_pairs(const std::string& list) {
  std::vector<std::pair<std::string, std::string>> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    auto colon = item.find(':');
    if (colon == std::string::npos)
      raise(Errc::config_error, "pair '" + item + "' is not of the form x:y");
    out.emplace_back(item.substr(0, colon), item.substr(colon + 1));
  }
  if (out.empty()) raise(Errc::config_error, "no query pairs given");
  return out;
}

void write_output(const std::string& path, const std::string& body) {
  if (path.empty() || path == "-") {
    std::cout << body;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) raise(Errc::config_error, "cannot write '" + path + "'");
  out << body;
}

// Deterministic worker pool: row i always lands in slot i.
template <typename Fn>
void parallel_rows(std::size_t count, int threads, Fn&& fn) {
  if (threads <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  for (int k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

struct GenArgs {
  std::string generator;
  std::string out;
  int radius = 10;
  int q = 2;
  std::size_t n = 50;
  std::size_t max_degree = 4;
  double theta_min = 0.75, theta_max = 1.5;
  double w_min = 0.25, w_max = 1.0;
  std::uint64_t seed = 1;
};

int run_gen(const GenArgs& a) {
  WeightedGraph g = [&] {
    if (a.generator == "lattice_window") return gen::lattice_window(a.radius);
    if (a.generator == "tree_ball") return gen::tree_ball(a.q, a.radius);
    if (a.generator == "tree_radial_window") return gen::tree_radial_window(a.q, a.radius);
    if (a.generator == "random_bounded_degree")
      return gen::random_bounded_degree(a.n, a.max_degree, {a.theta_min, a.theta_max},
                                        {a.w_min, a.w_max}, a.seed);
    raise(Errc::config_error, "unknown generator '" + a.generator + "'");
  }();
  nlohmann::json params{{"radius", a.radius},
                        {"q", a.q},
                        {"n", a.n},
                        {"max_degree", a.max_degree},
                        {"seed", a.seed},
                        {"theta_min", a.theta_min},
                        {"theta_max", a.theta_max},
                        {"w_min", a.w_min},
                        {"w_max", a.w_max}};
  write_output(a.out, graph_to_string(g, a.generator, params));
  return kExitOk;
}

struct QueryArgs {
  std::string graph_path;
  std::string pairs;
  std::string times = "1.0";
  std::string parametrix = "dirac";
  std::string metric = "combinatorial";
  std::string format = "csv";
  std::string out;
  double tol = 1e-10;
  double general_tol = 1e-5;
  int threads = 0;
};

struct ComputedRow {
  std::string x, y;
  double t = 0;
  KernelEstimate est;
};

MetricKind metric_kind_from_name(const std::string& name) {
  if (name == "combinatorial") return MetricKind::combinatorial;
  if (name == "normalized") return MetricKind::normalized;
  if (name == "intrinsic") return MetricKind::intrinsic;
  if (name == "adapted") return MetricKind::adapted;
  if (name == "edge_weighted") return MetricKind::edge_weighted;
  raise(Errc::config_error, "unknown metric '" + name + "'");
}

std::vector<ComputedRow> compute_rows(const WeightedGraph& g, const QueryArgs& a) {
  auto pairs = parse_pairs(a.pairs);
  auto times = parse_times(a.times);
  std::vector<ComputedRow> rows;
  for (const auto& [xs, ys] : pairs)
    for (double t : times) rows.push_back({xs, ys, t, {}});

  std::optional<Parametrix> gaussian;
  if (a.parametrix == "gaussian") {
    gaussian = gaussian_parametrix(g, make_metric(g, metric_kind_from_name(a.metric)));
  } else if (a.parametrix != "dirac") {
    raise(Errc::config_error, "unknown parametrix '" + a.parametrix + "'");
  }

  parallel_rows(rows.size(), thread_count(a.threads), [&](std::size_t i) {
    auto& row = rows[i];
    VertexIndex x = g.at(row.x), y = g.at(row.y);
    if (gaussian) {
      GeneralOptions opts;
      opts.tol = a.general_tol;
      row.est = heat_kernel_general(g, *gaussian, x, y, row.t, opts);
    } else {
      row.est = heat_kernel_dirac(g, x, y, row.t, a.tol);
    }
  });
  return rows;
}

std::string rows_to_csv(const std::vector<ComputedRow>& rows) {
  std::string out = "x,y,t,value,series_tail,spatial_tail,quad_err,total_bound\n";
  for (const auto& r : rows)
    out += r.x + "," + r.y + "," + fmt(r.t) + "," + fmt(r.est.value) + "," +
           fmt(r.est.series_tail_bound) + "," + fmt(r.est.spatial_tail_bound) + "," +
           fmt(r.est.quadrature_error) + "," + fmt(r.est.total_bound) + "\n";
  return out;
}

std::string rows_to_json(const std::vector<ComputedRow>& rows) {
  std::string out = "[\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& r = rows[i];
    out += "  {\"x\": \"" + r.x + "\", \"y\": \"" + r.y + "\", \"t\": " + fmt(r.t) +
           ", \"value\": " + fmt(r.est.value) +
           ", \"series_tail\": " + fmt(r.est.series_tail_bound) +
           ", \"spatial_tail\": " + fmt(r.est.spatial_tail_bound) +
           ", \"quad_err\": " + fmt(r.est.quadrature_error) +
           ", \"total_bound\": " + fmt(r.est.total_bound) + "}";
    out += (i + 1 < rows.size()) ? ",\n" : "\n";
  }
  return out + "]\n";
}

int run_compute(const QueryArgs& a) {
  auto doc = load_graph(a.graph_path);
  auto rows = compute_rows(doc.graph, a);
  write_output(a.out, a.format == "json" ? rows_to_json(rows) : rows_to_csv(rows));
  return kExitOk;
}

struct ValidateArgs {
  std::string graph_path;
  std::string checks;
  std::string times = "0.1,0.5,1.0";
  std::string out;
  double series_tol = 1e-12;
  int order_override = -1;
  std::uint64_t seed = 1;
  std::size_t ctrw_samples = 200000;
};

int run_validate(const ValidateArgs& a) {
  auto doc = load_graph(a.graph_path);
  SuiteConfig cfg;
  cfg.times = parse_times(a.times);
  cfg.series_tol = a.series_tol;
  cfg.seed = a.seed;
  cfg.ctrw_samples = a.ctrw_samples;
  if (a.order_override >= 0) cfg.series_order_override = a.order_override;
  if (!a.checks.empty()) {
    std::stringstream ss(a.checks);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) cfg.checks.push_back(item);
  }
  auto report = suite_run(doc.graph, cfg);
  write_output(a.out, report.to_json() + "\n");
  for (const auto& c : report.checks)
    std::cerr << (c.pass ? "pass " : "FAIL ") << c.name << " (worst margin " << c.worst_margin
              << (c.statistical ? ", statistical)" : ")") << "\n";
  return report.deterministic_pass ? kExitOk : kExitCheckFailed;
}

struct CompareArgs {
  std::string graph_path;
  std::string routes;  // default chosen from the graph family
  std::string pairs;
  std::string times = "0.25,1.0";
  std::string metric = "combinatorial";
  std::string format = "csv";
  std::string out;
  double tol = 1e-10;
  double general_tol = 1e-5;
  int threads = 0;
};

struct CompareRow {
  std::string x, y;
  double t = 0;
  std::vector<double> values;  // one per route
  double bound = 0;            // combined reported bounds
  double diff = 0;             // max pairwise difference
  bool within = true;
};

// closed-form reference for generated families; no_closed_form otherwise
double closed_form_value(const GraphDocument& doc, VertexIndex x, VertexIndex y, double t) {
  const auto& g = doc.graph;
  if (doc.family == "lattice_window") {
    int r = static_cast<int>(combinatorial_distance(g, x, y));
    return lattice_kernel(r, t);
  }
  if (doc.family == "tree_ball" || doc.family == "tree_radial_window") {
    int q = doc.params.value("q", 2);
    if (doc.family == "tree_radial_window" && g.id(x) != g.id(0))
      raise(Errc::no_closed_form,
            "radial windows carry the closed form only from the root vertex");
    int r = static_cast<int>(combinatorial_distance(g, x, y));
    return tree_kernel(q, r, t, 1e-13).value;
  }
  raise(Errc::no_closed_form, "family '" + doc.family + "' has no closed form");
}

double walk_series_value(const GraphDocument& doc, VertexIndex x, VertexIndex y, double t) {
  if (doc.family != "tree_ball" && doc.family != "tree_radial_window")
    raise(Errc::no_closed_form, "walk-count series applies to tree families only");
  int q = doc.params.value("q", 2);
  if (doc.family == "tree_radial_window" && doc.graph.id(x) != doc.graph.id(0))
    raise(Errc::no_closed_form,
          "radial windows carry the closed form only from the root vertex");
  int r = static_cast<int>(combinatorial_distance(doc.graph, x, y));
  return tree_kernel_walk_series(q, r, t, 1e-13);
}

int run_compare(const CompareArgs& a) {
  auto doc = load_graph(a.graph_path);
  std::vector<std::string> routes;
  if (!a.routes.empty()) {
    std::stringstream ss(a.routes);
    std::string item;
    while (std::getline(ss, item, ','))
      if (!item.empty()) routes.push_back(item);
  } else if (!doc.family.empty() && doc.family != "random_bounded_degree") {
    routes = {"closed", "dirac"};
  } else {
    routes = {"dirac", "gaussian"};
  }
  if (routes.size() < 2) raise(Errc::config_error, "compare needs at least two routes");

  auto pairs = parse_pairs(a.pairs);
  auto times = parse_times(a.times);
  std::vector<CompareRow> rows;
  for (const auto& [xs, ys] : pairs)
    for (double t : times) rows.push_back({xs, ys, t, {}, 0, 0, true});

  std::optional<Parametrix> gaussian;
  for (const auto& r : routes)
    if (r == "gaussian")
      gaussian =
          gaussian_parametrix(doc.graph, make_metric(doc.graph, metric_kind_from_name(a.metric)));

  parallel_rows(rows.size(), thread_count(a.threads), [&](std::size_t i) {
    auto& row = rows[i];
    const auto& g = doc.graph;
    VertexIndex x = g.at(row.x), y = g.at(row.y);
    for (const auto& route : routes) {
      if (route == "closed") {
        row.values.push_back(closed_form_value(doc, x, y, row.t));
        row.bound += 1e-12;
      } else if (route == "walk") {
        row.values.push_back(walk_series_value(doc, x, y, row.t));
        row.bound += 1e-12;
      } else if (route == "dirac") {
        auto est = heat_kernel_dirac(g, x, y, row.t, a.tol);
        row.values.push_back(est.value);
        row.bound += est.total_bound;
      } else if (route == "gaussian") {
        GeneralOptions opts;
        opts.tol = a.general_tol;
        auto est = heat_kernel_general(g, *gaussian, x, y, row.t, opts);
        row.values.push_back(est.value);
        row.bound += est.total_bound;
      } else {
        raise(Errc::config_error, "unknown route '" + route + "'");
      }
    }
    for (std::size_t p = 0; p < row.values.size(); ++p)
      for (std::size_t r2 = p + 1; r2 < row.values.size(); ++r2)
        row.diff = std::max(row.diff, std::abs(row.values[p] - row.values[r2]));
    row.within = row.diff <= row.bound + 1e-13;
  });

  std::string body;
  if (a.format == "json") {
    body = "[\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      body += "  {\"x\": \"" + r.x + "\", \"y\": \"" + r.y + "\", \"t\": " + fmt(r.t);
      for (std::size_t k = 0; k < routes.size(); ++k)
        body += ", \"" + routes[k] + "\": " + fmt(r.values[k]);
      body += ", \"abs_diff\": " + fmt(r.diff) + ", \"combined_bound\": " + fmt(r.bound) +
              std::string(", \"within_bound\": ") + (r.within ? "true" : "false") + "}";
      body += (i + 1 < rows.size()) ? ",\n" : "\n";
    }
    body += "]\n";
  } else {
    body = "x,y,t";
    for (const auto& r : routes) body += "," + r;
    body += ",abs_diff,combined_bound,within_bound\n";
    for (const auto& r : rows) {
      body += r.x + "," + r.y + "," + fmt(r.t);
      for (double v : r.values) body += "," + fmt(v);
      body += "," + fmt(r.diff) + "," + fmt(r.bound) + "," + (r.within ? "true" : "false");
      body += "\n";
    }
  }
  write_output(a.out, body);
  bool all_within = true;
  for (const auto& r : rows) all_within = all_within && r.within;
  return all_within ? kExitOk : kExitCheckFailed;
}

struct ClosedFormArgs {
  std::string family = "lattice";  // lattice | tree | tree_walk
  int q = 2;
  int r_max = 5;
  std::string times = "0.25,1.0";
  double tail_tol = 1e-12;
  std::string out;
};

int run_closed_form(const ClosedFormArgs& a) {
  auto times = parse_times(a.times);
  std::string body = "r,t,value,tail_bound\n";
  for (int r = 0; r <= a.r_max; ++r) {
    for (double t : times) {
      double value = 0.0, tail = 0.0;
      if (a.family == "lattice") {
        value = lattice_kernel(r, t);
      } else if (a.family == "tree") {
        auto v = tree_kernel(a.q, r, t, a.tail_tol);
        value = v.value;
        tail = v.tail_bound;
      } else if (a.family == "tree_walk") {
        value = tree_kernel_walk_series(a.q, r, t, a.tail_tol);
        tail = a.tail_tol;
      } else {
        raise(Errc::config_error, "unknown closed form family '" + a.family + "'");
      }
      body += std::to_string(r) + "," + fmt(t) + "," + fmt(value) + "," + fmt(tail) + "\n";
    }
  }
  write_output(a.out, body);
  return kExitOk;
}

struct MetricsArgs {
  std::string graph_path;
  std::string metric = "combinatorial";
  bool adaptedness = false;
  std::string out;
};

int run_metrics(const MetricsArgs& a) {
  auto doc = load_graph(a.graph_path);
  auto metric = make_metric(doc.graph, metric_kind_from_name(a.metric));
  auto rep = verify_metric(doc.graph, metric, a.adaptedness);
  write_output(a.out, rep.to_json() + "\n");
  return rep.pass ? kExitOk : kExitCheckFailed;
}

int dispatch(int argc, char** argv) {
  CLI::App app{"heat kernels on weighted graphs via the parametrix construction"};
  app.require_subcommand(1);
  app.set_config("--config");

  GenArgs gen_args;
  auto* cgen = app.add_subcommand("gen", "generate a graph file");
  cgen->add_option("--generator", gen_args.generator,
                   "lattice_window | tree_ball | tree_radial_window | random_bounded_degree")
      ->required();
  cgen->add_option("--radius", gen_args.radius);
  cgen->add_option("--q", gen_args.q);
  cgen->add_option("--n", gen_args.n);
  cgen->add_option("--max-degree", gen_args.max_degree);
  cgen->add_option("--theta-min", gen_args.theta_min);
  cgen->add_option("--theta-max", gen_args.theta_max);
  cgen->add_option("--w-min", gen_args.w_min);
  cgen->add_option("--w-max", gen_args.w_max);
  cgen->add_option("--seed", gen_args.seed);
  cgen->add_option("--out", gen_args.out, "output path ('-' for stdout)");

  QueryArgs q_args;
  auto* ccomp = app.add_subcommand("compute", "evaluate heat-kernel queries");
  ccomp->add_option("--graph", q_args.graph_path)->required();
  ccomp->add_option("--pairs", q_args.pairs, "comma list of x:y vertex-id pairs")->required();
  ccomp->add_option("--t", q_args.times, "comma list of times");
  ccomp->add_option("--parametrix", q_args.parametrix, "dirac | gaussian");
  ccomp->add_option("--metric", q_args.metric,
                    "combinatorial | normalized | intrinsic | adapted | edge_weighted");
  ccomp->add_option("--tol", q_args.tol, "series tolerance (dirac route)");
  ccomp->add_option("--general-tol", q_args.general_tol, "tolerance for the gaussian route");
  ccomp->add_option("--format", q_args.format, "csv | json");
  ccomp->add_option("--out", q_args.out);
  ccomp->add_option("--threads", q_args.threads, "0 = GRAPHHEAT_THREADS or hardware");

  ValidateArgs v_args;
  auto* cval = app.add_subcommand("validate", "run the validation suite");
  cval->add_option("--graph", v_args.graph_path)->required();
  cval->add_option("--checks", v_args.checks, "comma list (default: all)");
  cval->add_option("--t", v_args.times);
  cval->add_option("--series-tol", v_args.series_tol);
  cval->add_option("--order-override", v_args.order_override,
                   "force a fixed series order (failure demo)");
  cval->add_option("--seed", v_args.seed);
  cval->add_option("--ctrw-samples", v_args.ctrw_samples);
  cval->add_option("--out", v_args.out);

  CompareArgs c_args;
  auto* ccmp = app.add_subcommand("compare", "compare kernel routes");
  ccmp->add_option("--graph", c_args.graph_path)->required();
  ccmp->add_option("--routes", c_args.routes, "comma list of closed|walk|dirac|gaussian");
  ccmp->add_option("--pairs", c_args.pairs)->required();
  ccmp->add_option("--t", c_args.times);
  ccmp->add_option("--metric", c_args.metric);
  ccmp->add_option("--tol", c_args.tol);
  ccmp->add_option("--general-tol", c_args.general_tol);
  ccmp->add_option("--format", c_args.format);
  ccmp->add_option("--out", c_args.out);
  ccmp->add_option("--threads", c_args.threads);

  ClosedFormArgs f_args;
  auto* cform = app.add_subcommand("closed-form", "tabulate reference kernels");
  cform->add_option("--family", f_args.family, "lattice | tree | tree_walk");
  cform->add_option("--q", f_args.q);
  cform->add_option("--r-max", f_args.r_max);
  cform->add_option("--t", f_args.times);
  cform->add_option("--tail-tol", f_args.tail_tol);
  cform->add_option("--out", f_args.out);

  MetricsArgs m_args;
  auto* cmet = app.add_subcommand("metrics", "verify a metric on a graph");
  cmet->add_option("--graph", m_args.graph_path)->required();
  cmet->add_option("--metric", m_args.metric);
  cmet->add_flag("--adaptedness", m_args.adaptedness, "also check the adaptedness inequality");
  cmet->add_option("--out", m_args.out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (cgen->parsed()) return run_gen(gen_args);
  if (ccomp->parsed()) return run_compute(q_args);
  if (cval->parsed()) return run_validate(v_args);
  if (ccmp->parsed()) return run_compare(c_args);
  if (cform->parsed()) return run_closed_form(f_args);
  if (cmet->parsed()) return run_metrics(m_args);
  return kExitConfig;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return dispatch(argc, argv);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    switch (e.code()) {
      case Errc::region_too_small:
      case Errc::window_too_small:
      case Errc::quadrature_not_converged:
        return kExitResource;
      default:
        return kExitConfig;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}
