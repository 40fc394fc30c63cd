#include "zk/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "zk/error.hpp"
#include "zk/kernel.hpp"
#include "zk/oracle.hpp"
#include "zk/psi.hpp"
#include "zk/verify.hpp"

namespace zk::cli {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + text + "'");
  }
  if (used != text.size()) throw DomainError("cannot parse number '" + text + "'");
  return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  if (text.empty()) return out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(item);
  return out;
}

std::vector<HalfInt> parse_points(const std::string& text) {
  std::vector<HalfInt> out;
  for (const auto& s : split(text, ',')) out.push_back(HalfInt::parse(s));
  return out;
}

json complex_json(Complex v) {
  if (v.imag() == 0.0) return v.real();
  return json::array({v.real(), v.imag()});
}

json points_json(const std::vector<HalfInt>& pts) {
  json j = json::array();
  for (HalfInt p : pts) j.push_back(p.value());
  return j;
}

// Options shared by every subcommand that takes (z, z', xi).
struct ParamFlags {
  std::string z;
  std::string zp;
  double xi = 0.0;

  void attach(CLI::App* app) {
    app->add_option("--z", z, "parameter z, as a+bi")->required();
    app->add_option("--zp", zp, "parameter z', as a+bi")->required();
    app->add_option("--xi", xi, "parameter xi")->required();
  }
  ZParams params() const { return classify(parse_complex(z), parse_complex(zp), xi); }
};

struct Output {
  std::string path;
  std::string format = "json";

  void attach(CLI::App* app, const std::string& default_format = "json") {
    format = default_format;
    app->add_option("--out", path, "output file (default: standard output)");
    app->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  }
};

void emit(const Output& o, const std::string& text, std::ostream& out) {
  if (o.path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(o.path, std::ios::binary);
  if (!f) throw ConfigurationError("cannot open output file " + o.path);
  f << text;
}

struct BadArgs : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace

Complex parse_complex(const std::string& raw) {
  std::string text;
  for (char c : raw) {
    if (c != ' ') text += c;
  }
  if (text.empty()) throw DomainError("empty complex number");
  if (text.back() != 'i') return {parse_double(text), 0.0};
  const std::string body = text.substr(0, text.size() - 1);
  // The sign separating the parts is the last +/- that does not start an exponent.
  std::size_t split_at = std::string::npos;
  for (std::size_t k = body.size(); k-- > 1;) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split_at = k;
      break;
    }
  }
  auto imag_of = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(s);
  };
  if (split_at == std::string::npos) return {0.0, imag_of(body)};
  return {parse_double(body.substr(0, split_at)), imag_of(body.substr(split_at))};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"z-measures on partitions and their correlation kernels", "zkernel"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "expand all help");

  // weight
  ParamFlags weight_prm;
  std::string lambda_text;
  Output weight_out;
  auto* weight_cmd = app.add_subcommand("weight", "z-measure weight of one diagram");
  weight_prm.attach(weight_cmd);
  weight_cmd->add_option("--lambda", lambda_text, "diagram as comma-separated parts")->required();
  weight_out.attach(weight_cmd);

  // psi
  ParamFlags psi_prm;
  std::string psi_a;
  std::string psi_x;
  std::string psi_method = "series";
  QuadratureConfig psi_q;
  Output psi_out;
  auto* psi_cmd = app.add_subcommand("psi", "eigenfunction psi_a(x)");
  psi_prm.attach(psi_cmd);
  psi_cmd->add_option("--a", psi_a, "index a (half-integer)")->required();
  psi_cmd->add_option("--x", psi_x, "argument x (half-integer)")->required();
  psi_cmd->add_option("--method", psi_method, "series or contour")->check(CLI::IsMember({"series", "contour"}));
  psi_cmd->add_option("--radius", psi_q.radius, "contour radius");
  psi_cmd->add_option("--nodes", psi_q.nodes, "initial trapezoid nodes");
  psi_cmd->add_option("--max-doublings", psi_q.max_doublings, "node doublings before giving up");
  psi_out.attach(psi_cmd);

  // kernel
  ParamFlags kernel_prm;
  std::string kernel_points;
  std::string kernel_method = "series";
  std::string kernel_gauge = "underlined";
  KernelOptions kernel_opt;
  double kernel_radius = 0.0;
  Output kernel_out;
  auto* kernel_cmd = app.add_subcommand("kernel", "kernel matrix on a point set");
  kernel_prm.attach(kernel_cmd);
  kernel_cmd->add_option("--points", kernel_points, "comma-separated half-integers")->required();
  kernel_cmd->add_option("--method", kernel_method, "series, cd, contour, meixner-cd, krawtchouk-cd");
  kernel_cmd->add_option("--gauge", kernel_gauge, "underlined or hatted");
  kernel_cmd->add_option("--radius", kernel_radius, "double contour radius");
  kernel_cmd->add_option("--nodes", kernel_opt.contour_nodes, "initial nodes per circle");
  kernel_out.attach(kernel_cmd);

  // corr
  ParamFlags corr_prm;
  std::string corr_points;
  std::string corr_method = "series";
  int corr_nmax = 30;
  Output corr_out;
  auto* corr_cmd = app.add_subcommand("corr", "correlation function of a point set");
  corr_prm.attach(corr_cmd);
  corr_cmd->add_option("--points", corr_points, "comma-separated half-integers")->required();
  corr_cmd->add_option("--method", corr_method, "series, cd, contour, meixner-cd, krawtchouk-cd or brute");
  corr_cmd->add_option("--nmax", corr_nmax, "largest diagram size enumerated by the brute method");
  corr_out.attach(corr_cmd);

  // ensemble
  std::string ens_family;
  int ens_N = 0;
  double ens_beta = 0.0;
  double ens_xi = 0.0;
  double ens_p = 0.0;
  int ens_L = 0;
  int ens_T = 0;
  std::string ens_points;
  Output ens_out;
  auto* ens_cmd = app.add_subcommand("ensemble", "correlation function of an orthogonal polynomial ensemble");
  ens_cmd->add_option("--family", ens_family, "meixner or krawtchouk")
      ->required()
      ->check(CLI::IsMember({"meixner", "krawtchouk"}));
  ens_cmd->add_option("--N", ens_N, "number of particles")->required();
  ens_cmd->add_option("--beta", ens_beta, "Meixner beta");
  ens_cmd->add_option("--xi", ens_xi, "Meixner xi");
  ens_cmd->add_option("--p", ens_p, "Krawtchouk p");
  ens_cmd->add_option("--L", ens_L, "Krawtchouk L");
  ens_cmd->add_option("--cutoff", ens_T, "Meixner support cutoff (0 chooses one)");
  ens_cmd->add_option("--points", ens_points, "comma-separated nonnegative integers")->required();
  ens_out.attach(ens_cmd);

  // sample
  ParamFlags sample_prm;
  int sample_count = 1;
  int sample_nmax = 30;
  std::uint64_t sample_seed = 0;
  Output sample_out;
  auto* sample_cmd = app.add_subcommand("sample", "exact samples as JSON lines");
  sample_prm.attach(sample_cmd);
  sample_cmd->add_option("--count", sample_count, "number of samples");
  sample_cmd->add_option("--nmax", sample_nmax, "largest diagram size");
  sample_cmd->add_option("--seed", sample_seed, "64-bit seed");
  sample_out.attach(sample_cmd);

  // verify
  std::string verify_suite = "all";
  std::vector<std::string> verify_tols;
  Output verify_out;
  auto* verify_cmd = app.add_subcommand("verify", "run the self-check suites");
  std::vector<std::string> suite_choices = suite_names();
  suite_choices.push_back("all");
  verify_cmd->add_option("--suite", verify_suite, "suite name or all")->check(CLI::IsMember(suite_choices));
  verify_cmd->add_option("--tol", verify_tols, "tolerance override name=value (repeatable)");
  verify_out.attach(verify_cmd, "csv");

  // grid
  ParamFlags grid_prm;
  std::string grid_x0 = "-4.5";
  std::string grid_x1 = "4.5";
  std::string grid_y0;
  std::string grid_y1;
  std::string grid_method = "series";
  std::string grid_gauge = "underlined";
  Output grid_out;
  auto* grid_cmd = app.add_subcommand("grid", "K(x, y) over a rectangle of lattice points");
  grid_prm.attach(grid_cmd);
  grid_cmd->add_option("--xmin", grid_x0, "smallest x");
  grid_cmd->add_option("--xmax", grid_x1, "largest x");
  grid_cmd->add_option("--ymin", grid_y0, "smallest y (default: xmin)");
  grid_cmd->add_option("--ymax", grid_y1, "largest y (default: xmax)");
  grid_cmd->add_option("--method", grid_method, "kernel representation");
  grid_cmd->add_option("--gauge", grid_gauge, "underlined or hatted");
  grid_out.attach(grid_cmd, "csv");

  std::vector<const char*> argv{"zkernel"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  // Everything parsed from text is validated before any computation, so a malformed value
  // exits with 2 and a failed computation with 1.
  auto bad = [&](const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  };

  try {
    if (*weight_cmd) {
      ZParams prm;
      Partition lambda;
      try {
        prm = weight_prm.params();
        lambda = Partition::parse(lambda_text);
      } catch (const Error& e) {
        return bad(e);
      }
      const double w = weight(prm, lambda);
      if (weight_out.format == "csv") {
        emit(weight_out, "lambda,weight\n\"" + lambda.str() + "\"," + fmt17(w) + "\n", out);
      } else {
        emit(weight_out, json{{"weight", w}}.dump() + "\n", out);
      }
      return 0;
    }

    if (*psi_cmd) {
      ZParams prm;
      HalfInt a = HalfInt::above(0);
      HalfInt x = HalfInt::above(0);
      try {
        prm = psi_prm.params();
        a = HalfInt::parse(psi_a);
        x = HalfInt::parse(psi_x);
        if (psi_method == "contour") psi_q.validate(prm.xi);
      } catch (const Error& e) {
        return bad(e);
      }
      const double v = psi_method == "contour" ? psi_contour(a, x, prm, psi_q) : psi(a, x, prm);
      if (psi_out.format == "csv") {
        emit(psi_out, "a,x,psi\n" + a.str() + "," + x.str() + "," + fmt17(v) + "\n", out);
      } else {
        emit(psi_out, json{{"a", a.value()}, {"x", x.value()}, {"psi", v}}.dump() + "\n", out);
      }
      return 0;
    }

    if (*kernel_cmd) {
      ZParams prm;
      std::vector<HalfInt> pts;
      KernelMethod method;
      Gauge gauge;
      try {
        prm = kernel_prm.params();
        pts = parse_points(kernel_points);
        method = parse_kernel_method(kernel_method);
        gauge = parse_gauge(kernel_gauge);
        if (kernel_radius != 0.0) kernel_opt.contour_radius = kernel_radius;
      } catch (const Error& e) {
        return bad(e);
      }
      const KernelMatrix m = kernel_matrix(pts, prm, method, gauge, kernel_opt);
      emit(kernel_out, kernel_out.format == "csv" ? m.to_csv() : m.to_json() + "\n", out);
      return 0;
    }

    if (*corr_cmd) {
      ZParams prm;
      std::vector<HalfInt> pts;
      try {
        prm = corr_prm.params();
        pts = parse_points(corr_points);
        if (pts.empty()) throw DomainError("at least one point is required");
        if (corr_method != "brute") parse_kernel_method(corr_method);
      } catch (const Error& e) {
        return bad(e);
      }
      json j{{"points", points_json(pts)}, {"method", corr_method}};
      if (corr_method == "brute") {
        const CorrResult r = brute_corr(pts, prm, corr_nmax);
        j["value"] = r.value;
        j["tail_bound"] = r.tail_bound;
        j["n_max"] = r.n_max_used;
      } else {
        j["value"] = corr_det(pts, prm, parse_kernel_method(corr_method));
        j["tail_bound"] = 0.0;
        j["n_max"] = nullptr;
      }
      if (corr_out.format == "csv") {
        std::string pts_text;
        for (HalfInt p : pts) pts_text += (pts_text.empty() ? "" : " ") + p.str();
        emit(corr_out,
             "points,method,value,tail_bound\n\"" + pts_text + "\"," + corr_method + "," +
                 fmt17(j["value"].get<double>()) + "," + fmt17(j["tail_bound"].get<double>()) + "\n",
             out);
      } else {
        emit(corr_out, j.dump() + "\n", out);
      }
      return 0;
    }

    if (*ens_cmd) {
      std::vector<int> pts;
      EnsembleFamily family;
      try {
        for (const auto& s : split(ens_points, ',')) {
          const double v = parse_double(s);
          if (v != std::floor(v)) throw DomainError("ensemble points must be integers");
          pts.push_back(static_cast<int>(v));
        }
        if (ens_family == "meixner") {
          const MeixnerParams m{ens_beta, ens_xi};
          validate(m);
          family = m;
        } else {
          const KrawtchoukParams k{ens_p, ens_L};
          validate(k);
          family = k;
        }
      } catch (const Error& e) {
        return bad(e);
      }
      const CorrResult r = ensemble_brute_corr(pts, ens_N, family, ens_T);
      json j{{"points", pts}, {"value", r.value}, {"tail_bound", r.tail_bound}, {"cutoff", r.n_max_used}};
      emit(ens_out, j.dump() + "\n", out);
      return 0;
    }

    if (*sample_cmd) {
      ZParams prm;
      try {
        prm = sample_prm.params();
      } catch (const Error& e) {
        return bad(e);
      }
      std::string text;
      if (sample_out.format == "csv") text = "seed,index,n,partition\n";
      for (const auto& r : sample(prm, sample_count, sample_nmax, sample_seed)) {
        if (sample_out.format == "csv") {
          text += std::to_string(r.seed) + "," + std::to_string(r.index) + "," + std::to_string(r.n) + ",\"" +
                  r.partition.str() + "\"\n";
        } else {
          json parts = json::array();
          for (int p : r.partition.parts()) parts.push_back(p);
          text += json{{"seed", r.seed}, {"index", r.index}, {"n", r.n}, {"partition", parts}}.dump() + "\n";
        }
      }
      emit(sample_out, text, out);
      return 0;
    }

    if (*verify_cmd) {
      std::map<std::string, double> overrides;
      try {
        for (const auto& t : verify_tols) {
          const auto eq = t.find('=');
          if (eq == std::string::npos) throw DomainError("tolerance override must be name=value");
          const double v = parse_double(t.substr(eq + 1));
          if (!(v > 0.0)) throw DomainError("tolerance overrides must be positive");
          overrides[t.substr(0, eq)] = v;
        }
      } catch (const Error& e) {
        return bad(e);
      }
      const auto results = run_checks(verify_suite, overrides);
      bool ok = true;
      std::string text;
      if (verify_out.format == "json") {
        json arr = json::array();
        for (const auto& r : results) {
          arr.push_back({{"suite", r.suite},
                         {"check", r.name},
                         {"reference", r.reference},
                         {"tolerance", r.tolerance},
                         {"attained", std::isfinite(r.attained) ? json(r.attained) : json(nullptr)},
                         {"passed", r.passed}});
          ok = ok && r.passed;
        }
        text = arr.dump(2) + "\n";
      } else {
        text = "suite,check,reference,tolerance,attained,status\n";
        for (const auto& r : results) {
          text += r.suite + "," + r.name + ",\"" + r.reference + "\"," + fmt17(r.tolerance) + "," +
                  (std::isfinite(r.attained) ? fmt17(r.attained) : std::string("error")) + "," +
                  (r.passed ? "pass" : "FAIL") + "\n";
          ok = ok && r.passed;
        }
      }
      emit(verify_out, text, out);
      return ok ? 0 : 1;
    }

    if (*grid_cmd) {
      ZParams prm;
      HalfInt x0 = HalfInt::above(0), x1 = x0, y0 = x0, y1 = x0;
      KernelMethod method;
      Gauge gauge;
      try {
        prm = grid_prm.params();
        x0 = HalfInt::parse(grid_x0);
        x1 = HalfInt::parse(grid_x1);
        y0 = grid_y0.empty() ? x0 : HalfInt::parse(grid_y0);
        y1 = grid_y1.empty() ? x1 : HalfInt::parse(grid_y1);
        if (x1 < x0 || y1 < y0) throw DomainError("grid bounds are reversed");
        method = parse_kernel_method(grid_method);
        gauge = parse_gauge(grid_gauge);
      } catch (const Error& e) {
        return bad(e);
      }
      std::vector<HalfInt> pts;
      const HalfInt lo = std::min(x0, y0);
      const HalfInt hi = std::max(x1, y1);
      for (HalfInt p = lo; p <= hi; p = p.shifted(1)) pts.push_back(p);
      const KernelMatrix m = kernel_matrix(pts, prm, method, gauge);
      auto index = [&](HalfInt p) { return static_cast<std::size_t>(integer_diff(p, lo)); };
      std::string text;
      if (grid_out.format == "csv") {
        text = "x,y,K\n";
        for (HalfInt x = x0; x <= x1; x = x.shifted(1)) {
          for (HalfInt y = y0; y <= y1; y = y.shifted(1)) {
            const Complex v = m.at(index(x), index(y));
            std::string cell = fmt17(v.real());
            if (v.imag() != 0.0) cell += (v.imag() < 0 ? "" : "+") + fmt17(v.imag()) + "i";
            text += x.str() + "," + y.str() + "," + cell + "\n";
          }
        }
      } else {
        json xs = json::array();
        json ys = json::array();
        json rows = json::array();
        for (HalfInt y = y0; y <= y1; y = y.shifted(1)) ys.push_back(y.value());
        for (HalfInt x = x0; x <= x1; x = x.shifted(1)) {
          xs.push_back(x.value());
          json row = json::array();
          for (HalfInt y = y0; y <= y1; y = y.shifted(1)) row.push_back(complex_json(m.at(index(x), index(y))));
          rows.push_back(std::move(row));
        }
        text = json{{"x", xs}, {"y", ys}, {"K", rows}, {"method", to_string(method)}, {"gauge", to_string(gauge)}}
                   .dump() +
               "\n";
      }
      emit(grid_out, text, out);
      return 0;
    }
  } catch (const InvalidParameters& e) {
    return bad(e);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace zk::cli
