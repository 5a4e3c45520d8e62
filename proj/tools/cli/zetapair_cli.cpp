#include "zetapair_cli.hpp"

#include <CLI11.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <optional>
#include <sstream>

#include "zetapair/arithmetic.hpp"
#include "zetapair/error.hpp"
#include "zetapair/predictions.hpp"
#include "zetapair/statistics.hpp"
#include "zetapair/verification.hpp"
#include "zetapair/zeros.hpp"

#ifndef ZETAPAIR_VERSION
#define ZETAPAIR_VERSION "unknown"
#endif

namespace zetapair::cli {

using json = nlohmann::ordered_json;

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  return std::string(buf, res.ptr);
}

namespace {

double to_double(const std::string& s, const std::string& what) {
  double x = 0.0;
  const char* end = s.data() + s.size();
  const auto res = std::from_chars(s.data(), end, x);
  if (res.ec != std::errc{} || res.ptr != end || !std::isfinite(x))
    throw Error(ErrorKind::InvalidArgument, "cannot read " + what + " from '" + s + "'");
  return x;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) parts.push_back(cur);
  if (!s.empty() && s.back() == sep) parts.emplace_back();
  return parts;
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  if (spec.find(':') != std::string::npos) {
    const auto p = split(spec, ':');
    if (p.size() != 3) throw Error(ErrorKind::InvalidArgument, "grid must be a:b:step, got '" + spec + "'");
    const double a = to_double(p[0], "grid start"), b = to_double(p[1], "grid end"), h = to_double(p[2], "grid step");
    if (!(h > 0.0) || b < a) throw Error(ErrorKind::InvalidArgument, "grid needs step > 0 and end >= start");
    const auto n = static_cast<long>(std::floor((b - a) / h + 1e-9));
    std::vector<double> g;
    for (long k = 0; k <= n; ++k) g.push_back(a + static_cast<double>(k) * h);
    return g;
  }
  std::vector<double> g;
  for (const auto& p : split(spec, ',')) g.push_back(to_double(p, "grid value"));
  if (g.empty()) throw Error(ErrorKind::InvalidArgument, "empty grid");
  return g;
}

std::pair<double, double> parse_range(const std::string& spec) {
  const auto p = split(spec, ':');
  if (p.size() != 2) throw Error(ErrorKind::InvalidArgument, "range must be lo:hi, got '" + spec + "'");
  const double lo = to_double(p[0], "range start"), hi = to_double(p[1], "range end");
  if (!(hi > lo)) throw Error(ErrorKind::InvalidArgument, "range needs hi > lo");
  return {lo, hi};
}

TestFunction parse_test_function(const std::string& spec) {
  const auto p = split(spec, ':');
  if (p.empty()) throw Error(ErrorKind::InvalidArgument, "empty test function");
  if (p[0] == "montgomery" && p.size() == 1) return montgomery_weight();
  if (p[0] == "fejer" && p.size() == 2) return make_fejer(to_double(p[1], "fejer scale"));
  if (p[0] == "bump" && (p.size() == 2 || (p.size() == 3 && p[2] == "raw")))
    return make_smooth_bump(to_double(p[1], "bump band limit"), p.size() == 2);
  throw Error(ErrorKind::InvalidArgument, "unknown test function '" + spec + "'");
}

namespace {

struct Output {
  std::ostream* stream = nullptr;
  std::unique_ptr<std::ofstream> file;
};

Output open_output(const std::string& path, std::ostream& fallback) {
  Output o;
  if (path.empty() || path == "-") {
    o.stream = &fallback;
    return o;
  }
  o.file = std::make_unique<std::ofstream>(path, std::ios::binary);
  if (!*o.file) throw Error(ErrorKind::Precondition, "cannot open '" + path + "' for writing");
  o.stream = o.file.get();
  return o;
}

// args without the execution-only flags (--out, --threads)
std::vector<std::string> recorded_args(const std::vector<std::string>& args) {
  std::vector<std::string> kept;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const auto& a = args[i];
    if (a == "--out" || a == "--threads" || a == "--json") {
      ++i;
      continue;
    }
    if (a.rfind("--out=", 0) == 0 || a.rfind("--threads=", 0) == 0 || a.rfind("--json=", 0) == 0) continue;
    kept.push_back(a);
  }
  return kept;
}

void write_envelope(std::ostream& os, const std::string& command, const std::vector<std::string>& args,
                    const json& config, const json& result) {
  json env;
  env["tool"] = "zetapair";
  env["version"] = ZETAPAIR_VERSION;
  env["command"] = command;
  env["args"] = args;
  env["config"] = config;
  env["result"] = result;
  os << "# " << env.dump() << "\n";
}

void csv_row(std::ostream& os, const std::vector<std::string>& cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
  os << "\n";
}

ZeroList read_zero_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Precondition, "cannot open zero file '" + path + "'");
  return load_zeros(in, path);
}

// Loaded lists are re-certified up to T (default: their covered height).
ZeroList verified_zeros(const std::string& path, std::optional<double> T, const ZeroSearchConfig& cfg) {
  ZeroList z = read_zero_file(path);
  const double t = T.value_or(z.height_covered);
  turing_count_check(z, t, cfg);
  return z;
}

json provenance(const ZeroList& z) {
  json p;
  p["source"] = z.source;
  p["provenance"] = z.provenance == Provenance::Computed ? "computed" : "loaded";
  p["count"] = z.ordinates.size();
  p["height_covered"] = z.height_covered;
  p["abs_error"] = z.abs_error;
  p["turing_verified"] = z.turing_verified;
  return p;
}

KernelContext make_context(std::uint64_t tables, unsigned threads) {
  KernelContext ctx;
  ctx.tables = std::make_shared<const ArithmeticTables>(cached_tables(tables));
  ctx.threads = threads;
  return ctx;
}

KernelKind kernel_kind(const std::string& k) {
  if (k == "Q") return KernelKind::Q;
  if (k == "K") return KernelKind::K;
  if (k == "Qtilde") return KernelKind::QTilde;
  throw Error(ErrorKind::InvalidArgument, "kernel must be Q, K or Qtilde");
}

json report_json(const CheckReport& r) {
  json j;
  j["name"] = r.name;
  j["lhs"] = {r.lhs.real(), r.lhs.imag()};
  j["rhs"] = {r.rhs.real(), r.rhs.imag()};
  j["residual"] = r.residual;
  j["budget"] = r.budget;
  j["passed"] = r.passed;
  j["note"] = r.note;
  return j;
}

int exit_code(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
      return kExitParse;
    case ErrorKind::Accuracy:
      return kExitAccuracy;
    default:
      return kExitPrecondition;
  }
}

void error_body(std::ostream& err, const std::string& kind, const std::string& message) {
  json j;
  j["error"] = kind;
  j["message"] = message;
  err << j.dump() << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Zeta zero pair-correlation toolkit", "zetapair"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ZETAPAIR_VERSION));

  unsigned threads = 0;
  std::string out_path = "-";
  std::optional<std::uint64_t> tables_opt;
  auto common = [&](CLI::App* c, std::uint64_t default_tables) {
    c->add_option("--threads", threads, "worker threads (0 = all cores); results do not depend on it");
    c->add_option("--out", out_path, "output file, '-' for stdout");
    c->add_option("--tables", tables_opt, "sieve limit for prime sums (default " + std::to_string(default_tables) + ")");
  };

  // zeros-compute
  double from = 0.0, to = 0.0, abs_error = 1e-9;
  auto* zc = app.add_subcommand("zeros-compute", "compute and certify zeros of Z(t) on [from, to]");
  zc->add_option("--from", from, "start height")->default_val(0.0);
  zc->add_option("--to", to, "end height")->required();
  zc->add_option("--abs-error", abs_error, "target ordinate accuracy")->default_val(1e-9);
  common(zc, 1000000);

  // zeros-verify
  std::string in_path;
  std::optional<double> T_opt;
  auto* zv = app.add_subcommand("zeros-verify", "certify a zero file up to T");
  zv->add_option("--in", in_path, "zero file")->required();
  zv->add_option("--T", T_opt, "height (default: covered height of the file)");
  common(zv, 1000000);

  // paircorr
  std::string zeros_path, omega_spec = "bump:0.9", alpha_spec, statistic = "pair";
  double L = 0.0;
  auto* pc = app.add_subcommand("paircorr", "pair-correlation sums over the zeros");
  pc->add_option("--zeros", zeros_path, "zero file")->required();
  pc->add_option("--omega", omega_spec, "weight: bump:XI, fejer:S, montgomery")->default_val("bump:0.9");
  pc->add_option("--alpha", alpha_spec, "alpha grid a:b:step or list")->required();
  pc->add_option("--T", T_opt, "height (default: covered height)");
  pc->add_option("--L", L, "phase scale (0 = log T)")->default_val(0.0);
  pc->add_option("--statistic", statistic, "pair or F")->check(CLI::IsMember({"pair", "F"}))->default_val("pair");
  common(pc, 1000000);

  // windowed
  std::string r1_spec = "bump:3", r2_spec = "bump:3", sigma_spec = "bump:8";
  double H = 0.0, alpha1 = 0.0, alpha2 = 0.0;
  auto* wd = app.add_subcommand("windowed", "t-windowed pair statistic against its prediction");
  wd->add_option("--zeros", zeros_path, "zero file")->required();
  wd->add_option("--r1", r1_spec, "first weight")->default_val("bump:3");
  wd->add_option("--r2", r2_spec, "second weight")->default_val("bump:3");
  wd->add_option("--sigma", sigma_spec, "window in t")->default_val("bump:8");
  wd->add_option("--T", T_opt, "centre of the window")->required();
  wd->add_option("--H", H, "window width")->required();
  wd->add_option("--alpha1", alpha1, "first frequency")->required();
  wd->add_option("--alpha2", alpha2, "second frequency")->required();
  wd->add_option("--L", L, "phase scale (0 = log T)")->default_val(0.0);
  wd->add_flag("--no-prediction", "skip the prediction column");
  common(wd, 1000000);

  // histogram
  double bin = 0.1;
  std::string range_spec = "0:30";
  std::size_t first_n = 0;
  auto* hg = app.add_subcommand("histogram", "histogram of positive zero differences");
  hg->add_option("--zeros", zeros_path, "zero file")->required();
  hg->add_option("--bin", bin, "bin width")->default_val(0.1);
  hg->add_option("--range", range_spec, "lo:hi")->default_val("0:30");
  hg->add_option("--count", first_n, "use the first N zeros (0 = all)")->default_val(0);
  hg->add_flag("--overlay", "add the predicted count per bin");
  common(hg, 1000000);

  // predict
  std::string kernel = "Q", u_spec;
  double T_val = 0.0;
  auto* pr = app.add_subcommand("predict", "kernel values on a u grid");
  pr->add_option("--kernel", kernel, "Q, K or Qtilde")->default_val("Q");
  pr->add_option("--T", T_val, "height t (or T for --tavg)")->required();
  pr->add_option("--u", u_spec, "u grid a:b:step or list")->required();
  pr->add_flag("--tavg", "average over t in [0, T]");
  common(pr, 1000000);

  // compare
  auto* cp = app.add_subcommand("compare", "pair sum against its prediction over an alpha grid");
  cp->add_option("--zeros", zeros_path, "zero file")->required();
  cp->add_option("--omega", omega_spec, "weight")->default_val("bump:0.9");
  cp->add_option("--alpha-grid", alpha_spec, "alpha grid")->required();
  cp->add_option("--T", T_opt, "height (default: covered height)");
  cp->add_option("--kernel", kernel, "Q, K or Qtilde")->default_val("Q");
  cp->add_option("--L", L, "phase scale (0 = log T)")->default_val(0.0);
  common(cp, 1000000);

  // verify
  std::string suite = "all", json_path;
  auto* vf = app.add_subcommand("verify", "identity checks");
  vf->add_option("--suite", suite, "all or a comma list of explicit,digamma,floor,diagonal,floor-printed")
      ->default_val("all");
  vf->add_option("--zeros", zeros_path, "zero file for the explicit formula (computed when absent)");
  vf->add_option("--json", json_path, "write the reports as a JSON array");
  common(vf, 10000);

  // replay
  auto* rp = app.add_subcommand("replay", "re-run the command recorded in an output file");
  rp->add_option("--in", in_path, "CSV written by zetapair")->required();
  rp->add_option("--threads", threads, "worker threads");
  rp->add_option("--out", out_path, "output file, '-' for stdout");

  std::vector<std::string> argv_store{"zetapair"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitPrecondition;
  }

  const auto recorded = recorded_args(args);
  const std::uint64_t table_limit = tables_opt.value_or(vf->parsed() ? 10000 : 1000000);
  ZeroSearchConfig zcfg;
  zcfg.threads = threads;

  try {
    if (zc->parsed()) {
      zcfg.abs_error = abs_error;
      const ZeroList z = find_zeros(from, to, zcfg);
      auto o = open_output(out_path, out);
      save_zeros(z, *o.stream);
      if (o.file) {
        json s;
        s["count"] = z.ordinates.size();
        s["height_start"] = z.height_start;
        s["height_covered"] = z.height_covered;
        s["turing_verified"] = z.turing_verified;
        out << s.dump() << "\n";
      }
      return kExitOk;
    }

    if (zv->parsed()) {
      ZeroList z = read_zero_file(in_path);
      const double t = T_opt.value_or(z.height_covered);
      const auto rep = turing_count_check(z, t, zcfg);
      json s;
      s["verified_count"] = rep.count;
      s["T"] = t;
      s["turing_upper_bound"] = rep.upper_bound;
      s["window_start"] = rep.window_start;
      s["window"] = rep.window;
      auto o = open_output(out_path, out);
      *o.stream << s.dump() << "\n";
      return kExitOk;
    }

    if (pc->parsed()) {
      const ZeroList z = verified_zeros(zeros_path, T_opt, zcfg);
      const double T = z.height_covered;
      const auto alphas = parse_grid(alpha_spec);
      json cfg{{"zeros", zeros_path}, {"alpha", alpha_spec}, {"T", T}, {"L", L}, {"statistic", statistic}};
      std::ostringstream body;
      double worst = 0.0;
      if (statistic == "F") {
        csv_row(body, {"alpha", "F"});
        for (double a : alphas) csv_row(body, {fmt(a), fmt(montgomery_F(z, a, T, threads))});
      } else {
        const TestFunction omega = parse_test_function(omega_spec);
        cfg["omega"] = omega.describe();
        csv_row(body, {"alpha", "re", "im", "pairs", "truncation_radius", "neglected_bound"});
        for (double a : alphas) {
          const auto r = pair_sum(z, omega, a, T, L, threads);
          worst = std::max(worst, r.neglected_bound);
          csv_row(body, {fmt(a), fmt(r.value.real()), fmt(r.value.imag()), std::to_string(r.pairs_used),
                         fmt(r.truncation_radius), fmt(r.neglected_bound)});
        }
      }
      auto o = open_output(out_path, out);
      write_envelope(*o.stream, "paircorr", recorded, cfg, {{"zeros", provenance(z)}, {"max_neglected_bound", worst}});
      *o.stream << body.str();
      return kExitOk;
    }

    if (wd->parsed()) {
      const TestFunction r1 = parse_test_function(r1_spec), r2 = parse_test_function(r2_spec),
                         sigma = parse_test_function(sigma_spec);
      const double T = *T_opt;
      const Window w = windowed_coverage(r1, r2, sigma, T, H);
      ZeroList z = read_zero_file(zeros_path);
      turing_count_check(z, std::min(z.height_covered, std::max(w.hi, 2.5)), zcfg);
      WindowedOptions wo;
      wo.L = L;
      wo.threads = threads;
      const auto lhs = windowed_pair_statistic(z, r1, r2, sigma, T, H, alpha1, alpha2, wo);
      json cfg{{"zeros", zeros_path}, {"r1", r1.describe()}, {"r2", r2.describe()}, {"sigma", sigma.describe()},
               {"T", T}, {"H", H}, {"alpha1", alpha1}, {"alpha2", alpha2}, {"L", L}};
      std::vector<std::string> head{"lhs_re", "lhs_im", "lhs_bound"};
      std::vector<std::string> row{fmt(lhs.value.real()), fmt(lhs.value.imag()), fmt(lhs.error_bound)};
      if (wd->count("--no-prediction") == 0) {
        const auto rhs = windowed_prediction(r1, r2, T, alpha1, alpha2, make_context(table_limit, threads), L);
        head.insert(head.end(), {"rhs_re", "rhs_im", "rhs_bound"});
        row.insert(row.end(), {fmt(rhs.value.real()), fmt(rhs.value.imag()), fmt(rhs.error_bound)});
        cfg["tables"] = table_limit;
      }
      auto o = open_output(out_path, out);
      write_envelope(*o.stream, "windowed", recorded, cfg, {{"zeros", provenance(z)}});
      csv_row(*o.stream, head);
      csv_row(*o.stream, row);
      return kExitOk;
    }

    if (hg->parsed()) {
      ZeroList z = read_zero_file(zeros_path);
      if (first_n > 0) {
        if (first_n > z.ordinates.size())
          throw Error(ErrorKind::Precondition, "zero file holds fewer than --count ordinates");
        z.ordinates.resize(first_n);
        z.height_covered = z.ordinates.back();
      }
      const auto [lo, hi] = parse_range(range_spec);
      const Histogram h = diff_histogram(z, bin, lo, hi);
      const bool overlay = hg->count("--overlay") > 0;
      std::vector<double> pred;
      const double T = z.ordinates.empty() ? 0.0 : z.ordinates.back();
      if (overlay) {
        std::vector<double> centres(h.counts.size());
        for (std::size_t k = 0; k < centres.size(); ++k) centres[k] = h.bin_center(k);
        pred = prediction_density_curve(T, centres, make_context(table_limit, threads));
        // expected ordered pairs per bin: T * density * bin width
        for (auto& p : pred) p *= T * bin;
      }
      json cfg{{"zeros", zeros_path}, {"bin", bin}, {"range", range_spec}, {"count", z.ordinates.size()},
               {"overlay", overlay}};
      if (overlay) cfg["tables"] = table_limit;
      auto o = open_output(out_path, out);
      write_envelope(*o.stream, "histogram", recorded, cfg, {{"zeros", provenance(z)}, {"total", h.total()}, {"T", T}});
      std::vector<std::string> head{"bin_lo", "bin_hi", "center", "count"};
      if (overlay) head.push_back("predicted");
      csv_row(*o.stream, head);
      for (std::size_t k = 0; k < h.counts.size(); ++k) {
        const double a = h.origin + static_cast<double>(k) * h.bin_width;
        std::vector<std::string> row{fmt(a), fmt(a + h.bin_width), fmt(h.bin_center(k)), std::to_string(h.counts[k])};
        if (overlay) row.push_back(fmt(pred[k]));
        csv_row(*o.stream, row);
      }
      return kExitOk;
    }

    if (pr->parsed()) {
      const auto kind = kernel_kind(kernel);
      const auto us = parse_grid(u_spec);
      const bool tavg = pr->count("--tavg") > 0;
      std::optional<KernelContext> ctx;
      if (kind != KernelKind::K) ctx = make_context(table_limit, threads);
      std::vector<double> vals(us.size());
      for (std::size_t i = 0; i < us.size(); ++i) {
        const double u = us[i];
        switch (kind) {
          case KernelKind::K:
            vals[i] = tavg ? gue_tavg(T_val, u) : gue_kernel(T_val, u);
            break;
          case KernelKind::Q:
            vals[i] = tavg ? q_kernel_tavg(T_val, u, *ctx) : q_kernel(T_val, u, *ctx);
            break;
          case KernelKind::QTilde:
            vals[i] = tavg ? q_tilde_tavg_from_parts(kernel_parts(u, *ctx), T_val) : q_tilde_kernel(T_val, u, *ctx);
            break;
        }
      }
      json cfg{{"kernel", kernel}, {"T", T_val}, {"u", u_spec}, {"tavg", tavg}};
      if (ctx) cfg["tables"] = table_limit;
      auto o = open_output(out_path, out);
      write_envelope(*o.stream, "predict", recorded, cfg, json::object());
      csv_row(*o.stream, {"u", "value"});
      for (std::size_t i = 0; i < us.size(); ++i) csv_row(*o.stream, {fmt(us[i]), fmt(vals[i])});
      return kExitOk;
    }

    if (cp->parsed()) {
      const ZeroList z = verified_zeros(zeros_path, T_opt, zcfg);
      const double T = z.height_covered;
      const TestFunction omega = parse_test_function(omega_spec);
      const auto alphas = parse_grid(alpha_spec);
      PredictionOptions po;
      po.kernel = kernel_kind(kernel);
      po.L = L;
      const auto rhs = pair_prediction_grid(omega, alphas, T, make_context(table_limit, threads), po);
      std::ostringstream body;
      csv_row(body, {"alpha", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_diff", "lhs_bound", "rhs_bound"});
      for (std::size_t i = 0; i < alphas.size(); ++i) {
        const auto l = pair_sum(z, omega, alphas[i], T, L, threads);
        csv_row(body, {fmt(alphas[i]), fmt(l.value.real()), fmt(l.value.imag()), fmt(rhs[i].value.real()),
                       fmt(rhs[i].value.imag()), fmt(std::abs(l.value - rhs[i].value)), fmt(l.neglected_bound),
                       fmt(rhs[i].error_bound)});
      }
      json cfg{{"zeros", zeros_path}, {"omega", omega.describe()}, {"alpha_grid", alpha_spec}, {"T", T},
               {"kernel", kernel}, {"L", L}, {"tables", table_limit}};
      auto o = open_output(out_path, out);
      write_envelope(*o.stream, "compare", recorded, cfg, {{"zeros", provenance(z)}});
      *o.stream << body.str();
      return kExitOk;
    }

    if (vf->parsed()) {
      std::vector<std::string> names = suite == "all"
                                           ? std::vector<std::string>{"explicit", "digamma", "floor", "diagonal"}
                                           : split(suite, ',');
      const auto tables = std::make_shared<const ArithmeticTables>(cached_tables(table_limit));
      std::vector<CheckReport> reports;
      for (const auto& n : names) {
        if (n == "explicit") {
          std::vector<TestFunction> fs{make_smooth_bump(0.5), make_smooth_bump(1.5), make_smooth_bump(3.0)};
          double need = 0.0;
          for (const auto& f : fs) need = std::max(need, explicit_formula_required_height(f));
          ZeroList z = zeros_path.empty() ? find_zeros(0.0, need, zcfg) : verified_zeros(zeros_path, std::nullopt, zcfg);
          for (const auto& f : fs) {
            auto r = explicit_formula_check(f, z, *tables);
            r.name += "[" + f.describe() + "]";
            reports.push_back(r);
          }
        } else if (n == "digamma") {
          for (int sign : {1, -1}) {
            auto r = digamma_integral_check(make_smooth_bump(1.0), 0.25, 1.0, sign);
            r.name += sign > 0 ? "[+]" : "[-]";
            reports.push_back(r);
          }
        } else if (n == "floor") {
          reports.push_back(floor_identity_check(make_smooth_bump(0.5), 1e3, 1e3));
        } else if (n == "floor-printed") {
          reports.push_back(floor_identity_check(make_smooth_bump(0.5), 1e3, 1e3, FloorVariant::Printed));
        } else if (n == "diagonal") {
          reports.push_back(diagonal_sum_check(make_smooth_bump(1.0), 0.3, -0.3, std::log(1e3),
                                               std::log(1e3 / kTwoPi), *tables));
        } else {
          throw Error(ErrorKind::InvalidArgument, "unknown suite '" + n + "'");
        }
      }
      auto o = open_output(out_path, out);
      auto& os = *o.stream;
      bool all = true;
      os << "check                                              residual     budget       result\n";
      for (const auto& r : reports) {
        std::string name = r.name;
        name.resize(std::max<std::size_t>(name.size(), 50), ' ');
        std::string res = fmt(r.residual), bud = fmt(r.budget);
        res.resize(std::max<std::size_t>(res.size(), 12), ' ');
        bud.resize(std::max<std::size_t>(bud.size(), 12), ' ');
        os << name << " " << res << " " << bud << " " << (r.passed ? "PASS" : "FAIL");
        if (!r.note.empty()) os << "  (" << r.note << ")";
        os << "\n";
        all = all && r.passed;
      }
      if (!json_path.empty()) {
        json arr = json::array();
        for (const auto& r : reports) arr.push_back(report_json(r));
        std::ofstream js(json_path);
        if (!js) throw Error(ErrorKind::Precondition, "cannot open '" + json_path + "' for writing");
        js << arr.dump(2) << "\n";
      }
      return all ? kExitOk : kExitAccuracy;
    }

    if (rp->parsed()) {
      std::ifstream in(in_path);
      if (!in) throw Error(ErrorKind::Precondition, "cannot open '" + in_path + "'");
      std::string first;
      std::getline(in, first);
      if (first.rfind("# ", 0) != 0) throw ParseError(1, "replay: no metadata line in '" + in_path + "'");
      json env;
      try {
        env = json::parse(first.substr(2));
      } catch (const json::exception& e) {
        throw ParseError(1, std::string("replay: bad metadata: ") + e.what());
      }
      std::vector<std::string> again = env.at("args").get<std::vector<std::string>>();
      if (!again.empty() && again.front() == "replay") throw ParseError(1, "replay: recursive metadata");
      again.push_back("--out");
      again.push_back(out_path);
      again.push_back("--threads");
      again.push_back(std::to_string(threads));
      return run(again, out, err);
    }
  } catch (const Error& e) {
    error_body(err, to_string(e.kind()), e.what());
    return exit_code(e);
  } catch (const std::exception& e) {
    error_body(err, "internal", e.what());
    return 1;
  }
  return kExitOk;
}

}  // namespace zetapair::cli
