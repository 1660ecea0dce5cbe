#include "dstable/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "dstable/analysis.hpp"
#include "dstable/errors.hpp"
#include "dstable/families.hpp"
#include "dstable/inversion.hpp"
#include "dstable/sampling.hpp"

namespace dstable {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilyFlags {
  std::string family;
  std::optional<double> gamma, alpha, beta, sigma, a, theta1, theta2, P, Q;
  std::optional<std::int64_t> M;
};

struct Options {
  FamilyFlags fam;
  std::string format = "csv";
  std::string out_path;
  std::uint64_t seed = 0;
  int threads = 1;
  // cf
  double tmax = 10.0;
  int points = 1001;
  // pmf
  std::int64_t n = 0;
  double target = 1e-6;
  std::int64_t n_max = std::int64_t{1} << 24;
  // sample
  std::int64_t count = 10000;
  // tails
  double xmin = 0.0;
  double xmax = 0.0;
  int per_decade = 20;
  std::int64_t window = std::int64_t{1} << 22;
  // converge
  std::vector<double> a_values = {0.5, 0.1, 0.02};
  // prelimit
  std::vector<std::int64_t> n_values = {1, 10, 100};
  std::int64_t reps = 20000;
};

// A value formatted for CSV: 17 significant digits, no negative zero.
std::string num(double v) {
  if (v == 0.0) return "0";
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(std::int64_t v) { return std::to_string(v); }

ordered_json jnum(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v == 0.0 ? 0.0 : v;
}

double need(const std::optional<double>& v, const char* flag, const std::string& family) {
  if (!v) throw UsageError(std::string("--") + flag + " is required for family " + family);
  return *v;
}

FamilyParams make_family(const FamilyFlags& f, ordered_json& config) {
  const std::string& name = f.family;
  const double sigma = f.sigma.value_or(1.0);
  const double a = f.a.value_or(1.0);
  config["family"] = name;
  auto put = [&](const char* key, double v) { config[key] = v; };
  if (name == "sds" || name == "truncated-sds") {
    const double gamma = need(f.gamma, "gamma", name);
    put("gamma", gamma);
    put("sigma", sigma);
    put("a", a);
    if (name == "sds") return SymmetricDS(gamma, sigma, a);
    if (!f.M) throw UsageError("--M is required for family truncated-sds");
    config["M"] = *f.M;
    return TruncatedSDS(gamma, sigma, a, *f.M);
  }
  if (name == "ds" || name == "tempered-ds") {
    const double alpha = need(f.alpha, "alpha", name);
    const double beta = f.beta.value_or(0.0);
    put("alpha", alpha);
    put("beta", beta);
    put("sigma", sigma);
    put("a", a);
    if (name == "ds") return DiscreteStable(alpha, beta, sigma, a);
    const double t1 = need(f.theta1, "theta1", name);
    const double t2 = need(f.theta2, "theta2", name);
    put("theta1", t1);
    put("theta2", t2);
    return TemperedDS(alpha, beta, sigma, a, t1, t2);
  }
  if (name == "polylog-ds" || name == "truncated-polylog-ds") {
    const double alpha = need(f.alpha, "alpha", name);
    const double P = f.P.value_or(1.0);
    const double Q = f.Q.value_or(1.0);
    put("alpha", alpha);
    put("P", P);
    put("Q", Q);
    put("a", a);
    if (name == "polylog-ds") return PolylogDS(alpha, P, Q, a);
    if (!f.M) throw UsageError("--M is required for family truncated-polylog-ds");
    config["M"] = *f.M;
    return TruncatedPolylogDS(alpha, P, Q, a, *f.M);
  }
  throw UsageError("unknown family '" + name +
                   "'; expected one of sds, truncated-sds, ds, tempered-ds, polylog-ds, truncated-polylog-ds");
}

using Value = std::variant<double, std::int64_t, bool>;

// One table with metadata, written as CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Value>> rows;
  ordered_json summary = ordered_json::object();
};

std::string csv_cell(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return num(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return num(*i);
  return std::get<bool>(v) ? "1" : "0";
}

ordered_json json_cell(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return jnum(*d);
  if (const auto* i = std::get_if<std::int64_t>(&v)) return *i;
  return std::get<bool>(v);
}

void write_table(std::ostream& os, const std::string& format, const ordered_json& meta, const Table& t) {
  if (format == "json") {
    os << "{\n \"meta\": " << meta.dump() << ",\n";
    if (!t.summary.empty()) os << " \"summary\": " << t.summary.dump() << ",\n";
    os << " \"rows\": [";
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
      ordered_json obj = ordered_json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) obj[t.columns[i]] = json_cell(t.rows[r][i]);
      os << (r ? ",\n  " : "\n  ") << obj.dump();
    }
    os << (t.rows.empty() ? "]\n}\n" : "\n ]\n}\n");
    return;
  }
  os << "# dstable " << meta["version"].get<std::string>() << " " << meta["command"].get<std::string>() << '\n';
  os << "# seed=" << meta["seed"].get<std::uint64_t>() << '\n';
  for (const auto& [k, v] : meta["config"].items()) {
    os << "# " << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
  }
  for (const auto& [k, v] : t.summary.items()) {
    os << "# " << k << '=';
    if (v.is_number_float()) {
      os << num(v.get<double>());
    } else if (v.is_null()) {
      os << "nan";
    } else {
      os << v.dump();
    }
    os << '\n';
  }
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  std::string line;
  for (const auto& row : t.rows) {
    line.clear();
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) line += ',';
      line += csv_cell(row[i]);
    }
    line += '\n';
    os << line;
  }
}

Table cmd_cf(const FamilyParams& p, const Options& o, ordered_json& config) {
  if (o.points < 1) throw UsageError("--points must be >= 1");
  if (!(o.tmax >= 0.0)) throw UsageError("--tmax must be >= 0");
  config["tmax"] = o.tmax;
  config["points"] = o.points;
  Table t;
  t.columns = {"t", "re", "im"};
  for (int j = 0; j < o.points; ++j) {
    const double tj = o.points == 1 ? 0.0 : o.tmax * (2.0 * j - (o.points - 1)) / (o.points - 1);
    const ComplexValue v = char_fn(p, tj);
    t.rows.push_back({tj, v.real(), v.imag()});
  }
  return t;
}

Table cmd_pmf(const FamilyParams& p, const Options& o, ordered_json& config) {
  const double a = lattice_step(p);
  const CfFunction cf = [&](double t) { return char_fn(p, t); };
  LatticePMF pmf;
  if (o.n > 0) {
    config["n"] = o.n;
    pmf = pmf_from_cf(cf, a, o.n);
  } else {
    config["target"] = o.target;
    config["n_max"] = o.n_max;
    pmf = pmf_auto(cf, a, o.target, 1024, o.n_max);
  }
  Table t;
  t.columns = {"k", "x", "p"};
  t.summary["window"] = pmf.size();
  t.summary["alias_bound"] = jnum(pmf.alias_bound);
  for (std::int64_t i = 0; i < pmf.size(); ++i) {
    const std::int64_t k = pmf.k_min + i;
    const double x = a * static_cast<double>(k);
    const double m = std::max(pmf.masses[static_cast<std::size_t>(i)], 0.0);
    t.rows.push_back({k, x, m});
  }
  return t;
}

Table cmd_sample(const FamilyParams& p, const Options& o, ordered_json& config) {
  if (o.count < 0) throw UsageError("--count must be >= 0");
  config["count"] = o.count;
  const double a = lattice_step(p);
  const auto idx = sample_indices(p, o.count, o.seed, o.threads);
  Table t;
  t.columns = {"k", "x"};
  t.rows.reserve(idx.size());
  for (auto k : idx) t.rows.push_back({k, a * static_cast<double>(k)});
  return t;
}

Table cmd_tails(const FamilyParams& p, const Options& o, ordered_json& config) {
  const double a = lattice_step(p);
  const bool light = std::holds_alternative<TruncatedSDS>(p) || std::holds_alternative<TemperedDS>(p) ||
                     std::holds_alternative<TruncatedPolylogDS>(p);
  const double xmin = o.xmin > 0.0 ? o.xmin : 10.0 * a;
  const double xmax = o.xmax > 0.0 ? o.xmax : (light ? 100.0 : 1e4) * a;
  if (!(xmax > xmin)) throw UsageError("--xmax must exceed --xmin");
  if (o.per_decade < 1) throw UsageError("--per-decade must be >= 1");
  config["xmin"] = xmin;
  config["xmax"] = xmax;
  config["per_decade"] = o.per_decade;
  if (!light) config["n"] = o.window;
  std::vector<double> grid;
  const auto steps = static_cast<int>(std::ceil(std::log10(xmax / xmin) * o.per_decade - 1e-9));
  for (int i = 0; i <= steps; ++i) grid.push_back(std::min(xmax, xmin * std::pow(10.0, double(i) / o.per_decade)));
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  const TailReport r = tail_check(p, grid, o.window);
  Table t;
  t.columns = {"x", "tail", "scaled_tail", "neg_log_tail", "reliable"};
  t.summary["theoretical_constant"] = jnum(r.theoretical_constant);
  t.summary["continuation_constant"] = jnum(r.continuation_constant);
  t.summary["relative_gap"] = jnum(r.relative_gap);
  t.summary["reliable_x"] = jnum(r.reliable_x);
  t.summary["decay_exponent"] = jnum(r.decay_exponent);
  t.summary["super_linear"] = r.super_linear;
  t.summary["inversion_window"] = r.window;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double sc = r.scaled_tail.empty() ? std::nan("") : r.scaled_tail[i];
    t.rows.push_back({grid[i], r.tail[i], sc, r.neg_log_tail[i], static_cast<bool>(r.reliable[i])});
  }
  return t;
}

Table cmd_converge(const FamilyFlags& base, const Options& o, ordered_json& config) {
  if (o.a_values.empty()) throw UsageError("--a-values must not be empty");
  if (!(o.tmax > 0.0)) throw UsageError("--tmax must be > 0");
  if (o.points < 1) throw UsageError("--points must be >= 1");
  config["tmax"] = o.tmax;
  config["points"] = o.points;
  config["a_values"] = o.a_values;
  config.erase("a");
  Table t;
  t.columns = {"a", "T", "cf_distance"};
  for (double a : o.a_values) {
    FamilyFlags f = base;
    f.a = a;
    ordered_json scratch;
    const FamilyParams p = make_family(f, scratch);
    const double d = cf_distance(p, o.tmax, o.points);
    t.rows.push_back({a, o.tmax, d});
  }
  return t;
}

Table cmd_prelimit(const FamilyParams& p, const Options& o, ordered_json& config) {
  config["n_values"] = o.n_values;
  config["reps"] = o.reps;
  const PrelimitReport r = prelimit_experiment(p, o.n_values, o.reps, o.seed, o.threads);
  Table t;
  t.columns = {"n", "ks_to_stable", "ks_to_gaussian", "sample_sd", "predicted_sd", "variance_regime"};
  for (std::size_t i = 0; i < r.n_values.size(); ++i) {
    t.rows.push_back({r.n_values[i], r.ks_to_stable[i], r.ks_to_gaussian[i], r.sample_sd[i], r.predicted_sd[i],
                      static_cast<bool>(r.variance_regime[i])});
  }
  return t;
}

void add_family_flags(CLI::App* sub, Options& o) {
  sub->add_option("--family", o.fam.family, "sds | truncated-sds | ds | tempered-ds | polylog-ds | truncated-polylog-ds")
      ->required();
  sub->add_option("--gamma", o.fam.gamma, "SDS exponent in (0, 1]");
  sub->add_option("--alpha", o.fam.alpha, "stability index");
  sub->add_option("--beta", o.fam.beta, "skewness in [-1, 1] (default 0)");
  sub->add_option("--sigma", o.fam.sigma, "scale (default 1)");
  sub->add_option("--a", o.fam.a, "lattice step (default 1)");
  sub->add_option("--M", o.fam.M, "truncation bound");
  sub->add_option("--theta1", o.fam.theta1, "tempering of positive jumps");
  sub->add_option("--theta2", o.fam.theta2, "tempering of negative jumps");
  sub->add_option("--P", o.fam.P, "positive polylog weight (default 1)");
  sub->add_option("--Q", o.fam.Q, "negative polylog weight (default 1)");
  sub->add_option("--format", o.format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_option("--out", o.out_path, "output file (default stdout)");
  sub->add_option("--seed", o.seed, "random seed (default 0)");
  sub->add_option("--threads", o.threads, "worker cap; output does not depend on it")
      ->envname("DSTABLE_THREADS")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Discrete stable laws: characteristic functions, lattice pmfs, exact sampling, tail diagnostics",
               "dstable"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* cf = app.add_subcommand("cf", "characteristic function on a t grid");
  add_family_flags(cf, o);
  cf->add_option("--tmax", o.tmax, "grid covers [-tmax, tmax]");
  cf->add_option("--points", o.points, "number of grid points");

  auto* pmf = app.add_subcommand("pmf", "lattice pmf by FFT inversion");
  add_family_flags(pmf, o);
  pmf->add_option("--n", o.n, "window size, a power of two >= 8 (default: smallest meeting --target)");
  pmf->add_option("--target", o.target, "alias bound target when --n is absent");
  pmf->add_option("--n-max", o.n_max, "largest window tried when --n is absent");

  auto* sample = app.add_subcommand("sample", "exact random draws");
  add_family_flags(sample, o);
  sample->add_option("--count", o.count, "number of draws");

  auto* tails = app.add_subcommand("tails", "tail probabilities and decay diagnostics");
  add_family_flags(tails, o);
  tails->add_option("--xmin", o.xmin, "smallest x (default 10 a)");
  tails->add_option("--xmax", o.xmax, "largest x (default 100 a for light tails, 10^4 a otherwise)");
  tails->add_option("--per-decade", o.per_decade, "grid points per decade");
  tails->add_option("--n", o.window, "inversion window for heavy-tailed families");

  auto* converge = app.add_subcommand("converge", "sup CF distance to the stable limit across lattice steps");
  add_family_flags(converge, o);
  converge->add_option("--a-values", o.a_values, "lattice steps")->delimiter(',');
  converge->add_option("--tmax", o.tmax, "sup over [-tmax, tmax]");
  converge->add_option("--points", o.points, "grid points");

  auto* prelimit = app.add_subcommand("prelimit", "KS distances of normalized sums to stable and Gaussian laws");
  add_family_flags(prelimit, o);
  prelimit->add_option("--n-values", o.n_values, "summand counts")->delimiter(',');
  prelimit->add_option("--reps", o.reps, "replications per n");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }
  if (converge->parsed() && !converge->count("--points")) o.points = 2001;

  CLI::App* active = app.get_subcommands().front();
  try {
    ordered_json meta;
    meta["version"] = kVersion;
    meta["command"] = active->get_name();
    meta["seed"] = o.seed;
    ordered_json config = ordered_json::object();
    Table table;
    if (active == converge) {
      ordered_json first;
      FamilyFlags f = o.fam;
      f.a = o.a_values.empty() ? 1.0 : o.a_values.front();
      make_family(f, first);
      config = first;
      table = cmd_converge(o.fam, o, config);
    } else {
      const FamilyParams p = make_family(o.fam, config);
      if (active == cf) table = cmd_cf(p, o, config);
      if (active == pmf) table = cmd_pmf(p, o, config);
      if (active == sample) table = cmd_sample(p, o, config);
      if (active == tails) table = cmd_tails(p, o, config);
      if (active == prelimit) table = cmd_prelimit(p, o, config);
    }
    config["format"] = o.format;
    meta["config"] = config;
    if (o.out_path.empty()) {
      write_table(out, o.format, meta, table);
    } else {
      std::ofstream file(o.out_path, std::ios::binary);
      if (!file) throw UsageError("cannot open --out file " + o.out_path);
      write_table(file, o.format, meta, table);
    }
    return kExitOk;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n\n" << active->help();
    return kExitUsage;
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const PrecisionError& e) {
    err << "precision failure: " << e.what() << '\n';
    return kExitPrecision;
  } catch (const InvalidCfError& e) {
    err << "precision failure: " << e.what() << '\n';
    return kExitPrecision;
  }
}

}  // namespace dstable
