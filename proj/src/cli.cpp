#include "liftlab/cli.hpp"

#include <zlib.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <thread>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include "liftlab/archimedean.hpp"
#include "liftlab/counting.hpp"
#include "liftlab/enumeration.hpp"
#include "liftlab/lifting.hpp"

#ifndef LIFTLAB_GIT_DESCRIBE
#define LIFTLAB_GIT_DESCRIBE "unknown"
#endif

namespace liftlab::cli {

namespace {

using json = nlohmann::ordered_json;
using Cell = std::variant<std::int64_t, std::uint64_t, double, std::string, bool>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  json meta = json::object();
};

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string csv_cell(const Cell& c) {
  struct {
    std::string operator()(std::int64_t v) const { return std::to_string(v); }
    std::string operator()(std::uint64_t v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& s) const {
      if (s.find_first_of(",\"\n") == std::string::npos) return s;
      std::string q = "\"";
      for (char ch : s) {
        if (ch == '"') q += '"';
        q += ch;
      }
      return q + '"';
    }
  } v;
  return std::visit(v, c);
}

json json_cell(const Cell& c) {
  return std::visit([](const auto& v) { return json(v); }, c);
}

// Writes either to a stream or through zlib.
class Sink {
 public:
  Sink(std::ostream& out, const std::string& path, bool gzip) {
    if (gzip) {
      if (path.empty()) throw InvalidArgument("--gzip needs --output");
      gz_ = gzopen(path.c_str(), "wb");
      if (!gz_) throw InvalidArgument("cannot open " + path);
    } else if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw InvalidArgument("cannot open " + path);
      os_ = file_.get();
    } else {
      os_ = &out;
    }
  }
  ~Sink() {
    if (gz_) gzclose(gz_);
  }
  Sink(const Sink&) = delete;
  Sink& operator=(const Sink&) = delete;

  void write(std::string_view s) {
    if (gz_) {
      if (!s.empty() && gzwrite(gz_, s.data(), static_cast<unsigned>(s.size())) == 0)
        throw std::runtime_error("gzip write failed");
    } else {
      os_->write(s.data(), static_cast<std::streamsize>(s.size()));
    }
  }

 private:
  std::ostream* os_ = nullptr;
  std::unique_ptr<std::ofstream> file_;
  gzFile gz_ = nullptr;
};

struct Common {
  std::string config;
  unsigned threads = 1;
  std::string output;
  std::string format = "csv";
  bool no_timing = false;
  std::uint64_t seed = 0;
  CLI::Option* seed_opt = nullptr;
  bool seed_generated = false;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--config", c.config, "key = value file");
  sub->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  sub->add_option("--output", c.output, "output path (default stdout)");
  sub->add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub->add_flag("--no-timing", c.no_timing, "write wall_seconds as 0");
}

void add_seed(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "root seed (generated and recorded if absent)");
}

std::uint64_t resolve_seed(Common& c) {
  if (c.seed_opt && c.seed_opt->count() == 0) {
    std::random_device rd;
    c.seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    c.seed_generated = true;
  }
  return c.seed;
}

void emit(const Table& t, const Common& c, std::ostream& out, const std::string& command) {
  Sink sink(out, c.output, false);
  if (c.format == "json") {
    json doc = json::object();
    doc["command"] = command;
    for (auto& [k, v] : t.meta.items()) doc[k] = v;
    if (c.seed_opt) doc["seed"] = c.seed;
    json rows = json::array();
    for (const auto& r : t.rows) {
      json o = json::object();
      for (std::size_t i = 0; i < t.columns.size(); ++i) o[t.columns[i]] = json_cell(r[i]);
      rows.push_back(std::move(o));
    }
    doc["rows"] = std::move(rows);
    sink.write(doc.dump(2) + "\n");
    return;
  }
  std::string s;
  const bool has_seed_col = std::find(t.columns.begin(), t.columns.end(), "seed") != t.columns.end();
  if (c.seed_generated && !has_seed_col) s += "# seed=" + std::to_string(c.seed) + "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) s += (i ? "," : "") + t.columns[i];
  s += '\n';
  for (const auto& r : t.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_cell(r[i]);
    s += '\n';
  }
  sink.write(s);
}

double seconds_since(std::chrono::steady_clock::time_point t0, const Common& c) {
  if (c.no_timing) return 0.0;
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Table count_table(std::vector<CountRecord> recs, const Common& c) {
  sort_records(recs);
  Table t;
  t.columns = {"q", "gauge", "T", "space", "value", "wall_seconds"};
  for (const auto& r : recs)
    t.rows.push_back({r.q, to_string(r.gauge), r.T, to_string(r.space), r.value,
                      c.no_timing ? 0.0 : r.wall_seconds});
  return t;
}

std::vector<std::vector<double>> parse_real_rows(std::string_view text) {
  std::vector<std::vector<double>> rows;
  std::string s(text);
  std::stringstream ss(s);
  std::string row;
  while (std::getline(ss, row, ';')) {
    std::istringstream rs(row);
    std::vector<double> r;
    std::string tok;
    while (rs >> tok) {
      std::size_t used = 0;
      double v = 0;
      try {
        v = std::stod(tok, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (used != tok.size()) throw InvalidArgument("bad matrix entry: " + tok);
      r.push_back(v);
    }
    rows.push_back(std::move(r));
  }
  const std::size_t n = rows.size();
  if (n != 2 && n != 3) throw InvalidArgument("matrix literal must have 2 or 3 rows");
  for (const auto& r : rows)
    if (r.size() != n) throw InvalidArgument("matrix literal must be square");
  return rows;
}

RealMat3 parse_real3(std::string_view text) {
  const auto rows = parse_real_rows(text);
  if (rows.size() != 3) throw InvalidArgument("expected a 3x3 matrix");
  RealMat3 g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rows[i][j];
  return g;
}

SpacePoint parse_source(Space space, std::int64_t q, const std::string& text, Common& c) {
  if (text == "base") return space_basepoint(space, q);
  if (text == "generic") return generic_source(space, q, resolve_seed(c));
  return parse_space_point(space, q, text);
}

std::string histogram_text(const std::map<std::int64_t, std::uint64_t>& h) {
  std::string s;
  for (auto [n, k] : h) s += (s.empty() ? "" : ";") + std::to_string(n) + ":" + std::to_string(k);
  return s;
}

std::vector<CountRecord> read_records(const std::string& path, const std::string& xcol,
                                      const std::string& ycol) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open " + path);
  std::string line;
  std::vector<std::string> header;
  std::vector<CountRecord> recs;
  auto split = [](const std::string& l) {
    std::vector<std::string> f;
    std::stringstream ss(l);
    std::string x;
    while (std::getline(ss, x, ',')) f.push_back(x);
    return f;
  };
  std::size_t xi = 0, yi = 0;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      auto at = [&](const std::string& name) {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw InvalidArgument("column not found: " + name);
        return static_cast<std::size_t>(it - header.begin());
      };
      xi = at(xcol);
      yi = at(ycol);
      continue;
    }
    const auto f = split(line);
    if (f.size() != header.size()) throw InvalidArgument("ragged CSV row: " + line);
    CountRecord r;
    try {
      r.T = std::stoll(f[xi]);
      r.value = std::stoull(f[yi]);
    } catch (const std::exception&) {
      throw InvalidArgument("non-integer entry in row: " + line);
    }
    recs.push_back(r);
  }
  return recs;
}

unsigned default_threads() {
  if (const char* env = std::getenv("LIFTLAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw InvalidArgument("LIFTLAB_THREADS must be a positive integer");
    return static_cast<unsigned>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

bool truthy(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw InvalidArgument("expected a boolean, got " + v);
}

// Appends config entries for options not given on the command line.
void inject_config(CLI::App& app, std::vector<std::string>& args) {
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
    if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
  }
  if (path.empty() || args.empty()) return;
  CLI::App* sub = app.get_subcommand_no_throw(args[0]);
  if (!sub) return;
  for (const auto& [key, value] : read_config_file(path)) {
    if (key == "config") throw InvalidArgument("config files cannot nest");
    CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw InvalidArgument("unknown config key: " + key);
    const std::string flag = "--" + key;
    const bool given = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      return a == flag || a.rfind(flag + "=", 0) == 0;
    });
    if (given) continue;
    if (opt->get_expected_min() == 0) {
      if (truthy(value)) args.push_back(flag);
    } else {
      args.push_back(flag);
      args.push_back(value);
    }
  }
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.rfind("--", 0) == 0) key.erase(0, 2);
    if (key.empty()) throw InvalidArgument(path + ":" + std::to_string(lineno) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

int dispatch(const std::vector<std::string>& args_in, std::ostream& out, std::ostream& err) {
  CLI::App app{"liftlab: lattice enumeration and lifting experiments", "liftlab"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  Common c;
  std::function<void()> run;
  std::string command;
  using Clock = std::chrono::steady_clock;

  auto sub = [&](const char* name, const char* desc) {
    CLI::App* s = app.add_subcommand(name, desc);
    add_common(s, c);
    return s;
  };

  // enumerate
  std::string group = "sl3", gauge = "inf", filter = "none", point_text, flag_text;
  std::int64_t bound = 1, q = 1;
  bool oracle = false, gzip = false, count_only = false;
  {
    auto* s = sub("enumerate", "list ball elements, one row-major literal per line");
    s->add_option("--group", group)->check(CLI::IsMember({"sl2", "sl3"}));
    s->add_option("--gauge", gauge)->check(CLI::IsMember({"inf", "delta"}));
    s->add_option("--t", bound, "inf bound T, or D for the delta gauge")->required();
    s->add_option("--filter", filter)->check(CLI::IsMember({"none", "identity", "point", "flag"}));
    s->add_option("--q", q, "modulus for the filter");
    s->add_option("--point", point_text, "fixed point (default basepoint)");
    s->add_option("--flag", flag_text, "fixed flag (default base flag)");
    s->add_flag("--oracle", oracle, "nine-loop reference enumerator");
    s->add_flag("--gzip", gzip, "gzip the output file");
    s->add_flag("--count-only", count_only, "emit one count row");
    s->callback([&] {
      run = [&] {
        BallSpec spec;
        spec.group = group == "sl2" ? Group::SL2 : Group::SL3;
        spec.gauge = parse_gauge(gauge);
        spec.bound = bound;
        Space space = Space::None;
        if (filter == "identity") {
          spec.filter = BallFilter::identity_mod(q);
        } else if (filter == "point") {
          spec.filter = BallFilter::fixes_point(point_text.empty() ? basepoint(q) : parse_point(q, point_text));
          space = Space::Proj;
        } else if (filter == "flag") {
          spec.filter = BallFilter::fixes_flag(flag_text.empty() ? base_flag(q) : parse_flag(q, flag_text));
          space = Space::Flag;
        }
        if (oracle && (spec.group != Group::SL3 || spec.gauge != Gauge::Inf || filter != "none"))
          throw InvalidArgument("--oracle covers the unfiltered SL3 inf ball only");
        if (count_only && gzip) throw InvalidArgument("--gzip applies to listings only");
        const auto t0 = Clock::now();
        if (count_only) {
          std::uint64_t n = 0;
          if (oracle)
            for_each_sl3_oracle(bound, [&](const Mat3&) { ++n; });
          else if (spec.group == Group::SL2)
            for_each_sl2(spec, [&](const Mat2&) { ++n; });
          else
            n = count_ball(spec, c.threads);
          CountRecord r{spec.filter.kind == BallFilter::Kind::None ? 1 : q, spec.gauge, bound, space, n, 0.0};
          r.wall_seconds = seconds_since(t0, c);
          emit(count_table({r}, c), c, out, command);
          return;
        }
        if (c.format != "csv") throw InvalidArgument("listings are plain text; use --count-only for json");
        Sink sink(out, c.output, gzip);
        std::string buf;
        auto line = [&](const auto& g) {
          buf += to_string(g);
          buf += '\n';
          if (buf.size() > (1u << 20)) {
            sink.write(buf);
            buf.clear();
          }
        };
        if (oracle)
          for_each_sl3_oracle(bound, line);
        else if (spec.group == Group::SL2)
          for_each_sl2(spec, line);
        else
          for_each_sl3(spec, line);
        sink.write(buf);
      };
    });
  }

  // count-sl2
  std::vector<std::int64_t> qs, ts;
  {
    auto* s = sub("count-sl2", "SL2(Z) congruence ball counts");
    s->add_option("--q", qs, "moduli")->required()->delimiter(',');
    s->add_option("--t", ts, "bounds")->required()->delimiter(',');
    s->callback([&] {
      run = [&] {
        std::vector<CountRecord> recs;
        for (auto qq : qs)
          for (auto tt : ts) recs.push_back(count_sl2_congruence(qq, tt));
        emit(count_table(std::move(recs), c), c, out, command);
      };
    });
  }

  // count-fixed-pairs
  std::string space_text = "proj";
  bool tabulate = false;
  {
    auto* s = sub("count-fixed-pairs", "pairs (gamma, x) with gamma x = x mod q in the delta ball");
    s->add_option("--q", qs)->required()->delimiter(',');
    s->add_option("--d", ts, "delta bounds")->required()->delimiter(',');
    s->add_option("--space", space_text)->check(CLI::IsMember({"proj", "flag"}));
    s->add_flag("--tabulate", tabulate, "add the law and brute-force sums");
    s->callback([&] {
      run = [&] {
        const Space sp = parse_space(space_text);
        if (!tabulate) {
          std::vector<CountRecord> recs;
          for (auto qq : qs)
            for (auto d : ts) recs.push_back(count_fixed_pairs(qq, d, sp, c.threads));
          emit(count_table(std::move(recs), c), c, out, command);
          return;
        }
        Table t;
        t.columns = {"q", "gauge", "T", "space", "value", "wall_seconds", "law_sum", "brute_sum", "elements"};
        for (auto qq : qs) {
          for (auto d : ts) {
            const auto tab = tabulate_fixed_pairs(qq, d, sp, c.threads);
            const auto& r = tab.record;
            t.rows.push_back({r.q, to_string(r.gauge), r.T, to_string(r.space), r.value,
                              c.no_timing ? 0.0 : r.wall_seconds, tab.law_sum, tab.brute_sum, tab.elements});
          }
        }
        emit(t, c, out, command);
      };
    });
  }

  // count-bad
  std::int64_t S = 1, R = 1;
  {
    auto* s = sub("count-bad", "elements reducing to BadDimTwo");
    s->add_option("--q", q)->required();
    s->add_option("--s", S, "bound on |g|_inf")->required();
    s->add_option("--r", R, "bound on |g^-1|_inf")->required();
    s->callback([&] {
      run = [&] {
        const auto b = count_bad(q, S, R, c.threads);
        Table t;
        t.columns = {"q", "S", "R", "bad_dim_two", "identity", "wall_seconds"};
        t.rows.push_back({b.q, b.S, b.R, b.bad_dim_two, b.identity, c.no_timing ? 0.0 : b.wall_seconds});
        emit(t, c, out, command);
      };
    });
  }

  // verify-identities
  std::string matrix_text;
  std::int64_t ball_d = 0, ident_t = 0;
  {
    auto* s = sub("verify-identities", "congruence identities for bad and identity reductions");
    s->add_option("--q", q)->required();
    auto* m = s->add_option("--matrix", matrix_text, "single element");
    auto* b = s->add_option("--ball", ball_d, "all BadDimTwo elements of the delta ball D");
    auto* i = s->add_option("--identity-t", ident_t, "all g = I mod q with |g|_inf <= T");
    m->excludes(b)->excludes(i);
    b->excludes(i);
    s->callback([&] {
      run = [&] {
        Table t;
        if (!matrix_text.empty()) {
          const Mat3 g = parse_matrix<3>(matrix_text);
          const auto cls = classify(reduce_mod(g, q));
          IdentityReport rep;
          if (cls.kind == ReductionClass::Kind::Identity)
            rep = verify_identity_congruences(g, q);
          else if (cls.kind == ReductionClass::Kind::BadDimTwo)
            rep = verify_bad_identities(g, q);
          else
            throw InvalidArgument("matrix is neither the identity nor BadDimTwo mod q");
          t.columns = {"q", "matrix", "class", "alpha", "check", "passed"};
          for (const auto& [name, ok] : rep.checks)
            t.rows.push_back({q, to_string(g), to_string(cls.kind), rep.alpha_used, name, ok});
          emit(t, c, out, command);
          return;
        }
        if (ball_d == 0 && ident_t == 0) throw InvalidArgument("give --matrix, --ball or --identity-t");
        std::vector<Mat3> elems;
        std::string source;
        if (ball_d) {
          source = "delta<=" + std::to_string(ball_d);
          for (const auto& g : enumerate_delta_ball(ball_d))
            if (classify(reduce_mod(g, q)).kind == ReductionClass::Kind::BadDimTwo) elems.push_back(g);
        } else {
          source = "inf<=" + std::to_string(ident_t);
          elems = enumerate_sl3(ident_t, BallFilter::identity_mod(q));
        }
        std::vector<std::string> names;
        std::vector<std::uint64_t> passed;
        for (const auto& g : elems) {
          const auto rep = ball_d ? verify_bad_identities(g, q) : verify_identity_congruences(g, q);
          if (names.empty()) {
            for (const auto& [n, ok] : rep.checks) names.push_back(n);
            passed.assign(names.size(), 0);
          }
          for (std::size_t k = 0; k < rep.checks.size(); ++k) passed[k] += rep.checks[k].second;
        }
        t.columns = {"q", "source", "check", "elements", "passed", "failed"};
        for (std::size_t k = 0; k < names.size(); ++k)
          t.rows.push_back({q, source, names[k], static_cast<std::uint64_t>(elems.size()), passed[k],
                            static_cast<std::uint64_t>(elems.size()) - passed[k]});
        emit(t, c, out, command);
      };
    });
  }

  // trace-solutions
  {
    auto* s = sub("trace-solutions", "trace pairs compatible with a bad reduction");
    s->add_option("--q", q)->required();
    s->add_option("--s", S)->required();
    s->add_option("--r", R)->required();
    s->callback([&] {
      run = [&] {
        const auto r = count_trace_solutions(q, S, R);
        const double bound = 16.0 * ((static_cast<double>(S) / q + 1) * (static_cast<double>(R) / q + 1) + q);
        Table t;
        t.columns = {"q", "S", "R", "value", "eq51_value", "bound", "wall_seconds"};
        t.rows.push_back({r.q, r.S, r.R, r.value, r.eq51_value, bound, c.no_timing ? 0.0 : r.wall_seconds});
        emit(t, c, out, command);
      };
    });
  }

  // cartan
  {
    auto* s = sub("cartan", "singular values and bi-K-invariant norms");
    s->add_option("--matrix", matrix_text, "real matrix literal, rows separated by ';'")->required();
    s->callback([&] {
      run = [&] {
        const auto rows = parse_real_rows(matrix_text);
        Table t;
        if (rows.size() == 2) {
          RealMat2 g;
          for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = rows[i][j];
          const auto cc = cartan(g);
          t.columns = {"dim", "a1", "a2", "norm_K", "norm_delta", "norm_H"};
          t.rows.push_back({std::int64_t{2}, cc.a[0], cc.a[1], norm_K(g), norm_delta(g), norm_H(g)});
        } else {
          const RealMat3 g = parse_real3(matrix_text);
          const auto cc = cartan(g);
          t.columns = {"dim", "a1", "a2", "a3", "norm_K", "norm_delta"};
          t.rows.push_back({std::int64_t{3}, cc.a[0], cc.a[1], cc.a[2], norm_K(g), norm_delta(g)});
        }
        emit(t, c, out, command);
      };
    });
  }

  // xi, autocorrelation
  std::uint64_t n_samples = 100000;
  double real_t = 2.0;
  auto mc_table = [&](const MonteCarloEstimate& e) {
    Table t;
    t.columns = {"estimate", "stderr", "n_samples", "seed"};
    t.rows.push_back({e.estimate, e.std_error, e.n_samples, e.seed});
    return t;
  };
  {
    auto* s = sub("xi", "Monte Carlo spherical function Xi(g)");
    s->add_option("--matrix", matrix_text, "3x3 real matrix (default identity)");
    s->add_option("--n", n_samples, "samples");
    add_seed(s, c);
    s->callback([&] {
      run = [&] {
        const RealMat3 g = matrix_text.empty() ? RealMat3::Identity() : parse_real3(matrix_text);
        emit(mc_table(xi(g, n_samples, resolve_seed(c), c.threads)), c, out, command);
      };
    });
  }
  {
    auto* s = sub("autocorrelation", "Monte Carlo self-convolution of the delta-ball indicator");
    s->add_option("--matrix", matrix_text, "3x3 real matrix (default identity)");
    s->add_option("--t", real_t, "ball radius T")->required();
    s->add_option("--n", n_samples, "samples");
    add_seed(s, c);
    s->callback([&] {
      run = [&] {
        const RealMat3 g = matrix_text.empty() ? RealMat3::Identity() : parse_real3(matrix_text);
        emit(mc_table(ball_autocorrelation(g, real_t, n_samples, resolve_seed(c), c.threads)), c, out, command);
      };
    });
  }

  // haar-volume
  std::string vgauge = "K";
  std::vector<double> real_ts;
  {
    auto* s = sub("haar-volume", "Haar volume of norm balls");
    s->add_option("--gauge", vgauge)->check(CLI::IsMember({"K", "Delta", "H2"}));
    s->add_option("--t", real_ts)->required()->delimiter(',');
    s->callback([&] {
      run = [&] {
        const auto vg = parse_volume_gauge(vgauge);
        Table t;
        t.columns = {"gauge", "T", "volume"};
        for (double T : real_ts) t.rows.push_back({to_string(vg), T, haar_ball_volume(vg, T)});
        emit(t, c, out, command);
      };
    });
  }

  // reachable, coverage
  std::string x_text = "generic", y_text;
  auto coverage_table = [&](const CoverageReport& rep) {
    Table t;
    t.columns = {"q", "space", "source", "T", "reachable", "fraction"};
    for (const auto& r : rep.rows)
      t.rows.push_back({rep.q, to_string(rep.space), rep.source, r.T, r.reachable, r.fraction});
    return t;
  };
  {
    auto* s = sub("reachable", "size of the image of the ball on one source");
    s->add_option("--q", q)->required();
    s->add_option("--space", space_text)->check(CLI::IsMember({"proj", "flag"}));
    s->add_option("--x", x_text, "literal, base or generic");
    s->add_option("--t", bound)->required();
    add_seed(s, c);
    s->callback([&] {
      run = [&] {
        const auto x = parse_source(parse_space(space_text), q, x_text, c);
        const auto set = reachable_set(x, bound, c.threads);
        CoverageReport rep{q, x.space, to_string(x), {}};
        rep.rows.push_back({bound, set.count(), static_cast<double>(set.count()) / set.universe()});
        emit(coverage_table(rep), c, out, command);
      };
    });
  }
  {
    auto* s = sub("coverage", "coverage curve from one source");
    s->add_option("--q", q)->required();
    s->add_option("--space", space_text)->check(CLI::IsMember({"proj", "flag"}));
    s->add_option("--x", x_text, "literal, base or generic");
    s->add_option("--t", ts)->required()->delimiter(',');
    add_seed(s, c);
    s->callback([&] {
      run = [&] {
        const auto x = parse_source(parse_space(space_text), q, x_text, c);
        emit(coverage_table(coverage_curve(x, ts, c.threads)), c, out, command);
      };
    });
  }

  // lift
  {
    auto* s = sub("lift", "minimal-norm gamma with gamma x = y mod q");
    s->add_option("--q", q)->required();
    s->add_option("--space", space_text)->check(CLI::IsMember({"proj", "flag"}));
    s->add_option("--x", x_text)->required();
    s->add_option("--y", y_text)->required();
    s->add_option("--tmax", bound)->required();
    s->callback([&] {
      run = [&] {
        const Space sp = parse_space(space_text);
        const auto x = parse_space_point(sp, q, x_text);
        const auto y = parse_space_point(sp, q, y_text);
        const auto r = find_lift(x, y, bound, c.threads);
        Table t;
        t.columns = {"q", "space", "source", "target", "found", "norm", "gamma", "candidates_scanned"};
        t.rows.push_back({q, to_string(sp), to_string(x), to_string(y), r.found, r.norm,
                          r.found ? to_string(r.gamma) : std::string(), r.candidates_scanned});
        emit(t, c, out, command);
      };
    });
  }

  // obstruction
  {
    auto* s = sub("obstruction", "reachable set of the basepoint against ((2T+1)^3-1)/2");
    s->add_option("--q", qs)->required()->delimiter(',');
    s->add_option("--t", ts)->required()->delimiter(',');
    s->callback([&] {
      run = [&] {
        Table t;
        t.columns = {"q", "T", "reachable", "bound", "space_size", "holds"};
        for (auto qq : qs) {
          for (auto tt : ts) {
            const auto r = obstruction_check(qq, tt, c.threads);
            t.rows.push_back({r.q, r.T, r.reachable, r.bound, r.space_size, r.holds()});
          }
        }
        emit(t, c, out, command);
      };
    });
  }

  // exponent-experiment
  double eps = 0.35;
  std::uint64_t n_pairs = 200;
  {
    auto* s = sub("exponent-experiment", "lift success fraction at T_max = ceil(q^(e+eps))");
    s->add_option("--q", qs)->required()->delimiter(',');
    s->add_option("--eps", eps);
    s->add_option("--pairs", n_pairs);
    s->add_option("--space", space_text)->check(CLI::IsMember({"proj", "flag"}));
    add_seed(s, c);
    s->callback([&] {
      run = [&] {
        const Space sp = parse_space(space_text);
        const std::uint64_t seed = resolve_seed(c);
        ShellCache cache(30'000'000, c.threads);
        const auto t0 = Clock::now();
        const auto rows = exponent_experiment(qs, eps, n_pairs, seed, sp, cache);
        Table t;
        t.columns = {"q", "space", "eps", "T_max", "n_pairs", "successes", "fraction", "seed", "norms"};
        json thresholds = json::object();
        for (const auto& r : rows) {
          t.rows.push_back({r.q, to_string(r.space), r.eps, r.T_max, r.n_pairs, r.successes, r.fraction, seed,
                            histogram_text(r.norm_histogram)});
          thresholds[std::to_string(r.q)] = r.T_max;
        }
        t.meta["thresholds"] = thresholds;
        t.meta["run"] = {{"tool", "liftlab"},
                         {"describe", LIFTLAB_GIT_DESCRIBE},
                         {"threads", c.threads},
                         {"wall_seconds", seconds_since(t0, c)}};
        emit(t, c, out, command);
      };
    });
  }

  // fit
  std::string input, xcol = "T", ycol = "value";
  bool over_log = false;
  {
    auto* s = sub("fit", "least-squares log-log slope of a CSV column pair");
    s->add_option("--input", input, "CSV with a header row")->required();
    s->add_option("--x", xcol, "x column");
    s->add_option("--y", ycol, "y column");
    s->add_flag("--over-log", over_log, "fit y / log x instead of y");
    s->callback([&] {
      run = [&] {
        const auto recs = read_records(input, xcol, ycol);
        ExponentFit f;
        if (over_log) {
          std::vector<std::pair<double, double>> pts;
          for (const auto& r : recs) {
            if (r.T <= 1) throw InvalidArgument("--over-log needs x > 1");
            pts.emplace_back(static_cast<double>(r.T), static_cast<double>(r.value) / std::log(static_cast<double>(r.T)));
          }
          f = fit_loglog(pts);
        } else {
          f = fit_exponent(recs);
        }
        Table t;
        t.columns = {"slope", "intercept", "r2", "n"};
        t.rows.push_back({f.slope, f.intercept, f.r2, static_cast<std::uint64_t>(recs.size())});
        emit(t, c, out, command);
      };
    });
  }

  try {
    c.threads = default_threads();
    std::vector<std::string> args = args_in;
    inject_config(app, args);
    if (!args.empty()) command = args[0];
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const CLI::App* bad = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << bad->help();
    return kExitInvalid;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  }

  try {
    c.seed_opt = app.get_subcommands().front()->get_option_no_throw("--seed");
    if (run) run();
    return kExitOk;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const InfeasibleBound& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  } catch (const OverflowError& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitInfeasible;
  }
}

}  // namespace liftlab::cli
