#include "rankinlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <memory>
#include <sstream>

#include "rankinlab/arith.hpp"
#include "rankinlab/forms.hpp"
#include "rankinlab/lfunc.hpp"
#include "rankinlab/parallel.hpp"
#include "rankinlab/specialfn.hpp"
#include "rankinlab/traceverify.hpp"
#include "rankinlab/transforms.hpp"
#include "rankinlab/typecalc.hpp"

namespace rankinlab {

// --- schemas

const std::vector<VerbSchema>& verb_schemas() {
  static const std::vector<VerbSchema> schemas = {
      {"arith",
       "Kloosterman sums (fast vs direct, Weil ratio), Ramanujan sums, factorization tables",
       {{"op", "kloosterman", "kloosterman | ramanujan | factor"},
        {"m", "1", "first Kloosterman argument"},
        {"n", "1", "second Kloosterman argument"},
        {"k", "1", "Ramanujan sum argument"},
        {"c-max", "50", "largest modulus (or integer for factor)"}}},
      {"bessel",
       "Bessel functions and Voronoi kernels on a grid of x",
       {{"kind", "J", "J | K | Y | voronoi"},
        {"order", "11", "order v of J (integer or real)"},
        {"t", "1", "spectral parameter for K_{2it}, Y_{2it}+Y_{-2it}, Maass Voronoi kernels"},
        {"k", "12", "weight for the holomorphic Voronoi kernel; 0 selects the Maass kernel"},
        {"sign", "1", "Voronoi kernel sign, 1 or -1"},
        {"x-min", "1", "first x"},
        {"x-max", "50", "last x"},
        {"points", "50", "number of grid points"}}},
      {"transform",
       "Bessel transforms of a bump window",
       {{"kind", "tilde", "tilde (integer l) | hat (real t) | check (real t)"},
        {"A", "1", "window support start"},
        {"B", "2", "window support end"},
        {"Z", "1", "window derivative scale"},
        {"from", "1", "first l or t"},
        {"to", "20", "last l or t"},
        {"step", "1", "grid step"}}},
      {"forms",
       "Hecke eigenvalues of a form and the Hecke relation check",
       {{"form", "delta", "delta (built-in oracle) or a classical newform label"},
        {"n-max", "100", "number of eigenvalues to list"},
        {"hecke", "30", "Hecke relation grid m, n <= hecke"},
        {"tol", "1e-9", "relative tolerance of the Hecke relation"}}},
      {"verify-petersson",
       "Petersson formula: rank-1 defect table of the geometric side",
       {{"level", "1", "level (only 1 is supported)"},
        {"weight", "12", "weight k"},
        {"grid", "10", "m, n <= grid"},
        {"cmax", "5000", "largest modulus c"},
        {"form", "delta", "delta or a label of the weight-k level-1 newform"},
        {"tol", "1e-6", "defect tolerance"}}},
      {"verify-voronoi",
       "Voronoi summation: both sides for a Gaussian window",
       {{"form", "delta", "delta or a newform label"},
        {"q", "1", "modulus (squarefree)"},
        {"a", "0", "residue; 0 runs every a coprime to q"},
        {"X", "20", "window centre"},
        {"sigma", "0", "window width; 0 means X/8"},
        {"n-max", "100000", "coefficients available to the dual sum"},
        {"tol", "1e-3", "relative tolerance"}}},
      {"verify-jutila",
       "Jutila circle method: exact L2 error against the bound",
       {{"Q", "50", "moduli are the integers in (Q, 2Q]"},
        {"delta-exp", "2", "delta = Q^-delta-exp (dyadic rational when not exact)"},
        {"bound-const", "10", "constant in the bound c Q^2/(delta Lambda^2)"}}},
      {"verify-large-sieve",
       "large sieve experiment on random instances",
       {{"trials", "200", "number of random instances"},
        {"Q", "10", "modulus range (Q, 2Q]"},
        {"Z", "1", "derivative scale of the weights"},
        {"theta", "0.109375", "Ramanujan exponent"},
        {"rsw-max", "10", "largest r, s, w"},
        {"VH-max", "200", "largest V, H"},
        {"C", "100", "allowed ratio lhs / bound"}}},
      {"moment",
       "second moment geometric side; spectral product where the space is one-dimensional",
       {{"form", "delta", "the fixed form f"},
        {"kappa", "12", "weight of the family"},
        {"M", "1", "levels, comma separated"},
        {"X", "10", "lengths, comma separated"},
        {"A", "1", "window support start"},
        {"B", "2", "window support end"},
        {"Z", "1", "window derivative scale"},
        {"cmax", "4000", "largest modulus c"},
        {"tol", "1e-4", "tolerance against the spectral product"}}},
      {"typecalc",
       "numeric verification of claimed weight-function types",
       {{"fixture", "all", "all | exponential | product | composed | wrong | kernel_I"},
        {"samples", "16", "sample points per box"},
        {"C-max", "1000", "largest admissible constant"}}},
      {"fetch",
       "fetch coefficients of a newform (LMFDB or --coeff-dir) and list them",
       {{"form", "11.2.a.a", "newform label"},
        {"n-max", "50", "number of eigenvalues to list"},
        {"save", "", "write the coefficient file to this directory"}}},
  };
  return schemas;
}

const VerbSchema* find_verb(const std::string& verb) {
  for (const auto& v : verb_schemas())
    if (v.verb == verb) return &v;
  return nullptr;
}

std::string schema_text(const VerbSchema& v) {
  std::ostringstream os;
  os << v.verb << ": " << v.summary << "\n";
  for (const auto& p : v.params)
    os << "  --" << p.name << " (default " << (p.default_value.empty() ? "\"\"" : p.default_value) << ")  " << p.help
       << "\n";
  return os.str();
}

std::string schema_listing() {
  std::ostringstream os;
  os << "verbs:\n";
  for (const auto& v : verb_schemas()) os << schema_text(v);
  os << "global: --seed N --threads N --format csv|jsonl --output PATH --config FILE --coeff-dir DIR\n";
  return os.str();
}

std::map<std::string, std::string> parse_kv_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  auto trim = [](std::string s) {
    auto b = s.find_first_not_of(" \t\r");
    auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(is, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidArgument, "config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw Error(ErrorKind::InvalidArgument, "config line " + std::to_string(lineno) + ": empty key");
    kv[key] = value;
  }
  return kv;
}

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string fmt(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

struct Cell {
  std::string text;
  bool quoted = false;
};

Cell num(double x) { return {fmt(x), false}; }
Cell num(std::int64_t x) { return {std::to_string(x), false}; }
Cell num(int x) { return {std::to_string(x), false}; }
Cell str(std::string s) { return {std::move(s), true}; }

struct Report {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  std::vector<std::pair<std::string, std::string>> summary;
  bool has_verdict = false;
  bool pass = true;

  void row(std::vector<Cell> r) { rows.push_back(std::move(r)); }
  void note(const std::string& k, const std::string& v) { summary.emplace_back(k, v); }
  void verdict(bool ok) {
    has_verdict = true;
    pass = pass && ok;
  }
};

std::string json_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '"' || c == '\\') {
      o += '\\';
      o += c;
    } else if (static_cast<unsigned char>(c) < 0x20) {
      char buf[8];
      std::snprintf(buf, sizeof buf, "\\u%04x", c);
      o += buf;
    } else {
      o += c;
    }
  }
  return o;
}

std::string csv_field(const Cell& c) {
  if (c.text.find_first_of(",\"\n") == std::string::npos) return c.text;
  std::string o = "\"";
  for (char ch : c.text) o += ch == '"' ? std::string("\"\"") : std::string(1, ch);
  return o + "\"";
}

void write_report(std::ostream& os, const Report& r, ReportFormat format) {
  if (format == ReportFormat::csv) {
    for (std::size_t i = 0; i < r.columns.size(); ++i) os << (i ? "," : "") << r.columns[i];
    os << "\n";
    for (const auto& row : r.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_field(row[i]);
      os << "\n";
    }
  } else {
    for (const auto& row : r.rows) {
      os << "{";
      for (std::size_t i = 0; i < row.size(); ++i) {
        os << (i ? "," : "") << "\"" << json_escape(r.columns[i]) << "\":";
        bool numeric = !row[i].quoted && row[i].text != "nan" && row[i].text != "inf" && row[i].text != "-inf";
        if (numeric)
          os << row[i].text;
        else
          os << "\"" << json_escape(row[i].text) << "\"";
      }
      os << "}\n";
    }
  }
  for (const auto& [k, v] : r.summary) os << "# summary " << k << " = " << v << "\n";
  if (r.has_verdict) os << "# status " << (r.pass ? "PASS" : "FAIL") << "\n";
}

// --- parameter access

struct Params {
  const VerbSchema& schema;
  std::map<std::string, std::string> values;

  const std::string& raw(const std::string& k) const {
    auto it = values.find(k);
    if (it == values.end()) throw std::logic_error("undeclared parameter " + k);
    return it->second;
  }
  double real(const std::string& k) const {
    const std::string& s = raw(k);
    try {
      std::size_t pos = 0;
      double v = std::stod(s, &pos);
      if (pos == s.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + k + " expects a number, got '" + s + "'");
  }
  std::int64_t integer(const std::string& k) const {
    const std::string& s = raw(k);
    try {
      std::size_t pos = 0;
      long long v = std::stoll(s, &pos);
      if (pos == s.size()) return v;
    } catch (const std::exception&) {
    }
    throw UsageError("--" + k + " expects an integer, got '" + s + "'");
  }
  std::vector<double> reals(const std::string& k) const {
    std::vector<double> out;
    std::istringstream is(raw(k));
    std::string tok;
    while (std::getline(is, tok, ',')) {
      try {
        std::size_t pos = 0;
        double v = std::stod(tok, &pos);
        if (pos != tok.size() || !std::isfinite(v)) throw std::invalid_argument(tok);
        out.push_back(v);
      } catch (const std::exception&) {
        throw UsageError("--" + k + " expects a comma separated list of numbers, got '" + raw(k) + "'");
      }
    }
    if (out.empty()) throw UsageError("--" + k + " is empty");
    return out;
  }
};

struct Context {
  const Params& p;
  std::uint64_t seed;
  std::string coeff_dir;
};

// delta is the built-in oracle; anything else is a label from --coeff-dir or LMFDB
std::shared_ptr<const CuspForm> resolve_form(const Context& cx, const std::string& label, std::int64_t n_needed) {
  if (label == "delta") return std::make_shared<const CuspForm>(delta_oracle(static_cast<int>(std::max<std::int64_t>(n_needed, 2))));
  CoefficientSource src;
  if (!cx.coeff_dir.empty()) {
    src.kind = CoefficientSource::Kind::local_file;
    src.location = cx.coeff_dir;
  } else {
    src.kind = CoefficientSource::Kind::lmfdb;
  }
  return std::make_shared<const CuspForm>(load_form(src, label));
}

// --- verbs

void verb_arith(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::string op = p.raw("op");
  std::int64_t c_max = p.integer("c-max");
  if (c_max < 1) throw UsageError("--c-max must be >= 1");
  if (op == "kloosterman") {
    std::int64_t m = p.integer("m"), n = p.integer("n");
    r.columns = {"c", "fast", "direct", "abs_diff", "weil_ratio"};
    double worst_diff = 0.0, worst_ratio = 0.0;
    for (std::int64_t c = 1; c <= c_max; ++c) {
      double fast = kloosterman(m, n, c).value, direct = kloosterman_direct(m, n, c).value;
      double g = static_cast<double>(gcd64(gcd64(mod_reduce(m, c), mod_reduce(n, c)), c));
      double weil = static_cast<double>(divisor_tau(c)) * std::sqrt(g) * std::sqrt(static_cast<double>(c));
      double diff = std::abs(fast - direct), ratio = std::abs(fast) / weil;
      worst_diff = std::max(worst_diff, diff);
      worst_ratio = std::max(worst_ratio, ratio);
      r.row({num(c), num(fast), num(direct), num(diff), num(ratio)});
    }
    r.note("max_abs_diff", fmt(worst_diff));
    r.note("max_weil_ratio", fmt(worst_ratio));
    r.verdict(worst_diff <= 1e-9 && worst_ratio <= 1.0 + 1e-9);
  } else if (op == "ramanujan") {
    std::int64_t k = p.integer("k");
    r.columns = {"d", "divisor_formula", "unit_sum", "abs_diff"};
    double worst = 0.0;
    for (std::int64_t d = 1; d <= c_max; ++d) {
      auto exact = ramanujan(k, d);
      const auto& roots = roots_of_unity(d);
      cplx s = 0.0;
      for (std::int64_t a = 1; a <= d; ++a)
        if (gcd64(a, d) == 1) s += roots[mul_mod(a, mod_reduce(k, d), d)];
      double diff = std::abs(s - cplx(static_cast<double>(exact), 0.0));
      worst = std::max(worst, diff);
      r.row({num(d), num(exact), num(s.real()), num(diff)});
    }
    r.note("max_abs_diff", fmt(worst));
    r.verdict(worst <= 1e-6);
  } else if (op == "factor") {
    r.columns = {"n", "factorization", "mobius", "phi", "tau"};
    for (std::int64_t n = 1; n <= c_max; ++n) {
      std::string fs;
      for (const auto& pp : factorize(n))
        fs += (fs.empty() ? "" : "*") + std::to_string(pp.p) + (pp.e > 1 ? "^" + std::to_string(pp.e) : "");
      r.row({num(n), str(fs.empty() ? "1" : fs), num(mobius(n)), num(euler_phi(n)), num(divisor_tau(n))});
    }
  } else {
    throw UsageError("--op must be kloosterman, ramanujan or factor");
  }
}

void verb_bessel(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::string kind = p.raw("kind");
  double x0 = p.real("x-min"), x1 = p.real("x-max");
  std::int64_t pts = p.integer("points");
  if (pts < 1 || !(x0 > 0) || x1 < x0) throw UsageError("need points >= 1 and 0 < x-min <= x-max");
  std::function<EvalResult(double)> fn;
  if (kind == "J") {
    double v = p.real("order");
    BesselOrder o = v == std::round(v) ? BesselOrder::integer(static_cast<int>(v)) : BesselOrder::real(v);
    fn = [o](double x) { return bessel_j(o, x); };
  } else if (kind == "K") {
    double t = p.real("t");
    fn = [t](double x) { return bessel_k_imag(t, x); };
  } else if (kind == "Y") {
    double t = p.real("t");
    fn = [t](double x) { return bessel_y_pair(t, x); };
  } else if (kind == "voronoi") {
    std::int64_t k = p.integer("k"), sign = p.integer("sign");
    if (sign != 1 && sign != -1) throw UsageError("--sign must be 1 or -1");
    KernelForm kf = k > 0 ? KernelForm::holomorphic(static_cast<int>(k)) : KernelForm::maass(cplx(p.real("t"), 0.0));
    fn = [kf, sign](double y) { return voronoi_kernel(kf, static_cast<int>(sign), y); };
  } else {
    throw UsageError("--kind must be J, K, Y or voronoi");
  }
  r.columns = {"x", "value", "abs_err"};
  for (std::int64_t i = 0; i < pts; ++i) {
    double x = pts == 1 ? x0 : x0 + (x1 - x0) * static_cast<double>(i) / static_cast<double>(pts - 1);
    auto v = fn(x);
    r.row({num(x), num(v.value), num(v.abs_err)});
  }
}

void verb_transform(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::string kind = p.raw("kind");
  double A = p.real("A"), B = p.real("B"), Z = p.real("Z");
  double from = p.real("from"), to = p.real("to"), step = p.real("step");
  if (!(0 < A && A < B) || !(Z > 0)) throw UsageError("need 0 < A < B and Z > 0");
  if (!(step > 0) || to < from) throw UsageError("need step > 0 and from <= to");
  auto phi = SmoothWindow::bump(A, B, Z);
  r.columns = {kind == "tilde" ? "l" : "t", "value", "abs_err"};
  std::int64_t count = static_cast<std::int64_t>(std::floor((to - from) / step + 1e-9)) + 1;
  for (std::int64_t i = 0; i < count; ++i) {
    double a = from + step * static_cast<double>(i);
    EvalResult v;
    if (kind == "tilde") {
      if (a != std::round(a)) throw UsageError("tilde needs integer l");
      v = transform_tilde(phi, static_cast<int>(a));
    } else if (kind == "hat") {
      v = transform_hat(phi, cplx(a, 0.0));
    } else if (kind == "check") {
      v = transform_check(phi, a);
    } else {
      throw UsageError("--kind must be tilde, hat or check");
    }
    r.row({num(a), num(v.value), num(v.abs_err)});
  }
}

void verb_forms(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t n_max = p.integer("n-max"), hecke = p.integer("hecke");
  if (n_max < 1 || hecke < 1) throw UsageError("--n-max and --hecke must be >= 1");
  auto f = resolve_form(cx, p.raw("form"), std::max(n_max, hecke * hecke));
  f->require(n_max, "forms");
  r.columns = {"n", "lambda"};
  for (std::int64_t n = 1; n <= n_max; ++n) r.row({num(n), num(f->lambda[n])});
  auto h = hecke_check(*f, hecke, hecke);
  r.note("label", f->label);
  r.note("hecke_checked", std::to_string(h.checked));
  r.note("hecke_max_relative", fmt(h.max_relative));
  r.note("hecke_worst", "(" + std::to_string(h.worst_m) + ", " + std::to_string(h.worst_n) + ")");
  r.verdict(h.max_relative <= p.real("tol"));
}

void verb_petersson(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t level = p.integer("level"), weight = p.integer("weight"), grid = p.integer("grid"),
               cmax = p.integer("cmax");
  if (level != 1) throw UsageError("only --level 1 is supported");
  if (grid < 1 || cmax < 1) throw UsageError("--grid and --cmax must be >= 1");
  std::string label = p.raw("form");
  if (label == "delta" && weight != 12) throw UsageError("the delta oracle has weight 12; pass --form for other weights");
  auto f = resolve_form(cx, label, grid);
  if (f->weight != weight) throw UsageError("form weight does not match --weight");
  auto rep = petersson_rank1_check(*f, static_cast<int>(grid), cmax);
  r.columns = {"m", "n", "R", "R_over_R11", "lambda_m_lambda_n", "lambda_defect", "factor_defect"};
  std::size_t G = static_cast<std::size_t>(grid);
  auto R = [&](std::int64_t m, std::int64_t n) { return rep.R[(m - 1) * G + (n - 1)]; };
  for (std::int64_t m = 1; m <= grid; ++m)
    for (std::int64_t n = 1; n <= grid; ++n) {
      double ll = f->lambda[m] * f->lambda[n];
      double ratio = R(m, n) / rep.R11;
      r.row({num(m), num(n), num(R(m, n)), num(ratio), num(ll), num(std::abs(ratio - ll)),
             num(std::abs(R(m, n) * rep.R11 - R(m, 1) * R(1, n)))});
    }
  double tol = p.real("tol");
  r.note("R11", fmt(rep.R11));
  r.note("max_factor_defect", fmt(rep.max_factor_defect));
  r.note("max_lambda_defect", fmt(rep.max_lambda_defect));
  r.note("max_abs_err", fmt(rep.max_abs_err));
  r.verdict(rep.max_factor_defect < tol && rep.max_lambda_defect < tol);
}

void verb_voronoi(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t q = p.integer("q"), a0 = p.integer("a"), n_max = p.integer("n-max");
  double X = p.real("X"), sigma = p.real("sigma"), tol = p.real("tol");
  if (q < 1 || !(X > 0) || sigma < 0 || n_max < 1) throw UsageError("need q >= 1, X > 0, sigma >= 0, n-max >= 1");
  auto h = SmoothWindow::gaussian(X, sigma > 0 ? sigma : X / 8.0);
  auto f = resolve_form(cx, p.raw("form"), n_max);
  std::vector<std::int64_t> as;
  if (a0 != 0) {
    if (gcd64(a0, q) != 1) throw UsageError("--a must be coprime to --q");
    as.push_back(a0);
  } else {
    for (std::int64_t a = 1; a <= q; ++a)
      if (gcd64(a, q) == 1) as.push_back(a);
  }
  r.columns = {"a", "q", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "rel_diff", "abs_err"};
  double worst = 0.0;
  for (std::int64_t a : as) {
    auto L = voronoi_lhs(*f, a, q, h);
    auto R = voronoi_rhs(*f, a, q, h, 0, 1e-9);
    double rel = std::abs(L.value - R.value) / std::max(std::abs(L.value), 1e-300);
    worst = std::max(worst, rel);
    r.row({num(a), num(q), num(L.value.real()), num(L.value.imag()), num(R.value.real()), num(R.value.imag()),
           num(rel), num(L.abs_err + R.abs_err)});
  }
  r.note("max_rel_diff", fmt(worst));
  r.verdict(worst <= tol);
}

void verb_jutila(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t Q = p.integer("Q");
  double ex = p.real("delta-exp"), c = p.real("bound-const");
  if (Q < 1 || !(ex > 0)) throw UsageError("need Q >= 1 and delta-exp > 0");
  Rational delta;
  if (ex == std::round(ex)) {
    Rational qq(Q);
    delta = 1;
    for (int i = 0; i < static_cast<int>(ex); ++i) delta /= qq;
  } else {
    delta = dyadic_rational(std::pow(static_cast<double>(Q), -ex));
  }
  auto I = jutila_build(jutila_moduli(Q), delta);
  Rational l2 = jutila_l2_error(I);
  Rational integral = I.integral();
  double l2d = l2.convert_to<double>();
  double bound = jutila_bound(static_cast<double>(Q), I) * c / 10.0;
  r.columns = {"Q", "delta", "Lambda", "pieces", "integral", "l2_error", "bound", "ratio"};
  r.row({num(Q), num(delta.convert_to<double>()), num(I.Lambda), num(static_cast<std::int64_t>(I.values.size())),
         str(integral.str()), num(l2d), num(bound), num(l2d / bound)});
  r.note("delta_exact", delta.str());
  r.note("l2_error_exact", l2.str());
  r.verdict(integral == 1 && l2d <= bound);
}

void verb_large_sieve(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t trials = p.integer("trials"), rsw = p.integer("rsw-max");
  double Q = p.real("Q"), Z = p.real("Z"), theta = p.real("theta"), VH = p.real("VH-max"), C = p.real("C");
  if (trials < 1 || rsw < 1 || !(Q > 0) || !(Z > 0) || !(VH >= 1)) throw UsageError("bad large-sieve ranges");
  struct Out {
    SieveInstance inst;
    double plus = 0, minus = 0, bound = 0;
  };
  std::vector<Out> out(static_cast<std::size_t>(trials));
  parallel_for(out.size(), [&](std::size_t i) {
    Out& o = out[i];
    o.inst = random_sieve_instance(cx.seed + i, Q, Z, rsw, VH);
    o.plus = std::abs(large_sieve_lhs(o.inst, +1).value);
    o.minus = std::abs(large_sieve_lhs(o.inst, -1).value);
    o.bound = large_sieve_bound(o.inst, theta);
  });
  r.columns = {"trial", "seed", "r", "s", "w", "V", "H", "Q", "D", "Z", "lhs_plus", "lhs_minus", "bound", "ratio"};
  double worst = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    const auto& o = out[i];
    double ratio = std::max(o.plus, o.minus) / o.bound;
    worst = std::max(worst, ratio);
    r.row({num(static_cast<std::int64_t>(i)), num(static_cast<std::int64_t>(cx.seed + i)), num(o.inst.r),
           num(o.inst.s), num(o.inst.w), num(o.inst.V), num(o.inst.H), num(o.inst.Q), num(o.inst.D), num(o.inst.Z),
           num(o.plus), num(o.minus), num(o.bound), num(ratio)});
  }
  r.note("fitted_C", fmt(worst));
  r.verdict(worst <= C);
}

void verb_moment(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t kappa = p.integer("kappa"), cmax = p.integer("cmax");
  double A = p.real("A"), B = p.real("B"), Z = p.real("Z"), tol = p.real("tol");
  auto Ms = p.reals("M");
  auto Xs = p.reals("X");
  if (!(0 < A && A < B) || !(Z > 0) || cmax < 1) throw UsageError("need 0 < A < B, Z > 0, cmax >= 1");
  auto h = SmoothWindow::bump(A, B, Z);
  double Xmax = *std::max_element(Xs.begin(), Xs.end());
  auto f = resolve_form(cx, p.raw("form"), static_cast<std::int64_t>(std::ceil(B * Xmax)) + 1);
  std::shared_ptr<const CuspForm> g;
  double R11 = 0.0;
  if (kappa == 12) {
    g = std::make_shared<const CuspForm>(delta_oracle(static_cast<int>(std::ceil(B * Xmax)) + 1));
    R11 = petersson_geometric_R(1, 1, 12, 1, cmax).value;
  }
  r.columns = {"M", "X", "geometric", "diagonal", "truncation_error", "abs_err", "spectral", "positive"};
  bool ok = true;
  for (double Md : Ms) {
    if (Md < 1 || Md != std::round(Md)) throw UsageError("--M entries must be positive integers");
    auto M = static_cast<std::int64_t>(Md);
    for (double X : Xs) {
      if (!(X > 0)) throw UsageError("--X entries must be positive");
      auto m = second_moment_geometric(*f, static_cast<int>(kappa), M, h, X, cmax);
      bool positive = m.value >= -m.truncation_error;
      ok = ok && positive;
      Cell spectral = str("");
      if (M == 1 && g) {
        double s = smoothed_pair_sum(*f, *g, h, X);
        double spec = R11 * s * s;
        spectral = num(spec);
        ok = ok && std::abs(spec - m.value) <= tol;
      }
      r.row({num(M), num(X), num(m.value), num(m.diagonal), num(m.truncation_error), num(m.abs_err), spectral,
             num(positive ? 1 : 0)});
    }
  }
  r.verdict(ok);
}

void verb_typecalc(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::string which = p.raw("fixture");
  std::int64_t samples = p.integer("samples");
  double C_max = p.real("C-max");
  if (samples < 1) throw UsageError("--samples must be >= 1");
  std::vector<TypeFixture> fx;
  for (auto& f : all_fixtures())
    if (which == "all" || which == f.name) fx.push_back(std::move(f));
  if (fx.empty()) throw UsageError("unknown fixture '" + which + "'");
  r.columns = {"fixture", "index", "point", "measured", "bound", "ratio"};
  auto join_index = [](const std::vector<int>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + std::to_string(v[i]);
    return s;
  };
  auto join_point = [](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + fmt(v[i]);
    return s;
  };
  for (const auto& f : fx) {
    auto rep = verify_type(f.tf, f.indices, static_cast<int>(samples), cx.seed, C_max);
    for (const auto& s : rep.samples)
      r.row({str(f.name), str(join_index(s.index)), str(join_point(s.point)), num(s.measured), num(s.bound), num(s.ratio)});
    r.note(f.name, "type " + f.tf.claimed.str() + ", C = " + fmt(rep.C) + ", C_rescaled = " + fmt(rep.C_rescaled) +
                       ", " + (rep.pass ? "pass" : "fail") + " (expected " + (f.expect_pass ? "pass" : "fail") + ")");
    r.verdict(rep.pass == f.expect_pass);
  }
}

void verb_fetch(const Context& cx, Report& r) {
  const auto& p = cx.p;
  std::int64_t n_max = p.integer("n-max");
  std::string label = p.raw("form");
  if (label == "delta") throw UsageError("fetch needs a newform label");
  auto f = resolve_form(cx, label, n_max);
  std::int64_t upto = std::min(n_max, f->n_max());
  r.columns = {"n", "lambda"};
  for (std::int64_t n = 1; n <= upto; ++n) r.row({num(n), num(f->lambda[n])});
  r.note("label", f->label);
  r.note("level", std::to_string(f->level));
  r.note("weight", std::to_string(f->weight));
  r.note("coefficients", std::to_string(f->n_max()));
  std::string save = p.raw("save");
  if (!save.empty()) {
    std::string path = save + "/" + label + ".txt";
    std::ofstream os(path);
    if (!os) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
    os << format_form_file(*f);
    r.note("saved", path);
  }
}

using VerbFn = void (*)(const Context&, Report&);

VerbFn verb_fn(const std::string& v) {
  static const std::map<std::string, VerbFn> fns = {
      {"arith", verb_arith},           {"bessel", verb_bessel},
      {"transform", verb_transform},   {"forms", verb_forms},
      {"verify-petersson", verb_petersson}, {"verify-voronoi", verb_voronoi},
      {"verify-jutila", verb_jutila},  {"verify-large-sieve", verb_large_sieve},
      {"moment", verb_moment},         {"typecalc", verb_typecalc},
      {"fetch", verb_fetch},
  };
  auto it = fns.find(v);
  return it == fns.end() ? nullptr : it->second;
}

std::string read_text(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const VerbSchema* schema = find_verb(cfg.command);
  if (!schema) {
    err << "unknown verb '" << cfg.command << "'\n" << schema_listing();
    return 1;
  }
  Params params{*schema, {}};
  std::uint64_t seed = 1;
  ReportFormat format = ReportFormat::csv;
  std::string output, coeff_dir;
  unsigned threads = 0;
  try {
    std::map<std::string, std::string> file;
    if (!cfg.config_file.empty()) file = parse_kv_config(read_text(cfg.config_file));
    for (const auto& [k, v] : file) {
      bool known = std::find(global_keys.begin(), global_keys.end(), k) != global_keys.end() ||
                   std::any_of(schema->params.begin(), schema->params.end(), [&](const auto& ps) { return ps.name == k; });
      if (!known) throw UsageError("config key '" + k + "' is not a parameter of " + schema->verb);
    }
    for (const auto& [k, v] : cfg.parameters)
      if (std::none_of(schema->params.begin(), schema->params.end(), [&](const auto& ps) { return ps.name == k; }))
        throw UsageError("'" + k + "' is not a parameter of " + schema->verb);
    for (const auto& ps : schema->params) {
      std::string v = ps.default_value;
      if (auto it = file.find(ps.name); it != file.end()) v = it->second;
      if (auto it = cfg.parameters.find(ps.name); it != cfg.parameters.end()) v = it->second;
      params.values[ps.name] = v;
    }
    auto global = [&](const std::string& k) -> std::optional<std::string> {
      if (auto it = file.find(k); it != file.end()) return it->second;
      return std::nullopt;
    };
    if (cfg.seed) {
      seed = *cfg.seed;
    } else if (auto s = global("seed")) {
      try {
        seed = std::stoull(*s);
      } catch (const std::exception&) {
        throw UsageError("seed expects a nonnegative integer");
      }
    }
    std::string fmt_name = cfg.format ? (*cfg.format == ReportFormat::csv ? "csv" : "jsonl") : global("format").value_or("csv");
    if (fmt_name == "csv")
      format = ReportFormat::csv;
    else if (fmt_name == "jsonl" || fmt_name == "json-lines")
      format = ReportFormat::jsonl;
    else
      throw UsageError("format must be csv or jsonl");
    output = cfg.output ? *cfg.output : global("output").value_or("");
    coeff_dir = cfg.coeff_dir ? *cfg.coeff_dir : global("coeff-dir").value_or("");
    if (cfg.threads) {
      threads = *cfg.threads;
    } else if (auto t = global("threads")) {
      try {
        threads = static_cast<unsigned>(std::stoul(*t));
      } catch (const std::exception&) {
        throw UsageError("threads expects a nonnegative integer");
      }
    }
  } catch (const std::exception& e) {
    err << "usage error: " << e.what() << "\n" << schema_text(*schema);
    return 1;
  }

  set_max_threads(threads);
  Report report;
  Context cx{params, seed, coeff_dir};
  try {
    verb_fn(schema->verb)(cx, report);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n" << schema_text(*schema);
    return 1;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::InvalidArgument) {
      err << "usage error: " << e.what() << "\n" << schema_text(*schema);
      return 1;
    }
    err << "error: " << e.what() << "\n";
    return 2;
  }

  std::ofstream file;
  std::ostream* os = &out;
  if (!output.empty() && output != "-") {
    file.open(output);
    if (!file) {
      err << "cannot write " << output << "\n";
      return 2;
    }
    os = &file;
  }
  *os << "# rankinlab " << tool_version << "\n";
  *os << "# command = " << schema->verb << "\n";
  *os << "# seed = " << seed << "\n";
  *os << "# format = " << (format == ReportFormat::csv ? "csv" : "jsonl") << "\n";
  *os << "# threads = " << threads << "\n";
  *os << "# coeff-dir = " << coeff_dir << "\n";
  for (const auto& ps : schema->params) *os << "# param " << ps.name << " = " << params.values[ps.name] << "\n";
  write_report(*os, report, format);
  os->flush();
  return report.has_verdict && !report.pass ? 2 : 0;
}

}  // namespace rankinlab
