#include "rankinlab/forms.hpp"

#include <httplib.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "rankinlab/arith.hpp"

namespace rankinlab {

namespace fs = std::filesystem;

double CuspForm::at(std::int64_t n) const {
  if (n < 1 || n > n_max())
    throw Error(ErrorKind::InsufficientCoefficients, label + ": coefficient n=" + std::to_string(n) + " not stored");
  return lambda[static_cast<std::size_t>(n)];
}

void CuspForm::require(std::int64_t n, const char* what) const {
  if (n > n_max())
    throw Error(ErrorKind::InsufficientCoefficients, std::string(what) + " needs n <= " + std::to_string(n) +
                                                         ", " + label + " stores " + std::to_string(n_max()));
}

// --- Delta oracle

std::vector<__int128> ramanujan_tau(int n_max) {
  if (n_max < 1 || n_max > 100000) throw Error(ErrorKind::InvalidArgument, "n_max must be in [1, 1e5]");
  // prod (1-q^m)^3 = sum_k (-1)^k (2k+1) q^{k(k+1)/2}; raise to the 8th power
  int L = n_max;  // coefficients of q^0..q^{n_max-1}
  std::vector<std::pair<int, __int128>> jac;
  for (int k = 0; k * (k + 1) / 2 < L; ++k) jac.push_back({k * (k + 1) / 2, (k % 2 ? -1 : 1) * (2 * k + 1)});
  std::vector<__int128> cur(L, 0);
  cur[0] = 1;
  for (int rep = 0; rep < 8; ++rep) {
    std::vector<__int128> nxt(L, 0);
    for (int i = 0; i < L; ++i) {
      if (cur[i] == 0) continue;
      for (auto [e, c] : jac) {
        if (i + e >= L) break;
        __int128 prod;
        if (__builtin_mul_overflow(cur[i], c, &prod) || __builtin_add_overflow(nxt[i + e], prod, &nxt[i + e]))
          throw Error(ErrorKind::Overflow, "tau power series exceeds 128-bit range");
      }
    }
    cur.swap(nxt);
  }
  std::vector<__int128> tau(n_max + 1, 0);
  for (int n = 1; n <= n_max; ++n) tau[n] = cur[n - 1];
  return tau;
}

CuspForm delta_oracle(int n_max) {
  auto tau = ramanujan_tau(n_max);
  CuspForm f;
  f.kind = CuspForm::Kind::holomorphic;
  f.level = 1;
  f.weight = 12;
  f.label = "1.12.a.a";
  f.is_newform = true;
  f.lambda.assign(n_max + 1, 0.0);
  for (int n = 1; n <= n_max; ++n)
    f.lambda[n] = static_cast<double>(static_cast<long double>(tau[n]) / std::pow(static_cast<long double>(n), 5.5L));
  return f;
}

// --- validation

void validate_form(const CuspForm& f) {
  if (f.n_max() < 1) throw Error(ErrorKind::MalformedData, f.label + ": no coefficients");
  if (std::abs(f.lambda[1] - 1.0) > 1e-12)
    throw Error(ErrorKind::InvariantViolation, f.label + ": lambda(1) = " + std::to_string(f.lambda[1]) + " != 1");
  if (f.kind == CuspForm::Kind::holomorphic && f.is_newform) {
    for (std::int64_t n = 1; n <= f.n_max(); ++n) {
      if (std::abs(f.lambda[n]) > static_cast<double>(divisor_tau(n)) + 1e-9)
        throw Error(ErrorKind::InvariantViolation,
                    f.label + ": Deligne bound fails at n=" + std::to_string(n));
    }
  }
  if (f.is_newform && f.level > 1 && mobius(f.level) != 0) {
    for (auto [p, e] : factorize(f.level)) {
      if (p > f.n_max()) continue;
      double want = 1.0 / std::sqrt(static_cast<double>(p));
      if (std::abs(std::abs(f.lambda[p]) - want) > 1e-6)
        throw Error(ErrorKind::InvariantViolation,
                    f.label + ": |lambda(" + std::to_string(p) + ")| != " + std::to_string(p) + "^(-1/2)");
    }
  }
}

// --- local file format
//
//   kind holomorphic|maass
//   level N
//   weight k            (holomorphic)
//   spectral t          (maass)
//   label text
//   newform true|false
//   normalization lambda|raw
//   atkin_lehner N2 eta   (optional, repeatable)
//   reflection +1|-1      (optional)
//   <n> <value>           one per line, n = 1, 2, ... contiguous

CuspForm parse_form_file(const std::string& text, const std::string& origin) {
  CuspForm f;
  f.label.clear();
  bool raw = false, have_kind = false, have_level = false, have_weight = false;
  std::vector<std::pair<std::int64_t, long double>> data;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto bad = [&](const std::string& field) {
    throw Error(ErrorKind::MalformedData, origin + ":" + std::to_string(lineno) + ": field '" + field + "'");
  };
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (std::isdigit(static_cast<unsigned char>(key[0]))) {
      std::int64_t n;
      long double v;
      try {
        n = std::stoll(key);
      } catch (...) {
        bad("n");
      }
      std::string vs;
      if (!(ls >> vs)) bad("value");
      try {
        std::size_t pos = 0;
        v = std::stold(vs, &pos);
        if (pos != vs.size()) bad("value");
      } catch (const Error&) {
        throw;
      } catch (...) {
        bad("value");
      }
      data.push_back({n, v});
      continue;
    }
    std::string val;
    if (!(ls >> val)) bad(key);
    if (key == "kind") {
      if (val == "holomorphic") f.kind = CuspForm::Kind::holomorphic;
      else if (val == "maass") f.kind = CuspForm::Kind::maass;
      else bad("kind");
      have_kind = true;
    } else if (key == "level") {
      try { f.level = std::stoll(val); } catch (...) { bad("level"); }
      if (f.level < 1) bad("level");
      have_level = true;
    } else if (key == "weight") {
      try { f.weight = std::stoi(val); } catch (...) { bad("weight"); }
      if (f.weight < 2 || f.weight % 2) bad("weight");
      have_weight = true;
    } else if (key == "spectral") {
      try { f.spectral = std::stod(val); } catch (...) { bad("spectral"); }
      have_weight = true;
    } else if (key == "label") {
      f.label = val;
    } else if (key == "newform") {
      if (val != "true" && val != "false") bad("newform");
      f.is_newform = val == "true";
    } else if (key == "normalization") {
      if (val != "lambda" && val != "raw") bad("normalization");
      raw = val == "raw";
    } else if (key == "atkin_lehner") {
      std::string eta;
      if (!(ls >> eta)) bad("atkin_lehner");
      try { f.atkin_lehner[std::stoll(val)] = std::stod(eta); } catch (...) { bad("atkin_lehner"); }
    } else if (key == "reflection") {
      try { f.reflection = std::stoi(val); } catch (...) { bad("reflection"); }
    } else {
      bad(key);
    }
  }
  if (!have_kind) throw Error(ErrorKind::MalformedData, origin + ": missing field 'kind'");
  if (!have_level) throw Error(ErrorKind::MalformedData, origin + ": missing field 'level'");
  if (!have_weight)
    throw Error(ErrorKind::MalformedData,
                origin + ": missing field '" + std::string(f.kind == CuspForm::Kind::maass ? "spectral" : "weight") + "'");
  if (f.label.empty()) throw Error(ErrorKind::MalformedData, origin + ": missing field 'label'");
  if (raw && f.kind != CuspForm::Kind::holomorphic) throw Error(ErrorKind::MalformedData, origin + ": raw needs weight");
  f.lambda.assign(data.size() + 1, 0.0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    auto [n, v] = data[i];
    if (n != static_cast<std::int64_t>(i + 1))
      throw Error(ErrorKind::MalformedData, origin + ": coefficient n=" + std::to_string(i + 1) + " missing or out of order");
    if (raw) v /= std::pow(static_cast<long double>(n), (f.weight - 1) / 2.0L);
    f.lambda[i + 1] = static_cast<double>(v);
  }
  validate_form(f);
  return f;
}

std::string format_form_file(const CuspForm& f) {
  std::ostringstream o;
  o << "kind " << (f.kind == CuspForm::Kind::holomorphic ? "holomorphic" : "maass") << "\n";
  o << "level " << f.level << "\n";
  if (f.kind == CuspForm::Kind::holomorphic)
    o << "weight " << f.weight << "\n";
  else
    o << "spectral " << f.spectral << "\n";
  o << "label " << f.label << "\n";
  o << "newform " << (f.is_newform ? "true" : "false") << "\n";
  o << "normalization lambda\n";
  for (auto [n2, eta] : f.atkin_lehner) o << "atkin_lehner " << n2 << " " << eta << "\n";
  if (f.reflection) o << "reflection " << *f.reflection << "\n";
  char buf[64];
  for (std::int64_t n = 1; n <= f.n_max(); ++n) {
    std::snprintf(buf, sizeof buf, "%lld %.17g\n", static_cast<long long>(n), f.lambda[n]);
    o << buf;
  }
  return o.str();
}

// --- LMFDB client

std::string lmfdb_base_url() {
  const char* e = std::getenv("RANKINLAB_LMFDB_URL");
  return e && *e ? e : "https://www.lmfdb.org";
}

std::string default_cache_dir() {
  const char* e = std::getenv("RANKINLAB_CACHE");
  if (e && *e) return e;
  const char* home = std::getenv("HOME");
  return std::string(home ? home : ".") + "/.cache/rankinlab";
}

namespace {

std::mutex g_net_mutex;  // serialises requests (rate ceiling) and cache writes
std::chrono::steady_clock::time_point g_last_request{};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_atomic(const fs::path& p, const std::string& data) {
  fs::create_directories(p.parent_path());
  fs::path tmp = p;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out << data;
    if (!out) throw Error(ErrorKind::NetworkError, "cannot write cache file " + tmp.string());
  }
  fs::rename(tmp, p);
}

bool valid_label(const std::string& s) {
  if (s.empty() || s.size() > 64) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '_')) return false;
  return true;
}

std::string http_get(const std::string& base, const std::string& path) {
  std::string last_error;
  for (int attempt = 0; attempt < 4; ++attempt) {
    {
      auto now = std::chrono::steady_clock::now();
      auto next = g_last_request + std::chrono::seconds(1);
      if (g_last_request.time_since_epoch().count() != 0 && now < next) std::this_thread::sleep_until(next);
      g_last_request = std::chrono::steady_clock::now();
    }
    try {
      httplib::Client cli(base);
      cli.set_connection_timeout(10);
      cli.set_read_timeout(30);
      cli.set_follow_location(true);
      auto res = cli.Get(path);
      if (res && res->status == 200) return res->body;
      if (res && res->status == 404) throw Error(ErrorKind::UnknownLabel, "service returned 404 for " + path);
      last_error = res ? "HTTP status " + std::to_string(res->status) : httplib::to_string(res.error());
    } catch (const Error&) {
      throw;
    } catch (const std::exception& ex) {
      last_error = ex.what();
    }
    if (attempt < 3) std::this_thread::sleep_for(std::chrono::milliseconds(500 << attempt));
  }
  throw Error(ErrorKind::NetworkError, base + path + ": " + last_error);
}

CuspForm form_from_lmfdb(const std::string& body, const std::string& label) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(body);
  } catch (const std::exception&) {
    throw Error(ErrorKind::MalformedData, label + ": response is not JSON");
  }
  if (!j.contains("data") || !j["data"].is_array()) throw Error(ErrorKind::MalformedData, label + ": field 'data'");
  if (j["data"].empty()) throw Error(ErrorKind::UnknownLabel, label);
  const auto& d = j["data"][0];
  auto need = [&](const char* field) -> const nlohmann::json& {
    if (!d.contains(field) || d[field].is_null()) throw Error(ErrorKind::MalformedData, label + ": field '" + field + "'");
    return d[field];
  };
  CuspForm f;
  f.kind = CuspForm::Kind::holomorphic;
  f.label = label;
  try {
    f.level = need("level").get<std::int64_t>();
    f.weight = need("weight").get<int>();
    int dim = need("dim").get<int>();
    if (dim != 1) throw Error(ErrorKind::MalformedData, label + ": field 'dim' = " + std::to_string(dim) + " (only rational newforms)");
    if (d.contains("char_order") && d["char_order"].is_number() && d["char_order"].get<int>() != 1)
      throw Error(ErrorKind::MalformedData, label + ": field 'char_order' (nebentypus unsupported)");
    const auto& tr = need("traces");
    if (!tr.is_array() || tr.size() < 2) throw Error(ErrorKind::MalformedData, label + ": field 'traces'");
    // traces may start at n = 0 or n = 1; a(1) = dim = 1 identifies the offset
    std::size_t off = (tr[0].get<long double>() == 0 && tr[1].get<long double>() == 1) ? 1 : 0;
    f.lambda.assign(tr.size() - off + 1, 0.0);
    for (std::size_t i = off; i < tr.size(); ++i) {
      std::int64_t n = static_cast<std::int64_t>(i - off + 1);
      long double a = tr[i].get<long double>();
      f.lambda[n] = static_cast<double>(a / std::pow(static_cast<long double>(n), (f.weight - 1) / 2.0L));
    }
  } catch (const Error&) {
    throw;
  } catch (const std::exception& ex) {
    throw Error(ErrorKind::MalformedData, label + ": " + ex.what());
  }
  validate_form(f);
  return f;
}

}  // namespace

CuspForm load_form(const CoefficientSource& src, const std::string& label) {
  if (!valid_label(label)) throw Error(ErrorKind::UnknownLabel, "invalid label '" + label + "'");
  if (src.kind == CoefficientSource::Kind::local_file) {
    fs::path dir = src.location.empty() ? fs::path(".") : fs::path(src.location);
    fs::path p = dir / (label + ".txt");
    if (!fs::exists(p)) throw Error(ErrorKind::UnknownLabel, "no coefficient file " + p.string());
    return parse_form_file(read_file(p), p.string());
  }
  std::string cache = std::getenv("RANKINLAB_CACHE") && *std::getenv("RANKINLAB_CACHE")
                          ? std::string(std::getenv("RANKINLAB_CACHE"))
                          : (src.cache_dir.empty() ? default_cache_dir() : src.cache_dir);
  fs::path cached = fs::path(cache) / "lmfdb" / (label + ".json");
  std::lock_guard<std::mutex> lock(g_net_mutex);
  if (fs::exists(cached)) return form_from_lmfdb(read_file(cached), label);
  std::string base = src.location.empty() ? lmfdb_base_url() : src.location;
  std::string path = "/api/mf_newforms/?_format=json&_fields=label,level,weight,dim,char_order,traces&label=" + label;
  std::string body = http_get(base, path);
  CuspForm f = form_from_lmfdb(body, label);  // validate before caching
  write_atomic(cached, body);
  return f;
}

// --- elementary sums

HeckeReport hecke_check(const CuspForm& f, std::int64_t m_max, std::int64_t n_max) {
  f.require(m_max * n_max, "hecke_check");
  HeckeReport r;
  for (std::int64_t m = 1; m <= m_max; ++m) {
    for (std::int64_t n = 1; n <= n_max; ++n) {
      if (gcd64(n, f.level) != 1) continue;
      double lhs = f.lambda[m] * f.lambda[n];
      double rhs = 0.0;
      for (std::int64_t d : divisors(gcd64(m, n))) rhs += f.lambda[m * n / (d * d)];
      double v = std::abs(lhs - rhs);
      double rel = v / std::max(1.0, std::abs(lhs));
      if (v > r.max_violation) {
        r.max_violation = v;
        r.worst_m = m;
        r.worst_n = n;
      }
      r.max_relative = std::max(r.max_relative, rel);
      ++r.checked;
    }
  }
  return r;
}

cplx wilton_sum(const CuspForm& f, double X, double alpha) {
  if (X < 1) return {0.0, 0.0};
  auto N = static_cast<std::int64_t>(std::floor(X));
  f.require(N, "wilton_sum");
  cplx s{0.0, 0.0};
  for (std::int64_t n = 1; n <= N; ++n) {
    double frac = std::fmod(static_cast<double>(n) * alpha, 1.0);
    s += f.lambda[n] / std::sqrt(static_cast<double>(n)) * e_of(frac);
  }
  return s;
}

double rankin_sum(const CuspForm& f, double x) {
  if (x < 1) return 0.0;
  auto N = static_cast<std::int64_t>(std::floor(x));
  f.require(N, "rankin_sum");
  double s = 0.0;
  for (std::int64_t n = 1; n <= N; ++n) s += f.lambda[n] * f.lambda[n] / static_cast<double>(n);
  return s;
}

}  // namespace rankinlab
