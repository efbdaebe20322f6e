// padic-heights: command-line front end for local p-adic heights on hyperelliptic curves.

#include <openssl/evp.h>
#include <unistd.h>

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "padic_heights.hpp"

namespace fs = std::filesystem;
namespace ph = padic_heights;
using ph::Json;

namespace {

enum ExitCode { exit_ok = 0, exit_usage = 1, exit_domain = 2, exit_precision = 3, exit_io = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string request;
  std::string curve;
  long p = 0;
  std::string f;
  long prec = 0;
  std::string w;
  std::string cache;
  bool json = false;
  bool verify = false;
  std::string d1, d2, points, base, from, to;
};

std::string sha256_hex(const std::string& text) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(text.data(), text.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  std::ostringstream out;
  for (unsigned int i = 0; i < len; ++i) out << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return out.str();
}

std::string read_text(const std::string& path) {
  if (path == "-") {
    std::ostringstream s;
    s << std::cin.rdbuf();
    return s.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_atomically(const fs::path& path, const std::string& text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
  fs::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  fs::rename(tmp, path, ec);
  if (ec) {
    fs::remove(tmp);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

Json parse_json(const std::string& text, const std::string& what) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in " + what + ": " + e.what());
  }
}

std::vector<std::string> split_commas(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) out.push_back(item);
  return out;
}

/// Merges the request file with command-line overrides.
Json build_request(const Options& o, const CLI::App& sub) {
  Json req = o.request.empty() ? Json::object() : parse_json(read_text(o.request), o.request);
  if (!req.is_object()) throw std::invalid_argument("request must be a JSON object");
  if (!o.curve.empty()) req["curve"] = parse_json(o.curve, "--curve");
  if (sub.count("--p")) req["curve"]["p"] = o.p;
  if (!o.f.empty()) req["curve"]["f"] = split_commas(o.f);
  if (sub.count("--prec")) req["N"] = o.prec;
  if (!o.w.empty()) req["w_mode"] = o.w;
  if (!o.d1.empty()) req["D1"] = parse_json(o.d1, "--d1");
  if (!o.d2.empty()) req["D2"] = parse_json(o.d2, "--d2");
  if (!o.points.empty()) req["points"] = parse_json(o.points, "--points");
  if (!o.base.empty()) req["base_point"] = parse_json(o.base, "--base");
  if (!o.from.empty()) req["from"] = parse_json(o.from, "--from");
  if (!o.to.empty()) req["to"] = parse_json(o.to, "--to");
  if (!req.contains("curve")) throw std::invalid_argument("no curve given (use --curve, --p/--f or --request)");
  return req;
}

struct Session {
  ph::HyperellipticCurve user;
  ph::ModelMap map;
  ph::PrecomputedData data;
  std::string cache_file;
  std::string key;
};

std::string default_cache_file(const std::string& explicit_path, const std::string& key) {
  if (!explicit_path.empty()) return explicit_path;
  if (const char* dir = std::getenv("HEIGHTS_CACHE_DIR"); dir && *dir) return (fs::path(dir) / (key + ".json")).string();
  return {};
}

std::string cache_text(const ph::PrecomputedData& D, const std::string& key) {
  Json j = ph::precomputed_to_json(D);
  j["key"] = key;
  return j.dump(1) + "\n";
}

Session open_session(const Json& req, const Options& o, bool write_cache) {
  Session s;
  const long N = req.value("N", 10L);
  if (N < 1) throw std::invalid_argument("--prec must be positive");
  const ph::WMode mode = ph::parse_w_mode(req.value("w_mode", std::string("unit-root")));
  Json cj = req.at("curve");
  if (!cj.contains("prec")) cj["prec"] = N + 10;
  s.user = ph::curve_from_json(cj);
  std::optional<ph::CurvePoint> base;
  if (req.contains("base_point")) base = ph::point_from_json(s.user, req.at("base_point"));
  auto [normal, map] = ph::normalize_model(s.user, base);
  s.map = map;
  s.key = sha256_hex(ph::cache_identity(normal, N, mode));
  s.cache_file = default_cache_file(o.cache, s.key);

  if (!s.cache_file.empty() && fs::exists(s.cache_file)) {
    Json cached = parse_json(read_text(s.cache_file), s.cache_file);
    if (cached.value("key", std::string()) == s.key) {
      s.data = ph::precomputed_from_json(cached);
      return s;
    }
  }
  s.data = ph::precompute(normal, N, mode);
  if (write_cache && !s.cache_file.empty()) write_atomically(s.cache_file, cache_text(s.data, s.key));
  return s;
}

ph::CurvePoint to_model(const Session& s, const ph::CurvePoint& P) {
  if (s.map.kind == ph::ModelMap::Kind::identity) return P;
  ph::ModelMap m = ph::refine_map(s.map, s.data.working_precision);
  return ph::map_point(m, ph::refine_point(m.source, P));
}

ph::Divisor parse_divisor(const Session& s, const Json& j, const std::string& what) {
  if (!j.is_array()) throw std::invalid_argument(what + " must be an array of [point, multiplicity] pairs");
  ph::Divisor D;
  for (const auto& term : j) {
    if (term.is_array() && term.size() == 2 && term[1].is_number_integer()) {
      D.emplace_back(to_model(s, ph::point_from_json(s.user, term[0])), term[1].get<long>());
    } else if (term.is_object() && term.contains("point")) {
      D.emplace_back(to_model(s, ph::point_from_json(s.user, term.at("point"))), term.value("mult", 1L));
    } else {
      throw std::invalid_argument(what + " entries must be [point, multiplicity] or {\"point\":..., \"mult\":...}");
    }
  }
  return D;
}

std::pair<ph::Divisor, ph::Divisor> request_divisors(const Session& s, const Json& req) {
  if (req.contains("points")) {
    const auto& pts = req.at("points");
    if (!pts.is_array() || pts.size() != 4) throw std::invalid_argument("points must list P, Q, R, S");
    std::vector<ph::CurvePoint> v;
    for (const auto& pt : pts) v.push_back(to_model(s, ph::point_from_json(s.user, pt)));
    return {{{v[0], 1}, {v[1], -1}}, {{v[2], 1}, {v[3], -1}}};
  }
  if (!req.contains("D1") || !req.contains("D2")) throw std::invalid_argument("give either points or both D1 and D2");
  return {parse_divisor(s, req.at("D1"), "D1"), parse_divisor(s, req.at("D2"), "D2")};
}

Json model_json(const Session& s) { return ph::curve_to_json(s.data.curve.at_precision(s.data.target_precision)); }

int run_precompute(const Options& o, const CLI::App& sub) {
  Json req = build_request(o, sub);
  Session s = open_session(req, o, true);
  if (s.cache_file.empty()) {
    std::cout << cache_text(s.data, s.key);
    return exit_ok;
  }
  if (o.json) {
    std::cout << Json{{"cache", s.cache_file}, {"key", s.key}}.dump(2) << "\n";
  } else {
    std::cout << "cache: " << s.cache_file << "\nkey: " << s.key << "\n";
  }
  return exit_ok;
}

/// Compares the antisymmetric pieces against the full reduction to the model at each base point.
Json verify_pairs(const ph::PrecomputedData& D, const ph::Divisor& D1, const ph::Divisor& D2, bool& all_ok) {
  Json checks = Json::array();
  for (const auto& [P, Q] : ph::detail::greedy_pairs(D1)) {
    for (const auto& [R, S] : ph::detail::greedy_pairs(D2)) {
      for (const auto& X0 : {P, Q}) {
        ph::CurvePoint X = ph::prepare_point(D, X0);
        if (!X.is_affine() || X.y.is_zero() || X.y.valuation() != 0) continue;
        if (ph::classify_point(D.curve, X).kind != ph::DiscKind::ordinary_affine) continue;
        ph::HeightResult a = ph::height_antisymmetric(D, X, R, S);
        ph::HeightResult b = ph::height_antisymmetric_by_reduction(D, X, R, S);
        bool ok = a.value.equals(b.value);
        all_ok = all_ok && ok;
        checks.push_back(Json{{"point", ph::point_to_json(X)},
                              {"direct", a.value.to_string()},
                              {"reduced", b.value.to_string()},
                              {"agree", ok}});
      }
    }
  }
  return checks;
}

int run_height(const Options& o, const CLI::App& sub) {
  Json req = build_request(o, sub);
  Session s = open_session(req, o, true);
  auto [D1, D2] = request_divisors(s, req);
  ph::HeightResult r = ph::height_pairing(s.data, D1, D2);
  Json out = ph::height_to_json(r);
  out["p"] = s.data.prime();
  out["N"] = s.data.target_precision;
  out["model"] = model_json(s);
  bool ok = true;
  if (o.verify) {
    if (s.data.w_mode != ph::WMode::unit_root) throw ph::DomainError("--verify needs the unit-root complement");
    out["verify"] = verify_pairs(s.data, D1, D2, ok);
  }
  if (o.json) {
    std::cout << out.dump(2) << "\n";
  } else {
    std::cout << "h_" << s.data.prime() << "(D1, D2) = " << r.value.to_string() << "\n";
    std::cout << "attained precision: " << r.precision() << "\n";
    std::cout << "complement: " << ph::to_string(r.w_mode) << "\n";
    std::cout << "trace:\n";
    for (const auto& t : r.trace) std::cout << "  - " << t << "\n";
    if (o.verify) {
      for (const auto& c : out["verify"]) {
        std::cout << "verify " << c["point"].dump() << ": " << (c["agree"].get<bool>() ? "agree" : "MISMATCH") << "\n";
      }
    }
  }
  if (!ok) {
    std::cerr << "error: the two computations disagree\n";
    return exit_domain;
  }
  return exit_ok;
}

int run_integrate(const Options& o, const CLI::App& sub) {
  Json req = build_request(o, sub);
  Session s = open_session(req, o, true);
  if (!req.contains("from") || !req.contains("to")) throw std::invalid_argument("integrate needs --from and --to");
  ph::CurvePoint S = ph::prepare_point(s.data, to_model(s, ph::point_from_json(s.user, req.at("from"))));
  ph::CurvePoint R = ph::prepare_point(s.data, to_model(s, ph::point_from_json(s.user, req.at("to"))));
  ph::BasisIntegrals ints = ph::coleman_integrals_on_basis(s.data, S, R);
  for (auto& v : ints.values) v = v.truncated(s.data.target_precision);
  if (o.json) {
    Json out = ph::integrals_to_json(ints);
    out["model"] = model_json(s);
    std::cout << out.dump(2) << "\n";
  } else {
    for (std::size_t i = 0; i < ints.values.size(); ++i) {
      std::cout << "int x^" << i << " dx/y = " << ints.values[i].to_string() << "\n";
    }
  }
  return exit_ok;
}

void add_common(CLI::App* sub, Options& o) {
  sub->add_option("--request", o.request, "request JSON file ('-' for stdin)");
  sub->add_option("--curve", o.curve, "curve as JSON, e.g. {\"p\":7,\"f\":[...]}");
  sub->add_option("--p", o.p, "the prime p");
  sub->add_option("--f", o.f, "coefficients c0,c1,... of f");
  sub->add_option("--prec", o.prec, "target precision N");
  sub->add_option("--w", o.w, "complementary subspace")->check(CLI::IsMember({"unit-root", "symplectic"}));
  sub->add_option("--cache", o.cache, "cache file (default: $HEIGHTS_CACHE_DIR/<hash>.json)");
  sub->add_option("--base", o.base, "base point used to normalize the model, as JSON");
  sub->add_flag("--json", o.json, "machine-readable output");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Local p-adic heights on hyperelliptic curves"};
  app.require_subcommand(1);
  Options o;
  CLI::App* pre = app.add_subcommand("precompute", "compute and cache Frobenius and cup product data");
  CLI::App* height = app.add_subcommand("height", "local height h_p(D1, D2)");
  CLI::App* integ = app.add_subcommand("integrate", "Coleman integrals of x^i dx/y between two points");
  for (CLI::App* sub : {pre, height, integ}) add_common(sub, o);
  height->add_option("--d1", o.d1, "first divisor as JSON [[point, mult], ...]");
  height->add_option("--d2", o.d2, "second divisor as JSON");
  height->add_option("--points", o.points, "JSON [P, Q, R, S] for h(P - Q, R - S)");
  height->add_flag("--verify", o.verify, "cross-check against the full reduction (unit-root only)");
  integ->add_option("--from", o.from, "start point as JSON");
  integ->add_option("--to", o.to, "end point as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? exit_ok : exit_usage;
  }

  try {
    if (*pre) return run_precompute(o, *pre);
    if (*height) return run_height(o, *height);
    return run_integrate(o, *integ);
  } catch (const ph::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_domain;
  } catch (const ph::PrecisionError& e) {
    std::cerr << "error: " << e.what();
    if (e.required() > 0) std::cerr << " (needs working precision " << e.required() << ")";
    std::cerr << "\n";
    return exit_precision;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const fs::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_io;
  } catch (const Json::exception& e) {
    std::cerr << "error: malformed request: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_usage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_domain;
  }
}
