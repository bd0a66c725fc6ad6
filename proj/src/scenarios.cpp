#include "greendyn/scenarios.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <sstream>

#include "greendyn/errors.hpp"
#include "greendyn/indeterminacy.hpp"

namespace greendyn {

namespace {

FloatPoly fp(int nvars, int degree) { return FloatPoly(nvars, degree); }

void add(FloatPoly& p, int e0, int e1, Cplx c) {
  if (c == Cplx(0)) return;
  Exps ex;
  ex.e = {e0, e1, 0};
  p.add_term(ex, c);
}

void add3(FloatPoly& p, int e0, int e1, int e2, Cplx c) {
  if (c == Cplx(0)) return;
  Exps ex;
  ex.e = {e0, e1, e2};
  p.add_term(ex, c);
}

void add3e(ExactPoly& p, int e0, int e1, int e2, const GaussRational& c) {
  if (c.is_zero()) return;
  Exps ex;
  ex.e = {e0, e1, e2};
  p.add_term(ex, c);
}

// Exact rational with denominator <= 10^6 reproducing the double bit-exactly,
// via continued fractions; empty when the value is not such a rational.
std::optional<Rational> exactify_real(double v) {
  if (!std::isfinite(v)) return std::nullopt;
  double x = v;
  long long p0 = 1, q0 = 0, p1 = 0, q1 = 1;  // convergents of the CF expansion
  for (int it = 0; it < 40; ++it) {
    double fl = std::floor(x);
    if (std::abs(fl) > 1e15) break;
    long long a = static_cast<long long>(fl);
    long long p2 = a * p0 + p1, q2 = a * q0 + q1;
    if (q2 > 1'000'000 || q2 < 0) break;
    p1 = p0; q1 = q0; p0 = p2; q0 = q2;
    if (q0 != 0 && static_cast<double>(p0) / static_cast<double>(q0) == v)
      return Rational(p0, q0);
    double frac = x - fl;
    if (frac == 0) break;
    x = 1.0 / frac;
  }
  return std::nullopt;
}

std::optional<GaussRational> exactify(Cplx v) {
  auto re = exactify_real(v.real());
  auto im = exactify_real(v.imag());
  if (!re || !im) return std::nullopt;
  return GaussRational(*re, *im);
}

std::string fmt_cplx(Cplx v) {
  std::ostringstream os;
  os.precision(17);
  os << v.real();
  if (v.imag() != 0) os << (v.imag() > 0 ? "+" : "") << v.imag() << "i";
  return os.str();
}

std::mt19937_64 verification_rng() { return std::mt19937_64(0x5eedULL); }

ProjectivePoint random_point2(std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  return ProjectivePoint(Cplx(g(rng), g(rng)), Cplx(g(rng), g(rng)), Cplx(g(rng), g(rng)));
}

void require(bool ok, const char* what) {
  if (!ok) throw invalid_parameter(std::string("scenario verification failed: ") + what);
}

// Claimed and solved indeterminacy sets must agree as sets.
void verify_indet(const FloatMap& f, const std::vector<ProjectivePoint>& claimed, double tol) {
  auto solved = indeterminacy_points(f);
  require(solved.size() == claimed.size(), "indeterminacy point count");
  for (const auto& p : claimed) {
    double best = 1;
    for (const auto& q : solved) best = std::min(best, chordal_dist(p, q));
    require(best < tol, "claimed indeterminacy point not found by the solver");
  }
}

}  // namespace

Scenario build_quadratic(Cplx c) {
  Scenario s;
  s.name = "QUADRATIC";
  s.params = "c=" + fmt_cplx(c);
  s.lambda = 2;
  FloatMap f;
  f.dim = 1;
  f.label = "quadratic " + s.params;
  FloatPoly f0 = fp(2, 2), f1 = fp(2, 2);
  add(f0, 2, 0, Cplx(1));
  add(f1, 0, 2, Cplx(1));
  add(f1, 2, 0, c);
  f.comp = {f0, f1, FloatPoly()};
  f.validate();
  s.map = f;
  if (auto ec = exactify(c)) {
    ExactMap e;
    e.dim = 1;
    e.label = f.label;
    ExactPoly e0(2, 2), e1(2, 2);
    add3e(e0, 2, 0, 0, GaussRational{1});
    add3e(e1, 0, 2, 0, GaussRational{1});
    add3e(e1, 2, 0, 0, *ec);
    e.comp = {e0, e1, ExactPoly()};
    s.exact_map = e;
  }
  // The affine parabola never acquires indeterminacy: [1:0] maps to [1:c],
  // [0:1] to [0:1].
  require(!is_indeterminate(s.map, ProjectivePoint(Cplx(0), Cplx(1))), "infinity is regular");
  return s;
}

Scenario build_example21() {
  Scenario s;
  s.name = "EXAMPLE21";
  s.lambda = 2;  // algebraic degree; the map is not 1-stable
  ExactMap e;
  e.dim = 2;
  e.label = "example21";
  ExactPoly e0(3, 2), e1(3, 2), e2(3, 2);
  add3e(e0, 2, 0, 0, GaussRational{1});
  add3e(e1, 0, 1, 1, GaussRational{1});
  add3e(e2, 1, 1, 0, GaussRational{1});
  e.comp = {e0, e1, e2};
  e.validate();
  s.exact_map = e;
  s.map = to_float(e);
  s.known_indet = {ProjectivePoint(Cplx(0), Cplx(0), Cplx(1)),
                   ProjectivePoint(Cplx(0), Cplx(1), Cplx(0))};
  verify_indet(s.map, s.known_indet, 1e-10);
  return s;
}

Scenario build_weakly_regular(const std::vector<Cplx>& P, const std::vector<Cplx>& Q,
                              const std::vector<Cplx>& R) {
  int p = static_cast<int>(P.size()) - 1;
  int q = static_cast<int>(Q.size()) - 1;
  int lam = static_cast<int>(R.size()) - 1;
  if (p < 1 || q < 1 || lam < 1) throw invalid_parameter("weakly_regular: empty coefficients");
  if (P.back() == Cplx(0) || Q.back() == Cplx(0) || R.back() == Cplx(0))
    throw invalid_parameter("weakly_regular: zero leading coefficient");
  if (lam != p * q) throw invalid_parameter("weakly_regular: need deg R = deg P * deg Q");
  if (lam <= std::max(p, q)) throw invalid_parameter("weakly_regular: need deg R > max(deg P, deg Q)");
  Scenario s;
  s.name = "WEAKLY_REGULAR";
  {
    // Echo the full coefficient lists so the params string rebuilds the
    // instance through the registry.
    auto join = [](const std::vector<Cplx>& v) {
      std::string out;
      for (std::size_t k = 0; k < v.size(); ++k) out += (k ? ":" : "") + fmt_cplx(v[k]);
      return out;
    };
    s.params = "P=" + join(P) + ",Q=" + join(Q) + ",R=" + join(R);
  }
  s.lambda = lam;
  FloatMap f;
  f.dim = 2;
  f.label = "weakly_regular " + s.params;
  FloatPoly f0 = fp(3, lam), f1 = fp(3, lam), f2 = fp(3, lam);
  add3(f0, lam, 0, 0, Cplx(1));
  for (int k = 0; k <= p; ++k) add3(f1, lam - k, k, 0, P[k]);
  for (int k = 0; k <= q; ++k) add3(f2, lam - k, k, 0, Q[k]);
  for (int k = 0; k <= lam; ++k) add3(f2, lam - k, 0, k, R[k]);
  f.comp = {f0, f1, f2};
  f.validate();
  s.map = f;
  bool all_exact = true;
  ExactMap e;
  e.dim = 2;
  e.label = f.label;
  ExactPoly g0(3, lam), g1(3, lam), g2(3, lam);
  auto addx = [&](ExactPoly& g, int e0, int e1, int e2, Cplx c) {
    auto ec = exactify(c);
    if (!ec) {
      all_exact = false;
      return;
    }
    add3e(g, e0, e1, e2, *ec);
  };
  addx(g0, lam, 0, 0, Cplx(1));
  for (int k = 0; k <= p; ++k) addx(g1, lam - k, k, 0, P[k]);
  for (int k = 0; k <= q; ++k) addx(g2, lam - k, k, 0, Q[k]);
  for (int k = 0; k <= lam; ++k) addx(g2, lam - k, 0, k, R[k]);
  if (all_exact) {
    e.comp = {g0, g1, g2};
    s.exact_map = e;
  }
  // Line at infinity {z0=0} contracts to [0:0:1], which is fixed; the lone
  // indeterminacy point on that line is [0:1:0].
  ProjectivePoint inf_fix(Cplx(0), Cplx(0), Cplx(1));
  require(chordal_dist(map_eval(f, inf_fix), inf_fix) < 1e-12, "fixed point at infinity");
  s.known_indet = {ProjectivePoint(Cplx(0), Cplx(1), Cplx(0))};
  verify_indet(f, s.known_indet, 1e-8);
  return s;
}

namespace {

FloatMap fabc_map(Cplx a, Cplx b, Cplx c) {
  FloatMap f;
  f.dim = 2;
  FloatPoly f0 = fp(3, 2), f1 = fp(3, 2), f2 = fp(3, 2);
  // bc x (-cx + acy + z)
  add3(f0, 2, 0, 0, -b * c * c);
  add3(f0, 1, 1, 0, a * b * c * c);
  add3(f0, 1, 0, 1, b * c);
  // ac y (x - ay + abz)
  add3(f1, 1, 1, 0, a * c);
  add3(f1, 0, 2, 0, -a * a * c);
  add3(f1, 0, 1, 1, a * a * b * c);
  // ab z (bcx + y - bz)
  add3(f2, 1, 0, 1, a * b * b * c);
  add3(f2, 0, 1, 1, a * b);
  add3(f2, 0, 0, 2, -a * b * b);
  f.comp = {f0, f1, f2};
  f.validate();
  return f;
}

ExactMap fabc_map_exact(const GaussRational& a, const GaussRational& b, const GaussRational& c) {
  ExactMap f;
  f.dim = 2;
  ExactPoly f0(3, 2), f1(3, 2), f2(3, 2);
  add3e(f0, 2, 0, 0, -(b * c * c));
  add3e(f0, 1, 1, 0, a * b * c * c);
  add3e(f0, 1, 0, 1, b * c);
  add3e(f1, 1, 1, 0, a * c);
  add3e(f1, 0, 2, 0, -(a * a * c));
  add3e(f1, 0, 1, 1, a * a * b * c);
  add3e(f2, 1, 0, 1, a * b * b * c);
  add3e(f2, 0, 1, 1, a * b);
  add3e(f2, 0, 0, 2, -(a * b * b));
  f.comp = {f0, f1, f2};
  f.validate();
  return f;
}

void fabc_verify(Scenario& s, Cplx a, Cplx b, Cplx c) {
  const FloatMap& f = s.map;
  const FloatMap& g = *s.inverse;
  auto rng = verification_rng();
  // Composition acts as the identity away from the exceptional curves.
  for (int k = 0; k < 20; ++k) {
    ProjectivePoint x = random_point2(rng);
    ProjectivePoint y = map_eval(g, map_eval(f, x));
    require(chordal_dist(x, y) < 1e-8, "compose-to-identity");
  }
  // Invariant lines: zero coordinates stay exactly zero and the on-line
  // action matches the multiplier formulas.
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 20; ++k) {
    Cplx w(u(rng), u(rng));
    ProjectivePoint x0(Cplx(0), w, Cplx(1));
    ProjectivePoint y0 = map_eval(f, x0);
    require(y0.c[0] == Cplx(0), "line {x=0} invariant");
    require(std::abs(y0.c[1] / y0.c[2] - fabc_line_map(0, a, b, c, w)) < 1e-9, "line {x=0} action");
    ProjectivePoint x1(Cplx(1), Cplx(0), w);
    ProjectivePoint y1 = map_eval(f, x1);
    require(y1.c[1] == Cplx(0), "line {y=0} invariant");
    require(std::abs(y1.c[2] / y1.c[0] - fabc_line_map(1, a, b, c, w)) < 1e-9, "line {y=0} action");
    ProjectivePoint x2(w, Cplx(1), Cplx(0));
    ProjectivePoint y2 = map_eval(f, x2);
    require(y2.c[2] == Cplx(0), "line {z=0} invariant");
    require(std::abs(y2.c[0] / y2.c[1] - fabc_line_map(2, a, b, c, w)) < 1e-9, "line {z=0} action");
  }
  s.known_indet = {ProjectivePoint(a, Cplx(1), Cplx(0)), ProjectivePoint(Cplx(0), b, Cplx(1)),
                   ProjectivePoint(Cplx(1), Cplx(0), c)};
  s.known_inverse_indet = {ProjectivePoint(1.0 / a, Cplx(1), Cplx(0)),
                           ProjectivePoint(Cplx(0), 1.0 / b, Cplx(1)),
                           ProjectivePoint(Cplx(1), Cplx(0), 1.0 / c)};
  verify_indet(f, s.known_indet, 1e-10);
  verify_indet(g, s.known_inverse_indet, 1e-10);
}

}  // namespace

Scenario build_fabc(Cplx a, Cplx b, Cplx c) {
  if (a == Cplx(0) || b == Cplx(0) || c == Cplx(0))
    throw invalid_parameter("fabc: parameters must be nonzero");
  Scenario s;
  s.name = "FABC";
  s.params = "a=" + fmt_cplx(a) + ",b=" + fmt_cplx(b) + ",c=" + fmt_cplx(c);
  s.lambda = 2;
  s.map = fabc_map(a, b, c);
  s.map.label = "fabc " + s.params;
  s.inverse = fabc_map(1.0 / a, 1.0 / b, 1.0 / c);
  s.inverse->label = "fabc inverse " + s.params;
  fabc_verify(s, a, b, c);
  auto ea = exactify(a), eb = exactify(b), ec = exactify(c);
  if (ea && eb && ec) {
    s.exact_map = fabc_map_exact(*ea, *eb, *ec);
    s.exact_inverse =
        fabc_map_exact(GaussRational{1} / *ea, GaussRational{1} / *eb, GaussRational{1} / *ec);
  }
  return s;
}

Scenario build_fabc_exact(const GaussRational& a, const GaussRational& b, const GaussRational& c) {
  if (a.is_zero() || b.is_zero() || c.is_zero())
    throw invalid_parameter("fabc: parameters must be nonzero");
  Scenario s = build_fabc(a.to_complex(), b.to_complex(), c.to_complex());
  s.exact_map = fabc_map_exact(a, b, c);
  s.exact_inverse =
      fabc_map_exact(GaussRational{1} / a, GaussRational{1} / b, GaussRational{1} / c);
  return s;
}

Scenario build_fabc_rotation(double s_param, double theta) {
  if (s_param <= 0) throw invalid_parameter("fabc rotation: s must be positive");
  Cplx a(0, 1);
  Cplx b = -s_param * std::exp(Cplx(0, 2.0 * M_PI * theta));
  Cplx c = Cplx(0, 1) / s_param;
  Scenario s = build_fabc(a, b, c);
  s.name = "FABC_THM61";
  {
    std::ostringstream os;
    os.precision(17);
    os << "s=" << s_param << ",theta=" << theta;
    s.params = os.str();
  }
  return s;
}

Cplx fabc_line_map(int which, Cplx a, Cplx b, Cplx c, Cplx w) {
  switch (which) {
    case 0: return -(a * c / b) * w;  // [0:w:1] -> [0:-(ac/b)w:1]
    case 1: return -(a * b / c) * w;  // [1:0:w] -> [1:0:-(ab/c)w]
    case 2: return -(b * c / a) * w;  // [w:1:0] -> [-(bc/a)w:1:0]
    default: throw invalid_parameter("fabc_line_map: which must be 0, 1 or 2");
  }
}

double oracle_green(Cplx c, Cplx z) {
  if (c == Cplx(0)) {
    double a = std::abs(z);
    return a > 1 ? std::log(a) : 0.0;
  }
  if (c == Cplx(-2)) {
    // Conjugation to the squaring map: z = w + 1/w, potential log of the
    // larger root modulus.
    Cplx s = std::sqrt(z * z - Cplx(4));
    double m = std::max(std::abs((z + s) / 2.0), std::abs((z - s) / 2.0));
    return m > 1 ? std::log(m) : 0.0;
  }
  throw invalid_parameter("oracle_green: closed form known only for c = 0 and c = -2");
}

Cplx parse_complex(const std::string& in) {
  std::string s;
  for (char ch : in)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw invalid_parameter("parse_complex: empty value");
  // Split into real and imaginary pieces; the imaginary piece ends in 'i'.
  auto parse_num = [](const std::string& t) -> double {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw invalid_parameter("parse_complex: bad number '" + t + "'");
    return v;
  };
  if (s.back() == 'i' || s.back() == 'I') {
    std::string body = s.substr(0, s.size() - 1);
    // Find the split between a leading real part and the imaginary coefficient.
    for (size_t k = body.size(); k > 0; --k) {
      char ch = body[k - 1];
      if ((ch == '+' || ch == '-') && k > 1 && body[k - 2] != 'e' && body[k - 2] != 'E') {
        return Cplx(parse_num(body.substr(0, k - 1)), parse_num(body.substr(k - 1)));
      }
    }
    return Cplx(0.0, parse_num(body));
  }
  return Cplx(parse_num(s), 0.0);
}

namespace {

std::vector<Cplx> parse_coeff_list(const std::string& s) {
  std::vector<Cplx> out;
  std::string cur;
  for (char ch : s + ":") {
    if (ch == ':') {
      if (!cur.empty()) out.push_back(parse_complex(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  return out;
}

std::string get_param(const std::map<std::string, std::string>& params, const std::string& key,
                      const std::string& fallback) {
  auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

}  // namespace

Scenario build_scenario(const std::string& name, const std::map<std::string, std::string>& params) {
  if (name == "QUADRATIC") return build_quadratic(parse_complex(get_param(params, "c", "0")));
  if (name == "EXAMPLE21") return build_example21();
  if (name == "WEAKLY_REGULAR") {
    // Default instance: P = Q = t^2, R = t^4.
    auto P = parse_coeff_list(get_param(params, "P", "0:0:1"));
    auto Q = parse_coeff_list(get_param(params, "Q", "0:0:1"));
    auto R = parse_coeff_list(get_param(params, "R", "0:0:0:0:1"));
    return build_weakly_regular(P, Q, R);
  }
  if (name == "FABC") {
    return build_fabc(parse_complex(get_param(params, "a", "i")),
                      parse_complex(get_param(params, "b", "-2")),
                      parse_complex(get_param(params, "c", "0.5i")));
  }
  if (name == "FABC_THM61") {
    double s = std::stod(get_param(params, "s", "2"));
    std::string th = get_param(params, "theta", "golden");
    double theta = th == "golden"  ? (std::sqrt(5.0) - 1.0) / 2.0
                   : th == "sqrt2" ? std::sqrt(2.0) - 1.0
                                   : std::stod(th);
    Scenario sc = build_fabc_rotation(s, theta);
    sc.params += ",theta_source=" + th;
    return sc;
  }
  if (name == "TORUS")
    throw invalid_parameter("TORUS resolves to lattice data; use the torus-density subcommand");
  throw invalid_parameter("unknown scenario '" + name + "'");
}

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> out;
  std::string item;
  auto trim = [](std::string v) {
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.front()))) v.erase(v.begin());
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back()))) v.pop_back();
    return v;
  };
  for (char ch : s + ",") {
    if (ch != ',') {
      item += ch;
      continue;
    }
    item = trim(item);
    if (!item.empty()) {
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw invalid_parameter("parameter '" + item + "' is not of the form key=value");
      out[trim(item.substr(0, eq))] = trim(item.substr(eq + 1));
    }
    item.clear();
  }
  return out;
}

}  // namespace greendyn
