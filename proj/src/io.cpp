#include "greendyn/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "greendyn/errors.hpp"
#include "greendyn/scenarios.hpp"
#include "json.hpp"

namespace greendyn {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw invalid_parameter("cannot open for writing: " + path);
  os << content;
  if (!os) throw invalid_parameter("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw invalid_parameter("cannot open for reading: " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void write_csv(const std::string& path, const std::string& header,
               const std::vector<std::vector<std::string>>& rows) {
  std::string out = header + "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ",";
      out += row[i];
    }
    out += "\n";
  }
  write_text_file(path, out);
}

void write_heatmap_csv(const std::string& path, const GridSpec& spec,
                       const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(spec.nx) * spec.ny)
    throw invalid_parameter("heatmap: value count does not match the grid");
  std::vector<std::vector<std::string>> rows;
  rows.reserve(values.size());
  for (int iy = 0; iy < spec.ny; ++iy) {
    double y = spec.ny == 1 ? spec.y0 : spec.y0 + (spec.y1 - spec.y0) * iy / (spec.ny - 1);
    for (int ix = 0; ix < spec.nx; ++ix) {
      double x = spec.nx == 1 ? spec.x0 : spec.x0 + (spec.x1 - spec.x0) * ix / (spec.nx - 1);
      rows.push_back({format_double(x), format_double(y),
                      format_double(values[static_cast<std::size_t>(iy) * spec.nx + ix])});
    }
  }
  write_csv(path, "x,y,value", rows);
}

void write_heatmap_pgm(const std::string& path, const std::string& sidecar_path, int nx, int ny,
                       const std::vector<double>& values) {
  if (nx < 1 || ny < 1 || values.size() != static_cast<std::size_t>(nx) * ny)
    throw invalid_parameter("heatmap: value count does not match the grid");
  double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
  long long nan_count = 0;
  for (double v : values) {
    if (std::isfinite(v)) {
      vmin = std::min(vmin, v);
      vmax = std::max(vmax, v);
    } else {
      nan_count++;
    }
  }
  if (!(vmin <= vmax)) vmin = vmax = 0;
  std::string out = "P5\n" + std::to_string(nx) + " " + std::to_string(ny) + "\n65535\n";
  double span = vmax - vmin;
  for (double v : values) {
    unsigned pix = 0;
    if (std::isfinite(v)) pix = span > 0 ? static_cast<unsigned>(std::lround((v - vmin) / span * 65535.0)) : 0;
    out += static_cast<char>((pix >> 8) & 0xff);
    out += static_cast<char>(pix & 0xff);
  }
  write_text_file(path, out);
  write_text_file(sidecar_path, "min " + format_double(vmin) + "\nmax " + format_double(vmax) +
                                    "\nnan_count " + std::to_string(nan_count) + "\n");
}

void write_orbit_csv(const std::string& path, const OrbitTable& table) {
  int dim = table.source.empty() ? 2 : table.source[0].dim;
  std::string header = "n,label";
  for (int i = 0; i <= dim; ++i) {
    header += ",coord" + std::to_string(i) + "_re";
    header += ",coord" + std::to_string(i) + "_im";
  }
  header += ",dist_to_Ifinv,gamma_minus,flag";
  std::vector<std::vector<std::string>> rows;
  for (std::size_t s = 0; s < table.rows.size(); ++s) {
    for (const auto& r : table.rows[s]) {
      std::vector<std::string> row{std::to_string(r.n), "p" + std::to_string(s)};
      for (int i = 0; i <= dim; ++i) {
        row.push_back(format_double(r.p.c[i].real()));
        row.push_back(format_double(r.p.c[i].imag()));
      }
      row.push_back(format_double(r.dist_to_target));
      row.push_back(format_double(r.gamma_minus));
      row.push_back(r.terminal ? "terminal" : "");
      rows.push_back(std::move(row));
    }
  }
  write_csv(path, header, rows);
}

void write_recurrence_csv(const std::string& path, const RecurrenceSum& sum) {
  std::vector<std::vector<std::string>> rows;
  for (std::size_t n = 0; n < sum.terms.size(); ++n)
    rows.push_back(
        {std::to_string(n), format_double(sum.terms[n]), format_double(sum.partials[n])});
  write_csv(path, "n,term,partial", rows);
}

void write_pairs_csv(const std::string& path, const PairSampleSet& set) {
  std::vector<std::vector<std::string>> rows;
  rows.reserve(set.entries.size());
  for (const auto& e : set.entries)
    rows.push_back({format_double(e.x.real()), format_double(e.x.imag()),
                    format_double(e.y.real()), format_double(e.y.imag()), format_double(e.d),
                    format_double(e.delta_g)});
  write_csv(path, "x_re,x_im,y_re,y_im,d,delta_g", rows);
}

namespace {

// Exact rationals serialize as [numerator, denominator]; plain JSON integers
// when they fit, decimal strings beyond 64 bits.
json rational_to_json(const Rational& r) {
  json out = json::array();
  for (const BigInt& v : {numerator(r), denominator(r)}) {
    if (v >= std::numeric_limits<long long>::min() && v <= std::numeric_limits<long long>::max())
      out.push_back(v.convert_to<long long>());
    else
      out.push_back(v.str());
  }
  return out;
}

BigInt bigint_from_json(const json& j) {
  if (j.is_number_integer()) return BigInt(j.get<long long>());
  if (j.is_string()) return BigInt(j.get<std::string>());
  throw invalid_parameter("map file: expected an integer or a decimal string");
}

Rational rational_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2)
    throw invalid_parameter("map file: exact coefficient must be a [num, den] pair");
  BigInt num = bigint_from_json(j[0]), den = bigint_from_json(j[1]);
  if (den == 0) throw invalid_parameter("map file: zero denominator");
  return Rational(num, den);
}

json exps_to_json(const Exps& ex, int nvars) {
  json out = json::array();
  for (int i = 0; i < nvars; ++i) out.push_back(ex.e[i]);
  return out;
}

json components_to_json(const ExactMap& m) {
  json comps = json::array();
  for (int i = 0; i <= m.dim; ++i) {
    json terms = json::array();
    for (const auto& [ex, c] : m.comp[i].terms)
      terms.push_back({{"exps", exps_to_json(ex, m.dim + 1)},
                       {"re", rational_to_json(c.re)},
                       {"im", rational_to_json(c.im)}});
    comps.push_back(std::move(terms));
  }
  return comps;
}

json components_to_json(const FloatMap& m) {
  json comps = json::array();
  for (int i = 0; i <= m.dim; ++i) {
    json terms = json::array();
    for (const auto& [ex, c] : m.comp[i].terms)
      terms.push_back(
          {{"exps", exps_to_json(ex, m.dim + 1)}, {"re", c.real()}, {"im", c.imag()}});
    comps.push_back(std::move(terms));
  }
  return comps;
}

Exps exps_from_json(const json& j, int nvars) {
  if (!j.is_array() || static_cast<int>(j.size()) != nvars)
    throw invalid_parameter("map file: exponent vector has the wrong length");
  Exps ex;
  for (int i = 0; i < nvars; ++i) ex.e[i] = j[i].get<int>();
  return ex;
}

template <class MapT, class CoeffFn>
MapT components_from_json(const json& comps, int dim, CoeffFn coeff) {
  if (!comps.is_array() || static_cast<int>(comps.size()) != dim + 1)
    throw invalid_parameter("map file: need dim + 1 component polynomials");
  MapT m;
  m.dim = dim;
  for (int i = 0; i <= dim; ++i) {
    const json& terms = comps[i];
    if (!terms.is_array() || terms.empty())
      throw invalid_parameter("map file: empty component polynomial");
    int deg = 0;
    for (const auto& t : terms) {
      Exps ex = exps_from_json(t.at("exps"), dim + 1);
      deg = std::max(deg, ex.total());
    }
    m.comp[i] = typename std::decay_t<decltype(m.comp[i])>(dim + 1, deg);
    for (const auto& t : terms)
      m.comp[i].add_term(exps_from_json(t.at("exps"), dim + 1), coeff(t));
  }
  m.validate();
  return m;
}

FloatMap float_map_from_json(const json& comps, int dim) {
  return components_from_json<FloatMap>(comps, dim, [](const json& t) {
    return Cplx(t.at("re").get<double>(), t.at("im").get<double>());
  });
}

ExactMap exact_map_from_json(const json& comps, int dim) {
  return components_from_json<ExactMap>(comps, dim, [](const json& t) {
    return GaussRational(rational_from_json(t.at("re")), rational_from_json(t.at("im")));
  });
}

}  // namespace

std::string map_to_json(const MapFile& m) {
  json j;
  j["dim"] = m.exact ? m.emap.dim : m.fmap.dim;
  j["degree"] = m.exact ? m.emap.degree() : m.fmap.degree();
  j["exact"] = m.exact;
  j["scenario"] = m.scenario;
  j["params"] = m.params;
  j["components"] = m.exact ? components_to_json(m.emap) : components_to_json(m.fmap);
  if (m.has_inverse)
    j["inverse"] = m.exact ? components_to_json(m.einv) : components_to_json(m.finv);
  return j.dump(2) + "\n";
}

MapFile map_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw invalid_parameter(std::string("map file: ") + e.what());
  }
  try {
    MapFile m;
    m.scenario = j.value("scenario", std::string());
    m.params = j.value("params", std::string());
    if (!m.scenario.empty() && !j.contains("components")) {
      // Delegating file: resolve through the registry.
      Scenario s = build_scenario(m.scenario, parse_params(m.params));
      m.params = s.params;
      m.exact = s.exact_map.has_value();
      m.fmap = s.map;
      if (m.exact) m.emap = *s.exact_map;
      m.has_inverse = s.inverse.has_value();
      if (s.inverse) m.finv = *s.inverse;
      if (s.exact_inverse) m.einv = *s.exact_inverse;
      return m;
    }
    int dim = j.at("dim").get<int>();
    if (dim != 1 && dim != 2) throw invalid_parameter("map file: dim must be 1 or 2");
    m.exact = j.value("exact", false);
    if (m.exact) {
      m.emap = exact_map_from_json(j.at("components"), dim);
      m.fmap = to_float(m.emap);
    } else {
      m.fmap = float_map_from_json(j.at("components"), dim);
    }
    if (j.contains("degree") && j.at("degree").get<int>() != m.fmap.degree())
      throw invalid_parameter("map file: recorded degree does not match the components");
    if (j.contains("inverse")) {
      m.has_inverse = true;
      if (m.exact) {
        m.einv = exact_map_from_json(j.at("inverse"), dim);
        m.finv = to_float(m.einv);
      } else {
        m.finv = float_map_from_json(j.at("inverse"), dim);
      }
    }
    return m;
  } catch (const json::exception& e) {
    throw invalid_parameter(std::string("map file: ") + e.what());
  }
}

}  // namespace greendyn
