#include "greendyn/greens.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "greendyn/errors.hpp"

namespace greendyn {

namespace {

// Norm of the image on the unit lift, or -1 when every component falls below
// its own tol * l1 scale there (the indeterminacy test used throughout).
double image_norm(const FloatMap& f, const ProjectivePoint& x, double tol) {
  std::array<Cplx, 3> u = x.unit_lift();
  double n2 = 0;
  bool all_small = true;
  for (int i = 0; i <= f.dim; ++i) {
    Cplx v = poly_eval(f.comp[i], u);
    double scale = f.comp[i].l1_norm();
    if (std::abs(v) > tol * (scale > 0 ? scale : 1.0)) all_small = false;
    n2 += std::norm(v);
  }
  if (all_small) return -1.0;
  return std::sqrt(n2);
}

double min_chordal(const ProjectivePoint& x, const std::vector<ProjectivePoint>& set) {
  double best = 1.0;
  for (const auto& p : set) best = std::min(best, chordal_dist(x, p));
  return best;
}

}  // namespace

double gamma_cocycle(const FloatMap& f, const ProjectivePoint& x, double tol) {
  f.validate();
  if (x.dim != f.dim) throw dimension_mismatch("gamma_cocycle: point/map dimension");
  double r = image_norm(f, x, tol);
  if (r < 0) throw indeterminate_point("gamma_cocycle: point is indeterminate");
  return std::log(r) / static_cast<double>(f.degree());
}

std::vector<ProjectivePoint> chart_samples(int dim, int res) {
  if (dim != 1 && dim != 2) throw invalid_parameter("chart_samples: dim must be 1 or 2");
  if (res < 2) throw invalid_parameter("chart_samples: resolution must be >= 2");
  std::vector<ProjectivePoint> out;
  if (dim == 1) {
    out.reserve(2 * res * res + 2);
    for (int chart = 0; chart < 2; ++chart) {
      out.push_back(chart_point(1, chart, Cplx(0)));
      for (int i = 0; i < res; ++i) {
        for (int j = 0; j < res; ++j) {
          double re = -1.0 + 2.0 * i / (res - 1);
          double im = -1.0 + 2.0 * j / (res - 1);
          out.push_back(chart_point(1, chart, Cplx(re, im)));
        }
      }
    }
  } else {
    // Kronecker sequence in [0,1)^4 per chart; prefix-nested as res grows.
    static const double a1 = 0.8191725133961645;   // 2^(1/5)-1 style irrationals
    static const double a2 = 0.5874010519681994;
    static const double a3 = 0.3205979324534581;
    static const double a4 = 0.1486983549970350;
    out.reserve(3 * res * res + 3);
    for (int chart = 0; chart < 3; ++chart) {
      out.push_back(chart_point(2, chart, Cplx(0), Cplx(0)));
      for (int s = 0; s < res * res; ++s) {
        double t1 = std::fmod(0.5 + (s + 1) * a1, 1.0);
        double t2 = std::fmod(0.5 + (s + 1) * a2, 1.0);
        double t3 = std::fmod(0.5 + (s + 1) * a3, 1.0);
        double t4 = std::fmod(0.5 + (s + 1) * a4, 1.0);
        Cplx z(-1.0 + 2.0 * t1, -1.0 + 2.0 * t2);
        Cplx w(-1.0 + 2.0 * t3, -1.0 + 2.0 * t4);
        out.push_back(chart_point(2, chart, z, w));
      }
    }
  }
  return out;
}

double sup_gamma(const FloatMap& f, int grid_resolution) {
  f.validate();
  auto pts = chart_samples(f.dim, grid_resolution);
  double best = -std::numeric_limits<double>::infinity();
  double lip = 0;  // largest |gamma(p) - gamma(q)| / dist over consecutive samples
  ProjectivePoint prev;
  bool have_prev = false;
  double prev_g = 0;
  for (const auto& p : pts) {
    double g;
    try {
      g = gamma_cocycle(f, p);
    } catch (const indeterminate_point&) {
      have_prev = false;
      continue;
    }
    best = std::max(best, g);
    if (have_prev) {
      double d = chordal_dist(p, prev);
      if (d > 1e-9) lip = std::max(lip, std::abs(g - prev_g) / d);
    }
    prev = p;
    prev_g = g;
    have_prev = true;
  }
  if (!std::isfinite(best)) throw invalid_parameter("sup_gamma: no sample point was evaluable");
  // Cushion: grid spacing times the observed Lipschitz scale.
  double h = 2.0 / (grid_resolution - 1);
  return best + 0.05 * lip * h;
}

GreenResult green_partial(const FloatMap& f, const ProjectivePoint& x, const GreenOptions& opt) {
  f.validate();
  if (x.dim != f.dim) throw dimension_mismatch("green_partial: point/map dimension");
  if (opt.n < 0) throw invalid_parameter("green_partial: negative depth");
  const double lambda = static_cast<double>(f.degree());
  if (lambda < 1) throw invalid_parameter("green_partial: degree must be >= 1");
  GreenResult out;
  ProjectivePoint cur = x;
  double w = 1.0;  // lambda^{-j}
  for (int j = 0; j < opt.n; ++j) {
    double r = image_norm(f, cur, opt.tol);
    if (r < 0) throw orbit_hits_indeterminacy(j);
    double term = w * (std::log(r) / lambda - opt.shift);
    out.value += term;
    out.last_term = term;
    out.steps = j + 1;
    w /= lambda;
    cur = map_eval(f, cur, opt.tol);
  }
  return out;
}

GreenSeries green_series(const FloatMap& f, const ProjectivePoint& x, int n, double shift,
                         const std::vector<ProjectivePoint>& indet, double tol) {
  f.validate();
  if (x.dim != f.dim) throw dimension_mismatch("green_series: point/map dimension");
  if (n < 0) throw invalid_parameter("green_series: negative depth");
  const double lambda = static_cast<double>(f.degree());
  if (lambda < 1) throw invalid_parameter("green_series: degree must be >= 1");
  GreenSeries s;
  s.point = x;
  s.n = n;
  s.lambda = lambda;
  s.shift = shift;
  s.partials.push_back(0.0);  // g_0
  ProjectivePoint cur = x;
  double w = 1.0;
  double acc = 0.0;
  for (int j = 0; j < n; ++j) {
    double r = image_norm(f, cur, tol);
    OrbitLogRow row;
    row.x = cur;
    row.dist_indet = indet.empty() ? 1.0 : min_chordal(cur, indet);
    if (r < 0) {
      // keep a row for the offending point so the caller can see the hit
      row.gamma_shifted = std::numeric_limits<double>::quiet_NaN();
      s.orbit.push_back(row);
      s.truncated = true;
      s.truncated_at = j;
      break;
    }
    row.gamma_shifted = std::log(r) / lambda - shift;
    s.orbit.push_back(row);
    acc += w * row.gamma_shifted;
    s.partials.push_back(acc);
    w /= lambda;
    cur = map_eval(f, cur, tol);
  }
  return s;
}

double green_tail_bound(const GreenSeries& s, double C, double Cprime) {
  if (s.orbit.empty()) throw missing_calibration("green_tail_bound: series has no orbit rows");
  if (s.lambda <= 1) throw invalid_parameter("green_tail_bound: needs lambda > 1");
  double M = 0;
  for (const auto& row : s.orbit) {
    double d = std::max(row.dist_indet, 1e-300);
    M = std::max(M, std::abs(C * std::log(d) + Cprime));
  }
  int m = static_cast<int>(s.partials.size()) - 1;  // realized depth
  return M * std::pow(s.lambda, -m) / (1.0 - 1.0 / s.lambda);
}

double affine_green(Cplx c, Cplx z, int max_iter) {
  double scale = 1.0;  // 2^{-j}
  Cplx w = z;
  for (int j = 0; j < max_iter; ++j) {
    double a = std::abs(w);
    if (a > 1e10) {
      // Beyond this radius log|w_{j+1}| = 2 log|w_j| + log|1 + c/w_j^2| and the
      // correction series is bounded by 2^{-j} |c| 1e-20: below double rounding.
      return scale * std::log(a);
    }
    w = w * w + c;
    scale *= 0.5;
  }
  double a = std::abs(w);
  return a > 1.0 ? scale * std::log(a) : 0.0;
}

ProjectivePoint chart_point(int dim, int chart, Cplx z, Cplx slice) {
  if (dim == 1) {
    if (chart == 0) return ProjectivePoint(Cplx(1), z);
    if (chart == 1) return ProjectivePoint(z, Cplx(1));
    throw invalid_parameter("chart_point: chart out of range for P^1");
  }
  if (dim == 2) {
    if (chart < 0 || chart > 2) throw invalid_parameter("chart_point: chart out of range for P^2");
    int moving = chart == 0 ? 1 : 0;
    std::array<Cplx, 3> c;
    for (int i = 0; i < 3; ++i) {
      if (i == chart)
        c[i] = Cplx(1);
      else if (i == moving)
        c[i] = z;
      else
        c[i] = slice;
    }
    return ProjectivePoint(c[0], c[1], c[2]);
  }
  throw invalid_parameter("chart_point: dim must be 1 or 2");
}

std::vector<double> green_grid(const FloatMap& f, const GridSpec& spec, const GreenOptions& opt,
                               int threads) {
  f.validate();
  if (spec.nx < 1 || spec.ny < 1) throw invalid_parameter("green_grid: empty grid");
  if (threads < 1) threads = 1;
  std::vector<double> out(static_cast<size_t>(spec.nx) * spec.ny,
                          std::numeric_limits<double>::quiet_NaN());
  auto run_rows = [&](int first) {
    for (int iy = first; iy < spec.ny; iy += threads) {
      double y = spec.ny == 1 ? spec.y0 : spec.y0 + (spec.y1 - spec.y0) * iy / (spec.ny - 1);
      for (int ix = 0; ix < spec.nx; ++ix) {
        double x = spec.nx == 1 ? spec.x0 : spec.x0 + (spec.x1 - spec.x0) * ix / (spec.nx - 1);
        try {
          ProjectivePoint p = chart_point(f.dim, spec.chart, Cplx(x, y), spec.slice);
          out[static_cast<size_t>(iy) * spec.nx + ix] = green_partial(f, p, opt).value;
        } catch (const orbit_hits_indeterminacy&) {
        } catch (const indeterminate_point&) {
        } catch (const invalid_parameter&) {
        }
      }
    }
  };
  if (threads == 1) {
    run_rows(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(run_rows, t);
    for (auto& th : pool) th.join();
  }
  return out;
}

}  // namespace greendyn
