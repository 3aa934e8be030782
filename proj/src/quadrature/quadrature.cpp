#include "quadrature/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "core/constants.hpp"
#include "core/errors.hpp"
#include "core/parallel.hpp"

namespace fluxtorque::quadrature {

namespace {

namespace cn = fluxtorque::constants;
using Eigen::ArrayXd;

// Gauss-Kronrod 7-15 abscissae/weights on [-1, 1].
constexpr double kXgk[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                            0.741531185599394, 0.586087235467691, 0.405845151377397,
                            0.207784955007898, 0.0};
constexpr double kWgk[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                            0.140653259715525, 0.169004726639267, 0.190350578064785,
                            0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                           0.417959183673469};

struct PointEval {
  ArrayXd value;  // integrand (already including the substitution Jacobian)
  ArrayXd perr;   // propagated inner-stage error, if any
  ArrayXd mag;    // |integrand| scale
};

using PointFn = std::function<PointEval(double)>;

struct Panel {
  double a, b;
  ArrayXd value, error, l1;
  double score = 0.0;
};

Panel eval_panel_gk(const PointFn& f, double a, double b, int ncomp) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  ArrayXd resk = ArrayXd::Zero(ncomp), resg = ArrayXd::Zero(ncomp);
  ArrayXd perr = ArrayXd::Zero(ncomp), mag = ArrayXd::Zero(ncomp);
  for (int i = 0; i < 8; ++i) {
    const double x = kXgk[i];
    const int reps = (x == 0.0) ? 1 : 2;
    for (int s = 0; s < reps; ++s) {
      const double sign = (s == 0) ? 1.0 : -1.0;
      PointEval p = f(c + sign * h * x);
      resk += kWgk[i] * h * p.value;
      perr += kWgk[i] * h * p.perr;
      mag += kWgk[i] * h * p.mag;
      if (i % 2 == 1) resg += kWg[i / 2] * h * p.value;
      if (i == 7) resg += kWg[3] * h * p.value;
    }
  }
  Panel panel;
  panel.a = a;
  panel.b = b;
  panel.value = resk;
  panel.error = (resk - resg).abs() + perr;
  panel.l1 = mag;
  return panel;
}

// Shared adaptive driver over a set of initial segments. Refinement picks the
// panel with the worst relative score (ties resolved leftmost) so the panel
// set is deterministic. The per-component convergence reference is
// max(|I_c|, 1e-9 * L1_c): components that vanish by symmetry have
// |I_c| << L1_c and are not chased below the cancellation floor.
struct AdaptiveResult {
  ArrayXd value, error, l1;
  bool converged = true;
  long panels = 0;
};

AdaptiveResult adapt(const PointFn& f, std::vector<std::pair<double, double>> segments,
                     int ncomp, const QuadConfig& cfg) {
  std::vector<Panel> panels;
  for (auto [a, b] : segments) panels.push_back(eval_panel_gk(f, a, b, ncomp));

  auto totals = [&]() {
    AdaptiveResult r;
    r.value = ArrayXd::Zero(ncomp);
    r.error = ArrayXd::Zero(ncomp);
    r.l1 = ArrayXd::Zero(ncomp);
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
    for (std::size_t i : order) {
      r.value += panels[i].value;
      r.error += panels[i].error;
      r.l1 += panels[i].l1;
    }
    r.panels = static_cast<long>(panels.size());
    return r;
  };

  for (;;) {
    AdaptiveResult t = totals();
    ArrayXd ref = t.value.abs().max(1e-9 * t.l1).max(cfg.abs_tol / std::max(cfg.rel_tol, 1e-300));
    double worst = 0.0;
    for (int c = 0; c < ncomp; ++c) {
      double denom = std::max(ref[c], 1e-300);
      worst = std::max(worst, t.error[c] / denom);
    }
    if (worst <= cfg.rel_tol) {
      t.converged = true;
      return t;
    }
    if (static_cast<int>(panels.size()) >= cfg.max_subdivisions) {
      t.converged = false;
      return t;
    }
    // panel with the largest componentwise relative error, leftmost on ties
    std::size_t pick = 0;
    double pick_score = -1.0;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      double s = 0.0;
      for (int c = 0; c < ncomp; ++c) {
        s = std::max(s, panels[i].error[c] / std::max(ref[c], 1e-300));
      }
      if (s > pick_score + 1e-15 ||
          (std::abs(s - pick_score) <= 1e-15 && panels[i].a < panels[pick].a)) {
        pick_score = s;
        pick = i;
      }
    }
    Panel old = panels[pick];
    double mid = 0.5 * (old.a + old.b);
    panels[pick] = eval_panel_gk(f, old.a, mid, ncomp);
    panels.push_back(eval_panel_gk(f, mid, old.b, ncomp));
  }
}

// Periodic trapezoid over phi with Richardson doubling; nodes nest so each
// doubling reuses previous evaluations. Optionally restricted to one
// half-plane by zeroing the other half's nodes (the node set is identical,
// so red/blue partial integrals sum exactly to the full integral).
struct PhiStage {
  int ncomp;
  const ModeIntegrandFn* f;
  double omega, d;
  int base_order;
  long* evaluations;

  // half: 0 = full, 1 = phi in [0,pi), 2 = phi in [pi,2pi)
  PointEval integrate_phi(double k_par, int half) const {
    std::map<double, ArrayXd> cache;
    auto eval = [&](double phi) -> const ArrayXd& {
      auto it = cache.find(phi);
      if (it != cache.end()) return it->second;
      fresnel::ModeCoords mode = fresnel::mode_coords(omega, k_par, phi);
      ArrayXd out = ArrayXd::Zero(ncomp);
      (*f)(mode, out.data());
      ++(*evaluations);
      return cache.emplace(phi, std::move(out)).first->second;
    };
    auto rule = [&](int n, ArrayXd& val, ArrayXd& mag) {
      val = ArrayXd::Zero(ncomp);
      mag = ArrayXd::Zero(ncomp);
      const double w = 2.0 * cn::pi / n;
      for (int j = 0; j < n; ++j) {
        double phi = 2.0 * cn::pi * j / n;
        bool in_half = (half == 0) || (half == 1 && phi < cn::pi) ||
                       (half == 2 && phi >= cn::pi);
        if (!in_half) continue;
        const ArrayXd& v = eval(phi);
        val += w * v;
        mag += w * v.abs();
      }
    };
    int n = std::max(4, base_order);
    ArrayXd v1, m1, v2, m2;
    rule(n, v1, m1);
    rule(2 * n, v2, m2);
    ArrayXd err = (v2 - v1).abs();
    // one more doubling if the first estimate looks unconverged
    double scale = std::max(m2.maxCoeff(), 1e-300);
    if ((err > 1e-9 * scale).any() && 4 * n <= 1024) {
      v1 = v2;
      rule(4 * n, v2, m2);
      err = (v2 - v1).abs();
    }
    PointEval p;
    p.value = v2;
    p.perr = err;
    p.mag = m2;
    return p;
  }
};

KPhiResult run_kphi(int ncomp, const ModeIntegrandFn& f, double omega, double d,
                    const QuadConfig& cfg, int half) {
  cfg.validate();
  if (!(omega > 0) || !(d > 0)) throw ConfigError("integrate_kphi: omega and d must be > 0");
  const double k0 = omega / cn::c0;
  const double k_max = std::max(cfg.k_par_max_factor / d, 3.0 * k0);
  long evals = 0;
  PhiStage stage{ncomp, &f, omega, d, cfg.phi_order, &evals};

  // propagating side: k = k0 sin(theta)
  PointFn prop = [&](double theta) {
    double k = k0 * std::sin(theta);
    double jac = k0 * std::cos(theta);
    PointEval p = stage.integrate_phi(k, half);
    p.value *= jac;
    p.perr *= jac;
    p.mag *= jac;
    return p;
  };
  // evanescent side: k = k0 cosh(u)
  PointFn evan = [&](double u) {
    double k = k0 * std::cosh(u);
    double jac = k0 * std::sinh(u);
    PointEval p = stage.integrate_phi(k, half);
    p.value *= jac;
    p.perr *= jac;
    p.mag *= jac;
    return p;
  };

  const double u_max = std::acosh(k_max / k0);
  std::vector<std::pair<double, double>> prop_segs = {{0.0, 0.25 * cn::pi}, {0.25 * cn::pi, 0.5 * cn::pi}};
  // seed the evanescent range at the near-field scales 1/(4d)...k_max
  std::vector<double> u_knots{0.0};
  for (double kd : {0.25, 0.5, 1.0, 2.0, 4.0, 10.0, 20.0}) {
    double k = kd / d;
    if (k > 1.0001 * k0 && k < 0.999 * k_max) u_knots.push_back(std::acosh(k / k0));
  }
  u_knots.push_back(u_max);
  std::sort(u_knots.begin(), u_knots.end());
  std::vector<std::pair<double, double>> evan_segs;
  for (std::size_t i = 0; i + 1 < u_knots.size(); ++i) {
    if (u_knots[i + 1] > u_knots[i] + 1e-12) evan_segs.emplace_back(u_knots[i], u_knots[i + 1]);
  }

  AdaptiveResult rp = adapt(prop, prop_segs, ncomp, cfg);
  AdaptiveResult re = adapt(evan, evan_segs, ncomp, cfg);

  KPhiResult out;
  out.value = rp.value + re.value;
  out.error = rp.error + re.error;
  out.l1 = rp.l1 + re.l1;
  out.evaluations = evals;
  out.converged = rp.converged && re.converged;
  return out;
}

}  // namespace

void QuadConfig::validate() const {
  if (!(rel_tol > 0)) throw ConfigError("QuadConfig.rel_tol must be > 0");
  if (!(abs_tol >= 0)) throw ConfigError("QuadConfig.abs_tol must be >= 0");
  if (!(k_par_max_factor >= 10)) throw ConfigError("QuadConfig.k_par_max_factor must be >= 10");
  if (!(max_subdivisions > 4)) throw ConfigError("QuadConfig.max_subdivisions must be > 4");
  if (!(phi_order >= 16)) throw ConfigError("QuadConfig.phi_order must be >= 16");
}

KPhiResult integrate_kphi(int ncomp, const ModeIntegrandFn& f, double omega, double d,
                          const QuadConfig& cfg) {
  return run_kphi(ncomp, f, omega, d, cfg, 0);
}

std::pair<KPhiResult, KPhiResult> integrate_kphi_split(int ncomp, const ModeIntegrandFn& f,
                                                       double omega, double d,
                                                       const QuadConfig& cfg) {
  return {run_kphi(ncomp, f, omega, d, cfg, 1), run_kphi(ncomp, f, omega, d, cfg, 2)};
}

OmegaResult integrate_omega(int ncomp, const std::function<Eigen::ArrayXd(double)>& density,
                            double w_min, double w_max, std::vector<double> seeds,
                            const QuadConfig& cfg, int n_jobs, double tail_decay_scale) {
  cfg.validate();
  if (!(w_max > w_min) || !(w_min > 0)) {
    throw ConfigError("integrate_omega: need 0 < w_min < w_max");
  }
  // Panel nodes are batched and evaluated in parallel; cache by abscissa.
  std::map<double, ArrayXd> cache;
  std::mutex cache_mutex;
  long evals = 0;
  auto prefetch = [&](const std::vector<double>& xs) {
    std::vector<double> todo;
    for (double x : xs) {
      if (cache.find(x) == cache.end()) todo.push_back(x);
    }
    std::vector<ArrayXd> results(todo.size());
    parallel_for(todo.size(), n_jobs, [&](std::size_t i) {
      ArrayXd v = density(todo[i]);
      std::lock_guard<std::mutex> lock(cache_mutex);
      results[i] = std::move(v);
    });
    for (std::size_t i = 0; i < todo.size(); ++i) cache.emplace(todo[i], std::move(results[i]));
    evals += static_cast<long>(todo.size());
  };
  auto nodes_of = [&](double a, double b) {
    std::vector<double> xs;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    for (int i = 0; i < 8; ++i) {
      xs.push_back(c + h * kXgk[i]);
      if (kXgk[i] != 0.0) xs.push_back(c - h * kXgk[i]);
    }
    return xs;
  };
  auto eval_panel = [&](double a, double b) {
    Panel p;
    p.a = a;
    p.b = b;
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    ArrayXd resk = ArrayXd::Zero(ncomp), resg = ArrayXd::Zero(ncomp), mag = ArrayXd::Zero(ncomp);
    for (int i = 0; i < 8; ++i) {
      for (int s = 0; s < ((kXgk[i] == 0.0) ? 1 : 2); ++s) {
        double sign = (s == 0) ? 1.0 : -1.0;
        const ArrayXd& v = cache.at(c + sign * h * kXgk[i]);
        resk += kWgk[i] * h * v;
        mag += kWgk[i] * h * v.abs();
        if (i % 2 == 1) resg += kWg[i / 2] * h * v;
        if (i == 7) resg += kWg[3] * h * v;
      }
    }
    p.value = resk;
    p.error = (resk - resg).abs();
    p.l1 = mag;
    return p;
  };

  // initial segmentation at the seed frequencies
  std::vector<double> knots{w_min, w_max};
  for (double s : seeds) {
    if (s > w_min * (1 + 1e-12) && s < w_max * (1 - 1e-12)) knots.push_back(s);
  }
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-9 * b; }),
              knots.end());

  std::vector<std::pair<double, double>> pending;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) pending.emplace_back(knots[i], knots[i + 1]);

  std::vector<Panel> panels;
  auto flush_pending = [&]() {
    std::vector<double> xs;
    for (auto [a, b] : pending) {
      auto ns = nodes_of(a, b);
      xs.insert(xs.end(), ns.begin(), ns.end());
    }
    prefetch(xs);
    for (auto [a, b] : pending) panels.push_back(eval_panel(a, b));
    pending.clear();
  };
  flush_pending();

  ArrayXd value, error, l1;
  auto totals = [&]() {
    value = ArrayXd::Zero(ncomp);
    error = ArrayXd::Zero(ncomp);
    l1 = ArrayXd::Zero(ncomp);
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t i, std::size_t j) { return panels[i].a < panels[j].a; });
    for (std::size_t i : order) {
      value += panels[i].value;
      error += panels[i].error;
      l1 += panels[i].l1;
    }
  };

  bool converged = true;
  for (;;) {
    totals();
    ArrayXd ref = value.abs().max(1e-9 * l1).max(cfg.abs_tol / std::max(cfg.rel_tol, 1e-300));
    double worst = 0.0;
    for (int c = 0; c < ncomp; ++c) worst = std::max(worst, error[c] / std::max(ref[c], 1e-300));
    if (worst <= cfg.rel_tol) break;
    if (static_cast<int>(panels.size()) >= cfg.max_subdivisions) {
      converged = false;
      break;
    }
    // split the worst few panels per round to use the worker pool
    std::vector<std::size_t> order(panels.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
      double si = 0.0, sj = 0.0;
      for (int c = 0; c < ncomp; ++c) {
        si = std::max(si, panels[i].error[c] / std::max(ref[c], 1e-300));
        sj = std::max(sj, panels[j].error[c] / std::max(ref[c], 1e-300));
      }
      if (si != sj) return si > sj;
      return panels[i].a < panels[j].a;
    });
    int n_split = std::min<int>(std::max(1, n_jobs / 2), static_cast<int>(order.size()));
    std::vector<Panel> keep;
    std::vector<bool> split(panels.size(), false);
    for (int i = 0; i < n_split; ++i) split[order[i]] = true;
    for (std::size_t i = 0; i < panels.size(); ++i) {
      if (split[i]) {
        double mid = 0.5 * (panels[i].a + panels[i].b);
        pending.emplace_back(panels[i].a, mid);
        pending.emplace_back(mid, panels[i].b);
      } else {
        keep.push_back(panels[i]);
      }
    }
    panels = std::move(keep);
    flush_pending();
  }

  OmegaResult out;
  out.value = value;
  out.error = error;
  out.evaluations = evals;
  out.converged = converged;
  out.tail_bound = ArrayXd::Zero(ncomp);
  if (tail_decay_scale > 0) {
    prefetch({w_max * (1 - 1e-9)});
    out.tail_bound = cache.at(w_max * (1 - 1e-9)).abs() * tail_decay_scale;
  }
  return out;
}

ValueWithError integrate_kphi_scalar(const std::function<double(const fresnel::ModeCoords&)>& f,
                                     double omega, double d, const QuadConfig& cfg) {
  ModeIntegrandFn fn = [&](const fresnel::ModeCoords& m, double* out) { out[0] = f(m); };
  KPhiResult r = integrate_kphi(1, fn, omega, d, cfg);
  return {r.value[0], r.error[0]};
}

ValueWithError integrate_omega_scalar(const std::function<double(double)>& density, double w_min,
                                      double w_max, std::vector<double> seeds,
                                      const QuadConfig& cfg) {
  auto fn = [&](double w) {
    ArrayXd v(1);
    v[0] = density(w);
    return v;
  };
  OmegaResult r = integrate_omega(1, fn, w_min, w_max, std::move(seeds), cfg, 1);
  return {r.value[0], r.error[0]};
}

}  // namespace fluxtorque::quadrature
