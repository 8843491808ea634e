#include "rellich/multipole.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace rellich {

PoleConfig make_config(int N, std::vector<Vec> poles,
                       std::optional<std::vector<Rational>> weights,
                       double exclusion_radius) {
  if (N <= 4) {
    throw DimensionTooSmall("dimension N = " + std::to_string(N) +
                            " but the second-order theory needs N >= 5");
  }
  if (poles.empty()) {
    throw PreconditionViolation("at least one pole is required");
  }
  const int n = static_cast<int>(poles.size());
  for (const Vec& a : poles) {
    if (static_cast<int>(a.size()) != N) {
      throw PreconditionViolation("pole has " + std::to_string(a.size()) +
                                  " coordinates, expected " + std::to_string(N));
    }
  }

  PoleConfig cfg;
  cfg.dim = N;
  cfg.poles = std::move(poles);
  cfg.exclusion_radius = exclusion_radius;

  if (weights) {
    if (static_cast<int>(weights->size()) != n) {
      throw BadWeights("got " + std::to_string(weights->size()) +
                       " weights for " + std::to_string(n) + " poles");
    }
    Rational sum(0);
    for (const Rational& w : *weights) {
      if (w < Rational(0)) throw BadWeights("negative weight " + w.str());
      sum = sum + w;
    }
    if (!(sum == Rational(1))) {
      throw BadWeights("weights sum to " + sum.str() + ", expected 1");
    }
    cfg.weights = std::move(*weights);
  } else {
    cfg.weights.assign(n, Rational(1, n));
  }

  cfg.weights_d.resize(n);
  for (int i = 0; i < n; ++i) cfg.weights_d[i] = cfg.weights[i].to_double();

  cfg.pair_dist2.assign(n, std::vector<double>(n, 0.0));
  cfg.min_separation = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double d2 = dist2(cfg.poles[i], cfg.poles[j]);
      if (d2 == 0.0) {
        throw DuplicatePoles("poles " + std::to_string(i) + " and " +
                             std::to_string(j) + " coincide");
      }
      cfg.pair_dist2[i][j] = cfg.pair_dist2[j][i] = d2;
      cfg.min_separation = std::min(cfg.min_separation, std::sqrt(d2));
    }
  }
  if (n == 1) cfg.min_separation = std::numeric_limits<double>::infinity();

  cfg.max_pole_norm = 0.0;
  for (const Vec& a : cfg.poles) cfg.max_pole_norm = std::max(cfg.max_pole_norm, norm(a));
  return cfg;
}

std::vector<Vec> regular_simplex_poles(int n, int N) {
  if (n < 1) throw PreconditionViolation("need n >= 1 poles");
  if (n - 1 > N) {
    throw PreconditionViolation("a regular simplex on " + std::to_string(n) +
                                " vertices needs dimension >= " + std::to_string(n - 1));
  }
  std::vector<Vec> pts(n, Vec(N, 0.0));
  // Incremental construction: vertex k+1 sits above the centroid of the
  // first k at height sqrt((k+1)/(2k)), keeping all pairwise distances 1.
  for (int k = 1; k < n; ++k) {
    Vec centroid(N, 0.0);
    for (int i = 0; i < k; ++i) axpy(centroid, 1.0 / k, pts[i]);
    const double h = std::sqrt((k + 1.0) / (2.0 * k));
    pts[k] = centroid;
    pts[k][k - 1] += h;
  }
  return pts;
}

PowerProduct ground_state(const PoleConfig& config, const Rational& s) {
  PowerProduct pp;
  pp.config = config;
  pp.exponents.resize(config.n());
  for (int i = 0; i < config.n(); ++i) {
    pp.exponents[i] = (s * config.weights[i]).to_double();
  }
  return pp;
}

std::vector<double> squared_distances(const PoleConfig& config, const Vec& x) {
  const int n = config.n();
  std::vector<double> d2(n);
  const double excl2 = config.exclusion_radius * config.exclusion_radius;
  for (int i = 0; i < n; ++i) {
    d2[i] = dist2(x, config.poles[i]);
    if (d2[i] <= excl2) {
      throw EvalAtPole("evaluation within exclusion radius of pole " + std::to_string(i));
    }
  }
  return d2;
}

double eval_power_product(const PowerProduct& pp, const Vec& x) {
  const std::vector<double> d2 = squared_distances(pp.config, x);
  double logv = 0.0;
  for (size_t i = 0; i < d2.size(); ++i) logv += 0.5 * pp.exponents[i] * std::log(d2[i]);
  return std::exp(logv);
}

Jet power_product_jet(const PowerProduct& pp, const Vec& x) {
  const PoleConfig& cfg = pp.config;
  const int n = cfg.n();
  const int N = cfg.dim;
  const std::vector<double> d2 = squared_distances(cfg, x);

  Jet jet;
  double logv = 0.0;
  for (int i = 0; i < n; ++i) logv += 0.5 * pp.exponents[i] * std::log(d2[i]);
  jet.value = std::exp(logv);

  // grad f / f = sum_i e_i (x - a_i)/d_i^2
  Vec g(N, 0.0);
  for (int i = 0; i < n; ++i) {
    const double c = pp.exponents[i] / d2[i];
    for (int d = 0; d < N; ++d) g[d] += c * (x[d] - cfg.poles[i][d]);
  }
  jet.grad = scale(g, jet.value);

  // lap f / f = sum_i e_i (e_i + N - 2)/d_i^2 + sum_{i != j} cross terms
  double lap = 0.0;
  for (int i = 0; i < n; ++i) lap += pp.exponents[i] * (pp.exponents[i] + N - 2) / d2[i];
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double dotij = 0.0;
      for (int d = 0; d < N; ++d) {
        dotij += (x[d] - cfg.poles[i][d]) * (x[d] - cfg.poles[j][d]);
      }
      lap += 2.0 * pp.exponents[i] * pp.exponents[j] * dotij / (d2[i] * d2[j]);
    }
  }
  jet.lap = jet.value * lap;
  return jet;
}

double laplacian_phi_s(const PoleConfig& config, const Rational& s, const Vec& x) {
  return GroundStateEvaluator(config, s).jet(x).lap;
}

ExponentTables exponent_tables(const PoleConfig& config, const Rational& s) {
  if (s == Rational(2) || s == Rational(4)) {
    throw DegenerateS("exponent tables are undefined at s = " + s.str());
  }
  const int n = config.n();
  ExponentTables t;
  t.s = s;
  t.xi.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      const Rational num = (k == i) ? s * config.weights[k] - Rational(2)
                                    : s * config.weights[k];
      t.xi[k][i] = num / (s - Rational(2));
    }
  }
  t.zeta.assign(n, std::vector<std::vector<Rational>>(
                       n, std::vector<Rational>(n, Rational(0))));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const Rational num = (k == i || k == j) ? s * config.weights[k] - Rational(2)
                                                : s * config.weights[k];
        t.zeta[k][i][j] = num / (s - Rational(4));
      }
    }
  }
  return t;
}

namespace {

// Shared assembly for the bilaplacian closed form and its xi/zeta identity
// probe.  All coefficients arrive as exact rationals and are converted once.
struct BilapWork {
  int n;
  std::vector<double> d2;
  std::vector<std::vector<double>> w;  // w_ij = |a_i-a_j|^2/(d_i^2 d_j^2), i<j
  std::vector<std::vector<double>> xi;
  std::vector<std::vector<std::vector<double>>> zeta;
};

BilapWork bilap_work(const PoleConfig& cfg, const Rational& s, const Vec& x) {
  BilapWork wk;
  wk.n = cfg.n();
  wk.d2 = squared_distances(cfg, x);
  wk.w.assign(wk.n, std::vector<double>(wk.n, 0.0));
  for (int i = 0; i < wk.n; ++i) {
    for (int j = i + 1; j < wk.n; ++j) {
      wk.w[i][j] = cfg.pair_dist2[i][j] / (wk.d2[i] * wk.d2[j]);
    }
  }
  const ExponentTables t = exponent_tables(cfg, s);
  wk.xi.assign(wk.n, std::vector<double>(wk.n, 0.0));
  wk.zeta.assign(wk.n, std::vector<std::vector<double>>(
                           wk.n, std::vector<double>(wk.n, 0.0)));
  for (int k = 0; k < wk.n; ++k) {
    for (int i = 0; i < wk.n; ++i) {
      wk.xi[k][i] = t.xi[k][i].to_double();
      for (int j = i + 1; j < wk.n; ++j) {
        wk.zeta[k][i][j] = t.zeta[k][i][j].to_double();
      }
    }
  }
  return wk;
}

}  // namespace

double bilaplacian_phi_s(const PoleConfig& config, const Rational& s, const Vec& x) {
  const std::vector<double> d2 = squared_distances(config, x);
  double logv = 0.0;
  for (int i = 0; i < config.n(); ++i) {
    logv += 0.5 * (s * config.weights[i]).to_double() * std::log(d2[i]);
  }
  return std::exp(logv) * BilaplacianEvaluator(config, s).ratio(x);
}

BilaplacianEvaluator::BilaplacianEvaluator(const PoleConfig& config, const Rational& s)
    : config_(config) {
  const int n = config_.n();
  const ExponentTables t = exponent_tables(config_, s);
  xi_.assign(n, std::vector<double>(n, 0.0));
  zeta_.assign(n, std::vector<std::vector<double>>(n, std::vector<double>(n, 0.0)));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      xi_[k][i] = t.xi[k][i].to_double();
      for (int j = i + 1; j < n; ++j) zeta_[k][i][j] = t.zeta[k][i][j].to_double();
    }
  }
  const Rational Nr(config_.dim);
  c1_ = (s * (Nr + s - Rational(2)) * (s - Rational(2)) * (Nr + s - Rational(4))).to_double();
  c2_ = (Rational(2) * s * s * (s - Rational(4)) * (Rational(4) - Nr - s)).to_double();
  c3_ = (s * s * (s - Rational(4)) * (s - Rational(4))).to_double();
}

double BilaplacianEvaluator::ratio(const Vec& x) const {
  const int n = config_.n();
  const std::vector<double> d2 = squared_distances(config_, x);
  const std::vector<double>& alpha = config_.weights_d;
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      w[i][j] = config_.pair_dist2[i][j] / (d2[i] * d2[j]);
    }
  }

  double term1 = 0.0;
  for (int i = 0; i < n; ++i) {
    double inner = 0.0;
    for (int k = 0; k < n; ++k) inner += xi_[k][i] / d2[k];
    term1 += alpha[i] / d2[i] * inner;
  }
  double term2 = 0.0;
  double term3 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double aaw = alpha[i] * alpha[j] * w[i][j];
      double inner2 = 0.0;
      for (int k = 0; k < n; ++k) inner2 += zeta_[k][i][j] / d2[k];
      term2 += aaw * inner2;
      double inner3 = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          inner3 += zeta_[k][i][j] * zeta_[l][i][j] * w[k][l];
        }
      }
      term3 += aaw * inner3;
    }
  }
  return c1_ * term1 + c2_ * term2 + c3_ * term3;
}

double bilaplacian_ratio_phi_s(const PoleConfig& config, const Rational& s, const Vec& x) {
  return BilaplacianEvaluator(config, s).ratio(x);
}

XiZetaSides xi_zeta_sides(const PoleConfig& config, const Rational& s, const Vec& x) {
  const BilapWork wk = bilap_work(config, s, x);
  const std::vector<double>& alpha = config.weights_d;

  XiZetaSides sides;
  for (int i = 0; i < wk.n; ++i) {
    double inner = 0.0;
    for (int k = 0; k < wk.n; ++k) {
      for (int l = k + 1; l < wk.n; ++l) {
        inner += wk.xi[k][i] * wk.xi[l][i] * wk.w[k][l];
      }
    }
    sides.xi_side += alpha[i] / wk.d2[i] * inner;
  }
  for (int i = 0; i < wk.n; ++i) {
    for (int j = i + 1; j < wk.n; ++j) {
      double inner = 0.0;
      for (int k = 0; k < wk.n; ++k) inner += wk.zeta[k][i][j] / wk.d2[k];
      sides.zeta_side += alpha[i] * alpha[j] * wk.w[i][j] * inner;
    }
  }
  sides.factor =
      (s * (s - Rational(4)) / ((s - Rational(2)) * (s - Rational(2)))).to_double();
  return sides;
}

GroundStateEvaluator::GroundStateEvaluator(const PoleConfig& config, const Rational& s)
    : config_(config), s_(s), sd_(s.to_double()) {
  const int n = config_.n();
  exps_.resize(n);
  for (int i = 0; i < n; ++i) exps_[i] = (s * config_.weights[i]).to_double();
  const Rational Nr(config_.dim);
  c1_ = (s * (Nr + s - Rational(2))).to_double();
  c2_ = (s * s).to_double();
}

double GroundStateEvaluator::log_value(const Vec& x) const {
  const std::vector<double> d2 = squared_distances(config_, x);
  double logv = 0.0;
  for (size_t i = 0; i < d2.size(); ++i) logv += 0.5 * exps_[i] * std::log(d2[i]);
  return logv;
}

double GroundStateEvaluator::value(const Vec& x) const { return std::exp(log_value(x)); }

double GroundStateEvaluator::lap_over_value(const std::vector<double>& d2) const {
  const int n = config_.n();
  double sum1 = 0.0;
  for (int i = 0; i < n; ++i) sum1 += config_.weights_d[i] / d2[i];
  double sum2 = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      sum2 += config_.weights_d[i] * config_.weights_d[j] * config_.pair_dist2[i][j] /
              (d2[i] * d2[j]);
    }
  }
  return c1_ * sum1 - c2_ * sum2;
}

Jet GroundStateEvaluator::jet(const Vec& x) const {
  const int n = config_.n();
  const int N = config_.dim;
  const std::vector<double> d2 = squared_distances(config_, x);

  Jet jet;
  double logv = 0.0;
  for (int i = 0; i < n; ++i) logv += 0.5 * exps_[i] * std::log(d2[i]);
  jet.value = std::exp(logv);

  Vec g(N, 0.0);
  for (int i = 0; i < n; ++i) {
    const double c = exps_[i] / d2[i];
    for (int d = 0; d < N; ++d) g[d] += c * (x[d] - config_.poles[i][d]);
  }
  jet.grad = scale(g, jet.value);
  jet.lap = jet.value * lap_over_value(d2);
  return jet;
}

}  // namespace rellich
