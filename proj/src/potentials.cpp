#include "rellich/potentials.hpp"

#include <cmath>
#include <string>

namespace rellich {

namespace {

PotentialSpec basic(PotentialSpec::Kind kind, const PoleConfig& config) {
  PotentialSpec spec;
  spec.kind = kind;
  spec.config = config;
  return spec;
}

}  // namespace

PotentialSpec make_w1(const PoleConfig& config) { return basic(PotentialSpec::Kind::W1, config); }
PotentialSpec make_w2(const PoleConfig& config) { return basic(PotentialSpec::Kind::W2, config); }
PotentialSpec make_w1_plus_w2(const PoleConfig& config) {
  return basic(PotentialSpec::Kind::W1PlusW2, config);
}

PotentialSpec make_vn(const PoleConfig& config) {
  PotentialSpec spec = basic(PotentialSpec::Kind::Vn, config);
  const int n = config.n();
  const Rational diag(config.dim + 2 * n - 4, config.dim);
  const Rational off(config.dim - 4, config.dim);
  spec.nu.assign(n, std::vector<std::vector<Rational>>(
                        n, std::vector<Rational>(n, Rational(0))));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        spec.nu[k][i][j] = (k == i || k == j) ? diag : off;
      }
    }
  }
  return spec;
}

PotentialSpec make_hardy_family(const PoleConfig& config, const Rational& s) {
  PotentialSpec spec = basic(PotentialSpec::Kind::Hardy, config);
  spec.s = s;
  return spec;
}

PotentialSpec make_rellich_family(const PoleConfig& config, const Rational& s,
                                  PotentialSpec::RellichPart part) {
  if (s == Rational(2) || s == Rational(4)) {
    throw DegenerateS("three-component family is undefined at s = " + s.str());
  }
  const int n = config.n();
  for (const Rational& w : config.weights) {
    if (!(w == Rational(1, n))) {
      throw PreconditionViolation(
          "the three-component potential family is stated for uniform weights 1/n");
    }
  }

  PotentialSpec spec = basic(PotentialSpec::Kind::Rellich, config);
  spec.s = s;
  spec.part = part;

  const Rational two(2), four(4), Nr(config.dim), nn(n);
  const Rational mu_diag = (s - two * nn) / (s - two);
  const Rational mu_off = s / (s - two);
  const Rational sg_diag = (s - two * nn) / s;
  const Rational sg_off(1);
  const Rational nu_diag = (s - two * nn) / (s - four);
  const Rational nu_off = s / (s - four);

  spec.mu.assign(n, std::vector<Rational>(n, Rational(0)));
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) spec.mu[k][i] = (k == i) ? mu_diag : mu_off;
  }
  spec.sigma.assign(n, std::vector<std::vector<Rational>>(
                           n, std::vector<Rational>(n, Rational(0))));
  spec.nu = spec.sigma;
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        const bool diag = (k == i || k == j);
        spec.sigma[k][i][j] = diag ? sg_diag : sg_off;
        spec.nu[k][i][j] = diag ? nu_diag : nu_off;
      }
    }
  }

  const Rational n2 = nn * nn;
  spec.coef_mu = s * (s - two) * (two - Nr - s) * (four - Nr - s) / n2;
  spec.coef_sigma = two * s * s * s * (four - Nr - s) / (n2 * nn);
  spec.coef_nu = s * s * (s - four) * (s - four) / (n2 * n2);
  return spec;
}

namespace {

double eval_w1(const std::vector<double>& d2) {
  double sum = 0.0;
  for (double v : d2) sum += 1.0 / v;
  return sum;
}

double eval_w2(const PoleConfig& cfg, const std::vector<double>& d2) {
  double sum = 0.0;
  for (int i = 0; i < cfg.n(); ++i) {
    for (int j = i + 1; j < cfg.n(); ++j) {
      sum += cfg.pair_dist2[i][j] / (d2[i] * d2[j]);
    }
  }
  return sum;
}

// sum_{i<j} w_ij sum_{k<l} t_{k,i,j} t_{l,i,j} w_kl for a given cube table.
double eval_pair_pair(const PoleConfig& cfg, const std::vector<double>& d2,
                      const std::vector<std::vector<std::vector<Rational>>>& table) {
  const int n = cfg.n();
  std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) w[i][j] = cfg.pair_dist2[i][j] / (d2[i] * d2[j]);
  }
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double inner = 0.0;
      for (int k = 0; k < n; ++k) {
        for (int l = k + 1; l < n; ++l) {
          inner += table[k][i][j].to_double() * table[l][i][j].to_double() * w[k][l];
        }
      }
      sum += w[i][j] * inner;
    }
  }
  return sum;
}

}  // namespace

double potential_eval(const PotentialSpec& spec, const Vec& x) {
  const PoleConfig& cfg = spec.config;
  const std::vector<double> d2 = squared_distances(cfg, x);
  const int n = cfg.n();

  switch (spec.kind) {
    case PotentialSpec::Kind::W1:
      return eval_w1(d2);
    case PotentialSpec::Kind::W2:
      return eval_w2(cfg, d2);
    case PotentialSpec::Kind::W1PlusW2:
      return eval_w1(d2) + eval_w2(cfg, d2);
    case PotentialSpec::Kind::Vn:
      return eval_pair_pair(cfg, d2, spec.nu);
    case PotentialSpec::Kind::Hardy: {
      const Rational& s = spec.s;
      const double c1 = (s * (Rational(2) - Rational(cfg.dim) - s)).to_double();
      const double c2 = (s * s).to_double();
      double t1 = 0.0;
      for (int i = 0; i < n; ++i) t1 += cfg.weights_d[i] / d2[i];
      double t2 = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          t2 += cfg.weights_d[i] * cfg.weights_d[j] * cfg.pair_dist2[i][j] /
                (d2[i] * d2[j]);
        }
      }
      return c1 * t1 + c2 * t2;
    }
    case PotentialSpec::Kind::Rellich: {
      double total = 0.0;
      const bool all = spec.part == PotentialSpec::RellichPart::All;
      if (all || spec.part == PotentialSpec::RellichPart::Mu) {
        double t = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int k = 0; k < n; ++k) {
            t += spec.mu[k][i].to_double() / (d2[i] * d2[k]);
          }
        }
        total += spec.coef_mu.to_double() * t;
      }
      if (all || spec.part == PotentialSpec::RellichPart::Sigma) {
        double t = 0.0;
        for (int i = 0; i < n; ++i) {
          for (int j = i + 1; j < n; ++j) {
            double inner = 0.0;
            for (int k = 0; k < n; ++k) inner += spec.sigma[k][i][j].to_double() / d2[k];
            t += cfg.pair_dist2[i][j] / (d2[i] * d2[j]) * inner;
          }
        }
        total += spec.coef_sigma.to_double() * t;
      }
      if (all || spec.part == PotentialSpec::RellichPart::Nu) {
        total += spec.coef_nu.to_double() * eval_pair_pair(cfg, d2, spec.nu);
      }
      return total;
    }
  }
  throw PreconditionViolation("unhandled potential kind");
}

Rational sharp_constant(int N, int n, int order) {
  if (n < 2) throw PreconditionViolation("sharp constants are stated for n >= 2");
  if (order == 2) {
    if (N <= 4) {
      throw DimensionTooSmall("order-2 sharp constant needs N >= 5, got " +
                              std::to_string(N));
    }
    const Rational Nr(N), nr(n);
    return Nr * Nr * (Nr - Rational(4)) * (Nr - Rational(4)) / (nr * nr * nr * nr);
  }
  if (order == 1) {
    if (N <= 2) {
      throw DimensionTooSmall("order-1 sharp constant needs N >= 3, got " +
                              std::to_string(N));
    }
    const Rational Nr(N), nr(n);
    return (Nr - Rational(2)) * (Nr - Rational(2)) / (nr * nr);
  }
  throw PreconditionViolation("order must be 1 or 2");
}

}  // namespace rellich
