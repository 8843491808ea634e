#include "rellich/trials.hpp"

#include <cmath>

namespace rellich {

namespace {

// Quintic smoothstep: S(0)=0, S(1)=1 with vanishing first and second
// derivatives at both ends, so log-space ramps compose to C^2 cutoffs.
struct Smoothstep {
  double v, d1, d2;
};

Smoothstep smoothstep(double w) {
  if (w <= 0.0) return {0.0, 0.0, 0.0};
  if (w >= 1.0) return {1.0, 0.0, 0.0};
  const double w2 = w * w;
  return {((6.0 * w - 15.0) * w + 10.0) * w2 * w,
          ((30.0 * w - 60.0) * w + 30.0) * w2,
          ((120.0 * w - 180.0) * w + 60.0) * w};
}

// Product rule on (value, gradient, Laplacian) bundles.
Jet jet_mul(const Jet& a, const Jet& b) {
  Jet out;
  out.value = a.value * b.value;
  out.grad.resize(a.grad.size());
  for (size_t d = 0; d < a.grad.size(); ++d) {
    out.grad[d] = a.value * b.grad[d] + b.value * a.grad[d];
  }
  out.lap = a.value * b.lap + 2.0 * dot(a.grad, b.grad) + b.value * a.lap;
  return out;
}

Jet zero_jet(int N) {
  Jet j;
  j.grad.assign(N, 0.0);
  return j;
}

// Jet of S(w(r)) with w = log(r/lo)/log(hi/lo) and r = |x - c|:
//   grad = S' * (x-c)/(r^2 L),  lap = (S''/L + (N-2) S') / (r^2 L)
Jet log_ramp_jet(const Vec& x, const Vec& c, double lo, double hi, int N) {
  const double r2 = dist2(x, c);
  const double L = std::log(hi / lo);
  const double w = 0.5 * std::log(r2 / (lo * lo)) / L;
  const Smoothstep S = smoothstep(w);
  Jet j = zero_jet(N);
  j.value = S.v;
  if (w <= 0.0 || w >= 1.0) return j;
  const double cgrad = S.d1 / (r2 * L);
  for (int d = 0; d < N; ++d) j.grad[d] = cgrad * (x[d] - c[d]);
  j.lap = (S.d2 / L + (N - 2) * S.d1) / (r2 * L);
  return j;
}

}  // namespace

TrialFunction make_bump(const PoleConfig& config, const Vec& center, double radius) {
  if (radius <= 0.0) throw PreconditionViolation("bump radius must be positive");
  if (static_cast<int>(center.size()) != config.dim) {
    throw PreconditionViolation("bump center dimension mismatch");
  }
  TrialFunction u;
  u.kind = TrialFunction::Kind::Bump;
  u.config = config;
  u.center = center;
  u.radius = radius;
  return u;
}

TrialFunction make_mollified_ground_state(const PoleConfig& config, const Rational& s,
                                          double far_radius, double near_delta) {
  if (!(near_delta > 0.0) || near_delta >= config.min_separation) {
    throw PreconditionViolation("near cutoff delta must lie in (0, min separation)");
  }
  if (!(far_radius > 2.0 * near_delta + config.max_pole_norm)) {
    throw PreconditionViolation("far cutoff R must clear the pole region");
  }
  TrialFunction u;
  u.kind = TrialFunction::Kind::MollifiedGroundState;
  u.config = config;
  u.s = s;
  u.far_radius = far_radius;
  u.near_delta = near_delta;
  return u;
}

double cutoff_eps_max(const PoleConfig& config) {
  double m = 0.5;
  if (std::isfinite(config.min_separation)) m = std::min(m, config.min_separation / 4.0);
  return std::min(m, 1.0 / (2.0 * config.max_pole_norm + 1.0));
}

TrialFunction make_cutoff_ground_state(const PoleConfig& config, double epsilon) {
  const double lim = cutoff_eps_max(config);
  if (!(epsilon > 0.0) || epsilon >= lim) {
    throw PreconditionViolation("cutoff eps must lie in (0, " + std::to_string(lim) +
                                ") for this pole layout");
  }
  TrialFunction u;
  u.kind = TrialFunction::Kind::CutoffGroundState;
  u.config = config;
  u.s = Rational(4 - config.dim);
  u.epsilon = epsilon;
  return u;
}

TrialFunction scaled(const TrialFunction& u, double c) {
  TrialFunction out = u;
  out.amplitude *= c;
  return out;
}

double support_radius(const TrialFunction& u) {
  switch (u.kind) {
    case TrialFunction::Kind::Bump:
      return norm(u.center) + u.radius;
    case TrialFunction::Kind::MollifiedGroundState:
      return 2.0 * u.far_radius;
    case TrialFunction::Kind::CutoffGroundState:
      return 1.0 / (u.epsilon * u.epsilon);
  }
  return 0.0;
}

TrialEvaluator::TrialEvaluator(const TrialFunction& u) : u_(u) {
  if (u_.kind != TrialFunction::Kind::Bump) {
    phi_ = std::make_unique<GroundStateEvaluator>(u_.config, u_.s);
  }
}

Jet TrialEvaluator::bump_jet(const Vec& x) const {
  const int N = u_.config.dim;
  const double R2 = u_.radius * u_.radius;
  const double rho2 = dist2(x, u_.center) / R2;
  const double tau = 1.0 - rho2;
  // exp(-1/tau) underflows long before tau reaches 1e-3; cut there so the
  // 1/tau powers cannot overflow.
  if (tau <= 1e-3) return zero_jet(N);
  const double v = std::exp(-1.0 / tau);
  Jet j;
  j.value = v;
  const double cgrad = -2.0 * v / (R2 * tau * tau);
  j.grad.resize(N);
  for (int d = 0; d < N; ++d) j.grad[d] = cgrad * (x[d] - u_.center[d]);
  j.lap = (2.0 * v / R2) *
          (2.0 * rho2 / (tau * tau * tau * tau) - 4.0 * rho2 / (tau * tau * tau) -
           N / (tau * tau));
  return j;
}

Jet TrialEvaluator::mgs_jet(const Vec& x) const {
  const PoleConfig& cfg = u_.config;
  const int N = cfg.dim;
  const double delta = u_.near_delta;
  const double R = u_.far_radius;

  const double far2 = norm2(x);
  if (far2 >= 4.0 * R * R) return zero_jet(N);
  for (const Vec& a : cfg.poles) {
    if (dist2(x, a) <= 0.25 * delta * delta) return zero_jet(N);
  }

  Jet out = phi_->jet(x);
  for (const Vec& a : cfg.poles) {
    if (dist2(x, a) < delta * delta) {
      out = jet_mul(out, log_ramp_jet(x, a, delta / 2.0, delta, N));
    }
  }
  if (far2 > R * R) {
    // Far factor is 1 - S; flip the ramp jet.
    Jet eta = log_ramp_jet(x, Vec(N, 0.0), R, 2.0 * R, N);
    eta.value = 1.0 - eta.value;
    for (double& g : eta.grad) g = -g;
    eta.lap = -eta.lap;
    out = jet_mul(out, eta);
  }
  return out;
}

Jet TrialEvaluator::cutoff_jet(const Vec& x) const {
  const PoleConfig& cfg = u_.config;
  const int N = cfg.dim;
  const double eps = u_.epsilon;
  const double L = std::log(1.0 / eps);

  // v_eps jet by region; the regions are disjoint because eps is below
  // cutoff_eps_max.
  Jet v = zero_jet(N);
  bool in_pole_region = false;
  for (const Vec& a : cfg.poles) {
    const double d2v = dist2(x, a);
    if (d2v <= eps * eps * eps * eps) return zero_jet(N);  // dead core
    if (d2v < eps * eps) {
      v.value = 0.5 * std::log(d2v / (eps * eps * eps * eps)) / L;
      const double cgrad = 1.0 / (d2v * L);
      for (int d = 0; d < N; ++d) v.grad[d] = cgrad * (x[d] - a[d]);
      v.lap = (N - 2) / (d2v * L);
      in_pole_region = true;
      break;
    }
  }
  if (!in_pole_region) {
    const double r2 = norm2(x);
    const double inv_eps = 1.0 / eps;
    if (r2 >= inv_eps * inv_eps * inv_eps * inv_eps) return zero_jet(N);
    if (r2 <= inv_eps * inv_eps) {
      v.value = 1.0;
    } else {
      // v = log(eps^2 |x|)/log(eps); differentiating the printed formula
      // gives grad = x/(|x|^2 log eps), lap = (N-2)/(|x|^2 log eps).
      v.value = (2.0 * std::log(eps) + 0.5 * std::log(r2)) / std::log(eps);
      const double cgrad = 1.0 / (r2 * std::log(eps));
      for (int d = 0; d < N; ++d) v.grad[d] = cgrad * x[d];
      v.lap = (N - 2) / (r2 * std::log(eps));
    }
  }
  return jet_mul(phi_->jet(x), v);
}

Jet TrialEvaluator::unit_jet(const Vec& x) const {
  switch (u_.kind) {
    case TrialFunction::Kind::Bump:
      return bump_jet(x);
    case TrialFunction::Kind::MollifiedGroundState:
      return mgs_jet(x);
    case TrialFunction::Kind::CutoffGroundState:
      return cutoff_jet(x);
  }
  return zero_jet(u_.config.dim);
}

Jet TrialEvaluator::jet(const Vec& x) const {
  Jet j = unit_jet(x);
  j.value *= u_.amplitude;
  for (double& g : j.grad) g *= u_.amplitude;
  j.lap *= u_.amplitude;
  return j;
}

Jet trial_jet(const TrialFunction& u, const Vec& x) { return TrialEvaluator(u).jet(x); }

}  // namespace rellich
