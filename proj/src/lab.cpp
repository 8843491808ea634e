#include "rellich/lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>

#include "rellich/rng.hpp"

namespace rellich {
namespace {

// Derived per-stratum seed: decorrelates strata while keeping every run a
// pure function of the user-facing seed.
std::uint64_t stratum_seed(std::uint64_t seed, int stratum) {
  std::uint64_t s = seed ^ (0xA0761D6478BD642FULL * static_cast<std::uint64_t>(stratum + 1));
  return splitmix64(s);
}

bool zero_jet(const Jet& j) { return j.value == 0.0 && j.lap == 0.0; }

// grad phi_s / phi_s = sum_i e_i (x - a_i)/d_i^2, e_i = s alpha_i.
Vec grad_over_phi(const PoleConfig& config, double s_d, const Vec& x,
                  const std::vector<double>& d2) {
  Vec g(config.dim, 0.0);
  for (int i = 0; i < config.n(); ++i) {
    const double c = s_d * config.weights_d[i] / d2[i];
    for (int k = 0; k < config.dim; ++k) g[k] += c * (x[k] - config.poles[i][k]);
  }
  return g;
}

Vec pole_centroid(const PoleConfig& config) {
  Vec c(config.dim, 0.0);
  for (const auto& a : config.poles) axpy(c, 1.0, a);
  for (auto& ck : c) ck /= config.n();
  return c;
}

double worst_pole_exponent(PotentialSpec::Kind kind) {
  switch (kind) {
    case PotentialSpec::Kind::Vn:
    case PotentialSpec::Kind::Rellich:
      return -4.0;  // the k-in-pair table entries stack two inverse squares
    default:
      return -2.0;
  }
}

// Mixture sampler for a compactly supported bump trial: a uniform ball over
// the support plus one heavy-tailed ball per singular pole inside it.
ImportanceSampler bump_sampler(const TrialFunction& u, double pole_exponent) {
  const PoleConfig& config = u.config;
  const int N = config.dim;
  ImportanceSampler sampler;
  sampler.dim = N;
  sampler.config = config;

  std::vector<int> hot;
  for (int i = 0; i < config.n(); ++i)
    if (dist2(config.poles[i], u.center) < u.radius * u.radius) hot.push_back(i);

  const double bulk_w = hot.empty() ? 1.0 : 0.5;
  sampler.components.push_back(
      {bulk_w, u.center, {RadialLaw::Kind::PowerBall, static_cast<double>(N), u.radius}});
  if (!hot.empty()) {
    const double rho = config.n() >= 2 ? 0.5 * config.min_separation : u.radius;
    const double beta = 0.5 * (pole_exponent + N);  // halfway to divergence
    for (int i : hot) {
      sampler.components.push_back(
          {0.5 / hot.size(), config.poles[i], {RadialLaw::Kind::PowerBall, beta, rho}});
      sampler.excluded_mass_bound += unit_sphere_area(N) *
                                     std::pow(config.exclusion_radius, N + pole_exponent) /
                                     (N + pole_exponent);
    }
    sampler.notes.push_back("pole balls at beta = (p+N)/2 for local exponent p = " +
                            std::to_string(pole_exponent));
  }
  return sampler;
}

// Disjoint strata covering the support of a ground-state trial: two log
// annuli per pole (split at the ramp seam), a masked uniform ball over the
// middle, and up to two log annuli for the far region.
struct Stratum {
  bool masked_ball = false;
  Vec center;
  double r_in = 0.0;
  double r_out = 0.0;   // ball radius when masked_ball
  double share = 0.0;   // fraction of the sample budget
};

std::vector<Stratum> ground_state_strata(const TrialFunction& u) {
  const PoleConfig& config = u.config;
  double inner = 0.0, seam = 0.0, far_lo = 0.0, far_hi = 0.0;
  if (u.kind == TrialFunction::Kind::MollifiedGroundState) {
    inner = 0.5 * u.near_delta;
    seam = u.near_delta;
    far_lo = u.far_radius;
    far_hi = 2.0 * u.far_radius;
  } else {
    inner = u.epsilon * u.epsilon;
    seam = u.epsilon;
    far_lo = 1.0 / u.epsilon;
    far_hi = 1.0 / (u.epsilon * u.epsilon);
  }
  const double rho =
      config.n() >= 2 ? 0.5 * config.min_separation : std::max(1.0, 4.0 * inner);
  if (inner >= rho)
    throw PreconditionViolation("trial dead zone reaches the pole separation scale");

  std::vector<Stratum> strata;
  const Vec c = pole_centroid(config);
  const double c_norm = norm(c);

  // Pole annuli, split at the ramp seam when it falls inside (rel margin
  // keeps degenerate slivers out).
  const double lo_m = inner * (1.0 + 1e-9), hi_m = rho * (1.0 - 1e-9);
  for (const auto& a : config.poles) {
    if (seam > lo_m && seam < hi_m) {
      strata.push_back({false, a, inner, seam, 0.0});
      strata.push_back({false, a, seam, rho, 0.0});
    } else {
      strata.push_back({false, a, inner, rho, 0.0});
    }
  }
  const int n_pole = static_cast<int>(strata.size());
  for (auto& st : strata) st.share = 0.5 / n_pole;

  double base = rho + 1.0;  // smallest centroid ball containing all pole balls
  for (const auto& a : config.poles)
    base = std::max(base, std::sqrt(dist2(a, c)) + rho + 1.0);

  const double far_out = far_hi + c_norm;  // covering radius around the centroid
  if (base >= far_out) {
    strata.push_back({true, c, 0.0, far_out, 0.5});
  } else {
    strata.push_back({true, c, 0.0, base, 0.2});
    const double split = std::clamp(far_lo, base * (1.0 + 1e-9), far_out * (1.0 - 1e-9));
    if (split > base * (1.0 + 2e-9) && split < far_out * (1.0 - 2e-9)) {
      strata.push_back({false, c, base, split, 0.15});
      strata.push_back({false, c, split, far_out, 0.15});
    } else {
      strata.push_back({false, c, base, far_out, 0.3});
    }
  }
  return strata;
}

// Sum of independent per-stratum estimates; covariances add blockwise.
MultiQuadResult stratified_multi(const std::vector<ScalarField>& fs, const TrialFunction& u,
                                 const QuadParams& params) {
  const PoleConfig& config = u.config;
  const std::vector<Stratum> strata = ground_state_strata(u);
  const double rho =
      config.n() >= 2 ? 0.5 * config.min_separation : 0.0;  // mid-stratum mask radius
  const double rho2 = rho * rho;

  const std::size_t K = fs.size();
  MultiQuadResult out;
  out.estimates.assign(K, 0.0);
  out.covariance.assign(K, std::vector<double>(K, 0.0));
  out.seed = params.seed;

  int idx = 0;
  for (const auto& st : strata) {
    const long long m = std::max<long long>(1000, static_cast<long long>(st.share * params.samples));
    const std::uint64_t seed = stratum_seed(params.seed, idx++);
    MultiQuadResult r;
    if (st.masked_ball) {
      std::vector<ScalarField> masked;
      masked.reserve(K);
      for (const auto& f : fs)
        masked.push_back([&config, rho2, f](const Vec& x) {
          if (rho2 > 0.0)
            for (const auto& a : config.poles)
              if (dist2(a, x) <= rho2) return 0.0;
          return f(x);
        });
      ImportanceSampler ball;
      ball.dim = config.dim;
      ball.config = config;
      ball.components.push_back(
          {1.0, st.center, {RadialLaw::Kind::PowerBall, static_cast<double>(config.dim), st.r_out}});
      r = mc_integrate_multi(masked, ball, m, seed, params.batch_size, params.threads);
    } else {
      r = annulus_integrate_multi(fs, st.center, st.r_in, st.r_out, m, seed,
                                  params.batch_size, params.threads);
    }
    for (std::size_t k = 0; k < K; ++k) {
      out.estimates[k] += r.estimates[k];
      for (std::size_t l = 0; l < K; ++l) out.covariance[k][l] += r.covariance[k][l];
    }
    out.samples += r.samples;
  }
  return out;
}

// Shared-stream estimate of several integrands tied to one trial function.
MultiQuadResult integrate_for_trial(const std::vector<ScalarField>& fs, const TrialFunction& u,
                                    double pole_exponent, const QuadParams& params,
                                    double* excluded_bound) {
  if (u.kind == TrialFunction::Kind::Bump) {
    const ImportanceSampler sampler = bump_sampler(u, pole_exponent);
    if (excluded_bound) *excluded_bound = sampler.excluded_mass_bound;
    const long long m = std::max<long long>(1000, params.samples);
    return mc_integrate_multi(fs, sampler, m, params.seed, params.batch_size, params.threads);
  }
  if (excluded_bound) *excluded_bound = 0.0;
  return stratified_multi(fs, u, params);
}

QuadResult component_result(const MultiQuadResult& r, int k, double excluded_bound) {
  QuadResult q;
  q.estimate = r.estimates[k];
  q.std_error = std::sqrt(std::max(0.0, r.covariance[k][k]));
  q.samples = r.samples;
  q.seed = r.seed;
  q.excluded_mass_bound = excluded_bound;
  return q;
}

bool uniform_weights(const PoleConfig& config) {
  const Rational w(1, config.n());
  for (const auto& a : config.weights)
    if (a != w) return false;
  return true;
}

}  // namespace

std::string identity_name(IdentityId id) {
  switch (id) {
    case IdentityId::hardy_2_1: return "hardy_2_1";
    case IdentityId::rellich_2_2: return "rellich_2_2";
    case IdentityId::xi_zeta_2_10: return "xi_zeta_2_10";
  }
  return "unknown";
}

ResidualReport check_identity(IdentityId id, const PoleConfig& config, const Rational& s,
                              const TrialFunction& u, const QuadParams& params) {
  if (id == IdentityId::xi_zeta_2_10)
    throw PreconditionViolation("xi_zeta_2_10 is pointwise; pass an evaluation point set");
  if (id == IdentityId::rellich_2_2 && u.kind == TrialFunction::Kind::CutoffGroundState)
    throw PreconditionViolation(
        "the order-2 identity needs a C^2 trial; the piecewise-log cutoff has gradient "
        "kinks at its seams, so the two sides differ by uncomputed seam terms");

  const TrialEvaluator ue(u);
  const GroundStateEvaluator phi(config, s);
  const double s_d = s.to_double();

  ScalarField left, right;
  if (id == IdentityId::hardy_2_1) {
    // int |grad u - (grad phi/phi) u|^2  =  int |grad u|^2 + int (lap phi/phi) u^2
    left = [&](const Vec& x) {
      const Jet j = ue.unit_jet(x);
      if (zero_jet(j)) return 0.0;
      const auto d2 = squared_distances(config, x);
      const Vec g = grad_over_phi(config, s_d, x, d2);
      double acc = 0.0;
      for (int k = 0; k < config.dim; ++k) {
        const double t = j.grad[k] - g[k] * j.value;
        acc += t * t;
      }
      return acc;
    };
    right = [&](const Vec& x) {
      const Jet j = ue.unit_jet(x);
      if (zero_jet(j)) return 0.0;
      const auto d2 = squared_distances(config, x);
      return norm2(j.grad) + phi.lap_over_value(d2) * j.value * j.value;
    };
  } else {
    // int |lap u|^2 - int (lap^2 phi/phi) u^2
    //   = int |lap u - (u/phi) lap phi|^2 - 2 int (lap phi/phi) |phi grad(u/phi)|^2
    // assembled from ratios only, so phi itself is never formed.
    const auto bilap = std::make_shared<BilaplacianEvaluator>(config, s);
    left = [&, bilap](const Vec& x) {
      const Jet j = ue.unit_jet(x);
      if (zero_jet(j)) return 0.0;
      return j.lap * j.lap - bilap->ratio(x) * j.value * j.value;
    };
    right = [&](const Vec& x) {
      const Jet j = ue.unit_jet(x);
      if (zero_jet(j)) return 0.0;
      const auto d2 = squared_distances(config, x);
      const double lap_over = phi.lap_over_value(d2);
      const Vec g = grad_over_phi(config, s_d, x, d2);
      const double t1 = j.lap - j.value * lap_over;
      double phigv2 = 0.0;  // |phi grad v|^2 = |grad u - u grad phi/phi|^2
      for (int k = 0; k < config.dim; ++k) {
        const double t = j.grad[k] - g[k] * j.value;
        phigv2 += t * t;
      }
      return t1 * t1 - 2.0 * lap_over * phigv2;
    };
  }

  const double pole_exp = id == IdentityId::hardy_2_1 ? -2.0 : -4.0;
  double excl = 0.0;
  const MultiQuadResult r = integrate_for_trial({left, right}, u, pole_exp, params, &excl);

  ResidualReport report;
  report.identity_id = identity_name(id);
  report.left = component_result(r, 0, excl);
  report.right = component_result(r, 1, excl);
  const double L = r.estimates[0], R = r.estimates[1];
  report.residual = std::abs(L - R) / std::max({std::abs(L), std::abs(R), 1e-30});
  const double var_diff = r.covariance[0][0] + r.covariance[1][1] - 2.0 * r.covariance[0][1];
  report.paired_sigma = std::sqrt(std::max(0.0, var_diff));
  report.pass =
      std::abs(L - R) <= 3.0 * report.paired_sigma || report.residual <= 1e-12;
  return report;
}

ResidualReport check_identity(IdentityId id, const PoleConfig& config, const Rational& s,
                              const std::vector<Vec>& points) {
  if (id != IdentityId::xi_zeta_2_10)
    throw PreconditionViolation("integral identities need a trial function");
  if (points.empty()) throw PreconditionViolation("empty evaluation point set");

  ResidualReport report;
  report.identity_id = identity_name(id);
  double worst = 0.0, worst_l = 0.0, worst_r = 0.0;
  long long used = 0;
  for (const auto& x : points) {
    const XiZetaSides sides = xi_zeta_sides(config, s, x);
    const double L = sides.xi_side;
    const double R = sides.factor * sides.zeta_side;
    if (std::min(std::abs(L), std::abs(R)) < 1e-30) continue;  // away from zero crossings
    ++used;
    const double res = std::abs(L - R) / std::max(std::abs(L), std::abs(R));
    if (res >= worst) {
      worst = res;
      worst_l = L;
      worst_r = R;
    }
  }
  report.left.estimate = worst_l;
  report.right.estimate = worst_r;
  report.left.samples = report.right.samples = used;
  report.residual = worst;
  report.paired_sigma = 0.0;
  report.pass = used > 0 && worst < 1e-10;
  return report;
}

RatioResult rayleigh_quotient(const TrialFunction& u, const PotentialSpec& V, int order,
                              const QuadParams& params) {
  if (order != 1 && order != 2)
    throw PreconditionViolation("derivative order must be 1 or 2");

  const TrialEvaluator ue(u);
  ScalarField num;
  if (order == 1) {
    num = [&ue](const Vec& x) { return norm2(ue.unit_jet(x).grad); };
  } else {
    num = [&ue](const Vec& x) {
      const double l = ue.unit_jet(x).lap;
      return l * l;
    };
  }
  ScalarField den = [&ue, &V](const Vec& x) {
    const Jet j = ue.unit_jet(x);
    if (zero_jet(j)) return 0.0;
    return potential_eval(V, x) * j.value * j.value;
  };

  double excl = 0.0;
  const MultiQuadResult r =
      integrate_for_trial({num, den}, u, worst_pole_exponent(V.kind), params, &excl);

  RatioResult out;
  out.numerator = component_result(r, 0, excl);
  out.denominator = component_result(r, 1, excl);
  out.covariance = r.covariance[0][1];
  const double n_est = r.estimates[0], d_est = r.estimates[1];
  if (std::abs(d_est) <= 3.0 * out.denominator.std_error)
    throw DegenerateDenominator("potential mass of the trial is zero at three sigma");
  out.value = n_est / d_est;
  // Delta method for the ratio; the shared stream supplies the covariance.
  const double var = (r.covariance[0][0] - 2.0 * out.value * r.covariance[0][1] +
                      out.value * out.value * r.covariance[1][1]) /
                     (d_est * d_est);
  out.std_error = std::sqrt(std::max(0.0, var));
  return out;
}

MarginReport verify_inequality(const TrialFunction& u, const PotentialSpec& V,
                               double lambda, int order, const QuadParams& params) {
  MarginReport report;
  report.quotient = rayleigh_quotient(u, V, order, params);
  report.lambda = lambda;
  report.margin = report.quotient.value - lambda;
  report.pass = report.margin >= -3.0 * report.quotient.std_error;
  return report;
}

SupersolutionReport supersolution_check(const PoleConfig& config, const Rational& s,
                                        const std::vector<Vec>& points) {
  if (!uniform_weights(config))
    throw PreconditionViolation("supersolution check is stated for uniform weights");
  if (s < Rational(4 - config.dim) || s >= Rational(0))
    throw PreconditionViolation("supersolution range is 4-N <= s < 0, got s = " + s.str());
  if (points.empty()) throw PreconditionViolation("empty point set");

  const PotentialSpec W = make_rellich_family(config, s);
  const GroundStateEvaluator phi(config, s);
  const BilaplacianEvaluator bilap(config, s);

  SupersolutionReport report;
  report.min_hardy_slack = std::numeric_limits<double>::infinity();
  report.min_rellich_slack = std::numeric_limits<double>::infinity();
  double scale = 0.0;
  for (const auto& x : points) {
    const auto d2 = squared_distances(config, x);
    const double hardy = -phi.lap_over_value(d2);
    const double ratio = bilap.ratio(x);
    const double w = potential_eval(W, x);
    const double slack = ratio - w;
    const double mag = std::max(std::abs(ratio), std::abs(w));
    report.min_hardy_slack = std::min(report.min_hardy_slack, hardy);
    report.min_rellich_slack = std::min(report.min_rellich_slack, slack);
    report.max_rellich_rel_residual =
        std::max(report.max_rellich_rel_residual, std::abs(slack) / std::max(mag, 1e-30));
    scale = std::max(scale, mag);
  }
  report.points = static_cast<int>(points.size());
  report.hardy_nonneg = report.min_hardy_slack >= 0.0;
  // phi_s solves the equation exactly at uniform weights, so the slack is
  // pure rounding; nonnegativity is asserted up to that rounding scale.
  report.rellich_nonneg = report.min_rellich_slack >= -1e-10 * std::max(1.0, scale);
  return report;
}

std::vector<SharpnessPoint> sharpness_probe(
    const PoleConfig& config, const std::vector<std::pair<double, double>>& delta_R_schedule,
    const QuadParams& params) {
  if (config.n() < 3)
    throw PreconditionViolation("mollified sweep needs n >= 3; use the cutoff sweep for n = 2");
  if (!uniform_weights(config))
    throw PreconditionViolation("sharpness probes are stated for uniform weights");

  const PotentialSpec V = make_vn(config);
  const Rational s(4 - config.dim);
  std::vector<SharpnessPoint> out;
  for (const auto& [delta, R] : delta_R_schedule) {
    const TrialFunction u = make_mollified_ground_state(config, s, R, delta);
    out.push_back({delta, R, rayleigh_quotient(u, V, 2, params)});
  }
  return out;
}

std::vector<SharpnessPoint> sharpness_probe(const PoleConfig& config,
                                            const std::vector<double>& eps_schedule,
                                            const QuadParams& params) {
  if (!uniform_weights(config))
    throw PreconditionViolation("sharpness probes are stated for uniform weights");

  const PotentialSpec V = make_vn(config);
  std::vector<SharpnessPoint> out;
  for (const double eps : eps_schedule) {
    const TrialFunction u = make_cutoff_ground_state(config, eps);
    out.push_back({eps, 0.0, rayleigh_quotient(u, V, 2, params)});
  }
  return out;
}

std::vector<std::pair<double, double>> documented_mgs_schedule() {
  return {{5e-2, 20.0}, {1e-4, 100.0}, {1e-6, 400.0}, {1e-9, 2000.0}};
}

std::vector<double> documented_cutoff_schedule() { return {0.1, 0.02, 1e-3}; }

}  // namespace rellich
