#include "rellich/quadrature.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include "rellich/rng.hpp"

namespace rellich {

namespace {

// Streaming joint moments of a k-vector: count, mean, centered comoment
// matrix.  merge() is Chan's pairwise combination; reducing batches in a
// fixed order keeps results bit-identical whatever computed them.
struct Moments {
  long long count = 0;
  std::vector<double> mean;
  std::vector<std::vector<double>> comoment;

  explicit Moments(size_t k)
      : mean(k, 0.0), comoment(k, std::vector<double>(k, 0.0)) {}

  void add(const std::vector<double>& v) {
    ++count;
    const size_t k = mean.size();
    std::vector<double> delta(k);
    for (size_t a = 0; a < k; ++a) delta[a] = v[a] - mean[a];
    for (size_t a = 0; a < k; ++a) mean[a] += delta[a] / count;
    for (size_t a = 0; a < k; ++a) {
      const double post = v[a] - mean[a];
      for (size_t b = 0; b < k; ++b) comoment[a][b] += post * delta[b];
    }
  }

  void merge(const Moments& o) {
    if (o.count == 0) return;
    if (count == 0) {
      *this = o;
      return;
    }
    const size_t k = mean.size();
    const double na = static_cast<double>(count);
    const double nb = static_cast<double>(o.count);
    const double nab = na + nb;
    std::vector<double> delta(k);
    for (size_t a = 0; a < k; ++a) delta[a] = o.mean[a] - mean[a];
    for (size_t a = 0; a < k; ++a) {
      for (size_t b = 0; b < k; ++b) {
        comoment[a][b] += o.comoment[a][b] + delta[a] * delta[b] * na * nb / nab;
      }
    }
    for (size_t a = 0; a < k; ++a) mean[a] += delta[a] * nb / nab;
    count += o.count;
  }
};

// Runs fn over batches [0, B) on a small thread pool, then returns the
// per-batch results in batch order.  Exceptions from workers are rethrown.
std::vector<Moments> run_batches(
    long long M, long long batch_size, int threads, size_t k,
    const std::function<void(long long, long long, Moments&)>& fn) {
  if (batch_size <= 0) throw PreconditionViolation("batch size must be positive");
  const long long B = (M + batch_size - 1) / batch_size;
  std::vector<Moments> results(B, Moments(k));

  int T = threads > 0 ? threads
                      : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  T = static_cast<int>(std::min<long long>(T, B));

  std::atomic<long long> next{0};
  std::vector<std::exception_ptr> errors(T, nullptr);
  auto worker = [&](int t) {
    try {
      for (long long b = next.fetch_add(1); b < B; b = next.fetch_add(1)) {
        const long long count = std::min(batch_size, M - b * batch_size);
        fn(b, count, results[b]);
      }
    } catch (...) {
      errors[t] = std::current_exception();
    }
  };

  if (T <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(T);
    for (int t = 0; t < T; ++t) pool.emplace_back(worker, t);
    for (std::thread& th : pool) th.join();
  }
  for (const std::exception_ptr& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

MultiQuadResult finalize(std::vector<Moments> batches, long long M, std::uint64_t seed,
                         size_t k) {
  Moments total(k);
  for (const Moments& m : batches) total.merge(m);

  MultiQuadResult out;
  out.samples = M;
  out.seed = seed;
  out.estimates = total.mean;
  out.covariance.assign(k, std::vector<double>(k, 0.0));
  if (M > 1) {
    // covariance of the mean estimators: comoment / (M (M-1))
    const double denom = static_cast<double>(M) * static_cast<double>(M - 1);
    for (size_t a = 0; a < k; ++a) {
      for (size_t b = 0; b < k; ++b) out.covariance[a][b] = total.comoment[a][b] / denom;
    }
  }
  return out;
}

Vec sample_from(const ImportanceSampler& s, BatchRng& rng) {
  const double u = rng.uniform();
  size_t pick = s.components.size() - 1;
  double acc = 0.0;
  for (size_t c = 0; c < s.components.size(); ++c) {
    acc += s.components[c].weight;
    if (u <= acc) {
      pick = c;
      break;
    }
  }
  const SamplerComponent& comp = s.components[pick];
  double r;
  if (comp.law.kind == RadialLaw::Kind::PowerBall) {
    r = comp.law.radius * std::pow(rng.uniform(), 1.0 / comp.law.shape);
  } else {
    r = comp.law.radius * std::pow(rng.uniform(), -1.0 / comp.law.shape);
  }
  const Vec dir = rng.unit_direction(s.dim);
  Vec x(comp.center);
  axpy(x, r, dir);
  return x;
}

}  // namespace

double ImportanceSampler::density(const Vec& x) const {
  const double omega = unit_sphere_area(dim);
  double q = 0.0;
  for (const SamplerComponent& comp : components) {
    const double r = std::sqrt(dist2(x, comp.center));
    if (comp.law.kind == RadialLaw::Kind::PowerBall) {
      if (r >= comp.law.radius) continue;
      if (r == 0.0) return std::numeric_limits<double>::infinity();
      q += comp.weight * comp.law.shape * std::pow(r, comp.law.shape - dim) /
           (std::pow(comp.law.radius, comp.law.shape) * omega);
    } else {
      if (r <= comp.law.radius) continue;
      q += comp.weight * comp.law.shape * std::pow(comp.law.radius, comp.law.shape) *
           std::pow(r, -comp.law.shape - dim) / omega;
    }
  }
  return q;
}

ImportanceSampler build_sampler(const PoleConfig& config, const SingularProfile& profile,
                                const SamplerHints& hints) {
  const IntegrabilityVerdict verdict = is_integrable(profile, config.dim);
  if (!verdict.integrable) {
    throw NonIntegrableTarget("refusing to build a sampler: " + verdict.reason);
  }
  if (profile.local_exponents.size() != static_cast<size_t>(config.n())) {
    throw PreconditionViolation("profile size does not match pole count");
  }

  const int N = config.dim;
  ImportanceSampler s;
  s.dim = N;
  s.config = config;

  const double bulk_radius =
      hints.bulk_radius > 0.0 ? hints.bulk_radius : 2.0 * (config.max_pole_norm + 1.0);
  const double tail_inner = hints.tail_inner > 0.0 ? hints.tail_inner : bulk_radius / 2.0;
  double pole_radius = hints.pole_radius;
  if (pole_radius <= 0.0) {
    pole_radius = std::isfinite(config.min_separation) ? config.min_separation / 2.0 : 1.0;
  }

  // One resolving ball per genuinely singular pole.
  std::vector<SamplerComponent> pole_comps;
  const double omega = unit_sphere_area(N);
  double excluded = 0.0;
  for (int i = 0; i < config.n(); ++i) {
    const double p = profile.local_exponents[i].to_double();
    excluded += omega * std::pow(config.exclusion_radius, N + p) / (N + p);
    if (p >= 0.0) continue;
    SamplerComponent comp;
    comp.center = config.poles[i];
    comp.law = {RadialLaw::Kind::PowerBall, (p + N) / 2.0, pole_radius};
    pole_comps.push_back(comp);
    s.notes.push_back("pole " + std::to_string(i) + ": beta = " +
                      std::to_string(comp.law.shape) +
                      " < p + N = " + std::to_string(p + N) + " (finite variance)");
  }
  s.excluded_mass_bound = excluded;

  const double q_inf = profile.infinity_exponent.to_double();
  const double gamma = std::max(1.0, (-q_inf - N) / 2.0 + N);

  SamplerComponent tail;
  tail.center = Vec(N, 0.0);
  tail.law = {RadialLaw::Kind::ParetoTail, gamma, tail_inner};
  SamplerComponent bulk;
  bulk.center = Vec(N, 0.0);
  bulk.law = {RadialLaw::Kind::PowerBall, static_cast<double>(N), bulk_radius};

  // Weights 0.5 poles / 0.25 tail / 0.25 bulk, renormalized without poles.
  if (pole_comps.empty()) {
    tail.weight = 0.5;
    bulk.weight = 0.5;
  } else {
    for (SamplerComponent& comp : pole_comps) comp.weight = 0.5 / pole_comps.size();
    tail.weight = 0.25;
    bulk.weight = 0.25;
  }
  s.components = std::move(pole_comps);
  s.components.push_back(tail);
  s.components.push_back(bulk);
  return s;
}

MultiQuadResult mc_integrate_multi(const std::vector<ScalarField>& fs,
                                   const ImportanceSampler& sampler, long long M,
                                   std::uint64_t seed, long long batch_size, int threads) {
  if (M < 1000) throw PreconditionViolation("sample count must be at least 10^3");
  if (fs.empty()) throw PreconditionViolation("need at least one integrand");
  const size_t k = fs.size();
  const double excl2 = sampler.config.exclusion_radius * sampler.config.exclusion_radius;

  auto batch_fn = [&](long long b, long long count, Moments& m) {
    BatchRng rng(seed, static_cast<std::uint64_t>(b));
    std::vector<double> v(k, 0.0);
    for (long long i = 0; i < count; ++i) {
      const Vec x = sample_from(sampler, rng);
      bool excluded = false;
      for (const Vec& a : sampler.config.poles) {
        if (dist2(x, a) <= excl2) {
          excluded = true;
          break;
        }
      }
      if (excluded) {
        std::fill(v.begin(), v.end(), 0.0);
      } else {
        const double q = sampler.density(x);
        for (size_t j = 0; j < k; ++j) {
          const double fx = fs[j](x);
          if (!std::isfinite(fx)) {
            throw NaNEncountered("integrand " + std::to_string(j) +
                                 " non-finite at a sampled point");
          }
          v[j] = fx / q;
        }
      }
      m.add(v);
    }
  };

  std::vector<Moments> batches = run_batches(M, batch_size, threads, k, batch_fn);
  return finalize(std::move(batches), M, seed, k);
}

QuadResult mc_integrate(const ScalarField& f, const ImportanceSampler& sampler,
                        long long M, std::uint64_t seed, long long batch_size,
                        int threads) {
  const MultiQuadResult multi = mc_integrate_multi({f}, sampler, M, seed, batch_size, threads);
  QuadResult out;
  out.estimate = multi.estimates[0];
  out.std_error = std::sqrt(std::max(0.0, multi.covariance[0][0]));
  out.samples = multi.samples;
  out.seed = multi.seed;
  out.excluded_mass_bound = sampler.excluded_mass_bound;
  return out;
}

double radial_reference_integral(int N, double alpha, double R) {
  if (R <= 0.0) throw PreconditionViolation("radius must be positive");
  if (alpha >= N) {
    throw DivergentIntegral("integral of |x|^-" + std::to_string(alpha) +
                            " over a ball in dimension " + std::to_string(N) +
                            " diverges at the origin");
  }
  return unit_sphere_area(N) * std::pow(R, N - alpha) / (N - alpha);
}

MultiQuadResult annulus_integrate_multi(const std::vector<ScalarField>& fs,
                                        const Vec& center, double r_in, double r_out,
                                        long long M, std::uint64_t seed,
                                        long long batch_size, int threads) {
  if (!(0.0 < r_in && r_in < r_out)) {
    throw PreconditionViolation("annulus requires 0 < r_in < r_out");
  }
  if (fs.empty()) throw PreconditionViolation("need at least one integrand");
  const int N = static_cast<int>(center.size());
  const size_t k = fs.size();
  const double L = std::log(r_out / r_in);
  const double omega = unit_sphere_area(N);

  auto batch_fn = [&](long long b, long long count, Moments& m) {
    BatchRng rng(seed, static_cast<std::uint64_t>(b));
    std::vector<double> v(k, 0.0);
    for (long long i = 0; i < count; ++i) {
      const double r = r_in * std::exp(L * rng.uniform());
      const Vec dir = rng.unit_direction(N);
      Vec x(center);
      axpy(x, r, dir);
      // log-uniform radial density: q(x) = 1/(omega L r^N)
      const double q = 1.0 / (omega * L * std::pow(r, N));
      for (size_t j = 0; j < k; ++j) {
        const double fx = fs[j](x);
        if (!std::isfinite(fx)) {
          throw NaNEncountered("integrand " + std::to_string(j) +
                               " non-finite on the annulus");
        }
        v[j] = fx / q;
      }
      m.add(v);
    }
  };

  std::vector<Moments> batches = run_batches(M, batch_size, threads, k, batch_fn);
  return finalize(std::move(batches), M, seed, k);
}

QuadResult annulus_integrate(const ScalarField& f, const Vec& center, double r_in,
                             double r_out, long long M, std::uint64_t seed,
                             long long batch_size, int threads) {
  const MultiQuadResult multi =
      annulus_integrate_multi({f}, center, r_in, r_out, M, seed, batch_size, threads);
  QuadResult out;
  out.estimate = multi.estimates[0];
  out.std_error = std::sqrt(std::max(0.0, multi.covariance[0][0]));
  out.samples = multi.samples;
  out.seed = multi.seed;
  return out;
}

}  // namespace rellich
