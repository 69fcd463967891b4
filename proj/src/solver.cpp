#include "bbmb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <sstream>

#include "bbmb/error.hpp"
#include "bbmb/fft.hpp"
#include "bbmb/norms.hpp"
#include "bbmb/profiles.hpp"
#include "bbmb/semigroup.hpp"
#include "bbmb/spectral.hpp"

namespace bbmb {

using cplx = std::complex<double>;
using Spectrum = std::vector<cplx>;

double Trajectory::mass_drift() const {
  if (mass_log.empty()) return 0.0;
  const double ref = std::max(std::abs(mass_log.front()), 1.0);
  double worst = 0.0;
  for (double m : mass_log) worst = std::max(worst, std::abs(m - mass_log.front()) / ref);
  return worst;
}

double Trajectory::max_high_band_fraction() const {
  double worst = 0.0;
  for (double f : high_band_fraction) worst = std::max(worst, f);
  return worst;
}

namespace {

// phi_k(z) = sum_n z^n / (n + k)!, summed directly below |z| = 1.
struct Phi {
  cplx p1, p2, p3;
};

Phi phi_functions(cplx z) {
  if (std::abs(z) < 1.0) {
    Phi r{0.0, 0.0, 0.0};
    cplx term = 1.0;  // z^n / n!
    double f1 = 1.0, f2 = 2.0, f3 = 6.0;  // (n+1)!/n!, (n+2)!/n!, (n+3)!/n! at n = 0
    for (int n = 0; n < 24; ++n) {
      r.p1 += term / f1;
      r.p2 += term / f2;
      r.p3 += term / f3;
      const double m = n + 1;
      term *= z / m;
      f1 *= (m + 1.0) / m;
      f2 *= (m + 2.0) / m;
      f3 *= (m + 3.0) / m;
    }
    return r;
  }
  const cplx ez = std::exp(z);
  const cplx p1 = (ez - 1.0) / z;
  const cplx p2 = (ez - 1.0 - z) / (z * z);
  const cplx p3 = (ez - 1.0 - z - 0.5 * z * z) / (z * z * z);
  return {p1, p2, p3};
}

// Per-mode ETDRK4 coefficients for the linear exponent `linear` and step h.
struct EtdCoefficients {
  double h = 0.0;
  Spectrum e, e2, q, f1, f2, f3;

  EtdCoefficients(const Spectrum& linear, double step) : h(step) {
    const std::size_t n = linear.size();
    e.resize(n), e2.resize(n), q.resize(n), f1.resize(n), f2.resize(n), f3.resize(n);
    for (std::size_t k = 0; k < n; ++k) {
      cplx z = linear[k] * h;
      if (z.real() < -700.0) z = cplx(-700.0, z.imag());
      const Phi full = phi_functions(z);
      const Phi half = phi_functions(0.5 * z);
      e[k] = std::exp(z);
      e2[k] = std::exp(0.5 * z);
      q[k] = 0.5 * h * half.p1;
      f1[k] = h * (full.p1 - 3.0 * full.p2 + 4.0 * full.p3);
      f2[k] = h * (full.p2 - 2.0 * full.p3);
      f3[k] = h * (-full.p2 + 4.0 * full.p3);
    }
  }
};

// Nonlinear term of the full equation in the half spectrum (unnormalized FFT coefficients).
class BurgersTerm {
 public:
  BurgersTerm(const GridSpec& g, const ModelParams& p)
      : g_(g), fft_(g.n_points), phys_(g.n_points), work_(g.half_size()), mult_(g.half_size()) {
    const auto cutoff = static_cast<std::ptrdiff_t>(g.n_points / 3);
    for (std::size_t k = 0; k < g.half_size(); ++k) {
      const double xi = g.wavenumber(k);
      const bool keep = std::abs(g.mode(k)) <= cutoff && k != g.nyquist_index();
      mult_[k] = keep ? -0.5 * p.beta * cplx(0.0, xi) / (1.0 + xi * xi) : 0.0;
      keep_.push_back(keep);
    }
  }

  void operator()(const Spectrum& v, double, Spectrum& out) {
    const double inv_n = 1.0 / static_cast<double>(g_.n_points);
    for (std::size_t k = 0; k < v.size(); ++k) work_[k] = keep_[k] ? v[k] * inv_n : 0.0;
    fft_.inverse(work_, phys_);
    for (double& u : phys_) u *= u;
    fft_.forward(phys_, out);
    for (std::size_t k = 0; k < out.size(); ++k) out[k] *= mult_[k];
  }

 private:
  GridSpec g_;
  RealFft fft_;
  std::vector<double> phys_;
  Spectrum work_;
  Spectrum mult_;
  std::vector<bool> keep_;
};

// -(beta chi z)_x + lambda_x with chi evaluated in closed form at the stage time.
class AuxTerm {
 public:
  AuxTerm(const GridSpec& g, const ModelParams& p, Forcing lambda)
      : g_(g), p_(p), lambda_(std::move(lambda)), fft_(g.n_points), phys_(g.n_points), work_(g.half_size()) {}

  void operator()(const Spectrum& v, double t, Spectrum& out) {
    const double inv_n = 1.0 / static_cast<double>(g_.n_points);
    for (std::size_t k = 0; k < v.size(); ++k) work_[k] = v[k] * inv_n;
    fft_.inverse(work_, phys_);
    const Stage& s = stage(t);
    for (std::size_t j = 0; j < phys_.size(); ++j) phys_[j] *= s.beta_chi[j];
    fft_.forward(phys_, out);
    for (std::size_t k = 0; k < out.size(); ++k) {
      if (k == g_.nyquist_index()) {
        out[k] = 0.0;
        continue;
      }
      const cplx ixi(0.0, g_.wavenumber(k));
      out[k] = -ixi * out[k];
      if (!s.lambda_hat.empty()) out[k] += ixi * s.lambda_hat[k];
    }
  }

 private:
  struct Stage {
    std::vector<double> beta_chi;
    Spectrum lambda_hat;
  };

  const Stage& stage(double t) {
    auto it = cache_.find(t);
    if (it != cache_.end()) return it->second;
    // stage times only move forward; keep the cache small
    while (cache_.size() >= 4) cache_.erase(cache_.begin());
    Stage s;
    s.beta_chi.resize(g_.n_points);
    for (std::size_t j = 0; j < g_.n_points; ++j) s.beta_chi[j] = p_.beta * chi(g_.x(j), t, p_);
    if (lambda_) {
      const Field lam = lambda_(t);
      require_same_grid(lam.grid, g_);
      s.lambda_hat.resize(g_.half_size());
      fft_.forward(lam.values, s.lambda_hat);
    }
    return cache_.emplace(t, std::move(s)).first->second;
  }

  GridSpec g_;
  ModelParams p_;
  Forcing lambda_;
  RealFft fft_;
  std::vector<double> phys_;
  Spectrum work_;
  std::map<double, Stage> cache_;
};

template <class Nonlinear>
void etd_step(Spectrum& v, double t, const EtdCoefficients& c, Nonlinear& nl, Spectrum& na, Spectrum& nb,
              Spectrum& nc, Spectrum& nv, Spectrum& a, Spectrum& b, Spectrum& cc) {
  const std::size_t n = v.size();
  const double h = c.h;
  nl(v, t, nv);
  for (std::size_t k = 0; k < n; ++k) a[k] = c.e2[k] * v[k] + c.q[k] * nv[k];
  nl(a, t + 0.5 * h, na);
  for (std::size_t k = 0; k < n; ++k) b[k] = c.e2[k] * v[k] + c.q[k] * na[k];
  nl(b, t + 0.5 * h, nb);
  for (std::size_t k = 0; k < n; ++k) cc[k] = c.e2[k] * a[k] + c.q[k] * (2.0 * nb[k] - nv[k]);
  nl(cc, t + h, nc);
  for (std::size_t k = 0; k < n; ++k) {
    v[k] = c.e[k] * v[k] + c.f1[k] * nv[k] + 2.0 * c.f2[k] * (na[k] + nb[k]) + c.f3[k] * nc[k];
  }
}

double max_coefficient(const Spectrum& v) {
  double m = 0.0;
  for (const cplx& c : v) m = std::max(m, std::abs(c));
  return m;
}

bool spectrum_finite(const Spectrum& v) {
  return std::all_of(v.begin(), v.end(), [](const cplx& c) { return std::isfinite(c.real()) && std::isfinite(c.imag()); });
}

Spectrum forward_spectrum(const Field& f) {
  RealFft fft(f.grid.n_points);
  Spectrum v(f.grid.half_size());
  fft.forward(f.values, v);
  return v;
}

Field field_from(const GridSpec& g, const Spectrum& v, RealFft& fft) {
  Spectrum scaled(v);
  const double inv_n = 1.0 / static_cast<double>(g.n_points);
  for (auto& c : scaled) c *= inv_n;
  Field out(g);
  fft.inverse(scaled, out.values);
  return out;
}

void check_samples(const GridSpec& g, const std::vector<double>& t_samples, const SolverOptions& opts) {
  if (t_samples.empty()) throw ConfigError("no sample times requested");
  double prev = -1.0;
  for (double t : t_samples) {
    if (!std::isfinite(t) || t < 0.0 || t <= prev) throw ConfigError("sample times must be finite, >= 0 and strictly increasing");
    prev = t;
  }
  if (opts.enforce_validity && t_samples.back() > validity_horizon(g)) {
    std::ostringstream os;
    os << "t = " << t_samples.back() << " exceeds the validity window (L/8)^2 = " << validity_horizon(g);
    throw DomainValidityError(os.str());
  }
}

struct Unstable {};

template <class Nonlinear>
Trajectory run_once(const Field& f0, const ModelParams& p, const Spectrum& linear, Nonlinear& nl,
                    const std::vector<double>& t_samples, double base_dt) {
  const GridSpec& g = f0.grid;
  RealFft fft(g.n_points);
  Spectrum v = forward_spectrum(f0);
  const double initial_max = max_coefficient(v);
  const std::size_t n = v.size();
  Spectrum na(n), nb(n), nc(n), nv(n), a(n), b(n), cc(n);

  Trajectory tr;
  tr.params = p;
  tr.grid = g;
  auto record = [&](double t) {
    Field snap = field_from(g, v, fft);
    tr.times.push_back(t);
    tr.mass_log.push_back(mass(snap));
    tr.high_band_fraction.push_back(high_band_energy_fraction(snap));
    tr.snapshots.push_back(std::move(snap));
  };

  double t = 0.0;
  std::unique_ptr<EtdCoefficients> coeffs;
  for (double target : t_samples) {
    if (target == 0.0) {
      record(0.0);
      continue;
    }
    const double span = target - t;
    const auto steps = static_cast<std::size_t>(std::max(1.0, std::ceil(span / base_dt - 1e-9)));
    const double h = span / static_cast<double>(steps);
    if (!coeffs || coeffs->h != h) coeffs = std::make_unique<EtdCoefficients>(linear, h);
    StepStats stats{target, h, steps, 0.0};
    const double inv_n = 1.0 / static_cast<double>(g.n_points);
    for (std::size_t s = 0; s < steps; ++s) {
      etd_step(v, t, *coeffs, nl, na, nb, nc, nv, a, b, cc);
      t = (s + 1 == steps) ? target : t + h;
      stats.max_nyquist = std::max(stats.max_nyquist, std::abs(v[g.nyquist_index()]) * inv_n);
      if (!spectrum_finite(v) || (initial_max > 0.0 && max_coefficient(v) > 1e6 * initial_max)) throw Unstable{};
    }
    tr.step_stats.push_back(stats);
    record(target);
  }
  return tr;
}

template <class Nonlinear>
Trajectory run_with_halving(const Field& f0, const ModelParams& p, const Spectrum& linear, Nonlinear& nl,
                            const std::vector<double>& t_samples, double base_dt, int max_halvings) {
  double dt = base_dt;
  for (int attempt = 0;; ++attempt) {
    try {
      Trajectory tr = run_once(f0, p, linear, nl, t_samples, dt);
      tr.halvings = attempt;
      return tr;
    } catch (const Unstable&) {
      if (attempt >= max_halvings) {
        std::ostringstream os;
        os << "integration unstable after " << attempt << " step halvings (dt = " << dt << ")";
        throw NumericalInstability(os.str());
      }
      dt *= 0.5;
    }
  }
}

Spectrum bbm_exponent(const GridSpec& g, const ModelParams& p) {
  Spectrum lin(g.half_size());
  for (std::size_t k = 0; k < lin.size(); ++k) {
    const double xi = g.wavenumber(k);
    const double denom = 1.0 + xi * xi;
    const double im = (k == g.nyquist_index()) ? 0.0 : p.gamma * xi * xi * xi / denom;
    lin[k] = cplx(-xi * xi / denom, im);
  }
  return lin;
}

Spectrum heat_exponent(const GridSpec& g) {
  Spectrum lin(g.half_size());
  for (std::size_t k = 0; k < lin.size(); ++k) {
    const double xi = g.wavenumber(k);
    lin[k] = -xi * xi;
  }
  return lin;
}

}  // namespace

Field rhs_nonlinear(const Field& u, const ModelParams& p) {
  const GridSpec& g = u.grid;
  BurgersTerm term(g, p);
  Spectrum v = forward_spectrum(u);
  Spectrum out(v.size());
  term(v, 0.0, out);
  RealFft fft(g.n_points);
  return field_from(g, out, fft);
}

Field step_etdrk4(const Field& u, double t, double dt, const ModelParams& p) {
  if (!(dt > 0.0) || dt > kMaxStep) throw ConfigError("step_etdrk4 requires 0 < dt <= 1");
  const GridSpec& g = u.grid;
  BurgersTerm term(g, p);
  const EtdCoefficients c(bbm_exponent(g, p), dt);
  Spectrum v = forward_spectrum(u);
  const double initial_max = max_coefficient(v);
  const std::size_t n = v.size();
  Spectrum na(n), nb(n), nc(n), nv(n), a(n), b(n), cc(n);
  etd_step(v, t, c, term, na, nb, nc, nv, a, b, cc);
  if (!spectrum_finite(v) || (initial_max > 0.0 && max_coefficient(v) > 1e6 * initial_max)) {
    throw NumericalInstability("step_etdrk4: spectral coefficients blew up");
  }
  RealFft fft(g.n_points);
  return field_from(g, v, fft);
}

double default_dt(const Field& u0) {
  return std::min(0.1, 0.5 * u0.grid.dx() / std::max(1.0, lp_norm(u0, Norm::Linf)));
}

double validity_horizon(const GridSpec& g) {
  const double r = g.half_width / 8.0;
  return r * r;
}

Trajectory integrate(const Field& u0, const ModelParams& p, const std::vector<double>& t_samples,
                     const SolverOptions& opts) {
  p.validate();
  check_samples(u0.grid, t_samples, opts);
  if (!u0.all_finite()) throw ConfigError("initial data contains non-finite values");
  const double amp = lp_norm(u0, Norm::Linf);
  if (opts.amplitude_cap > 0.0 && amp > opts.amplitude_cap) {
    std::ostringstream os;
    os << "||u0||_inf = " << amp << " exceeds the small-data cap " << opts.amplitude_cap;
    throw ConfigError(os.str());
  }
  const double dt = opts.dt > 0.0 ? opts.dt : default_dt(u0);
  if (dt > kMaxStep) throw ConfigError("time step exceeds 1");
  BurgersTerm term(u0.grid, p);
  return run_with_halving(u0, p, bbm_exponent(u0.grid, p), term, t_samples, dt, opts.max_halvings);
}

Trajectory solve_aux(const Field& z0, const Forcing& lambda, const ModelParams& p,
                     const std::vector<double>& t_samples, const SolverOptions& opts) {
  p.validate();
  check_samples(z0.grid, t_samples, opts);
  if (!z0.all_finite()) throw ConfigError("initial data contains non-finite values");
  const GridSpec& g = z0.grid;
  double dt = opts.dt;
  if (!(dt > 0.0)) {
    const double speed = std::abs(p.beta) * std::abs(chi_star(0.0, p)) * 2.0;
    dt = std::min(0.1, 0.5 * g.dx() / std::max(1.0, speed));
  }
  if (dt > kMaxStep) throw ConfigError("time step exceeds 1");
  AuxTerm term(g, p, lambda);
  return run_with_halving(z0, p, heat_exponent(g), term, t_samples, dt, opts.max_halvings);
}

Trajectory solve_second_aux(const ModelParams& p, const GridSpec& g, const std::vector<double>& t_samples,
                            const SolverOptions& opts) {
  if (std::abs(p.mass) > 1.0) throw ConfigError("solve_second_aux requires |M| <= 1");
  Forcing lambda;
  if (p.gamma != 0.0) {
    lambda = [g, p](double t) {
      Field chi_xx = derivative(chi_field(g, t, p), 2);
      chi_xx *= -p.gamma;
      return chi_xx;
    };
  }
  return solve_aux(Field(g), lambda, p, t_samples, opts);
}

}  // namespace bbmb
