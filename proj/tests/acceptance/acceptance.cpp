#include "circkde/distributions.hpp"
#include "circkde/estimator.hpp"
#include "circkde/kernels.hpp"
#include "circkde/mise_theory.hpp"
#include "circkde/rng.hpp"
#include "circkde/selectors.hpp"
#include "circkde/simulation.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

using namespace circkde;

namespace {

struct Outcome
{
  bool pass = true;
  //! Failures that reproduce a known defect of the stated criterion and do
  //! not count against the exit status.
  bool known_only = true;
  std::vector<std::string> notes;

  void check(bool ok, const std::string& what, bool known = false)
  {
    if (!ok) {
      pass = false;
      known_only = known_only && known;
      notes.push_back((known ? "known: " : "") + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

std::string fmt(const char* f, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

int threads()
{
  if (const char* env = std::getenv("CIRCKDE_THREADS"))
    return std::atoi(env);
  return 0;
}

EstimatorConfig er(KernelFamily k)
{
  return { k, SelectorKind::er, 0.0, k == KernelFamily::wsinc ? 1 : 2 };
}

EstimatorConfig fixed(KernelFamily k, double nu, int c)
{
  return { k, SelectorKind::fixed, nu, c };
}

double integrate(const std::function<double(double)>& f, int grid = 4096)
{
  const auto theta = uniform_grid(grid);
  std::vector<double> v(theta.size());
  for (std::size_t i = 0; i < theta.size(); ++i)
    v[i] = f(theta[i]);
  return trapezoid_integral(v);
}

//! Cross-validation score straight from its definition.
double direct_cv(const Sample& s, int nu, int c)
{
  const FlatTopKernel k{ double(nu), c, Taper::linear };
  const std::size_t n = s.size();
  const auto grid = uniform_grid(512);
  std::vector<double> sq(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    double f = 0.0;
    for (const Angle& a : s)
      f += eval_flat_top(grid[g] - a.value(), k);
    f /= static_cast<double>(n);
    sq[g] = f * f;
  }
  double loo = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double fi = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i)
        fi += eval_flat_top(s[i].value() - s[j].value(), k);
    loo += fi / static_cast<double>(n - 1);
  }
  return trapezoid_integral(sq) - 2.0 * loo / static_cast<double>(n);
}

// 1. Table rows at desk scale.
Outcome table_rows()
{
  struct Row
  {
    const char* id;
    KernelFamily kernel;
    double reference;
    double reference_se;
  };
  const Row rows[] = {
    { "M1", KernelFamily::wsinc, 0.14, 0.07 },  { "M4", KernelFamily::wsinc, 2.41, 0.12 },
    { "M4", KernelFamily::wtrap, 2.42, 0.13 },  { "M3", KernelFamily::wtrap, 15.16, 0.41 },
    { "M5", KernelFamily::wtrap, 49.01, 0.75 },
  };
  Outcome o;
  for (const Row& r : rows) {
    SimulationConfig cfg;
    cfg.scenario_id = r.id;
    cfg.n = 1000;
    cfg.reps = 200;
    cfg.estimators = { er(r.kernel) };
    cfg.seed = 1;
    cfg.threads = threads();
    const auto s = run_scenario(cfg).estimators.front();
    const double tol = 5.0 * r.reference_se * std::sqrt(1000.0 / 200.0);
    const std::string line = fmt("%s %s mean=%.3f se=%.3f reference=%.2f tol=%.2f", r.id,
                                 s.config.to_string().c_str(), s.mean_ise_1e4, s.se_1e4, r.reference, tol);
    o.note(line);
    o.check(s.failures.empty(), line + " (failed reps)");
    o.check(std::abs(s.mean_ise_1e4 - r.reference) <= tol, line);
  }
  return o;
}

// 2. Convergence-rate slopes.
Outcome slopes()
{
  const std::vector<long> ns{ 50, 100, 200, 400, 800, 1600 };
  Outcome o;
  struct Case
  {
    const char* id;
    double lo;
    double hi;
  };
  for (const Case& c : { Case{ "M4", -1.15, -0.85 }, Case{ "M5", -1.1, -0.75 }, Case{ "M3", -1.1, -0.70 } }) {
    const auto r = convergence_study(c.id, ns, KernelFamily::wsinc, 1, 500, 7, threads());
    if (!r.slope) {
      o.check(false, fmt("%s slope undefined", c.id));
      continue;
    }
    const std::string line = fmt("%s slope=%.4f in [%.2f, %.2f]", c.id, *r.slope, c.lo, c.hi);
    o.note(line);
    o.check(*r.slope >= c.lo && *r.slope <= c.hi, line);
  }
  const auto m1 = convergence_study("M1", ns, KernelFamily::wsinc, 1, 500, 7, threads());
  bool zeros = m1.degenerate && !m1.slope;
  for (const auto& p : m1.points)
    zeros = zeros && p.nu == 0 && p.mean_ise == 0.0;
  o.check(zeros, "M1 with nu=0 is not exact recovery at every n");
  if (zeros)
    o.note("M1 exact recovery at every n");
  return o;
}

// 3. Exact MISE against the Monte Carlo mean.
Outcome exact_mise_spots()
{
  struct Spot
  {
    const char* id;
    EstimatorConfig est;
    long n;
  };
  const Spot spots[] = {
    { "M1", fixed(KernelFamily::wsinc, 0, 1), 100 },
    { "M4", fixed(KernelFamily::wsinc, 1, 1), 100 },
    { "M4", fixed(KernelFamily::wtrap, 2, 2), 100 },
    { "M5", fixed(KernelFamily::wsinc, 5, 1), 200 },
  };
  Outcome o;
  for (const Spot& sp : spots) {
    const auto& spec = find_scenario(sp.id);
    const FlatTopKernel k{ sp.est.value, sp.est.c, Taper::linear };
    const auto theory = exact_mise(characteristic_sequence(spec, static_cast<int>(k.max_frequency())), k, sp.n);
    SimulationConfig cfg;
    cfg.scenario_id = sp.id;
    cfg.n = sp.n;
    cfg.reps = 2000;
    cfg.estimators = { sp.est };
    cfg.seed = 11;
    cfg.threads = threads();
    const auto s = run_scenario(cfg).estimators.front();
    const double mise = theory.mise * 1e4;
    const std::string line = fmt("%s %s n=%ld exact=%.5f mc=%.5f se=%.5f", sp.id, sp.est.to_string().c_str(),
                                 sp.n, mise, s.mean_ise_1e4, s.se_1e4);
    o.note(line);
    if (std::string(sp.id) == "M1")
      o.check(theory.mise == 0.0 && s.mean_ise_1e4 == 0.0, line + " (expected exact zeros)");
    else
      o.check(std::abs(s.mean_ise_1e4 - mise) <= 3.0 * s.se_1e4, line);
  }
  return o;
}

// 4. Integrated variance bound on random configurations.
Outcome iv_bound_suite()
{
  Outcome o;
  Rng rng(2024);
  const auto& cat = scenario_catalog();
  int violations = 0;
  for (int i = 0; i < 200; ++i) {
    const auto& spec = cat[static_cast<std::size_t>(rng.uniform() * cat.size())];
    const double nu = 0.2 + 24.8 * rng.uniform();
    const int c = 1 + static_cast<int>(rng.uniform() * 4);
    const long n = 5 + static_cast<long>(std::exp(rng.uniform() * std::log(5000.0)));
    const FlatTopKernel k{ nu, c, Taper::linear };
    const double iv = exact_iv(characteristic_sequence(spec, static_cast<int>(k.max_frequency())), k, n);
    if (!(iv <= iv_bound(nu, c, n))) {
      ++violations;
      o.check(false, fmt("%s nu=%.3f c=%d n=%ld iv=%.6g bound=%.6g", spec.id.c_str(), nu, c, n, iv,
                         iv_bound(nu, c, n)));
    }
  }
  o.note(fmt("200 configurations, %d violations", violations));
  return o;
}

// 5. Exact zeros for finite spectral support.
Outcome finite_support_zeros()
{
  Outcome o;
  int checked = 0;
  for (const CircularDist& d : { CircularDist{ UniformDist{} }, CircularDist{ CardioidDist{ pi, 0.5 } },
                                 CircularDist{ CardioidDist{ 1.0, 0.2 } } }) {
    const CharSeq f = char_seq(d, 64);
    const auto tf = spectral_support(f);
    o.check(tf.has_value(), describe(d) + " has no finite support");
    if (!tf)
      continue;
    for (int nu = *tf; nu <= 10; ++nu)
      for (int c : { 1, 2, 3 }) {
        ++checked;
        const double isb = exact_isb(f, FlatTopKernel{ double(nu), c, Taper::linear });
        o.check(isb == 0.0, fmt("%s nu=%d c=%d isb=%g", describe(d).c_str(), nu, c, isb));
      }
  }
  o.note(fmt("%d (truth, nu, c) cases", checked));
  return o;
}

// 6. Bias bounds.
Outcome bias_bounds()
{
  Outcome o;
  int violations = 0;
  auto run = [&](const std::string& name, const CharSeq& f, const std::function<double(double)>& bound) {
    for (int nu = 1; nu <= 20; ++nu)
      for (int c : { 1, 2, 3 }) {
        const double isb = exact_isb(f, FlatTopKernel{ double(nu), c, Taper::linear });
        if (!(isb <= bound(nu))) {
          ++violations;
          o.check(false, fmt("%s nu=%d c=%d isb=%.6g bound=%.6g", name.c_str(), nu, c, isb, bound(nu)));
        }
      }
  };
  auto poly = [&](const std::string& name, const CircularDist& d, double r, int top) {
    const CharSeq f = char_seq(d, top);
    const auto cr = smoothness_const_C_r(f, r);
    o.note(fmt("%s C_%.1f=%.10g", name.c_str(), r, cr.value));
    run(name, f, [&](double nu) { return isb_bound_poly(cr.value, r, nu); });
  };
  auto expo = [&](const std::string& name, const CircularDist& d, double alpha, double tau, int top) {
    const CharSeq f = char_seq(d, top);
    const auto ic = exp_const_I(f, alpha, tau);
    o.note(fmt("%s I=%.10g", name.c_str(), ic.value));
    run(name, f, [&](double nu) { return isb_bound_exp(ic.value, alpha, tau, nu); });
  };
  poly("cardioid(0.5)", CardioidDist{ pi, 0.5 }, 1.0, 64);
  poly("triangular(4/pi^2)", TriangularDist{ 4.0 / (pi * pi) }, 1.4, 1000000);
  poly("wrapped Cauchy(0.8)", WrappedCauchyDist{ pi, 0.8 }, 2.0, 400);
  expo("wrapped Cauchy(0.8)", WrappedCauchyDist{ pi, 0.8 }, 1.0, -std::log(0.8), 400);
  expo("wrapped normal(0.9)", WrappedNormalDist{ pi, 0.9 }, 2.0, -std::log(0.9), 60);
  o.note(fmt("%d violations", violations));
  return o;
}

// 7. Kernel identities.
Outcome kernel_identities()
{
  Outcome o;
  double worst_norm = 0.0, worst_closed = 0.0;
  Rng rng(71);
  for (double nu : { 0.0, 0.5, 1.0, 2.0, 3.7, 5.0, 8.2, 12.0, 20.0 })
    for (int c : { 1, 2, 3, 4 }) {
      const FlatTopKernel k{ nu, c, Taper::linear };
      worst_norm = std::max(worst_norm, std::abs(integrate([&](double th) { return eval_flat_top(th, k); }) - 1.0));
      for (int i = 0; i < 50; ++i) {
        const double th = (rng.uniform() - 0.5) * 4.0 * pi;
        const double closed = c == 1 ? eval_wsinc(th, nu) : eval_wtrap(th, nu, c);
        worst_closed = std::max(worst_closed, std::abs(closed - kernel_fourier_eval(th, k)));
      }
      const long m = k.floor_nu();
      const double peak = c == 1 ? eval_wsinc(0.0, nu) : eval_wtrap(0.0, nu, c);
      const double want = c == 1 ? (2.0 * m + 1) / two_pi : (c + 1.0) * m / two_pi;
      if (m >= 1)
        o.check(std::abs(peak - want) <= 1e-12 * want, fmt("peak nu=%.1f c=%d got %.17g want %.17g", nu, c, peak, want));
    }
  for (double kappa : { 0.05, 1.0, 10.0, 100.0, 500.0 })
    worst_norm =
      std::max(worst_norm, std::abs(integrate([&](double th) { return eval_vm_kernel(th, kappa); }) - 1.0));
  o.check(worst_norm <= 1e-9, fmt("normalization error %.3g", worst_norm));
  o.check(worst_closed <= 1e-10, fmt("closed form vs Fourier sum %.3g", worst_closed));
  o.note(fmt("normalization %.2g, closed form vs Fourier %.2g", worst_norm, worst_closed));

  // Roughness bound over floor(nu) >= 1. For c = 1 the sum includes
  // |t| = floor(nu), so R = (2 floor(nu) + 1) / (2 pi) and the bound fails
  // for nu in [m, m + 1/2).
  int bad_sinc = 0, bad_trap = 0, total = 0;
  for (int i = 0; i <= 290; ++i) {
    const double nu = 1.0 + 0.1 * i;
    for (int c : { 1, 2, 3, 4 }) {
      ++total;
      if (!(kernel_roughness(FlatTopKernel{ nu, c, Taper::linear }) <= c * nu / pi))
        ++(c == 1 ? bad_sinc : bad_trap);
    }
  }
  o.check(bad_trap == 0, fmt("roughness bound violated for c >= 2 in %d cases", bad_trap));
  o.check(bad_sinc == 0,
          fmt("roughness bound R(K) <= c nu / pi fails for the wrapped sinc (c = 1) in %d of %d nu values; "
              "R = (2 floor(nu) + 1) / (2 pi)",
              bad_sinc, total / 4),
          true);
  return o;
}

// 8. Spectral CV against the definition.
Outcome lscv_keystone()
{
  Outcome o;
  const CircularDist truths[] = { UniformDist{}, VonMisesDist{ 1.0, 2.0 }, CardioidDist{ pi, 0.4 },
                                  WrappedCauchyDist{ 0.5, 0.7 }, WrappedNormalDist{ 3.0, 0.8 },
                                  TriangularDist{ 0.3 },      VonMisesDist{ 4.0, 15.0 } };
  const std::size_t sizes[] = { 5, 50, 500 };
  double worst = 0.0;
  int fixtures = 0;
  for (std::size_t s = 0; s < 3; ++s)
    for (std::size_t d = 0; d < std::size(truths); ++d) {
      if (fixtures == 20)
        break;
      ++fixtures;
      Rng rng(1000 + 10 * s + d);
      const Sample x = sample(truths[d], rng, sizes[s]);
      for (int nu = 0; nu <= 10; ++nu)
        for (int c : { 1, 2 }) {
          const double direct = direct_cv(x, nu, c);
          const double spectral = lscv_criterion(x, nu, c);
          const double rel = std::abs(spectral - direct) / std::abs(direct);
          worst = std::max(worst, rel);
          if (!(rel <= 1e-8))
            o.check(false, fmt("n=%zu %s nu=%d c=%d rel=%.3g", sizes[s], describe(truths[d]).c_str(), nu, c, rel));
        }
    }
  o.check(fixtures == 20, "fixture count");
  o.note(fmt("%d fixtures, worst relative difference %.2g", fixtures, worst));
  return o;
}

// 9. ER picks the optimal nu.
Outcome er_behavior()
{
  Outcome o;
  int zero = 0, one = 0;
  for (std::uint64_t rep = 0; rep < 100; ++rep) {
    Rng a = Rng::substream(90, rep);
    zero += er_selector(sample(UniformDist{}, a, 1000)).chosen == 0.0;
    Rng b = Rng::substream(91, rep);
    one += er_selector(sample(CardioidDist{ pi, 0.5 }, b, 1000)).chosen == 1.0;
  }
  const std::string line = fmt("uniform nu=0 in %d/100, cardioid nu=1 in %d/100", zero, one);
  o.note(line);
  o.check(zero >= 90 && one >= 90, line);
  return o;
}

// 10. Nonnegativity correction.
Outcome correction()
{
  Outcome o;
  int negative = 0, identity = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    Rng rng(500 + seed);
    const std::size_t n = 10 + 40 * (seed % 5);
    const Sample x = sample(seed % 2 ? CircularDist{ VonMisesDist{ 2.0, 3.0 } } : CircularDist{ CardioidDist{ 1.0, 0.3 } },
                            rng, n);
    for (const FlatTopKernel& k : { wrapped_sinc(0.0 + seed % 12), wrapped_trapezoid(1.0 + seed % 6, 2),
                                    wrapped_trapezoid(1.0, 3) }) {
      const auto est = DensityEstimate::fit(x, k);
      const auto raw = est.eval_grid(default_grid_size);
      const bool dips = *std::min_element(raw.begin(), raw.end()) < 0.0;
      for (Correction mode : { Correction::clip, Correction::clip_renormalize }) {
        const auto g = correct_nonneg(est, mode);
        const double lo = *std::min_element(g.density.begin(), g.density.end());
        if (dips) {
          o.check(lo >= 0.0, fmt("seed %llu: corrected minimum %.3g", (unsigned long long)seed, lo));
          if (mode == Correction::clip_renormalize) {
            ++negative;
            const double mass = trapezoid_integral(g.density);
            o.check(std::abs(mass - 1.0) <= 1e-6, fmt("seed %llu: mass %.12g", (unsigned long long)seed, mass));
          }
        } else {
          ++identity;
          o.check(g.density == raw, fmt("seed %llu: correction changed a nonnegative estimate",
                                        (unsigned long long)seed));
        }
      }
    }
  }
  o.check(negative > 0 && identity > 0, "fixtures do not cover both branches");
  o.note(fmt("%d negative fixtures, %d identity checks", negative, identity));
  return o;
}

} // namespace

int main()
{
  struct Criterion
  {
    int id;
    const char* title;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
    { 1, "table rows (reps=200, n=1000)", table_rows },
    { 2, "convergence slopes (reps=500)", slopes },
    { 3, "exact MISE matches Monte Carlo", exact_mise_spots },
    { 4, "IV <= c nu / (pi n)", iv_bound_suite },
    { 5, "ISB = 0 for finite spectral support", finite_support_zeros },
    { 6, "ISB below the smoothness bounds", bias_bounds },
    { 7, "kernel identities", kernel_identities },
    { 8, "spectral CV equals definitional CV", lscv_keystone },
    { 9, "ER selects the optimal nu", er_behavior },
    { 10, "nonnegativity correction", correction },
  };

  int unexpected = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.check(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "[PASS] " : "[FAIL] ") << c.id << ". " << c.title << " (" << std::fixed
              << std::setprecision(1) << secs << "s)\n";
    std::cout.unsetf(std::ios::fixed);
    for (const auto& n : o.notes)
      std::cout << "       " << n << '\n';
    if (!o.pass && !o.known_only)
      ++unexpected;
    std::cout.flush();
  }
  return unexpected == 0 ? 0 : 1;
}
