// Copyright 2026 The qrb authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qrb/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace qrb {

namespace {

void check_budget(double alpha, double delta) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw std::invalid_argument("alpha must be in (0, 1]; got " + std::to_string(alpha));
  }
  if (!(delta > 0.0) || delta > 1.0) {
    throw std::invalid_argument("delta must be in (0, 1]; got " + std::to_string(delta));
  }
}

}  // namespace

std::int64_t chebyshev_L(double alpha, double delta) {
  check_budget(alpha, delta);
  return static_cast<std::int64_t>(std::ceil(8.0 / (alpha * alpha * delta)));
}

std::int64_t hoeffding_shots(double chi_id_k, int d, std::int64_t L, double alpha,
                             double delta) {
  check_budget(alpha, delta);
  if (chi_id_k == 0.0) throw std::logic_error("hoeffding_shots on unsupported label");
  if (L < 1) throw std::invalid_argument("operator count L must be >= 1");
  const double chi2 = chi_id_k * chi_id_k;
  const double raw = 8.0 / (static_cast<double>(d) * static_cast<double>(L) *
                            alpha * alpha * chi2) *
                     std::log(4.0 / delta);
  return std::max<std::int64_t>(1, static_cast<std::int64_t>(std::ceil(raw)));
}

double expected_experiments_bound(double alpha, double delta, int d, int q, int m) {
  check_budget(alpha, delta);
  if (d < 2 || q < 1 || m < 1) throw std::invalid_argument("invalid bound parameters");
  const double a2 = alpha * alpha;
  return static_cast<double>(q) * static_cast<double>(m) *
         (1.0 + 8.0 / (a2 * delta) + 8.0 * static_cast<double>(d) / a2 * std::log(4.0 / delta));
}

ResourceEstimate classical_cost_estimate(int q, int m, double alpha_mc, double eps, int n) {
  if (q < 1 || m < 1 || n < 1) throw std::invalid_argument("invalid cost parameters");
  if (!(alpha_mc > 0.0) || alpha_mc >= 1.0) {
    throw std::invalid_argument("alpha_mc must be in (0, 1)");
  }
  if (!(eps > 0.0) || eps >= 1.0) throw std::invalid_argument("eps must be in (0, 1)");
  const double d = std::pow(2.0, n);
  const double d2 = d * d;
  const double nn = static_cast<double>(n) * static_cast<double>(n);
  ResourceEstimate est;
  est.alpha_direct = eps / 10.0;
  est.n_class_hybrid = static_cast<double>(q) * static_cast<double>(m) /
                       (alpha_mc * alpha_mc) * (d2 / eps + nn * d2);
  est.n_class_direct = nn * d2 * d2 / (est.alpha_direct * est.alpha_direct);
  est.classical_ratio = est.n_class_hybrid / est.n_class_direct;
  est.experiment_ratio = static_cast<double>(q) * static_cast<double>(m) *
                         (est.alpha_direct * est.alpha_direct) / (alpha_mc * alpha_mc);
  return est;
}

// ---- decay fitting ---------------------------------------------------------

double DecayFit::evaluate(double y) const {
  double acc = 0.0;
  for (int i = 0; i < r; ++i) {
    acc += amplitudes(i) * std::pow(lambdas(i), y);
  }
  return acc;
}

namespace {

constexpr double kOffsetLambdaTol = 1e-4;

// The component that actually decays: a lambda fitted within noise of 1 is
// an offset no matter how large its amplitude, so rank by |a| (1 - lambda).
int dominant_index(const Eigen::VectorXd& amps, const Eigen::VectorXd& lambdas, int r) {
  int best = -1;
  double best_weight = 1e-9;
  for (int i = 0; i < r; ++i) {
    const double weight = std::abs(amps(i)) * (1.0 - lambdas(i));
    if (weight > best_weight) {
      best_weight = weight;
      best = i;
    }
  }
  return best;
}

}  // namespace

double DecayFit::dominant_decay() const {
  const int best = dominant_index(amplitudes, lambdas, r);
  return best < 0 ? 1.0 : lambdas(best);
}

double DecayFit::dominant_amplitude() const {
  const int best = dominant_index(amplitudes, lambdas, r);
  return best < 0 ? 0.0 : amplitudes(best);
}

double DecayFit::offset_amplitude() const {
  double acc = 0.0;
  for (int i = 0; i < r; ++i) {
    if (lambdas(i) >= 1.0 - kOffsetLambdaTol) acc += amplitudes(i);
  }
  return acc;
}

namespace {

// Linear least squares for the amplitudes at fixed lambdas.
Eigen::VectorXd solve_amplitudes(std::span<const DecayPoint> data,
                                 const Eigen::VectorXd& lambdas) {
  const auto npts = static_cast<Eigen::Index>(data.size());
  const Eigen::Index r = lambdas.size();
  Eigen::MatrixXd design(npts, r);
  Eigen::VectorXd rhs(npts);
  for (Eigen::Index t = 0; t < npts; ++t) {
    for (Eigen::Index i = 0; i < r; ++i) {
      design(t, i) = std::pow(lambdas(i), data[static_cast<std::size_t>(t)].y);
    }
    rhs(t) = data[static_cast<std::size_t>(t)].phi;
  }
  return design.colPivHouseholderQr().solve(rhs);
}

double residual_norm(std::span<const DecayPoint> data, const Eigen::VectorXd& amps,
                     const Eigen::VectorXd& lambdas) {
  double acc = 0.0;
  for (const DecayPoint& p : data) {
    double model = 0.0;
    for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
      model += amps(i) * std::pow(lambdas(i), p.y);
    }
    acc += (model - p.phi) * (model - p.phi);
  }
  return std::sqrt(acc);
}

// Amplitudes of a fidelity decay are overlap coefficients; they are bounded
// near 1 in magnitude, and clamping them rules out the degenerate
// almost-collinear fits whose huge cancelling amplitudes destroy the y -> 0
// extrapolation.
constexpr double kAmplitudeBound = 1.5;

// Levenberg-Marquardt on (a, lambda) jointly, lambdas clamped to [-1, 1].
// Returns the residual norm reached; fit parameters updated in place.
double levenberg_marquardt(std::span<const DecayPoint> data, Eigen::VectorXd& amps,
                           Eigen::VectorXd& lambdas) {
  const auto npts = static_cast<Eigen::Index>(data.size());
  const Eigen::Index r = lambdas.size();
  const Eigen::Index np = 2 * r;
  double mu = 1e-6;
  double res = residual_norm(data, amps, lambdas);
  for (int iter = 0; iter < 300; ++iter) {
    Eigen::MatrixXd jac(npts, np);
    Eigen::VectorXd resid(npts);
    for (Eigen::Index t = 0; t < npts; ++t) {
      const double y = data[static_cast<std::size_t>(t)].y;
      double model = 0.0;
      for (Eigen::Index i = 0; i < r; ++i) {
        const double ly = std::pow(lambdas(i), y);
        model += amps(i) * ly;
        jac(t, i) = ly;
        jac(t, r + i) = (y == 0.0) ? 0.0 : amps(i) * y * std::pow(lambdas(i), y - 1.0);
      }
      resid(t) = model - data[static_cast<std::size_t>(t)].phi;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd jtr = jac.transpose() * resid;
    bool stepped = false;
    for (int attempt = 0; attempt < 20; ++attempt) {
      Eigen::MatrixXd damped = jtj;
      for (Eigen::Index i = 0; i < np; ++i) {
        damped(i, i) += mu * std::max(jtj(i, i), 1e-12);
      }
      const Eigen::VectorXd step = damped.ldlt().solve(-jtr);
      Eigen::VectorXd amps_new = amps + step.head(r);
      Eigen::VectorXd lambdas_new = lambdas + step.tail(r);
      for (Eigen::Index i = 0; i < r; ++i) {
        lambdas_new(i) = std::clamp(lambdas_new(i), -1.0, 1.0);
        amps_new(i) = std::clamp(amps_new(i), -kAmplitudeBound, kAmplitudeBound);
      }
      const double res_new = residual_norm(data, amps_new, lambdas_new);
      if (std::isfinite(res_new) && res_new <= res) {
        const double gain = res - res_new;
        amps = std::move(amps_new);
        lambdas = std::move(lambdas_new);
        res = res_new;
        mu = std::max(mu * 0.3, 1e-12);
        stepped = true;
        if (gain < 1e-15 * (1.0 + res)) return res;
        break;
      }
      mu *= 4.0;
    }
    if (!stepped) return res;
  }
  return res;
}

// 95% quantiles of the F(2, m) distribution for the nested-model test.
double f_critical_2(int m) {
  static constexpr double kTable[] = {199.5, 19.00, 9.552, 6.944, 5.786,
                                      5.143, 4.737, 4.459, 4.256, 4.103,
                                      3.982, 3.885, 3.806, 3.739, 3.682,
                                      3.634, 3.592, 3.555, 3.522, 3.493};
  if (m <= 0) return std::numeric_limits<double>::infinity();
  if (m <= 20) return kTable[m - 1];
  return 3.0 + 9.0 / static_cast<double>(m);
}

std::vector<std::vector<double>> lambda_starts(int r) {
  // log-spaced grid in [0.5, 1]
  static constexpr int kGridSize = 8;
  std::vector<double> grid(kGridSize);
  for (int i = 0; i < kGridSize; ++i) {
    grid[static_cast<std::size_t>(i)] =
        std::exp(std::log(0.5) * (1.0 - static_cast<double>(i) / (kGridSize - 1)));
  }
  std::vector<std::vector<double>> starts;
  if (r == 1) {
    for (double g : grid) starts.push_back({g});
  } else if (r == 2) {
    for (int i = 0; i < kGridSize; ++i) {
      for (int j = i + 1; j < kGridSize; ++j) {
        starts.push_back({grid[static_cast<std::size_t>(i)], grid[static_cast<std::size_t>(j)]});
      }
    }
  } else {
    for (int i = 0; i < kGridSize; ++i) {
      for (int j = i + 1; j < kGridSize; ++j) {
        for (int k = j + 1; k < kGridSize; ++k) {
          starts.push_back({grid[static_cast<std::size_t>(i)],
                            grid[static_cast<std::size_t>(j)],
                            grid[static_cast<std::size_t>(k)]});
        }
      }
    }
  }
  return starts;
}

}  // namespace

DecayFit fit_decay(std::span<const DecayPoint> data, int r_max) {
  if (r_max < 1 || r_max > 3) {
    throw std::invalid_argument("r_max must be in [1, 3]");
  }
  std::vector<double> distinct;
  double scale = 0.0;
  for (const DecayPoint& p : data) {
    if (!std::isfinite(p.y) || !std::isfinite(p.phi)) {
      throw std::invalid_argument("decay data contains non-finite values");
    }
    scale += p.phi * p.phi;
    if (std::find(distinct.begin(), distinct.end(), p.y) == distinct.end()) {
      distinct.push_back(p.y);
    }
  }
  if (distinct.size() < 2) {
    throw std::invalid_argument("decay fit needs at least 2 distinct lengths");
  }
  scale = std::sqrt(scale);

  std::vector<DecayFit> fits;
  for (int r = 1; r <= r_max; ++r) {
    // beyond the base model, r exponentials carry 2r parameters; demand a
    // leftover degree of freedom so the fit never merely interpolates noise
    if (r > 1 && data.size() < 2 * static_cast<std::size_t>(r) + 1) break;
    DecayFit best;
    best.residual_norm = std::numeric_limits<double>::infinity();
    for (const auto& start : lambda_starts(r)) {
      Eigen::VectorXd lambdas =
          Eigen::Map<const Eigen::VectorXd>(start.data(), static_cast<Eigen::Index>(r));
      Eigen::VectorXd amps = solve_amplitudes(data, lambdas);
      if (!amps.allFinite()) continue;
      for (Eigen::Index i = 0; i < amps.size(); ++i) {
        amps(i) = std::clamp(amps(i), -kAmplitudeBound, kAmplitudeBound);
      }
      const double res = levenberg_marquardt(data, amps, lambdas);
      if (std::isfinite(res) && res < best.residual_norm) {
        best.amplitudes = amps;
        best.lambdas = lambdas;
        best.r = r;
        best.residual_norm = res;
      }
    }
    if (!std::isfinite(best.residual_norm)) {
      throw FitError("decay fit failed to converge for r = " + std::to_string(r));
    }
    fits.push_back(std::move(best));
  }
  if (fits.empty()) throw FitError("decay fit failed: no admissible model size");

  // Nested-model ladder: step from r to r+1 only when the residual drop is
  // significant under an F-test at 95% (numerator dof 2). Protects the
  // y -> 0 extrapolation: with data windows starting at large y, an extra
  // component fitted to noise can shift Phi(0) arbitrarily while barely
  // changing the residual. A floor keeps exact fits from dividing by zero.
  const double rss_floor = std::pow(1e-10 * (1.0 + scale), 2);
  std::size_t chosen_idx = 0;
  for (std::size_t i = 1; i < fits.size(); ++i) {
    const double rss_lo =
        std::max(fits[i - 1].residual_norm * fits[i - 1].residual_norm, rss_floor);
    const double rss_hi = std::max(fits[i].residual_norm * fits[i].residual_norm, rss_floor);
    const double dof_hi = static_cast<double>(data.size()) - 2.0 * fits[i].r;
    const double f_stat = (rss_lo - rss_hi) / 2.0 / (rss_hi / dof_hi);
    if (f_stat > f_critical_2(static_cast<int>(dof_hi))) {
      chosen_idx = i;
    } else {
      break;
    }
  }
  DecayFit chosen = fits[chosen_idx];

  // sort components by descending lambda for stable reporting
  std::vector<int> order(static_cast<std::size_t>(chosen.r));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return chosen.lambdas(a) > chosen.lambdas(b); });
  Eigen::VectorXd amps(chosen.r), lambdas(chosen.r);
  for (int i = 0; i < chosen.r; ++i) {
    amps(i) = chosen.amplitudes(order[static_cast<std::size_t>(i)]);
    lambdas(i) = chosen.lambdas(order[static_cast<std::size_t>(i)]);
  }
  chosen.amplitudes = std::move(amps);
  chosen.lambdas = std::move(lambdas);
  return chosen;
}

FidelityEstimate extract_error_rates(const DecayFit& fit_reference,
                                     const DecayFit& fit_interleaved, int d) {
  if (d < 2) throw std::invalid_argument("dimension must be >= 2");
  auto arm_error = [](const DecayFit& fit, const char* arm) {
    const double phi0 = fit.evaluate(0.0);
    const double phi1 = fit.evaluate(1.0);
    if (!(phi0 > 0.0)) {
      throw FitError(std::string("degenerate fit: Phi(0) <= 0 in ") + arm + " arm");
    }
    return std::max(0.0, 1.0 - phi1 / phi0);
  };
  FidelityEstimate est;
  est.eps_reference = arm_error(fit_reference, "reference");
  est.eps_interleaved = arm_error(fit_interleaved, "interleaved");
  est.eps_point = std::max(0.0, est.eps_interleaved - est.eps_reference);
  const double si = std::sqrt(est.eps_interleaved);
  const double sr = std::sqrt(est.eps_reference);
  const double lower = std::max(0.0, si - sr);
  est.eps_lower = lower * lower;
  est.eps_upper = (si + sr) * (si + sr);
  return est;
}

}  // namespace qrb
