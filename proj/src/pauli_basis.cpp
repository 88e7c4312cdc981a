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

#include "qrb/pauli_basis.hpp"

#include <cmath>
#include <stdexcept>

namespace qrb {

namespace {

constexpr double kImagResidueTol = 1e-10;
constexpr double kHermitianTol = 1e-10;
constexpr double kPurityTol = 1e-9;
constexpr double kNormTol = 1e-9;

void check_state_shape(const Eigen::MatrixXcd& rho, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  const auto d = static_cast<Eigen::Index>(1) << n;
  if (rho.rows() != d || rho.cols() != d) {
    throw std::invalid_argument("invalid state: expected " + std::to_string(d) +
                                "x" + std::to_string(d) + " density matrix");
  }
  if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw std::invalid_argument("invalid state: density matrix is not hermitian");
  }
}

}  // namespace

ChiVector chi_vector(const Eigen::MatrixXcd& rho, int n) {
  check_state_shape(rho, n);
  const double d = static_cast<double>(rho.rows());
  const double norm = 1.0 / std::sqrt(d);
  ChiVector chi;
  chi.n = n;
  chi.values.resize(static_cast<Eigen::Index>(num_pauli_labels(n)));
  for (std::size_t k = 0; k < num_pauli_labels(n); ++k) {
    const std::complex<double> t = pauli_trace(rho, static_cast<PauliLabel>(k), n);
    if (std::abs(t.imag()) > kImagResidueTol) {
      throw std::invalid_argument("invalid state: Tr[P_k rho] has imaginary part " +
                                  std::to_string(t.imag()) + " at label " +
                                  pauli_word_string(static_cast<PauliLabel>(k), n));
    }
    chi.values(static_cast<Eigen::Index>(k)) = t.real() * norm;
  }
  return chi;
}

ChiVector chi_vector_pure(const Eigen::VectorXcd& psi, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  const auto d = static_cast<Eigen::Index>(1) << n;
  if (psi.size() != d) throw std::invalid_argument("invalid state: wrong dimension");
  if (std::abs(psi.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("invalid state: vector is not normalized");
  }
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  ChiVector chi;
  chi.n = n;
  chi.values.resize(static_cast<Eigen::Index>(num_pauli_labels(n)));
  for (std::size_t k = 0; k < num_pauli_labels(n); ++k) {
    const std::complex<double> t = pauli_expectation(psi, static_cast<PauliLabel>(k), n);
    chi.values(static_cast<Eigen::Index>(k)) = t.real() * norm;
  }
  return chi;
}

std::size_t SamplingDistribution::support_size() const {
  std::size_t s = 0;
  for (Eigen::Index i = 0; i < pr.size(); ++i) {
    if (pr(i) > 0.0) ++s;
  }
  return s;
}

SamplingDistribution sampling_distribution(const ChiVector& chi_id,
                                           std::string source_tag) {
  SamplingDistribution dist;
  dist.n = chi_id.n;
  dist.chi = chi_id.values;
  dist.source_tag = std::move(source_tag);
  dist.pr.resize(chi_id.values.size());
  double total = 0.0;
  for (Eigen::Index i = 0; i < chi_id.values.size(); ++i) {
    double p = chi_id.values(i) * chi_id.values(i);
    if (p < kPrClampThreshold) p = 0.0;
    dist.pr(i) = p;
    total += p;
  }
  if (std::abs(total - 1.0) > kPurityTol) {
    throw std::invalid_argument(
        "impure source: sum of Pr(k) deviates from 1 by " +
        std::to_string(std::abs(total - 1.0)));
  }
  dist.cdf.resize(static_cast<std::size_t>(dist.pr.size()));
  double run = 0.0;
  for (Eigen::Index i = 0; i < dist.pr.size(); ++i) {
    run += dist.pr(i);
    dist.cdf[static_cast<std::size_t>(i)] = run;
  }
  return dist;
}

PauliLabel sample_operator_direct(const SamplingDistribution& dist, Rng& rng) {
  return static_cast<PauliLabel>(sample_cdf(rng, dist.cdf));
}

double overlap_importance_sum(const SamplingDistribution& dist,
                              const ChiVector& chi_act) {
  if (chi_act.values.size() != dist.pr.size()) {
    throw std::invalid_argument("dimension mismatch between distribution and chi vector");
  }
  double acc = 0.0;
  for (Eigen::Index i = 0; i < dist.pr.size(); ++i) {
    if (dist.pr(i) > 0.0) {
      acc += dist.pr(i) * (chi_act.values(i) / dist.chi(i));
    }
  }
  return acc;
}

ConditionalPauliSampler::ConditionalPauliSampler(const Eigen::VectorXcd& psi, int n)
    : n_(n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  const auto d = static_cast<Eigen::Index>(1) << n;
  if (psi.size() != d) throw std::invalid_argument("invalid state: wrong dimension");
  if (std::abs(psi.norm() - 1.0) > kNormTol) {
    throw std::invalid_argument("invalid state: vector is not normalized");
  }
  rho_ = psi * psi.adjoint();
}

Eigen::MatrixXcd ConditionalPauliSampler::reduce(const Eigen::MatrixXcd& m,
                                                 int letter) const {
  const Eigen::Index half = m.rows() / 2;
  const Eigen::Matrix2cd& s = pauli_sigma(letter);
  Eigen::MatrixXcd out(half, half);
  // out[b,b'] = sum_{s1,s2} m[2b+s1, 2b'+s2] * sigma[s2,s1]
  for (Eigen::Index b = 0; b < half; ++b) {
    for (Eigen::Index bp = 0; bp < half; ++bp) {
      out(b, bp) = m(2 * b, 2 * bp) * s(0, 0) + m(2 * b, 2 * bp + 1) * s(1, 0) +
                   m(2 * b + 1, 2 * bp) * s(0, 1) +
                   m(2 * b + 1, 2 * bp + 1) * s(1, 1);
    }
  }
  return out;
}

double ConditionalPauliSampler::mass_of(const Eigen::MatrixXcd& m) const {
  // (remaining dim / d) * Tr[M^2]; M is hermitian so the trace is real >= 0
  const double d = static_cast<double>(rho_.rows());
  const double rem = static_cast<double>(m.rows());
  double tr2 = 0.0;
  for (Eigen::Index a = 0; a < m.rows(); ++a) {
    for (Eigen::Index b = 0; b < m.rows(); ++b) {
      tr2 += (m(a, b) * m(b, a)).real();
    }
  }
  return std::max(0.0, rem / d * tr2);
}

std::array<double, 4> ConditionalPauliSampler::prefix_extension_mass(
    std::span<const int> prefix) const {
  Eigen::MatrixXcd m = rho_;
  for (int letter : prefix) m = reduce(m, letter);
  std::array<double, 4> masses{};
  for (int letter = 0; letter < 4; ++letter) {
    masses[static_cast<std::size_t>(letter)] = mass_of(reduce(m, letter));
  }
  return masses;
}

PauliLabel ConditionalPauliSampler::sample(Rng& rng) const {
  Eigen::MatrixXcd m = rho_;
  double mass = 1.0;  // Tr[rho^2] for the pure source
  PauliLabel word = 0;
  for (int q = 0; q < n_; ++q) {
    std::array<Eigen::MatrixXcd, 4> reduced;
    std::array<double, 4> cumulative{};
    double run = 0.0;
    for (int letter = 0; letter < 4; ++letter) {
      reduced[static_cast<std::size_t>(letter)] = reduce(m, letter);
      run += mass_of(reduced[static_cast<std::size_t>(letter)]);
      cumulative[static_cast<std::size_t>(letter)] = run;
    }
    // draw within the current branch mass rather than renormalizing, so a
    // zero-mass letter has an exactly empty interval
    const double u = uniform_double(rng) * std::min(mass, run);
    int chosen = 3;
    for (int letter = 0; letter < 4; ++letter) {
      if (cumulative[static_cast<std::size_t>(letter)] > u) {
        chosen = letter;
        break;
      }
    }
    word |= static_cast<PauliLabel>(chosen) << (2 * q);
    m = std::move(reduced[static_cast<std::size_t>(chosen)]);
    mass = mass_of(m);
  }
  return word;
}

PauliLabel sample_operator_conditional(const Eigen::VectorXcd& psi, int n, Rng& rng) {
  return ConditionalPauliSampler(psi, n).sample(rng);
}

}  // namespace qrb
