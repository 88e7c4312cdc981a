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

#include "qrb/clifford.hpp"

#include <bit>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace qrb {

namespace {

// ---- GF(2) symplectic vectors over interleaved (x_0, z_0, x_1, z_1, ...)
// bit layout. Vectors are packed into uint32 (2n <= 8 bits needed here, but
// the code is generic up to 16 qubits).
using BitVec = std::uint32_t;

int symp_inner(BitVec v, BitVec w, int nn) {
  int t = 0;
  for (int i = 0; i < nn; i += 2) {
    t ^= ((v >> i) & 1u) & ((w >> (i + 1)) & 1u);
    t ^= ((w >> i) & 1u) & ((v >> (i + 1)) & 1u);
  }
  return t;
}

BitVec transvect(BitVec k, BitVec v, int nn) {
  return symp_inner(k, v, nn) ? (v ^ k) : v;
}

int pair_bits(BitVec v, int pair) { return (v >> (2 * pair)) & 3u; }

void set_pair_bit(BitVec& v, int index, int value) {
  v = (v & ~(1u << index)) | (static_cast<BitVec>(value) << index);
}

// Finds h1, h2 with y = Z_h1 Z_h2 x for nonzero symplectic vectors x, y.
std::pair<BitVec, BitVec> find_transvection(BitVec x, BitVec y, int nn) {
  if (x == y) return {0, 0};
  if (symp_inner(x, y, nn) == 1) return {x ^ y, 0};
  BitVec z = 0;
  bool found = false;
  for (int p = 0; p < nn / 2 && !found; ++p) {
    const int xb = pair_bits(x, p);
    const int yb = pair_bits(y, p);
    if (xb != 0 && yb != 0) {
      int zb = xb ^ yb;
      if (zb == 0) {
        // same nonzero pair: pick a partner that anticommutes with it
        zb = 2;                       // z component
        if ((xb & 1) != (xb >> 1)) {  // x was X or Z, not Y
          zb = 3;
        }
      }
      set_pair_bit(z, 2 * p, zb & 1);
      set_pair_bit(z, 2 * p + 1, (zb >> 1) & 1);
      found = true;
    }
  }
  if (!found) {
    for (int p = 0; p < nn / 2; ++p) {
      const int xb = pair_bits(x, p);
      const int yb = pair_bits(y, p);
      if (xb != 0 && yb == 0) {
        int zb;
        if ((xb & 1) == ((xb >> 1) & 1)) {
          zb = 2;
        } else {
          zb = ((xb & 1) << 1) | ((xb >> 1) & 1);  // swap components
        }
        set_pair_bit(z, 2 * p, zb & 1);
        set_pair_bit(z, 2 * p + 1, (zb >> 1) & 1);
        break;
      }
    }
    for (int p = 0; p < nn / 2; ++p) {
      const int xb = pair_bits(x, p);
      const int yb = pair_bits(y, p);
      if (xb == 0 && yb != 0) {
        int zb;
        if ((yb & 1) == ((yb >> 1) & 1)) {
          zb = 2;
        } else {
          zb = ((yb & 1) << 1) | ((yb >> 1) & 1);
        }
        set_pair_bit(z, 2 * p, zb & 1);
        set_pair_bit(z, 2 * p + 1, (zb >> 1) & 1);
        break;
      }
    }
  }
  return {x ^ z, y ^ z};
}

// Row r of the returned matrix is the image of basis vector e_r under the
// symplectic transform no. idx; the indexing is a bijection onto Sp(2n, 2).
std::vector<BitVec> symplectic_rows(std::uint64_t idx, int n) {
  const int nn = 2 * n;
  const std::uint64_t s = (std::uint64_t{1} << nn) - 1;
  const std::uint64_t k = (idx % s) + 1;
  idx /= s;
  BitVec f1 = static_cast<BitVec>(k);
  const BitVec e1 = 1;
  auto [t0, t1] = find_transvection(e1, f1, nn);
  const std::uint64_t bits = idx & ((std::uint64_t{1} << (nn - 1)) - 1);
  idx >>= (nn - 1);
  BitVec eprime = e1;
  for (int j = 2; j < nn; ++j) {
    set_pair_bit(eprime, j, (bits >> (j - 1)) & 1u);
  }
  BitVec h0 = transvect(t0, eprime, nn);
  h0 = transvect(t1, h0, nn);
  if (bits & 1u) f1 = 0;  // drop the final transvection for this coset half

  std::vector<BitVec> g(static_cast<std::size_t>(nn));
  if (n == 1) {
    g[0] = 1;
    g[1] = 2;
  } else {
    const std::vector<BitVec> sub = symplectic_rows(idx, n - 1);
    g[0] = 1;
    g[1] = 2;
    for (int r = 0; r < nn - 2; ++r) {
      g[static_cast<std::size_t>(r + 2)] = sub[static_cast<std::size_t>(r)] << 2;
    }
  }
  for (auto& row : g) {
    row = transvect(t0, row, nn);
    row = transvect(t1, row, nn);
    row = transvect(h0, row, nn);
    row = transvect(f1, row, nn);
  }
  return g;
}

PauliOperator row_to_operator(BitVec row, int n, int sign_bit) {
  PauliOperator op;
  for (int q = 0; q < n; ++q) {
    if ((row >> (2 * q)) & 1u) op.x |= 1u << q;
    if ((row >> (2 * q + 1)) & 1u) op.z |= 1u << q;
  }
  op.phase = sign_bit ? 2 : 0;
  return op;
}

// GF(2) inverse of the 2n x 2n matrix whose row r is the image of e_r,
// with rows packed as bit vectors.
std::vector<BitVec> gf2_inverse(const std::vector<BitVec>& rows, int nn) {
  std::vector<BitVec> a = rows;
  std::vector<BitVec> inv(static_cast<std::size_t>(nn));
  for (int r = 0; r < nn; ++r) inv[static_cast<std::size_t>(r)] = 1u << r;
  for (int col = 0; col < nn; ++col) {
    int pivot = -1;
    for (int r = col; r < nn; ++r) {
      if ((a[static_cast<std::size_t>(r)] >> col) & 1u) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) throw std::logic_error("singular tableau matrix");
    std::swap(a[static_cast<std::size_t>(col)], a[static_cast<std::size_t>(pivot)]);
    std::swap(inv[static_cast<std::size_t>(col)], inv[static_cast<std::size_t>(pivot)]);
    for (int r = 0; r < nn; ++r) {
      if (r != col && ((a[static_cast<std::size_t>(r)] >> col) & 1u)) {
        a[static_cast<std::size_t>(r)] ^= a[static_cast<std::size_t>(col)];
        inv[static_cast<std::size_t>(r)] ^= inv[static_cast<std::size_t>(col)];
      }
    }
  }
  return inv;
}

BitVec operator_to_row(const PauliOperator& op, int n) {
  BitVec row = 0;
  for (int q = 0; q < n; ++q) {
    if ((op.x >> q) & 1u) row |= 1u << (2 * q);
    if ((op.z >> q) & 1u) row |= 1u << (2 * q + 1);
  }
  return row;
}

}  // namespace

PauliOperator CliffordElement::evaluate(const PauliOperator& p) const {
  PauliOperator acc;
  acc.phase = (p.phase + std::popcount(p.x & p.z)) & 3;  // i^{#Y} prefactor
  for (int q = 0; q < n_; ++q) {
    if ((p.x >> q) & 1u) acc = pauli_multiply(acc, xrow_[static_cast<std::size_t>(q)]);
  }
  for (int q = 0; q < n_; ++q) {
    if ((p.z >> q) & 1u) acc = pauli_multiply(acc, zrow_[static_cast<std::size_t>(q)]);
  }
  assert(!p.is_hermitian() || acc.is_hermitian());
  return acc;
}

bool CliffordElement::is_valid() const {
  for (int a = 0; a < 2 * n_; ++a) {
    const PauliOperator& pa = (a % 2 == 0) ? xrow_[static_cast<std::size_t>(a / 2)]
                                           : zrow_[static_cast<std::size_t>(a / 2)];
    if (!pa.is_hermitian()) return false;
    if (pa.identity_word()) return false;
    for (int b = a + 1; b < 2 * n_; ++b) {
      const PauliOperator& pb = (b % 2 == 0) ? xrow_[static_cast<std::size_t>(b / 2)]
                                             : zrow_[static_cast<std::size_t>(b / 2)];
      const bool want = (a / 2 == b / 2);  // X_q and Z_q anticommute
      if (pauli_anticommute(pa, pb) != want) return false;
    }
  }
  return true;
}

std::string CliffordElement::key() const {
  std::string s;
  s.reserve(static_cast<std::size_t>(n_) * 12);
  for (int q = 0; q < n_; ++q) {
    for (const PauliOperator* op : {&xrow_[static_cast<std::size_t>(q)],
                                    &zrow_[static_cast<std::size_t>(q)]}) {
      s += std::to_string(op->x);
      s += ',';
      s += std::to_string(op->z);
      s += ',';
      s += std::to_string(op->phase);
      s += ';';
    }
  }
  return s;
}

Eigen::MatrixXcd CliffordElement::to_unitary() const {
  const auto d = static_cast<Eigen::Index>(1) << n_;
  // |phi_0> = U|0...0>: the stabilizer state fixed by the images of Z_q.
  Eigen::MatrixXcd projector = Eigen::MatrixXcd::Identity(d, d);
  for (int q = 0; q < n_; ++q) {
    const Eigen::MatrixXcd stab = pauli_operator_matrix(zrow_[static_cast<std::size_t>(q)], n_);
    projector = 0.5 * (projector + stab * projector);
  }
  Eigen::Index best = 0;
  double best_norm = -1.0;
  for (Eigen::Index c = 0; c < d; ++c) {
    const double nrm = projector.col(c).norm();
    if (nrm > best_norm) {
      best_norm = nrm;
      best = c;
    }
  }
  const Eigen::VectorXcd phi0 = projector.col(best) / best_norm;

  Eigen::MatrixXcd u(d, d);
  for (Eigen::Index b = 0; b < d; ++b) {
    // U|b> = U X^b U† U|0> = image(X^b) |phi_0>
    PauliOperator word;
    for (int q = 0; q < n_; ++q) {
      if ((b >> q) & 1) word = pauli_multiply(word, xrow_[static_cast<std::size_t>(q)]);
    }
    u.col(b) = apply_pauli(word, phi0, n_);
  }
  for (Eigen::Index r = 0; r < d; ++r) {
    if (std::abs(u(r, 0)) > 1e-8) {
      u *= std::conj(u(r, 0)) / std::abs(u(r, 0));
      break;
    }
  }
  return u;
}

CliffordElement CliffordElement::identity(int n) {
  CliffordElement c;
  c.n_ = n;
  for (int q = 0; q < n; ++q) {
    c.xrow_.push_back(PauliOperator::single_x(q));
    c.zrow_.push_back(PauliOperator::single_z(q));
  }
  return c;
}

CliffordElement CliffordElement::hadamard() {
  CliffordElement c = identity(1);
  c.xrow_[0] = PauliOperator::single_z(0);
  c.zrow_[0] = PauliOperator::single_x(0);
  return c;
}

CliffordElement CliffordElement::s_gate() {
  CliffordElement c = identity(1);
  c.xrow_[0] = {1u, 1u, 0};  // X -> Y
  return c;
}

CliffordElement CliffordElement::x_gate() {
  CliffordElement c = identity(1);
  c.zrow_[0].phase = 2;  // Z -> -Z
  return c;
}

CliffordElement CliffordElement::y_gate() {
  CliffordElement c = identity(1);
  c.xrow_[0].phase = 2;
  c.zrow_[0].phase = 2;
  return c;
}

CliffordElement CliffordElement::z_gate() {
  CliffordElement c = identity(1);
  c.xrow_[0].phase = 2;  // X -> -X
  return c;
}

CliffordElement CliffordElement::cnot() {
  CliffordElement c = identity(2);
  c.xrow_[0] = {3u, 0u, 0};  // X0 -> X0 X1
  c.zrow_[1] = {0u, 3u, 0};  // Z1 -> Z0 Z1
  return c;
}

std::uint64_t CliffordElement::symplectic_order(int n) {
  std::uint64_t order = 1;
  for (int j = 1; j <= n; ++j) {
    order *= (std::uint64_t{1} << (2 * j)) - 1;
  }
  order <<= n * n;
  return order;
}

std::uint64_t CliffordElement::group_order(int n) {
  return symplectic_order(n) << (2 * n);
}

CliffordElement CliffordElement::from_index(std::uint64_t idx, int n) {
  if (n < 1) throw std::invalid_argument("qubit count must be >= 1");
  if (idx >= group_order(n)) throw std::invalid_argument("clifford index out of range");
  const std::uint64_t sign_bits = idx & ((std::uint64_t{1} << (2 * n)) - 1);
  const std::vector<BitVec> rows = symplectic_rows(idx >> (2 * n), n);
  CliffordElement c;
  c.n_ = n;
  for (int q = 0; q < n; ++q) {
    c.xrow_.push_back(row_to_operator(rows[static_cast<std::size_t>(2 * q)], n,
                                      (sign_bits >> (2 * q)) & 1u));
    c.zrow_.push_back(row_to_operator(rows[static_cast<std::size_t>(2 * q + 1)], n,
                                      (sign_bits >> (2 * q + 1)) & 1u));
  }
  assert(c.is_valid());
  return c;
}

CliffordElement random_clifford(int n, Rng& rng, int n_max) {
  if (n < 1 || n > n_max) {
    throw std::invalid_argument("qubit count out of range [1, " +
                                std::to_string(n_max) + "]");
  }
  return CliffordElement::from_index(uniform_uint(rng, CliffordElement::group_order(n)), n);
}

CliffordElement compose(const CliffordElement& a, const CliffordElement& b) {
  if (a.n_ != b.n_) throw std::invalid_argument("dimension mismatch in compose");
  CliffordElement c;
  c.n_ = a.n_;
  for (int q = 0; q < a.n_; ++q) {
    c.xrow_.push_back(a.evaluate(b.image_x(q)));
    c.zrow_.push_back(a.evaluate(b.image_z(q)));
  }
  return c;
}

CliffordElement inverse(const CliffordElement& c) {
  const int nn = 2 * c.n_;
  std::vector<BitVec> rows(static_cast<std::size_t>(nn));
  for (int q = 0; q < c.n_; ++q) {
    rows[static_cast<std::size_t>(2 * q)] = operator_to_row(c.image_x(q), c.n_);
    rows[static_cast<std::size_t>(2 * q + 1)] = operator_to_row(c.image_z(q), c.n_);
  }
  const std::vector<BitVec> inv = gf2_inverse(rows, nn);
  CliffordElement out;
  out.n_ = c.n_;
  for (int q = 0; q < c.n_; ++q) {
    PauliOperator px = row_to_operator(inv[static_cast<std::size_t>(2 * q)], c.n_, 0);
    PauliOperator pz = row_to_operator(inv[static_cast<std::size_t>(2 * q + 1)], c.n_, 0);
    // fix signs so that c maps the candidate back to the exact generator
    if (c.evaluate(px).phase != 0) px.phase = 2;
    if (c.evaluate(pz).phase != 0) pz.phase = 2;
    out.xrow_.push_back(px);
    out.zrow_.push_back(pz);
  }
  return out;
}

CliffordElement inverting_gate(std::span<const CliffordElement> seq) {
  if (seq.empty()) throw std::invalid_argument("empty sequence has no inverting gate");
  CliffordElement total = seq[0];
  for (std::size_t j = 1; j < seq.size(); ++j) {
    total = compose(seq[j], total);
  }
  return inverse(total);
}

}  // namespace qrb
