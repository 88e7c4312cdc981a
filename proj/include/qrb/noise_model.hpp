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

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "qrb/channel.hpp"

namespace qrb {

/// Error channels attached to the gates of a benchmarking run. A null
/// channel pointer means "noiseless" for that slot.
///
/// SPAM is modeled as one preparation channel applied before the sequence
/// and one measurement channel applied to the state before every readout.
struct NoiseModel {
  int dim = 2;
  std::shared_ptr<const QuantumChannel> clifford_error;   // default for all Cliffords
  std::shared_ptr<const QuantumChannel> target_error;     // Lambda_V
  std::shared_ptr<const QuantumChannel> preparation_error;
  std::shared_ptr<const QuantumChannel> measurement_error;
  // per-gate overrides, consulted before clifford_error: keys are either a
  // CliffordElement::key() (gate-dependent noise) or the class labels
  // "clifford" / "inverse"
  std::map<std::string, std::shared_ptr<const QuantumChannel>> overrides;

  static NoiseModel noiseless(int d) {
    NoiseModel m;
    m.dim = d;
    return m;
  }

  /// Gate-independent depolarizing model: every Clifford (including the
  /// inverting gate) gets depolarizing(p_clifford), the target gate gets
  /// depolarizing(p_target).
  static NoiseModel depolarizing(int d, double p_clifford, double p_target = 1.0) {
    NoiseModel m;
    m.dim = d;
    if (p_clifford < 1.0) {
      m.clifford_error = std::make_shared<QuantumChannel>(
          QuantumChannel::depolarizing(p_clifford, d));
    }
    if (p_target < 1.0) {
      m.target_error = std::make_shared<QuantumChannel>(
          QuantumChannel::depolarizing(p_target, d));
    }
    return m;
  }

  const QuantumChannel* clifford_channel(const std::string& label) const {
    if (auto it = overrides.find(label); it != overrides.end()) return it->second.get();
    return clifford_error.get();
  }

  void validate() const {
    for (const QuantumChannel* ch :
         {clifford_error.get(), target_error.get(), preparation_error.get(),
          measurement_error.get()}) {
      if (ch != nullptr && ch->dim() != dim) {
        throw std::invalid_argument("noise channel dimension mismatch");
      }
    }
    for (const auto& [label, ch] : overrides) {
      if (ch == nullptr || ch->dim() != dim) {
        throw std::invalid_argument("override channel '" + label + "' dimension mismatch");
      }
    }
  }
};

}  // namespace qrb
