// Copyright 2026 The qalloc Authors
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

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <vector>

#include "qalloc/ast.hpp"

namespace qalloc {

// Labeled density operator. labels[0] is the most significant bit of the
// basis index; the matrix is 2^n x 2^n, Hermitian, PSD, trace <= 1
// (unnormalized measurement branches are allowed and keep their weight as
// the trace).
struct DensityState {
  std::vector<VarName> labels;
  Eigen::MatrixXcd rho;

  static DensityState zeros(std::vector<VarName> labels);

  std::size_t wires() const { return labels.size(); }
  int wire_index(const VarName& label) const;
  double trace_real() const { return rho.trace().real(); }
};

// Dense simulation is capped at this many wires (2^10 square matrices).
inline constexpr std::size_t kMaxWires = 10;

void apply_cnot(DensityState& state, const VarName& control, const VarName& target);
void apply_swap(DensityState& state, const VarName& a, const VarName& b);
void apply_h(DensityState& state, const VarName& wire);

// The reset channel sum_b |0><b| rho |b><0| on one wire; the semantics of
// source discard and target init.
void apply_reset(DensityState& state, const VarName& wire);

// M_s rho M_s with M_s = (I + (-1)^s Z)/2; `outcome` true selects s = 1.
// No renormalization.
void apply_measurement(DensityState& state, const VarName& wire, bool outcome);

bool is_hermitian(const DensityState& state, double tol = 1e-12);
bool is_positive_semidefinite(const DensityState& state, double tol = 1e-9);

enum class IsoVerdict {
  HintMatched,         // the supplied label bijection already works
  PermutationMatched,  // some other wire permutation works
  NotIsomorphic,
};

// Def.-5.4 isomorphism: equality up to a permutation of the tensor factors,
// labels ignored. Tries the hint first; exhaustive search is limited to 6
// wires (throws Error(TooLargeWithoutHint) beyond that when no hint is
// given; with a failing hint beyond 6 wires the verdict is NotIsomorphic).
IsoVerdict density_isomorphic_detail(const DensityState& a, const DensityState& b,
                                     const std::optional<std::map<VarName, VarName>>& hint,
                                     double tol = 1e-9);

bool density_isomorphic(const DensityState& a, const DensityState& b,
                        const std::optional<std::map<VarName, VarName>>& hint = std::nullopt,
                        double tol = 1e-9);

}  // namespace qalloc
