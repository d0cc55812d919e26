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

#include "qalloc/density.hpp"

#include <algorithm>
#include <cmath>

namespace qalloc {

namespace {

using Index = Eigen::Index;

Index dim_of(std::size_t wires) { return Index{1} << wires; }

// Bit mask of a wire: labels[0] is the most significant bit.
Index mask_of(const DensityState& s, int wire) {
  return Index{1} << (static_cast<int>(s.wires()) - 1 - wire);
}

int require_wire(const DensityState& s, const VarName& label) {
  int w = s.wire_index(label);
  if (w < 0) {
    throw Error(ErrorKind::StuckIllFormed, "no wire labeled '" + label + "'");
  }
  return w;
}

// Conjugation by a permutation of basis states: rho'[p(r)][p(s)] = rho[r][s].
template <typename Perm>
void conjugate_permutation(DensityState& s, Perm&& p) {
  Eigen::MatrixXcd out(s.rho.rows(), s.rho.cols());
  for (Index r = 0; r < s.rho.rows(); ++r) {
    for (Index c = 0; c < s.rho.cols(); ++c) {
      out(p(r), p(c)) = s.rho(r, c);
    }
  }
  s.rho = std::move(out);
}

}  // namespace

DensityState DensityState::zeros(std::vector<VarName> labels) {
  if (labels.size() > kMaxWires) {
    throw Error(ErrorKind::TooLarge,
                "dense simulation is limited to " + std::to_string(kMaxWires) + " wires");
  }
  DensityState s;
  s.labels = std::move(labels);
  Index d = dim_of(s.labels.size());
  s.rho = Eigen::MatrixXcd::Zero(d, d);
  s.rho(0, 0) = 1.0;
  return s;
}

int DensityState::wire_index(const VarName& label) const {
  auto it = std::find(labels.begin(), labels.end(), label);
  return it == labels.end() ? -1 : static_cast<int>(it - labels.begin());
}

void apply_cnot(DensityState& state, const VarName& control, const VarName& target) {
  Index cm = mask_of(state, require_wire(state, control));
  Index tm = mask_of(state, require_wire(state, target));
  conjugate_permutation(state, [&](Index r) { return (r & cm) ? (r ^ tm) : r; });
}

void apply_swap(DensityState& state, const VarName& a, const VarName& b) {
  Index am = mask_of(state, require_wire(state, a));
  Index bm = mask_of(state, require_wire(state, b));
  conjugate_permutation(state, [&](Index r) {
    bool ba = r & am, bb = r & bm;
    if (ba == bb) return r;
    return r ^ am ^ bm;
  });
}

void apply_h(DensityState& state, const VarName& wire) {
  Index m = mask_of(state, require_wire(state, wire));
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  Index d = state.rho.rows();
  // Rows, then columns: rho' = H rho H.
  for (Index r = 0; r < d; ++r) {
    if (r & m) continue;
    Index r1 = r | m;
    Eigen::RowVectorXcd row0 = state.rho.row(r), row1 = state.rho.row(r1);
    state.rho.row(r) = (row0 + row1) * inv_sqrt2;
    state.rho.row(r1) = (row0 - row1) * inv_sqrt2;
  }
  for (Index c = 0; c < d; ++c) {
    if (c & m) continue;
    Index c1 = c | m;
    Eigen::VectorXcd col0 = state.rho.col(c), col1 = state.rho.col(c1);
    state.rho.col(c) = (col0 + col1) * inv_sqrt2;
    state.rho.col(c1) = (col0 - col1) * inv_sqrt2;
  }
}

void apply_reset(DensityState& state, const VarName& wire) {
  Index m = mask_of(state, require_wire(state, wire));
  Index d = state.rho.rows();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  for (Index r = 0; r < d; ++r) {
    if (r & m) continue;
    for (Index c = 0; c < d; ++c) {
      if (c & m) continue;
      out(r, c) = state.rho(r, c) + state.rho(r | m, c | m);
    }
  }
  state.rho = std::move(out);
}

void apply_measurement(DensityState& state, const VarName& wire, bool outcome) {
  Index m = mask_of(state, require_wire(state, wire));
  Index d = state.rho.rows();
  for (Index r = 0; r < d; ++r) {
    for (Index c = 0; c < d; ++c) {
      bool keep = (((r & m) != 0) == outcome) && (((c & m) != 0) == outcome);
      if (!keep) state.rho(r, c) = 0.0;
    }
  }
}

bool is_hermitian(const DensityState& state, double tol) {
  return (state.rho - state.rho.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_positive_semidefinite(const DensityState& state, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(
      (state.rho + state.rho.adjoint()) / 2.0);
  return solver.eigenvalues().minCoeff() >= -tol;
}

namespace {

// Permutes wires: a-wire i plays the role of b-wire perm[i].
Eigen::MatrixXcd permuted(const DensityState& a, const std::vector<int>& perm) {
  int n = static_cast<int>(a.wires());
  auto remap = [&](Index r) {
    Index out = 0;
    for (int i = 0; i < n; ++i) {
      if (r & (Index{1} << (n - 1 - i))) out |= Index{1} << (n - 1 - perm[i]);
    }
    return out;
  };
  Eigen::MatrixXcd out(a.rho.rows(), a.rho.cols());
  for (Index r = 0; r < a.rho.rows(); ++r) {
    for (Index c = 0; c < a.rho.cols(); ++c) {
      out(remap(r), remap(c)) = a.rho(r, c);
    }
  }
  return out;
}

bool matches(const DensityState& a, const DensityState& b, const std::vector<int>& perm,
             double tol) {
  return (permuted(a, perm) - b.rho).norm() <= tol;
}

}  // namespace

IsoVerdict density_isomorphic_detail(const DensityState& a, const DensityState& b,
                                     const std::optional<std::map<VarName, VarName>>& hint,
                                     double tol) {
  if (a.wires() != b.wires()) return IsoVerdict::NotIsomorphic;
  int n = static_cast<int>(a.wires());
  if (hint) {
    std::vector<int> perm(a.wires(), -1);
    bool valid = hint->size() == a.wires();
    std::vector<bool> taken(a.wires(), false);
    if (valid) {
      for (const auto& [la, lb] : *hint) {
        int ia = a.wire_index(la);
        int ib = b.wire_index(lb);
        if (ia < 0 || ib < 0 || taken[static_cast<std::size_t>(ib)]) {
          valid = false;
          break;
        }
        perm[static_cast<std::size_t>(ia)] = ib;
        taken[static_cast<std::size_t>(ib)] = true;
      }
    }
    if (valid && matches(a, b, perm, tol)) return IsoVerdict::HintMatched;
  }
  if (n > 6) {
    if (!hint) {
      throw Error(ErrorKind::TooLargeWithoutHint,
                  "exhaustive wire-permutation search is limited to 6 wires");
    }
    return IsoVerdict::NotIsomorphic;
  }
  std::vector<int> perm(a.wires());
  for (int i = 0; i < n; ++i) perm[static_cast<std::size_t>(i)] = i;
  do {
    if (matches(a, b, perm, tol)) return IsoVerdict::PermutationMatched;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return IsoVerdict::NotIsomorphic;
}

bool density_isomorphic(const DensityState& a, const DensityState& b,
                        const std::optional<std::map<VarName, VarName>>& hint, double tol) {
  return density_isomorphic_detail(a, b, hint, tol) != IsoVerdict::NotIsomorphic;
}

}  // namespace qalloc
