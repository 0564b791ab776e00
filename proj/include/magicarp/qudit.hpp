/* Copyright 2026 The MAGICARP Authors. All Rights Reserved.
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at
    http://www.apache.org/licenses/LICENSE-2.0
Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace magicarp {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Dense Hermitian matrix. The input is symmetrized as (M + M^dagger) / 2.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  cplx trace() const { return m_.trace(); }

 private:
  Matrix m_;
};

/// Dense unitary matrix.
///
/// `validated` checks the unitarity defect against a tolerance; `unchecked`
/// wraps products and exponentials that are unitary by construction.
class UnitaryMatrix {
 public:
  UnitaryMatrix() = default;

  static UnitaryMatrix identity(int dim);
  static UnitaryMatrix validated(const Matrix& m, double tol = 1e-10);
  static UnitaryMatrix unchecked(Matrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const Matrix& matrix() const { return m_; }
  UnitaryMatrix adjoint() const { return unchecked(m_.adjoint()); }

  /// ||U^dagger U - 1||_F
  double defect() const;

  friend UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b);

 private:
  explicit UnitaryMatrix(Matrix m) : m_(std::move(m)) {}
  Matrix m_;
};

/// Frobenius norm of M^dagger M - 1.
double unitarity_defect(const Matrix& m);

/// ReTr(A^dagger B).
double trace_inner(const Matrix& a, const Matrix& b);

/// Traceless Hermitian basis of su(d), normalized to Tr(G_i G_j) = 2 delta_ij.
///
/// Generators are the generalized Gell-Mann matrices, ordered as the
/// symmetric/antisymmetric pair for each level pair (j, k), j < k, in
/// lexicographic order, followed by the d - 1 diagonal generators. For d = 2
/// this gives (sigma_x, sigma_y, sigma_z).
class GeneratorBasis {
 public:
  static GeneratorBasis gell_mann(int dim);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(generators_.size()); }
  const std::vector<HermitianMatrix>& generators() const { return generators_; }
  const HermitianMatrix& operator[](int i) const { return generators_[i]; }

  /// Coordinates (1/2) ReTr(G_i M). Exact inverse of `reconstruct` on
  /// traceless Hermitian input.
  RealVector decompose(const Matrix& m) const;
  Matrix reconstruct(const RealVector& coeffs) const;

 private:
  int dim_ = 0;
  std::vector<HermitianMatrix> generators_;
};

/// The traceless Hermitian adjoint matrix g, stored by its d^2 - 1
/// coordinates in the Gell-Mann basis.
struct AdjointMatrix {
  int dim = 0;
  RealVector coeffs;

  static AdjointMatrix zero(int dim);
  /// Throws ValidationError if `m` is not traceless.
  static AdjointMatrix from_matrix(const HermitianMatrix& m);

  static int parameter_count(int dim) { return dim * dim - 1; }

  Matrix matrix() const;
  Matrix matrix(const GeneratorBasis& basis) const;
};

/// Ordered control Hamiltonians H_k with the drive bound omega_max.
class ControlSet {
 public:
  ControlSet(std::vector<HermitianMatrix> hamiltonians, double omega_max = 1.0);

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(hamiltonians_.size()); }
  double omega_max() const { return omega_max_; }
  const std::vector<HermitianMatrix>& hamiltonians() const { return hamiltonians_; }
  const HermitianMatrix& operator[](int k) const { return hamiltonians_[k]; }

  /// sum_k u_k H_k
  Matrix combine(const double* amplitudes) const;

 private:
  int dim_ = 0;
  double omega_max_ = 1.0;
  std::vector<HermitianMatrix> hamiltonians_;
};

/// Pauli X/Y embedded on levels (k, k+1) of a d-level system.
std::pair<HermitianMatrix, HermitianMatrix> generalized_pauli_pair(int dim, int k);

/// The 2(d-1) adjacent-level generalized Pauli controls, ordered
/// (X_01, Y_01, X_12, Y_12, ...).
ControlSet nearest_neighbor_control_set(int dim, double omega_max = 1.0);

/// K / (d^2 - 1): fraction of su(d) directed by the controls.
double control_to_generator_ratio(const ControlSet& controls);

enum class GateName { hadamard, qft, identity, custom };

GateName parse_gate_name(std::string_view name);
std::string to_string(GateName name);

/// QFT(d) with entries exp(2 pi i jk / d) / sqrt(d).
UnitaryMatrix qft(int dim);

/// `hadamard` with d > 2 resolves to QFT(d). `custom` requires `custom_entries`
/// and throws ValidationError if they are not unitary.
UnitaryMatrix target_gate(GateName name, int dim,
                          const std::optional<Matrix>& custom_entries = std::nullopt);

}  // namespace magicarp
