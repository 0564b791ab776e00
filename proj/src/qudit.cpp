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

#include "magicarp/qudit.hpp"

#include <cmath>
#include <numbers>

#include "magicarp/errors.hpp"

namespace magicarp {

namespace {

constexpr double kTracelessTol = 1e-12;

void require_dim(int dim) {
  if (dim < 1) throw InvalidDimension("dimension must be positive, got " + std::to_string(dim));
}

}  // namespace

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch("Hermitian matrix must be square and non-empty");
  m_ = 0.5 * (m + m.adjoint());
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
  require_dim(dim);
  return UnitaryMatrix(Matrix::Identity(dim, dim));
}

UnitaryMatrix UnitaryMatrix::validated(const Matrix& m, double tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionMismatch("unitary matrix must be square and non-empty");
  if (!m.allFinite()) throw ValidationError("matrix has non-finite entries");
  const double defect = unitarity_defect(m);
  if (!(defect <= tol))
    throw ValidationError("matrix is not unitary (defect " + std::to_string(defect) + ")");
  return UnitaryMatrix(m);
}

UnitaryMatrix UnitaryMatrix::unchecked(Matrix m) { return UnitaryMatrix(std::move(m)); }

double UnitaryMatrix::defect() const { return unitarity_defect(m_); }

UnitaryMatrix operator*(const UnitaryMatrix& a, const UnitaryMatrix& b) {
  if (a.dim() != b.dim()) throw DimensionMismatch("unitary product dimension mismatch");
  return UnitaryMatrix(a.m_ * b.m_);
}

double unitarity_defect(const Matrix& m) {
  return (m.adjoint() * m - Matrix::Identity(m.rows(), m.cols())).norm();
}

double trace_inner(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionMismatch("trace_inner: dimension mismatch");
  // ReTr(A^dagger B) = Re sum_ij conj(A_ij) B_ij
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

GeneratorBasis GeneratorBasis::gell_mann(int dim) {
  if (dim < 2) throw InvalidDimension("generator basis needs d >= 2");
  GeneratorBasis basis;
  basis.dim_ = dim;
  basis.generators_.reserve(dim * dim - 1);
  const cplx i1(0.0, 1.0);
  for (int j = 0; j < dim; ++j) {
    for (int k = j + 1; k < dim; ++k) {
      Matrix sym = Matrix::Zero(dim, dim);
      sym(j, k) = 1.0;
      sym(k, j) = 1.0;
      Matrix anti = Matrix::Zero(dim, dim);
      anti(j, k) = -i1;
      anti(k, j) = i1;
      basis.generators_.emplace_back(sym);
      basis.generators_.emplace_back(anti);
    }
  }
  for (int l = 1; l < dim; ++l) {
    Matrix diag = Matrix::Zero(dim, dim);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int j = 0; j < l; ++j) diag(j, j) = scale;
    diag(l, l) = -l * scale;
    basis.generators_.emplace_back(diag);
  }
  return basis;
}

RealVector GeneratorBasis::decompose(const Matrix& m) const {
  if (m.rows() != dim_ || m.cols() != dim_)
    throw DimensionMismatch("decompose: dimension mismatch");
  RealVector c(size());
  for (int i = 0; i < size(); ++i) c[i] = 0.5 * trace_inner(generators_[i].matrix(), m);
  return c;
}

Matrix GeneratorBasis::reconstruct(const RealVector& coeffs) const {
  if (coeffs.size() != size())
    throw DimensionMismatch("reconstruct: expected " + std::to_string(size()) + " coefficients");
  Matrix m = Matrix::Zero(dim_, dim_);
  for (int i = 0; i < size(); ++i) m += coeffs[i] * generators_[i].matrix();
  return m;
}

AdjointMatrix AdjointMatrix::zero(int dim) {
  if (dim < 2) throw InvalidDimension("adjoint matrix needs d >= 2");
  return AdjointMatrix{dim, RealVector::Zero(parameter_count(dim))};
}

AdjointMatrix AdjointMatrix::from_matrix(const HermitianMatrix& m) {
  if (std::abs(m.trace()) > kTracelessTol)
    throw ValidationError("adjoint matrix must be traceless");
  const auto basis = GeneratorBasis::gell_mann(m.dim());
  return AdjointMatrix{m.dim(), basis.decompose(m.matrix())};
}

Matrix AdjointMatrix::matrix() const { return matrix(GeneratorBasis::gell_mann(dim)); }

Matrix AdjointMatrix::matrix(const GeneratorBasis& basis) const {
  if (basis.dim() != dim) throw DimensionMismatch("adjoint matrix / basis dimension mismatch");
  return basis.reconstruct(coeffs);
}

ControlSet::ControlSet(std::vector<HermitianMatrix> hamiltonians, double omega_max)
    : omega_max_(omega_max), hamiltonians_(std::move(hamiltonians)) {
  if (hamiltonians_.empty()) throw ValidationError("control set needs at least one Hamiltonian");
  if (!(omega_max_ > 0.0) || !std::isfinite(omega_max_))
    throw ValidationError("omega_max must be positive and finite");
  dim_ = hamiltonians_.front().dim();
  for (const auto& h : hamiltonians_) {
    if (h.dim() != dim_) throw DimensionMismatch("control Hamiltonians differ in dimension");
    if (std::abs(h.trace()) > kTracelessTol)
      throw ValidationError("control Hamiltonians must be traceless");
  }
}

Matrix ControlSet::combine(const double* amplitudes) const {
  Matrix h = Matrix::Zero(dim_, dim_);
  for (int k = 0; k < size(); ++k) h += amplitudes[k] * hamiltonians_[k].matrix();
  return h;
}

std::pair<HermitianMatrix, HermitianMatrix> generalized_pauli_pair(int dim, int k) {
  if (dim < 2) throw InvalidDimension("generalized Pauli pair needs d >= 2");
  if (k < 0 || k > dim - 2)
    throw IndexError("level index " + std::to_string(k) + " out of range [0, " +
                     std::to_string(dim - 2) + "]");
  const cplx i1(0.0, 1.0);
  Matrix x = Matrix::Zero(dim, dim);
  x(k, k + 1) = 1.0;
  x(k + 1, k) = 1.0;
  Matrix y = Matrix::Zero(dim, dim);
  y(k, k + 1) = -i1;
  y(k + 1, k) = i1;
  return {HermitianMatrix(x), HermitianMatrix(y)};
}

ControlSet nearest_neighbor_control_set(int dim, double omega_max) {
  if (dim < 2) throw InvalidDimension("nearest-neighbor controls need d >= 2");
  std::vector<HermitianMatrix> hs;
  hs.reserve(2 * (dim - 1));
  for (int k = 0; k + 1 < dim; ++k) {
    auto [x, y] = generalized_pauli_pair(dim, k);
    hs.push_back(std::move(x));
    hs.push_back(std::move(y));
  }
  return ControlSet(std::move(hs), omega_max);
}

double control_to_generator_ratio(const ControlSet& controls) {
  const int d = controls.dim();
  return static_cast<double>(controls.size()) / (d * d - 1);
}

GateName parse_gate_name(std::string_view name) {
  if (name == "hadamard") return GateName::hadamard;
  if (name == "qft") return GateName::qft;
  if (name == "identity") return GateName::identity;
  if (name == "custom") return GateName::custom;
  throw ValidationError("unknown gate name '" + std::string(name) + "'");
}

std::string to_string(GateName name) {
  switch (name) {
    case GateName::hadamard: return "hadamard";
    case GateName::qft: return "qft";
    case GateName::identity: return "identity";
    case GateName::custom: return "custom";
  }
  return "custom";
}

UnitaryMatrix qft(int dim) {
  require_dim(dim);
  Matrix m(dim, dim);
  const double norm = 1.0 / std::sqrt(static_cast<double>(dim));
  for (int j = 0; j < dim; ++j) {
    for (int k = 0; k < dim; ++k) {
      // reduce jk mod d first so the phase stays accurate for larger d
      const double phase = 2.0 * std::numbers::pi * ((j * k) % dim) / dim;
      m(j, k) = norm * std::polar(1.0, phase);
    }
  }
  return UnitaryMatrix::unchecked(std::move(m));
}

UnitaryMatrix target_gate(GateName name, int dim, const std::optional<Matrix>& custom_entries) {
  require_dim(dim);
  switch (name) {
    case GateName::identity:
      return UnitaryMatrix::identity(dim);
    case GateName::hadamard:
      if (dim < 2) throw InvalidDimension("hadamard needs d >= 2");
      return qft(dim);
    case GateName::qft:
      return qft(dim);
    case GateName::custom:
      if (!custom_entries) throw ValidationError("custom target requires matrix entries");
      if (custom_entries->rows() != dim || custom_entries->cols() != dim)
        throw DimensionMismatch("custom target has wrong dimension");
      return UnitaryMatrix::validated(*custom_entries);
  }
  throw ValidationError("unknown gate");
}

}  // namespace magicarp
