// SPDX-License-Identifier: Apache-2.0
//
// riskg - simulation library for RIS-assisted physical-layer key generation
// over spatially correlated multi-antenna channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <iosfwd>
#include <string>

namespace riskg {

/// Rectangular array dimensions: `horizontal` elements per row and
/// `vertical` elements per column.
struct GridShape
{
    int horizontal = 1;
    int vertical = 1;

    int total() const { return horizontal * vertical; }
    void validate() const;
};

/// Planar rectangular RIS lattice. Element n sits at
/// (col * spacing, row * spacing, 0) with row-major indexing over the grid.
struct RisLayout
{
    GridShape grid;
    double spacing_m = 0.05;
    double wavelength_m = 0.1;

    int size() const { return grid.total(); }
    double spacing_wavelengths() const { return spacing_m / wavelength_m; }
    Eigen::Vector3d element_position(int n) const;
    void validate() const;
};

enum class CorrelationKind
{
    UlaToeplitz,
    UpaKronecker,
    RisSinc,
    Identity,
    Custom
};

std::string to_string(CorrelationKind kind);

/// Hermitian PSD spatial correlation matrix with unit diagonal.
///
/// Constructors check the Hermitian and unit-diagonal invariants (tolerance
/// 1e-12). Positive semidefiniteness (min eigenvalue >= -1e-10) is checked by
/// validate() and by every operation that eigendecomposes the matrix.
class CorrelationMatrix
{
public:
    CorrelationMatrix(Eigen::MatrixXcd entries, CorrelationKind kind);

    static CorrelationMatrix identity(Eigen::Index n);
    /// Wrap externally supplied Hermitian entries; full invariant check.
    static CorrelationMatrix custom(Eigen::MatrixXcd entries);

    const Eigen::MatrixXcd& entries() const { return entries_; }
    CorrelationKind kind() const { return kind_; }
    Eigen::Index dim() const { return entries_.rows(); }

    double min_eigenvalue() const;
    /// Throws std::domain_error if any invariant (including PSD) fails.
    void validate() const;

private:
    Eigen::MatrixXcd entries_;
    CorrelationKind kind_;
};

/// Exponential-decay Toeplitz correlation of a uniform linear array:
/// entry (i,j) = rho^|i-j|. Requires n >= 1 and rho in [0, 1).
CorrelationMatrix ula_correlation(int n, double rho);

/// Uniform planar array correlation as the Kronecker product of the
/// horizontal and vertical ULA correlations. Dimension = shape.total(),
/// guarded to at most 65536.
CorrelationMatrix upa_correlation(GridShape shape, double rho);

/// Isotropic-scattering correlation of a planar RIS:
/// entry (n,m) = sinc(2 * ||u_n - u_m|| / wavelength),
/// with sinc(x) = sin(pi x) / (pi x) and sinc(0) = 1.
CorrelationMatrix ris_sinc_correlation(const RisLayout& layout);

/// sinc(x) = sin(pi x)/(pi x), sinc(0) = 1.
double sinc(double x);

/// Entrywise product of the transpose with the matrix itself. For the
/// Hermitian inputs used here the result is the real matrix of squared
/// entry magnitudes; it keeps the unit diagonal and is PSD by the Schur
/// product theorem.
Eigen::MatrixXd hadamard_self(const CorrelationMatrix& corr);

/// Hermitian PSD square root via eigendecomposition. Eigenvalues in
/// [-1e-10, 0) are clamped to zero; smaller ones raise std::domain_error.
Eigen::MatrixXcd matrix_sqrt(const CorrelationMatrix& corr);

struct EigenPair
{
    double value = 0.0;
    Eigen::VectorXcd vector;
};

/// Largest eigenvalue and its unit eigenvector. The eigenvector phase is
/// fixed so that its first significant component is real positive, making
/// the result reproducible across runs and platforms.
EigenPair dominant_eigenpair(const CorrelationMatrix& corr);

/// Debug CSV dump: one line per entry, columns i,j,re,im (row-major order).
void write_matrix_csv(const Eigen::MatrixXcd& m, std::ostream& os);

} // namespace riskg
