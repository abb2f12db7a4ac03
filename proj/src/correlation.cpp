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

#include "riskg/correlation.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace riskg {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kPsdTol = -1e-10;
constexpr double kResidualTol = 1e-10;
constexpr int kMaxUpaDim = 1 << 16;

Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solve_hermitian(const Eigen::MatrixXcd& m)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian eigendecomposition did not converge");
    return solver;
}

} // namespace

void GridShape::validate() const
{
    if (horizontal < 1 || vertical < 1)
        throw std::invalid_argument("grid shape counts must be positive");
}

void RisLayout::validate() const
{
    grid.validate();
    if (!(spacing_m > 0.0))
        throw std::invalid_argument("RIS element spacing must be positive");
    if (!(wavelength_m > 0.0))
        throw std::invalid_argument("wavelength must be positive");
}

Eigen::Vector3d RisLayout::element_position(int n) const
{
    const int row = n / grid.horizontal;
    const int col = n % grid.horizontal;
    return {col * spacing_m, row * spacing_m, 0.0};
}

std::string to_string(CorrelationKind kind)
{
    switch (kind)
    {
    case CorrelationKind::UlaToeplitz: return "ula_toeplitz";
    case CorrelationKind::UpaKronecker: return "upa_kronecker";
    case CorrelationKind::RisSinc: return "ris_sinc";
    case CorrelationKind::Identity: return "identity";
    case CorrelationKind::Custom: return "custom";
    }
    return "unknown";
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXcd entries, CorrelationKind kind)
    : entries_(std::move(entries)), kind_(kind)
{
    if (entries_.rows() == 0 || entries_.rows() != entries_.cols())
        throw std::invalid_argument("correlation matrix must be square and non-empty");
    const Eigen::Index n = entries_.rows();
    for (Eigen::Index j = 0; j < n; ++j)
    {
        if (std::abs(entries_(j, j) - std::complex<double>(1.0, 0.0)) > kHermitianTol)
            throw std::domain_error("correlation matrix diagonal must be 1");
        for (Eigen::Index i = 0; i <= j; ++i)
        {
            if (std::abs(entries_(i, j) - std::conj(entries_(j, i))) > kHermitianTol)
                throw std::domain_error("correlation matrix must be Hermitian");
        }
    }
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index n)
{
    return {Eigen::MatrixXcd::Identity(n, n), CorrelationKind::Identity};
}

CorrelationMatrix CorrelationMatrix::custom(Eigen::MatrixXcd entries)
{
    CorrelationMatrix corr(std::move(entries), CorrelationKind::Custom);
    corr.validate();
    return corr;
}

double CorrelationMatrix::min_eigenvalue() const
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(entries_, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("hermitian eigendecomposition did not converge");
    return solver.eigenvalues()(0);
}

void CorrelationMatrix::validate() const
{
    if (min_eigenvalue() < kPsdTol)
        throw std::domain_error("correlation matrix is not positive semidefinite");
}

CorrelationMatrix ula_correlation(int n, double rho)
{
    if (n < 1)
        throw std::invalid_argument("ULA size must be at least 1");
    if (!(rho >= 0.0) || rho >= 1.0)
        throw std::invalid_argument("ULA correlation index must lie in [0, 1)");

    Eigen::MatrixXcd m = Eigen::MatrixXcd::Identity(n, n);
    if (rho > 0.0)
    {
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i)
                m(i, j) = std::pow(rho, std::abs(i - j));
    }
    return {std::move(m), CorrelationKind::UlaToeplitz};
}

CorrelationMatrix upa_correlation(GridShape shape, double rho)
{
    shape.validate();
    if (shape.total() > kMaxUpaDim)
        throw std::invalid_argument("UPA dimension exceeds the 2^16 guard");

    const CorrelationMatrix rh = ula_correlation(shape.horizontal, rho);
    const CorrelationMatrix rv = ula_correlation(shape.vertical, rho);
    const int nh = shape.horizontal;
    const int nv = shape.vertical;

    Eigen::MatrixXcd m(shape.total(), shape.total());
    for (int jh = 0; jh < nh; ++jh)
        for (int ih = 0; ih < nh; ++ih)
            m.block(ih * nv, jh * nv, nv, nv) = rh.entries()(ih, jh) * rv.entries();
    return {std::move(m), CorrelationKind::UpaKronecker};
}

double sinc(double x)
{
    const double arg = M_PI * x;
    if (std::abs(arg) < 1e-8)
        return 1.0 - arg * arg / 6.0;
    return std::sin(arg) / arg;
}

CorrelationMatrix ris_sinc_correlation(const RisLayout& layout)
{
    layout.validate();
    const int n = layout.size();
    Eigen::MatrixXcd m(n, n);
    for (int j = 0; j < n; ++j)
    {
        const Eigen::Vector3d uj = layout.element_position(j);
        m(j, j) = 1.0;
        for (int i = j + 1; i < n; ++i)
        {
            const double dist = (layout.element_position(i) - uj).norm();
            const double value = sinc(2.0 * dist / layout.wavelength_m);
            m(i, j) = value;
            m(j, i) = value;
        }
    }
    return {std::move(m), CorrelationKind::RisSinc};
}

Eigen::MatrixXd hadamard_self(const CorrelationMatrix& corr)
{
    // For Hermitian R the (i,j) entry of R^T o R is R(j,i)*R(i,j) = |R(i,j)|^2.
    return corr.entries().cwiseAbs2();
}

Eigen::MatrixXcd matrix_sqrt(const CorrelationMatrix& corr)
{
    const auto solver = solve_hermitian(corr.entries());
    Eigen::VectorXd values = solver.eigenvalues();
    for (Eigen::Index i = 0; i < values.size(); ++i)
    {
        if (values(i) < kPsdTol)
            throw std::domain_error("matrix_sqrt requires a positive semidefinite matrix");
        values(i) = std::sqrt(std::max(values(i), 0.0));
    }
    const Eigen::MatrixXcd& v = solver.eigenvectors();
    return v * values.asDiagonal() * v.adjoint();
}

EigenPair dominant_eigenpair(const CorrelationMatrix& corr)
{
    const auto solver = solve_hermitian(corr.entries());
    const Eigen::Index last = corr.dim() - 1;
    EigenPair pair;
    pair.value = solver.eigenvalues()(last);
    pair.vector = solver.eigenvectors().col(last);

    // Phase convention: first significant component real positive.
    for (Eigen::Index i = 0; i < pair.vector.size(); ++i)
    {
        const double mag = std::abs(pair.vector(i));
        if (mag > 1e-8)
        {
            pair.vector *= std::conj(pair.vector(i)) / mag;
            break;
        }
    }
    pair.vector.normalize();

    const double residual = (corr.entries() * pair.vector - pair.value * pair.vector).norm();
    if (!(residual <= kResidualTol))
        throw std::runtime_error("dominant eigenpair residual exceeds tolerance");
    return pair;
}

void write_matrix_csv(const Eigen::MatrixXcd& m, std::ostream& os)
{
    os << "i,j,re,im\n";
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            os << i << ',' << j << ',' << m(i, j).real() << ',' << m(i, j).imag() << '\n';
}

} // namespace riskg
