#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "radarmi/errors.hpp"

namespace radarmi {

using cdouble = std::complex<double>;

namespace detail {

/// size_t multiply with overflow detection, for dimension arithmetic.
inline std::size_t checked_mul(std::size_t a, std::size_t b) {
    if (a != 0 && b > static_cast<std::size_t>(-1) / a)
        throw std::invalid_argument("matrix dimension product overflows size_t");
    return a * b;
}

} // namespace detail

/// Dense complex matrix, column-major storage.
class ComplexMatrix {
public:
    ComplexMatrix() = default;

    /// rows x cols, zero-initialized.
    ComplexMatrix(std::size_t rows, std::size_t cols);

    /// Takes ownership of column-major data; entries must be finite.
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> column_major);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix from_rows(std::initializer_list<std::initializer_list<cdouble>> rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    cdouble& operator()(std::size_t r, std::size_t c) { return data_[c * rows_ + r]; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return data_[c * rows_ + r]; }

    cdouble& at(std::size_t r, std::size_t c);
    const cdouble& at(std::size_t r, std::size_t c) const;

    const std::vector<cdouble>& data() const { return data_; }
    std::vector<cdouble>& data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cdouble> data_;
};

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix operator*(cdouble scale, const ComplexMatrix& a);

/// Conjugate transpose.
ComplexMatrix adjoint(const ComplexMatrix& a);
/// Plain transpose, no conjugation.
ComplexMatrix transpose(const ComplexMatrix& a);

cdouble trace(const ComplexMatrix& a);
double frobenius_norm(const ComplexMatrix& a);
/// max_ij |a_ij - b_ij|
double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);

/// Square matrix validated Hermitian on construction (relative tolerance on
/// the skew part); the stored matrix is symmetrized so A == A^H holds exactly.
class HermitianMatrix {
public:
    explicit HermitianMatrix(ComplexMatrix m, double tol = 1e-10);

    static HermitianMatrix diagonal(const std::vector<double>& entries);
    static HermitianMatrix identity(std::size_t n);

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    const cdouble& operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

private:
    ComplexMatrix m_;
};

/// Eigenvalues descending; eigenvector columns paired with them; V unitary.
struct EigDecomposition {
    std::vector<double> eigenvalues;
    ComplexMatrix eigenvectors;
};

/// Full eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations (off-diagonal Frobenius norm driven below 1e-12 relative, at
/// most 100 sweeps; non-convergence throws numerical_error).
EigDecomposition hermitian_eig(const HermitianMatrix& a);

/// log det(A + ridge*I) in natural log, via the eigenvalues of A.
/// Any shifted eigenvalue <= 0 throws numerical_error.
double log_det_psd(const HermitianMatrix& a, double ridge = 0.0);

/// Kronecker product, (a.rows*b.rows) x (a.cols*b.cols).
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking of m into a vector of length rows*cols.
std::vector<cdouble> vec(const ComplexMatrix& m);

} // namespace radarmi
