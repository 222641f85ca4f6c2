#include "radarmi/numlin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace radarmi {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool finite(cdouble z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

} // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(detail::checked_mul(rows, cols)) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cdouble> column_major)
    : rows_(rows), cols_(cols), data_(std::move(column_major)) {
    require(data_.size() == detail::checked_mul(rows, cols),
            "matrix data size does not match rows*cols");
    for (const cdouble& z : data_)
        if (!finite(z)) throw std::invalid_argument("matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

ComplexMatrix ComplexMatrix::from_rows(std::initializer_list<std::initializer_list<cdouble>> rows) {
    const std::size_t r = rows.size();
    const std::size_t c = r == 0 ? 0 : rows.begin()->size();
    ComplexMatrix m(r, c);
    std::size_t i = 0;
    for (const auto& row : rows) {
        require(row.size() == c, "ragged row list");
        std::size_t j = 0;
        for (cdouble z : row) {
            if (!finite(z)) throw std::invalid_argument("matrix entries must be finite");
            m(i, j++) = z;
        }
        ++i;
    }
    return m;
}

cdouble& ComplexMatrix::at(std::size_t r, std::size_t c) {
    require(r < rows_ && c < cols_, "matrix index out of range");
    return (*this)(r, c);
}

const cdouble& ComplexMatrix::at(std::size_t r, std::size_t c) const {
    require(r < rows_ && c < cols_, "matrix index out of range");
    return (*this)(r, c);
}

ComplexMatrix operator+(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "shape mismatch in matrix sum");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = a.data()[k] + b.data()[k];
    return out;
}

ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "shape mismatch in matrix difference");
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = a.data()[k] - b.data()[k];
    return out;
}

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.cols() == b.rows(), "inner dimension mismatch in matrix product");
    ComplexMatrix out(a.rows(), b.cols());
    // Column-major friendly loop order: out(:,j) += b(k,j) * a(:,k).
    for (std::size_t j = 0; j < b.cols(); ++j) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cdouble bkj = b(k, j);
            if (bkj == cdouble{}) continue;
            for (std::size_t i = 0; i < a.rows(); ++i) out(i, j) += a(i, k) * bkj;
        }
    }
    return out;
}

ComplexMatrix operator*(cdouble scale, const ComplexMatrix& a) {
    ComplexMatrix out(a.rows(), a.cols());
    for (std::size_t k = 0; k < out.data().size(); ++k) out.data()[k] = scale * a.data()[k];
    return out;
}

ComplexMatrix adjoint(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = std::conj(a(i, j));
    return out;
}

ComplexMatrix transpose(const ComplexMatrix& a) {
    ComplexMatrix out(a.cols(), a.rows());
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i) out(j, i) = a(i, j);
    return out;
}

cdouble trace(const ComplexMatrix& a) {
    require(a.rows() == a.cols(), "trace of a non-square matrix");
    cdouble t = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) t += a(i, i);
    return t;
}

double frobenius_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (const cdouble& z : a.data()) s += std::norm(z);
    return std::sqrt(s);
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
    require(a.rows() == b.rows() && a.cols() == b.cols(), "shape mismatch in matrix comparison");
    double m = 0.0;
    for (std::size_t k = 0; k < a.data().size(); ++k)
        m = std::max(m, std::abs(a.data()[k] - b.data()[k]));
    return m;
}

HermitianMatrix::HermitianMatrix(ComplexMatrix m, double tol) : m_(std::move(m)) {
    require(m_.rows() == m_.cols(), "Hermitian matrix must be square");
    require(m_.rows() > 0, "Hermitian matrix must be non-empty");
    const std::size_t n = m_.rows();
    double scale = 0.0;
    for (const cdouble& z : m_.data()) scale = std::max(scale, std::abs(z));
    const double bound = tol * std::max(scale, 1.0);
    for (std::size_t j = 0; j < n; ++j) {
        if (std::abs(m_(j, j).imag()) > bound)
            throw std::invalid_argument("matrix is not Hermitian: complex diagonal entry");
        m_(j, j) = cdouble(m_(j, j).real(), 0.0);
        for (std::size_t i = j + 1; i < n; ++i) {
            if (std::abs(m_(i, j) - std::conj(m_(j, i))) > bound)
                throw std::invalid_argument("matrix is not Hermitian");
            const cdouble avg = 0.5 * (m_(i, j) + std::conj(m_(j, i)));
            m_(i, j) = avg;
            m_(j, i) = std::conj(avg);
        }
    }
}

HermitianMatrix HermitianMatrix::diagonal(const std::vector<double>& entries) {
    require(!entries.empty(), "diagonal Hermitian matrix must be non-empty");
    ComplexMatrix m(entries.size(), entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
        if (!std::isfinite(entries[i]))
            throw std::invalid_argument("matrix entries must be finite");
        m(i, i) = entries[i];
    }
    return HermitianMatrix(std::move(m));
}

HermitianMatrix HermitianMatrix::identity(std::size_t n) {
    return HermitianMatrix(ComplexMatrix::identity(n));
}

namespace {

double off_diagonal_norm(const ComplexMatrix& a) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.cols(); ++j)
        for (std::size_t i = 0; i < a.rows(); ++i)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

// One two-sided rotation U = D*R zeroing a(p,q):
//   D = diag(1, conj(phase)) folds the phase of a(p,q) away,
//   R is the classic real Jacobi rotation on the resulting real 2x2 block.
// Embedded into n x n:  U(p,p)=c, U(p,q)=s, U(q,p)=-conj(phase)*s, U(q,q)=conj(phase)*c.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, std::size_t p, std::size_t q) {
    const cdouble apq = a(p, q);
    const double mag = std::abs(apq);
    if (mag == 0.0) return;
    const cdouble phase = apq / mag;
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double theta = (aqq - app) / (2.0 * mag);
    const double t = (theta >= 0.0) ? 1.0 / (theta + std::sqrt(1.0 + theta * theta))
                                    : 1.0 / (theta - std::sqrt(1.0 + theta * theta));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;
    const cdouble upp = c;
    const cdouble upq = s;
    const cdouble uqp = -std::conj(phase) * s;
    const cdouble uqq = std::conj(phase) * c;

    const std::size_t n = a.rows();
    // a <- U^H a U: update columns p,q then rows p,q.
    for (std::size_t i = 0; i < n; ++i) {
        const cdouble aip = a(i, p), aiq = a(i, q);
        a(i, p) = aip * upp + aiq * uqp;
        a(i, q) = aip * upq + aiq * uqq;
    }
    for (std::size_t j = 0; j < n; ++j) {
        const cdouble apj = a(p, j), aqj = a(q, j);
        a(p, j) = std::conj(upp) * apj + std::conj(uqp) * aqj;
        a(q, j) = std::conj(upq) * apj + std::conj(uqq) * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
    a(p, p) = cdouble(a(p, p).real(), 0.0);
    a(q, q) = cdouble(a(q, q).real(), 0.0);

    for (std::size_t i = 0; i < n; ++i) {
        const cdouble vip = v(i, p), viq = v(i, q);
        v(i, p) = vip * upp + viq * uqp;
        v(i, q) = vip * upq + viq * uqq;
    }
}

} // namespace

EigDecomposition hermitian_eig(const HermitianMatrix& input) {
    constexpr double kOffDiagTol = 1e-12;
    constexpr int kMaxSweeps = 100;

    const std::size_t n = input.dim();
    ComplexMatrix a = input.matrix();
    ComplexMatrix v = ComplexMatrix::identity(n);

    const double scale = frobenius_norm(a);
    const double stop = kOffDiagTol * std::max(scale, std::numeric_limits<double>::min());

    if (n > 1) {
        bool converged = off_diagonal_norm(a) <= stop;
        for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
            for (std::size_t p = 0; p + 1 < n; ++p)
                for (std::size_t q = p + 1; q < n; ++q) jacobi_rotate(a, v, p, q);
            converged = off_diagonal_norm(a) <= stop;
        }
        if (!converged)
            throw numerical_error("eigensolver failed to converge within 100 sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() > a(j, j).real();
    });

    EigDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = ComplexMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t i = 0; i < n; ++i) out.eigenvectors(i, k) = v(i, order[k]);
    }
    return out;
}

double log_det_psd(const HermitianMatrix& a, double ridge) {
    const EigDecomposition eig = hermitian_eig(a);
    double sum = 0.0;
    for (double lambda : eig.eigenvalues) {
        const double shifted = lambda + ridge;
        if (shifted <= 0.0)
            throw numerical_error("log_det_psd: non-positive eigenvalue " +
                                  std::to_string(shifted) + " (matrix singular or indefinite)");
        sum += std::log(shifted);
    }
    return sum;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(detail::checked_mul(a.rows(), b.rows()),
                      detail::checked_mul(a.cols(), b.cols()));
    for (std::size_t ja = 0; ja < a.cols(); ++ja)
        for (std::size_t jb = 0; jb < b.cols(); ++jb)
            for (std::size_t ia = 0; ia < a.rows(); ++ia) {
                const cdouble f = a(ia, ja);
                if (f == cdouble{}) continue;
                for (std::size_t ib = 0; ib < b.rows(); ++ib)
                    out(ia * b.rows() + ib, ja * b.cols() + jb) = f * b(ib, jb);
            }
    return out;
}

std::vector<cdouble> vec(const ComplexMatrix& m) {
    return m.data(); // column-major storage is already the column stack
}

} // namespace radarmi
