#ifndef IFSKIT_LINALG_HPP
#define IFSKIT_LINALG_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace ifskit {

using cplx = std::complex<double>;

/// Dense complex matrix, row-major. Sized for desk-scale problems (n <= 4096).
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, cplx{0.0, 0.0}) {}

    static Matrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(cplx scalar);

    friend Matrix operator+(Matrix lhs, const Matrix& rhs) { return lhs += rhs; }
    friend Matrix operator-(Matrix lhs, const Matrix& rhs) { return lhs -= rhs; }
    friend Matrix operator*(cplx scalar, Matrix m) { return m *= scalar; }
    friend Matrix operator*(const Matrix& a, const Matrix& b);

    Matrix conj_transpose() const;

    std::vector<cplx> apply(const std::vector<cplx>& v) const;

    double frobenius_norm() const;
    double max_abs() const;

    /// Hermitian part (A + A^H)/2; valid only for square matrices.
    Matrix hermitian_part() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

struct EigenDecomposition {
    std::vector<double> values;  // ascending
    Matrix vectors;              // columns; A = V diag(values) V^H
};

/// Cyclic Jacobi eigensolver for complex Hermitian matrices. Deterministic:
/// fixed sweep order, eigenvalues sorted ascending with matching vectors.
EigenDecomposition hermitian_eig(const Matrix& a, double tol = 1e-14, int max_sweeps = 60);

/// Largest |eigenvalue| of a Hermitian matrix.
double hermitian_spectral_norm(const Matrix& a);

/// Smallest eigenvalue of a Hermitian matrix.
double hermitian_min_eig(const Matrix& a);

/// Certified lower bound on the spectral norm of a Hermitian matrix via power
/// iteration (every estimate is ||A v|| for a unit v, hence never above the
/// true norm). Converges to the norm itself for the matrices used here.
double hermitian_power_norm(const Matrix& a, int max_iters = 2000);

}  // namespace ifskit

#endif
