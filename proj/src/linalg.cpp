#include "ifskit/linalg.hpp"
#include <cstdint>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ifskit {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Matrix::operator+=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    if (rows_ != other.rows_ || cols_ != other.cols_)
        throw std::invalid_argument("Matrix::operator-=: shape mismatch");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
    return *this;
}

Matrix& Matrix::operator*=(cplx scalar) {
    for (auto& v : data_) v *= scalar;
    return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("Matrix::operator*: shape mismatch");
    Matrix out(a.rows_, b.cols_);
    // i-k-j order keeps both operands streaming row-major.
    for (std::size_t i = 0; i < a.rows_; ++i) {
        const cplx* arow = &a.data_[i * a.cols_];
        cplx* orow = &out.data_[i * b.cols_];
        for (std::size_t k = 0; k < a.cols_; ++k) {
            const cplx aik = arow[k];
            if (aik == cplx{0.0, 0.0}) continue;
            const cplx* brow = &b.data_[k * b.cols_];
            for (std::size_t j = 0; j < b.cols_; ++j) orow[j] += aik * brow[j];
        }
    }
    return out;
}

Matrix Matrix::conj_transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j) out(j, i) = std::conj((*this)(i, j));
    return out;
}

std::vector<cplx> Matrix::apply(const std::vector<cplx>& v) const {
    if (v.size() != cols_) throw std::invalid_argument("Matrix::apply: size mismatch");
    std::vector<cplx> out(rows_, cplx{0.0, 0.0});
    for (std::size_t i = 0; i < rows_; ++i) {
        cplx acc{0.0, 0.0};
        const cplx* row = &data_[i * cols_];
        for (std::size_t j = 0; j < cols_; ++j) acc += row[j] * v[j];
        out[i] = acc;
    }
    return out;
}

double Matrix::frobenius_norm() const {
    double s = 0.0;
    for (const auto& v : data_) s += std::norm(v);
    return std::sqrt(s);
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto& v : data_) m = std::max(m, std::abs(v));
    return m;
}

Matrix Matrix::hermitian_part() const {
    if (rows_ != cols_) throw std::invalid_argument("hermitian_part: matrix not square");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            out(i, j) = 0.5 * ((*this)(i, j) + std::conj((*this)(j, i)));
    return out;
}

namespace {

double off_diagonal_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (i != j) s += std::norm(a(i, j));
    return std::sqrt(s);
}

}  // namespace

EigenDecomposition hermitian_eig(const Matrix& input, double tol, int max_sweeps) {
    if (input.rows() != input.cols())
        throw std::invalid_argument("hermitian_eig: matrix not square");
    const std::size_t n = input.rows();
    Matrix a = input.hermitian_part();
    Matrix v = Matrix::identity(n);
    const double scale = std::max(a.frobenius_norm(), 1e-300);

    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (off_diagonal_norm(a) <= tol * scale) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const cplx apq = a(p, q);
                const double alpha = std::abs(apq);
                if (alpha <= tol * scale / (double(n) * double(n))) continue;
                const double app = a(p, p).real();
                const double aqq = a(q, q).real();
                const cplx phase = apq / alpha;  // e^{i phi}
                const double tau = (aqq - app) / (2.0 * alpha);
                double t;
                if (tau >= 0.0)
                    t = 1.0 / (tau + std::sqrt(1.0 + tau * tau));
                else
                    t = -1.0 / (-tau + std::sqrt(1.0 + tau * tau));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;
                const cplx sp = s * phase;        // s e^{i phi}
                const cplx spc = std::conj(sp);   // s e^{-i phi}

                // A <- J^H A J with J = [[c, sp], [-spc, c]] on columns (p, q).
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - spc * aiq;
                    a(i, q) = sp * aip + c * aiq;
                }
                for (std::size_t j = 0; j < n; ++j) {
                    const cplx apj = a(p, j), aqj = a(q, j);
                    a(p, j) = c * apj - sp * aqj;
                    a(q, j) = spc * apj + c * aqj;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx(a(p, p).real(), 0.0);
                a(q, q) = cplx(a(q, q).real(), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    const cplx vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - spc * viq;
                    v(i, q) = sp * vip + c * viq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::vector<double> diag(n);
    for (std::size_t i = 0; i < n; ++i) diag[i] = a(i, i).real();
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t x, std::size_t y) { return diag[x] < diag[y]; });

    EigenDecomposition out;
    out.values.resize(n);
    out.vectors = Matrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.values[k] = diag[order[k]];
        for (std::size_t i = 0; i < n; ++i) out.vectors(i, k) = v(i, order[k]);
    }
    return out;
}

double hermitian_spectral_norm(const Matrix& a) {
    const auto eig = hermitian_eig(a);
    if (eig.values.empty()) return 0.0;
    return std::max(std::abs(eig.values.front()), std::abs(eig.values.back()));
}

double hermitian_min_eig(const Matrix& a) {
    const auto eig = hermitian_eig(a);
    if (eig.values.empty()) return 0.0;
    return eig.values.front();
}

double hermitian_power_norm(const Matrix& a, int max_iters) {
    const std::size_t n = a.rows();
    if (n == 0) return 0.0;
    // Deterministic pseudo-random start keeps runs reproducible and avoids
    // starting orthogonal to the top eigenspace.
    std::vector<cplx> v(n);
    std::uint64_t state = 0x9e3779b97f4a7c15ULL;
    auto next = [&state]() {
        state ^= state << 13;
        state ^= state >> 7;
        state ^= state << 17;
        return double(state >> 11) * 0x1.0p-53 - 0.5;
    };
    for (auto& x : v) x = cplx(next(), next());
    double vn = 0.0;
    for (const auto& x : v) vn += std::norm(x);
    vn = std::sqrt(vn);
    for (auto& x : v) x /= vn;

    // Power iteration on A^2 (two applications per step) so +-lambda pairs
    // cannot stall the angle; the norm estimate ||A v|| is reported.
    double best = 0.0;
    int stale = 0;
    for (int it = 0; it < max_iters; ++it) {
        std::vector<cplx> y = a.apply(v);
        double yn = 0.0;
        for (const auto& x : y) yn += std::norm(x);
        yn = std::sqrt(yn);
        if (yn == 0.0) return best;
        if (yn <= best * (1.0 + 1e-13)) {
            if (++stale > 40) break;
        } else {
            stale = 0;
        }
        best = std::max(best, yn);
        std::vector<cplx> z = a.apply(y);
        double zn = 0.0;
        for (const auto& x : z) zn += std::norm(x);
        zn = std::sqrt(zn);
        if (zn == 0.0) return best;
        for (auto& x : z) x /= zn;
        v = std::move(z);
    }
    return best;
}

}  // namespace ifskit
