#include "qhs/ktheory.hpp"

#include <algorithm>
#include <stdexcept>

#include "qhs/cost.hpp"

namespace qhs {

IntMatrix IntMatrix::identity(std::size_t n) {
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
    return m;
}

IntMatrix IntMatrix::from_rows(const std::vector<std::vector<long>>& rows) {
    IntMatrix m(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != m.cols()) throw std::invalid_argument("ragged integer matrix");
        for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
    }
    return m;
}

IntMatrix IntMatrix::operator*(const IntMatrix& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("shape mismatch in product");
    IntMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t k = 0; k < cols_; ++k) {
            const mpz_class& x = (*this)(i, k);
            if (x == 0) continue;
            for (std::size_t j = 0; j < o.cols_; ++j) r(i, j) += x * o(k, j);
        }
    return r;
}

bool IntMatrix::operator==(const IntMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
}

bool IntMatrix::is_diagonal() const {
    for (std::size_t i = 0; i < rows_; ++i)
        for (std::size_t j = 0; j < cols_; ++j)
            if (i != j && (*this)(i, j) != 0) return false;
    return true;
}

mpz_class IntMatrix::determinant() const {
    if (rows_ != cols_) throw std::invalid_argument("determinant of a non-square matrix");
    // Bareiss elimination; every division is exact.
    IntMatrix m = *this;
    const std::size_t n = rows_;
    mpz_class prev = 1, sign = 1;
    for (std::size_t k = 0; k < n; ++k) {
        if (m(k, k) == 0) {
            std::size_t p = k + 1;
            while (p < n && m(p, k) == 0) ++p;
            if (p == n) return 0;
            for (std::size_t j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                mpz_class v = m(i, j) * m(k, k) - m(i, k) * m(k, j);
                mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), prev.get_mpz_t());
                m(i, j) = v;
            }
        }
        prev = m(k, k);
    }
    return n == 0 ? mpz_class(1) : sign * m(n - 1, n - 1);
}

namespace {

void swap_rows(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(a, j), m(b, j));
}
void swap_cols(IntMatrix& m, std::size_t a, std::size_t b) {
    if (a == b) return;
    for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m(i, a), m(i, b));
}
// row_i += f * row_k
void add_row(IntMatrix& m, std::size_t i, std::size_t k, const mpz_class& f) {
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) += f * m(k, j);
}
void add_col(IntMatrix& m, std::size_t j, std::size_t k, const mpz_class& f) {
    for (std::size_t i = 0; i < m.rows(); ++i) m(i, j) += f * m(i, k);
}

} // namespace

SmithForm smith_normal_form(const IntMatrix& M) {
    SmithForm f{M, IntMatrix::identity(M.rows()), IntMatrix::identity(M.cols())};
    IntMatrix& A = f.S;
    const std::size_t n = std::min(A.rows(), A.cols());
    for (std::size_t t = 0; t < n; ++t) {
        while (true) {
            // Pivot of least absolute value in the trailing block.
            std::size_t pi = t, pj = t;
            bool found = false;
            for (std::size_t i = t; i < A.rows(); ++i)
                for (std::size_t j = t; j < A.cols(); ++j)
                    if (A(i, j) != 0 && (!found || abs(A(i, j)) < abs(A(pi, pj)))) {
                        pi = i;
                        pj = j;
                        found = true;
                    }
            if (!found) return f;
            swap_rows(A, t, pi);
            swap_rows(f.U, t, pi);
            swap_cols(A, t, pj);
            swap_cols(f.V, t, pj);

            bool clean = true;
            for (std::size_t i = t + 1; i < A.rows(); ++i) {
                if (A(i, t) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A(i, t).get_mpz_t(), A(t, t).get_mpz_t());
                add_row(A, i, t, -q);
                add_row(f.U, i, t, -q);
                if (A(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < A.cols(); ++j) {
                if (A(t, j) == 0) continue;
                mpz_class q;
                mpz_fdiv_q(q.get_mpz_t(), A(t, j).get_mpz_t(), A(t, t).get_mpz_t());
                add_col(A, j, t, -q);
                add_col(f.V, j, t, -q);
                if (A(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // The pivot must divide the trailing block.
            bool divides = true;
            for (std::size_t i = t + 1; i < A.rows() && divides; ++i)
                for (std::size_t j = t + 1; j < A.cols(); ++j)
                    if (!mpz_divisible_p(A(i, j).get_mpz_t(), A(t, t).get_mpz_t())) {
                        add_row(A, t, i, 1);
                        add_row(f.U, t, i, 1);
                        divides = false;
                        break;
                    }
            if (divides) break;
        }
        if (A(t, t) < 0) {
            for (std::size_t j = 0; j < A.cols(); ++j) A(t, j) = -A(t, j);
            for (std::size_t j = 0; j < f.U.cols(); ++j) f.U(t, j) = -f.U(t, j);
        }
    }
    return f;
}

namespace {

std::size_t nonzero_diagonal(const IntMatrix& S) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < std::min(S.rows(), S.cols()); ++i)
        if (S(i, i) != 0) ++k;
    return k;
}

} // namespace

AbelianGroup cokernel(const SmithForm& f) {
    AbelianGroup g;
    g.rank = f.S.rows() - nonzero_diagonal(f.S);
    for (std::size_t i = 0; i < std::min(f.S.rows(), f.S.cols()); ++i)
        if (f.S(i, i) >= 2) g.torsion.push_back(f.S(i, i));
    return g;
}

AbelianGroup kernel(const SmithForm& f) {
    AbelianGroup g;
    g.rank = f.S.cols() - nonzero_diagonal(f.S);
    return g;
}

std::string AbelianGroup::to_string() const {
    std::vector<std::string> parts;
    if (rank == 1) parts.push_back("Z");
    if (rank > 1) parts.push_back("Z^" + std::to_string(rank));
    for (const auto& t : torsion) parts.push_back("Z/" + t.get_str());
    if (parts.empty()) return "0";
    std::string s = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) s += " + " + parts[i];
    return s;
}

std::string KGroups::to_string() const {
    return "K0 = " + K0.to_string() + ", K1 = " + K1.to_string();
}

IntMatrix gamma_matrix(const OrientedGraph& g) {
    if (!g.boundary().empty())
        throw std::invalid_argument("K-theory needs the full graph; boundary vertices present");
    if (!is_symmetric(g)) throw std::invalid_argument("K-theory needs a symmetric graph");
    auto A = adjacency(g);
    IntMatrix m(g.num_vertices(), g.num_vertices());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            m(i, j) = A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
    return m;
}

IntMatrix phi_matrix(const IntMatrix& gamma) {
    if (gamma.rows() != gamma.cols()) throw std::invalid_argument("gamma must be square");
    const std::size_t k = gamma.rows();
    IntMatrix p(2 * k, 2 * k);
    for (std::size_t i = 0; i < k; ++i) {
        p(i, i) = -1;
        p(i, k + i) = -1;
        p(k + i, i) = 1;
        for (std::size_t j = 0; j < k; ++j) p(k + i, k + j) = gamma(i, j);
        p(k + i, k + i) -= 1;
    }
    return p;
}

KGroups k_groups_from_gamma(const IntMatrix& gamma) {
    auto f = smith_normal_form(phi_matrix(gamma));
    return {cokernel(f), kernel(f)};
}

KGroups k_groups(const OrientedGraph& g) {
    if (!is_connected(g)) throw std::invalid_argument("K-theory needs a connected graph");
    return k_groups_from_gamma(gamma_matrix(g));
}

} // namespace qhs
