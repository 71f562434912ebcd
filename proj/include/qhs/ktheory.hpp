#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

#include "qhs/graph.hpp"

namespace qhs {

class IntMatrix {
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols, 0) {}
    static IntMatrix identity(std::size_t n);
    static IntMatrix from_rows(const std::vector<std::vector<long>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    mpz_class& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const mpz_class& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    IntMatrix operator*(const IntMatrix& o) const;
    bool operator==(const IntMatrix& o) const;
    bool is_diagonal() const;
    // Exact determinant by fraction-free elimination; square matrices only.
    mpz_class determinant() const;

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<mpz_class> a_;
};

struct SmithForm {
    IntMatrix S, U, V;  // U * M * V = S
};
// Diagonal entries are nonnegative and each divides the next.
SmithForm smith_normal_form(const IntMatrix& M);

struct AbelianGroup {
    std::size_t rank = 0;
    std::vector<mpz_class> torsion;  // entries >= 2, each dividing the next
    std::string to_string() const;
    bool operator==(const AbelianGroup&) const = default;
};

AbelianGroup cokernel(const SmithForm& f);
AbelianGroup kernel(const SmithForm& f);

// Vertex-indexed edge counts. Throws std::invalid_argument on boundary
// vertices or a non-symmetric graph.
IntMatrix gamma_matrix(const OrientedGraph& g);
// [[-I, -I], [I, gamma - I]]
IntMatrix phi_matrix(const IntMatrix& gamma);

struct KGroups {
    AbelianGroup K0, K1;
    std::string to_string() const;  // "K0 = ..., K1 = ..."
};
KGroups k_groups_from_gamma(const IntMatrix& gamma);
KGroups k_groups(const OrientedGraph& g);

} // namespace qhs
