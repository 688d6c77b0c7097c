#pragma once

#include <Eigen/Dense>
#include <vector>

// Integer-lattice numerical kernel: Cholesky factorization of quadratic
// forms, LLL reduction operating directly on the Gram matrix, brute-force
// enumeration oracles, and exact-integer rank/permutation utilities.
namespace cran::lattice {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using IMat = Eigen::Matrix<long long, Eigen::Dynamic, Eigen::Dynamic>;
using IVec = Eigen::Matrix<long long, Eigen::Dynamic, 1>;

// Upper-triangular F with F^T F = M. Throws std::domain_error naming the
// failing pivot if M is not positive definite.
Mat gram_factor(const Mat& m);

// Exact determinant via fraction-free (Bareiss) elimination. Throws on
// 128-bit overflow, which cannot happen at the matrix sizes used here.
long long det_exact(const IMat& a);

// Exact rank via fraction-free elimination.
int rank_exact(const IMat& a);

bool is_unimodular(const IMat& u);

struct LllResult {
  Mat reduced;     // U^T G U, size-reduced and Lovasz-reduced
  IMat transform;  // unimodular U, |det U| = 1
};

// LLL reduction of the lattice described by the Gram matrix G. The basis is
// never materialized; all inner products come from G itself.
LllResult lll_reduce(const Mat& g, double delta = 0.99);

// Test oracle: n linearly independent integer vectors with coordinates in
// [-coord_bound, coord_bound] minimizing the maximum quadratic form a^T G a.
// Rows sorted ascending by form, ties broken lexicographically, first
// nonzero coordinate positive. Refuses dimensions above 5.
IMat shortest_independent_vectors(const Mat& g, int coord_bound = 8);

// Column permutation pi such that every leading m x m submatrix of
// A(:, pi) is nonsingular (checked in exact integer arithmetic).
std::vector<int> full_rank_permutation(const IMat& a);

enum class SelectMode { Lll, LllThenEnumerate };

struct SelectedMatrix {
  IMat rows;  // candidate coefficient vectors, ascending by form
  Vec forms;  // per-row a^T G a
};

// Heuristic solver for the full-rank integer matrix minimizing the largest
// row quadratic form. Lll mode returns the columns of the LLL transform;
// LllThenEnumerate additionally runs the brute-force oracle (dim <= 5).
SelectedMatrix select_integer_matrix(const Mat& g,
                                     SelectMode mode = SelectMode::Lll,
                                     double delta = 0.99,
                                     int coord_bound = 8);

}  // namespace cran::lattice
