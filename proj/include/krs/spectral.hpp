#pragma once

#include <Eigen/Dense>
#include <array>
#include <utility>

namespace krs {

/// Builds the L x L matrices with entries b^(min(i,j)-1)/2 (1-based i, j);
/// A additionally zeroes the diagonal.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_AB(int L, double b);

/// Closed-form factorization B = U^T D^2 U with U upper-unitriangular of all
/// ones and D = Diag(1, sqrt(b-1), sqrt(b^2-b), ...) / sqrt(2).
/// Returns (U, diagonal of D).
std::pair<Eigen::MatrixXd, Eigen::VectorXd> cholesky_B(int L, double b);

/// Tridiagonal congruence transform of A by the inverse Cholesky factors of
/// B: first row (0, 1/sqrt(b-1)), interior diagonal -2/(b-1), off-diagonal
/// sqrt(b)/(b-1). Built from the explicit pattern.
Eigen::MatrixXd build_Z(int L, double b);

/// Same matrix formed by the direct congruence D^-1 U^-T A U^-1 D^-1.
Eigen::MatrixXd build_Z_congruence(int L, double b);

/// Largest eigenvalue of the (L-1) x (L-1) tridiagonal Toeplitz matrix with
/// alpha on the diagonal and beta off it: alpha + 2 beta cos(pi/L).
double toeplitz_lambda_max(double alpha, double beta, int L);

/// Largest eigenvalue of a symmetric matrix by shifted power iteration
/// (Gershgorin shift, deterministic start vector, Aitken-style stopping at
/// absolute tolerance tol). Throws std::runtime_error on non-convergence.
double lambda_max_symmetric(const Eigen::MatrixXd& matrix, double tol);

/// Power iteration on a symmetric banded Toeplitz matrix given by its
/// diagonal values t(0), t(1), ... (t(k) sits on the k-th superdiagonal).
double lambda_max_toeplitz_banded(const Eigen::VectorXd& t, int size,
                                  double tol);

/// Largest eigenvalue of a symmetric tridiagonal matrix (QR iteration);
/// used for the large-L convergence sweeps.
double lambda_max_tridiagonal(const Eigen::VectorXd& diag,
                              const Eigen::VectorXd& subdiag);

/// The four closed-form guarantee functions of b > 1.
double det_guarantee(double b);       // 1 + 2 b^(3/2) / (b-1)
double rand_guarantee(double b);      // (sqrt(b) + 2b - 1) / (sqrt(b) log b)
double release_guarantee(double b);   // 2 b^4 / (2b^2 - 3b + 1)
double parallel_guarantee(double b);  // (3b^2 - b) / (b-1)

struct BoundCurve {
  enum class Kind { det, rand, release, parallel };
  Kind kind;
  double (*eval)(double b);
  double minimizer;
  double minimum;
};

/// The four guarantee curves with golden-section minimizers (tol 1e-9).
std::array<BoundCurve, 4> bound_curves();

/// Nonnegative lower-bound direction: the sine-based eigenvector transform
/// with the first ell_star - 1 coordinates zeroed; any remaining negative
/// coordinate is clamped and flagged.
struct LbVector {
  Eigen::VectorXd x;
  int ell_star = 0;
  bool clamped = false;
};

LbVector lb_vector(int L, double b);

/// x^T A x / x^T B x. Throws when the denominator is not positive.
double quad_ratio(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                  const Eigen::MatrixXd& B);

/// Banded-Toeplitz coefficients of the randomized analysis and their sum
/// S(K) = t_0 + 2 * sum_{k>=1} t_k, for beta = b^(1/K).
struct RandTk {
  Eigen::VectorXd t;  // t(0) .. t(K-1)
  double tail_sum = 0.0;
};

RandTk rand_tk(double b, int K);

/// Quadratic-form evaluation of the randomized lower-bound family:
/// f(1) + x^T E x / x^T E0 x with the gap-indexed matrices for beta = b^(1/K)
/// and the truncated sine vector of dimension L+1.
double rand_lb_quadratic(double b, int K, int L);

}  // namespace krs
