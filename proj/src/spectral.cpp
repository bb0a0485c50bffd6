#include "krs/spectral.hpp"

#include <cmath>
#include <stdexcept>

#include "krs/core.hpp"
#include "krs/killrestart.hpp"

namespace krs {

namespace {

void require_base(double b) {
  if (!(b > 1.0)) throw std::invalid_argument("base must exceed 1");
}

constexpr double kPi = 3.14159265358979323846;

}  // namespace

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> build_AB(int L, double b) {
  require_base(b);
  if (L < 1) throw std::invalid_argument("dimension must be positive");
  Eigen::MatrixXd bmat(L, L);
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      bmat(i, j) = 0.5 * std::pow(b, std::min(i, j));
    }
  }
  Eigen::MatrixXd amat = bmat;
  amat.diagonal().setZero();
  return {std::move(amat), std::move(bmat)};
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> cholesky_B(int L, double b) {
  require_base(b);
  if (L < 1) throw std::invalid_argument("dimension must be positive");
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(L, L);
  for (int i = 0; i < L; ++i) {
    for (int j = i; j < L; ++j) u(i, j) = 1.0;
  }
  Eigen::VectorXd d(L);
  d(0) = 1.0 / std::sqrt(2.0);
  for (int k = 1; k < L; ++k) {
    d(k) = std::sqrt((std::pow(b, k) - std::pow(b, k - 1)) / 2.0);
  }
  return {std::move(u), std::move(d)};
}

Eigen::MatrixXd build_Z(int L, double b) {
  require_base(b);
  if (L < 2) throw std::invalid_argument("dimension must be at least 2");
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(L, L);
  double gamma = 1.0 / std::sqrt(b - 1.0);
  double alpha = -2.0 / (b - 1.0);
  double beta = std::sqrt(b) / (b - 1.0);
  z(0, 1) = z(1, 0) = gamma;
  for (int i = 1; i < L; ++i) {
    z(i, i) = alpha;
    if (i + 1 < L) z(i, i + 1) = z(i + 1, i) = beta;
  }
  return z;
}

Eigen::MatrixXd build_Z_congruence(int L, double b) {
  auto [a, bmat] = build_AB(L, b);
  auto [u, d] = cholesky_B(L, b);
  // U^-1 is unit upper bidiagonal with -1 on the superdiagonal.
  Eigen::MatrixXd uinv = Eigen::MatrixXd::Identity(L, L);
  for (int i = 0; i + 1 < L; ++i) uinv(i, i + 1) = -1.0;
  Eigen::MatrixXd dinv = d.cwiseInverse().asDiagonal();
  return dinv * uinv.transpose() * a * uinv * dinv;
}

double toeplitz_lambda_max(double alpha, double beta, int L) {
  if (L < 2) throw std::invalid_argument("L must be at least 2");
  return alpha + 2.0 * beta * std::cos(kPi / L);
}

namespace {

template <typename MatVec>
double power_iteration(MatVec&& apply, int size, double shift, double tol) {
  Eigen::VectorXd v = Eigen::VectorXd::Ones(size);
  v(0) += 1e-3;
  v.normalize();
  double lambda = 0.0;
  double prev_diff = std::numeric_limits<double>::infinity();
  int hits = 0;
  constexpr long kMaxIters = 10000000;
  for (long it = 0; it < kMaxIters; ++it) {
    Eigen::VectorXd w = apply(v);
    w += shift * v;
    double rayleigh = v.dot(w);
    double norm = w.norm();
    if (norm == 0.0) return -shift;  // zero matrix after shift
    v = w / norm;
    double diff = std::abs(rayleigh - lambda);
    lambda = rayleigh;
    if (it > 0) {
      // Geometric tail estimate of the remaining error: for diffs decaying
      // like d r^k the tail is d_k^2 / (d_{k-1} - d_k). Anything
      // non-decaying resets the streak.
      double est;
      if (diff == 0.0 && prev_diff == 0.0) {
        est = 0.0;
      } else if (prev_diff > diff) {
        est = diff * diff / (prev_diff - diff);
      } else {
        est = std::numeric_limits<double>::infinity();
      }
      hits = est <= 0.25 * tol ? hits + 1 : 0;
      if (hits >= 3) return lambda - shift;
    }
    prev_diff = diff;
  }
  throw std::runtime_error("power iteration did not converge");
}

double gershgorin_shift(const Eigen::MatrixXd& m) {
  double lo = 0.0;
  for (int i = 0; i < m.rows(); ++i) {
    double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    lo = std::min(lo, m(i, i) - radius);
  }
  return -lo + 1.0;
}

}  // namespace

double lambda_max_symmetric(const Eigen::MatrixXd& matrix, double tol) {
  if (matrix.rows() != matrix.cols()) {
    throw std::invalid_argument("matrix must be square");
  }
  double shift = gershgorin_shift(matrix);
  return power_iteration(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        return matrix.selfadjointView<Eigen::Lower>() * v;
      },
      static_cast<int>(matrix.rows()), shift, tol);
}

double lambda_max_toeplitz_banded(const Eigen::VectorXd& t, int size,
                                  double tol) {
  if (size < 1) throw std::invalid_argument("dimension must be positive");
  const int band = static_cast<int>(t.size()) - 1;
  double radius = 0.0;
  for (int k = 1; k <= band; ++k) radius += 2.0 * std::abs(t(k));
  double shift = -(t(0) - radius) + 1.0;
  return power_iteration(
      [&](const Eigen::VectorXd& v) -> Eigen::VectorXd {
        Eigen::VectorXd w = t(0) * v;
        for (int k = 1; k <= band; ++k) {
          for (int i = 0; i + k < size; ++i) {
            w(i) += t(k) * v(i + k);
            w(i + k) += t(k) * v(i);
          }
        }
        return w;
      },
      size, shift, tol);
}

double lambda_max_tridiagonal(const Eigen::VectorXd& diag,
                              const Eigen::VectorXd& subdiag) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, subdiag, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("tridiagonal eigensolver failed");
  }
  return solver.eigenvalues().maxCoeff();
}

double det_guarantee(double b) {
  require_base(b);
  return 1.0 + 2.0 * std::pow(b, 1.5) / (b - 1.0);
}

double rand_guarantee(double b) {
  require_base(b);
  return (std::sqrt(b) + 2.0 * b - 1.0) / (std::sqrt(b) * std::log(b));
}

double release_guarantee(double b) {
  require_base(b);
  return 2.0 * std::pow(b, 4) / (2.0 * b * b - 3.0 * b + 1.0);
}

double parallel_guarantee(double b) {
  require_base(b);
  return (3.0 * b * b - b) / (b - 1.0);
}

namespace {

double golden_minimize(double (*f)(double), double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

std::array<BoundCurve, 4> bound_curves() {
  std::array<BoundCurve, 4> curves = {{
      {BoundCurve::Kind::det, &det_guarantee, 0.0, 0.0},
      {BoundCurve::Kind::rand, &rand_guarantee, 0.0, 0.0},
      {BoundCurve::Kind::release, &release_guarantee, 0.0, 0.0},
      {BoundCurve::Kind::parallel, &parallel_guarantee, 0.0, 0.0},
  }};
  const double brackets[4][2] = {{1.5, 6.0}, {2.0, 32.0}, {1.01, 4.0}, {1.01, 4.0}};
  for (int i = 0; i < 4; ++i) {
    curves[i].minimizer =
        golden_minimize(curves[i].eval, brackets[i][0], brackets[i][1], 1e-9);
    curves[i].minimum = curves[i].eval(curves[i].minimizer);
  }
  return curves;
}

LbVector lb_vector(int L, double b) {
  require_base(b);
  double sq = std::sqrt(b);
  int ell_star = static_cast<int>(std::ceil((sq + 1.0) / (sq - 1.0)));
  if (L <= ell_star) {
    throw std::invalid_argument("dimension must exceed the truncation index");
  }
  LbVector result;
  result.ell_star = ell_star;
  result.x = Eigen::VectorXd::Zero(L);
  for (int ell = ell_star; ell <= L; ++ell) {
    double scale = 2.0 / std::sqrt(L * std::pow(b, ell - 1) * (b - 1.0));
    double value = scale * (sq * std::sin((ell - 1) * kPi / L) -
                            std::sin(ell * kPi / L));
    if (value < 0.0) {
      result.clamped = true;
      value = 0.0;
    }
    result.x(ell - 1) = value;
  }
  return result;
}

double quad_ratio(const Eigen::VectorXd& x, const Eigen::MatrixXd& A,
                  const Eigen::MatrixXd& B) {
  double denom = x.dot(B * x);
  if (denom <= 1e-300) throw std::invalid_argument("degenerate denominator");
  return x.dot(A * x) / denom;
}

RandTk rand_tk(double b, int K) {
  require_base(b);
  if (K < 3) throw std::invalid_argument("K must be at least 3");
  const double beta = std::pow(b, 1.0 / K);
  const double lb = std::log(b);
  RandTk result;
  result.t = Eigen::VectorXd::Zero(K);
  result.t(0) = (1.0 + 2.0 * beta) / K - beta * (1.0 + 1.0 / lb);
  for (int k = 1; k <= K - 2; ++k) {
    result.t(k) = (1.0 + std::pow(beta, 1 + k)) / (2.0 * K * std::pow(beta, k / 2.0));
  }
  result.t(K - 1) = 1.0 / (2.0 * std::pow(beta, (K - 1) / 2.0)) *
                    (b / lb - (b - beta) / (K * (beta - 1.0)));
  result.tail_sum = result.t(0);
  for (int k = 1; k < K; ++k) result.tail_sum += 2.0 * result.t(k);
  return result;
}

double rand_lb_quadratic(double b, int K, int L) {
  require_base(b);
  if (K < 1) throw std::invalid_argument("K must be positive");
  const double beta = std::pow(b, 1.0 / K);
  const int dim = L + 1;  // class indices 0..L
  LbVector v = lb_vector(dim, beta);
  const double f1 = f_alpha(1.0, b);

  Eigen::MatrixXd e0(dim, dim);
  Eigen::MatrixXd e = Eigen::MatrixXd::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    for (int l = 0; l < dim; ++l) {
      double lead = 0.5 * std::pow(beta, std::min(k, l));
      e0(k, l) = lead;
      int gap = std::abs(k - l);
      if (gap >= 1) {
        // Telescoped gap weight: sum_{i<=gap} [f(beta^i) - f(beta^(i-1))].
        double ratio = std::pow(beta, std::min(gap, K));
        e(k, l) = lead * (f_alpha(std::min(ratio, b), b) - f1);
      }
    }
  }
  return f1 + quad_ratio(v.x, e, e0);
}

}  // namespace krs
