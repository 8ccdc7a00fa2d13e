#include "mgbench/skew.hpp"

#include <cmath>
#include <algorithm>

#include "mgbench/errors.hpp"

namespace mgbench {

namespace {

template <typename Mat>
void enforce_antisymmetry(Mat& a) {
  if (a.rows() != a.cols()) throw NumericError("pfaffian requires a square matrix");
  if (a.rows() == 0) return;
  double scale = std::max(1.0, a.cwiseAbs().maxCoeff());
  double drift = (a + a.transpose()).cwiseAbs().maxCoeff();
  if (drift <= 1e-12 * scale) return;
  if (drift <= 1e-10 * scale) {
    a = ((a - Mat(a.transpose())) / 2.0).eval();
    return;
  }
  throw NumericError("matrix is not antisymmetric (drift " + std::to_string(drift) + ")");
}

template <typename Scalar, typename Mat>
Scalar pfaffian_impl(Mat a) {
  enforce_antisymmetry(a);
  const Eigen::Index d = a.rows();
  if (d % 2 == 1) return Scalar(0);
  Scalar result(1);
  for (Eigen::Index k = 0; k + 1 < d; k += 2) {
    Eigen::Index pivot = k + 1;
    double best = std::abs(a(pivot, k));
    for (Eigen::Index i = k + 2; i < d; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        pivot = i;
      }
    }
    if (best == 0.0) return Scalar(0);
    if (pivot != k + 1) {
      a.row(k + 1).swap(a.row(pivot));
      a.col(k + 1).swap(a.col(pivot));
      result = -result;
    }
    Scalar mu = a(k, k + 1);
    result *= mu;
    Eigen::Index tail = d - (k + 2);
    if (tail > 0) {
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> tau =
          a.row(k).segment(k + 2, tail).transpose() / mu;
      Eigen::Matrix<Scalar, Eigen::Dynamic, 1> col = a.col(k + 1).segment(k + 2, tail);
      a.block(k + 2, k + 2, tail, tail) +=
          tau * col.transpose() - col * tau.transpose();
    }
  }
  return result;
}

}  // namespace

double pfaffian(Eigen::MatrixXd a) { return pfaffian_impl<double>(std::move(a)); }

std::complex<double> pfaffian(Eigen::MatrixXcd a) {
  return pfaffian_impl<std::complex<double>>(std::move(a));
}

std::vector<double> minor_sum_coefficients(const Eigen::MatrixXd& a,
                                           const Eigen::MatrixXd& b,
                                           const Eigen::MatrixXd& c) {
  const Eigen::Index dim = a.rows();
  if (dim == 0 || dim % 2 != 0) throw NumericError("minor sums need even positive dimension");
  if (b.rows() != dim || b.cols() != dim || c.rows() != dim || c.cols() != dim ||
      a.cols() != dim) {
    throw NumericError("minor sums need equally sized square matrices");
  }
  const int d = static_cast<int>(dim / 2);

  double pf_a = pfaffian(a);
  if (pf_a == 0.0) throw NumericError("minor sums require invertible A");
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible()) throw NumericError("minor sums require invertible A");
  Eigen::MatrixXd g = -lu.inverse();
  Eigen::MatrixXd cbct = c * b * c.transpose();

  const int nodes = 2 * d + 1;
  Eigen::VectorXd z(nodes), values(nodes);
  for (int j = 0; j < nodes; ++j) {
    z(j) = std::cos(M_PI * (2 * j + 1) / (2.0 * nodes));
    values(j) = pf_a * pfaffian(Eigen::MatrixXd(g + z(j) * z(j) * cbct));
  }

  Eigen::MatrixXd vand(nodes, nodes);
  for (int j = 0; j < nodes; ++j) {
    double p = 1.0;
    for (int q = 0; q < nodes; ++q) {
      vand(j, q) = p;
      p *= z(j);
    }
  }
  Eigen::VectorXd coef = vand.colPivHouseholderQr().solve(values);
  double residual = (vand * coef - values).cwiseAbs().maxCoeff();
  double ref = std::max(1.0, values.cwiseAbs().maxCoeff());
  if (residual > 1e-8 * ref)
    throw NumericError("minor sum interpolation residual out of tolerance");

  std::vector<double> out(static_cast<std::size_t>(d + 1));
  for (int s = 0; s <= d; ++s) out[static_cast<std::size_t>(s)] = coef(2 * s);
  return out;
}

OrthogonalElement::OrthogonalElement(Eigen::MatrixXd q) : q_(std::move(q)) {
  const Eigen::Index dim = q_.rows();
  if (dim == 0 || q_.cols() != dim) throw NumericError("orthogonal element must be square");
  double drift = (q_ * q_.transpose() - Eigen::MatrixXd::Identity(dim, dim))
                     .cwiseAbs()
                     .maxCoeff();
  if (drift > 1e-12) {
    if (drift > 1e-10)
      throw NumericError("matrix is not orthogonal (drift " + std::to_string(drift) + ")");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(q_, Eigen::ComputeFullU | Eigen::ComputeFullV);
    q_ = svd.matrixU() * svd.matrixV().transpose();
  }
  parity_ = q_.determinant() >= 0.0 ? 1 : -1;
}

OrthogonalElement OrthogonalElement::identity(int dim) {
  return OrthogonalElement(Eigen::MatrixXd::Identity(dim, dim));
}

Eigen::MatrixXd plane_rotation(int dim, int a, int b, double theta) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(dim, dim);
  double c = std::cos(theta), s = std::sin(theta);
  m(a - 1, a - 1) = c;
  m(a - 1, b - 1) = s;
  m(b - 1, a - 1) = -s;
  m(b - 1, b - 1) = c;
  return m;
}

OrthogonalElement haar_sample(int n, Rng& rng) {
  const int d = 2 * n;
  Eigen::MatrixXd gauss(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) gauss(r, c) = rng.normal();
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(gauss);
  Eigen::MatrixXd q = qr.householderQ();
  Eigen::MatrixXd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < d; ++j)
    if (r(j, j) < 0.0) q.col(j) = -q.col(j);
  if (rng.coin()) q.col(d - 1) = -q.col(d - 1);
  return OrthogonalElement(std::move(q));
}

namespace {

// In-place left multiplication by the plane-(j, j+1) rotation, 1-based j.
void apply_plane_left(Eigen::MatrixXd& m, int j, double phi) {
  double c = std::cos(phi), s = std::sin(phi);
  Eigen::RowVectorXd top = m.row(j - 1);
  m.row(j - 1) = c * top + s * m.row(j);
  m.row(j) = -s * top + c * m.row(j);
}

}  // namespace

GivensFactorization givens_decompose(const OrthogonalElement& q) {
  const int d = q.dim();
  GivensFactorization f;
  f.dim = d;
  f.parity = q.parity();
  Eigen::MatrixXd m = q.matrix();
  if (f.parity == -1) m.row(d - 1) = -m.row(d - 1);
  for (int layer = 1; layer <= d - 1; ++layer) {
    for (int j = d - 1; j >= layer; --j) {
      double uj = m(j - 1, layer - 1);
      double uj1 = m(j, layer - 1);
      double phi = 0.0;
      if (uj1 != 0.0 || (j == layer && uj < 0.0)) {
        phi = std::atan2(uj1, uj);
        apply_plane_left(m, j, phi);
      }
      f.rotations.emplace_back(j, -phi);
    }
  }
  return f;
}

OrthogonalElement givens_reconstruct(const GivensFactorization& f) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(f.dim, f.dim);
  for (const auto& [j, theta] : f.rotations)
    m = m * plane_rotation(f.dim, j, j + 1, theta);
  if (f.parity == -1) m.row(f.dim - 1) = -m.row(f.dim - 1);
  return OrthogonalElement(std::move(m));
}

}  // namespace mgbench
