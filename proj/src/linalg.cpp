#include "ria/linalg.hpp"


namespace ria {

namespace {

void check_tol(double tol) {
  if (!(tol > 0.0 && tol < 1.0))
    throw std::invalid_argument("rank tolerance must lie in (0, 1)");
}

void check_nonempty(const ComplexMatrix& a) {
  if (a.rows() == 0 || a.cols() == 0)
    throw std::invalid_argument("matrix must be nonempty");
}

int count_above_cut(const Eigen::VectorXd& sv, double tol) {
  if (sv.size() == 0) return 0;
  const double cut = tol * sv(0);
  if (sv(0) == 0.0) return 0;
  int r = 0;
  while (r < sv.size() && sv(r) > cut) ++r;
  return r;
}

// Orthonormal complement of the row space of an orthonormal-rows basis,
// possibly empty (0 rows). Bases are small here; BDCSVD falls back to Jacobi
// below its internal switch size.
ComplexMatrix complement_rows(const ComplexMatrix& basis, Eigen::Index ambient,
                              double tol) {
  if (basis.rows() == 0) return ComplexMatrix::Identity(ambient, ambient);
  Eigen::BDCSVD<ComplexMatrix> svd(basis, Eigen::ComputeFullV);
  const int r = count_above_cut(svd.singularValues(), tol);
  return svd.matrixV().rightCols(ambient - r).adjoint();
}

}  // namespace

int rank(const ComplexMatrix& a, double tol) {
  check_nonempty(a);
  check_tol(tol);
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return count_above_cut(svd.singularValues(), tol);
}

std::pair<int, ComplexMatrix> rank_and_left_null(const ComplexMatrix& a, double tol) {
  check_nonempty(a);
  check_tol(tol);
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU);
  const int r = count_above_cut(svd.singularValues(), tol);
  return {r, svd.matrixU().rightCols(a.rows() - r).adjoint()};
}

ComplexMatrix left_null_basis(const ComplexMatrix& a, double tol) {
  auto [r, null_basis] = rank_and_left_null(a, tol);
  if (null_basis.rows() == 0)
    throw EmptyResultError("left_null_basis: matrix has full row rank");
  return null_basis;
}

Subspace row_space(const ComplexMatrix& a, double tol) {
  check_nonempty(a);
  check_tol(tol);
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const int r = count_above_cut(svd.singularValues(), tol);
  return Subspace{a.cols(), svd.matrixV().leftCols(r).adjoint(), tol};
}

Subspace intersect(const Subspace& sa, const Subspace& sb) {
  if (sa.ambient_dim != sb.ambient_dim)
    throw std::invalid_argument("intersect: ambient dimensions differ");
  const Eigen::Index n = sa.ambient_dim;
  const double tol = std::max(sa.tol, sb.tol);

  if (sa.dim() == n) return Subspace{n, sb.basis, tol};
  if (sb.dim() == n) return Subspace{n, sa.basis, tol};
  if (sa.dim() == 0 || sb.dim() == 0)
    return Subspace{n, ComplexMatrix(0, n), tol};

  ComplexMatrix complements(2 * n - sa.dim() - sb.dim(), n);
  complements.topRows(n - sa.dim()) = complement_rows(sa.basis, n, tol);
  complements.bottomRows(n - sb.dim()) = complement_rows(sb.basis, n, tol);

  Eigen::BDCSVD<ComplexMatrix> svd(complements, Eigen::ComputeFullV);
  const int sum_dim = count_above_cut(svd.singularValues(), tol);
  Subspace result{n, svd.matrixV().rightCols(n - sum_dim).adjoint(), tol};

  // Grassmann cross-check: dim(Sa ^ Sb) = dim Sa + dim Sb - dim(Sa + Sb).
  ComplexMatrix stacked(sa.dim() + sb.dim(), n);
  stacked.topRows(sa.dim()) = sa.basis;
  stacked.bottomRows(sb.dim()) = sb.basis;
  const Eigen::Index grassmann = sa.dim() + sb.dim() - rank(stacked, tol);
  if (result.dim() != grassmann)
    throw NumericsError("intersect: dimension disagrees with the Grassmann formula (" +
                        std::to_string(result.dim()) + " vs " +
                        std::to_string(grassmann) + ")");
  return result;
}

Subspace orthonormal_complement(const Subspace& s) {
  if (s.dim() >= s.ambient_dim)
    throw EmptyResultError("orthonormal_complement: subspace is the full space");
  return Subspace{s.ambient_dim, complement_rows(s.basis, s.ambient_dim, s.tol), s.tol};
}

bool contains(const Subspace& s, const ComplexMatrix& vectors, double tol) {
  if (vectors.cols() != s.ambient_dim)
    throw std::invalid_argument("contains: vector length differs from ambient dimension");
  for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
    const auto v = vectors.row(i);
    const double norm = v.norm();
    if (norm == 0.0) continue;
    const ComplexMatrix projected = (v * s.basis.adjoint()) * s.basis;
    if ((v - projected).norm() > tol * norm) return false;
  }
  return true;
}

ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng) {
  if (rows <= 0 || cols <= 0)
    throw std::invalid_argument("random_gaussian: dimensions must be positive");
  ComplexMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = rng.gaussian();
  return m;
}

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(m.size());
  im.reserve(m.size());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

ComplexMatrix matrix_from_json(const nlohmann::json& j) {
  const Eigen::Index rows = j.at("rows").get<Eigen::Index>();
  const Eigen::Index cols = j.at("cols").get<Eigen::Index>();
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (rows <= 0 || cols <= 0 ||
      static_cast<Eigen::Index>(re.size()) != rows * cols || re.size() != im.size())
    throw std::invalid_argument("matrix_from_json: inconsistent shape");
  ComplexMatrix m(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index r = 0; r < rows; ++r)
    for (Eigen::Index c = 0; c < cols; ++c, ++k)
      m(r, c) = {re[k].get<double>(), im[k].get<double>()};
  return m;
}

}  // namespace ria
