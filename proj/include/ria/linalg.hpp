#pragma once

#include <Eigen/Dense>
#include <json.hpp>
#include <stdexcept>
#include <utility>

#include "ria/rng.hpp"

namespace ria {

using ComplexMatrix = Eigen::MatrixXcd;

/// Relative singular-value cut used for every rank decision in the library.
inline constexpr double kDefaultRankTol = 1e-9;

/// Requested result does not exist (no annihilator of a full-row-rank matrix,
/// complement of the full space).
struct EmptyResultError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Two independent routes to the same quantity disagreed beyond tolerance,
/// e.g. an intersection dimension that fails the Grassmann cross-check.
struct NumericsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A linear subspace of C^ambient_dim stored as an orthonormal row basis.
/// dim() == basis.rows(); a 0-row basis is the zero subspace.
struct Subspace {
  Eigen::Index ambient_dim = 0;
  ComplexMatrix basis;  // dim x ambient_dim, orthonormal rows
  double tol = kDefaultRankTol;

  Eigen::Index dim() const { return basis.rows(); }
};

/// Number of singular values above tol * sigma_max; 0 for the zero matrix.
/// tol must lie in (0, 1).
int rank(const ComplexMatrix& a, double tol = kDefaultRankTol);

/// Orthonormal basis U of the full left annihilator of `a`, shape
/// (rows - rank) x rows with ||U * a||_F <= tol * ||a||_F.
/// Throws EmptyResultError when `a` has full row rank.
ComplexMatrix left_null_basis(const ComplexMatrix& a, double tol = kDefaultRankTol);

/// Rank and left annihilator from a single decomposition. The annihilator has
/// zero rows when `a` has full row rank (no error).
std::pair<int, ComplexMatrix> rank_and_left_null(const ComplexMatrix& a,
                                                 double tol = kDefaultRankTol);

/// Subspace spanned by the rows of `a`.
Subspace row_space(const ComplexMatrix& a, double tol = kDefaultRankTol);

/// Intersection of two subspaces of the same ambient space, computed through
/// the complement identity (Sa ^ Sb) = (Sa' + Sb')' and cross-checked against
/// the Grassmann dimension formula (NumericsError on disagreement).
Subspace intersect(const Subspace& sa, const Subspace& sb);

/// Orthogonal complement; throws EmptyResultError for a full-space input.
Subspace orthonormal_complement(const Subspace& s);

/// True iff every row v of `vectors` satisfies ||v - proj_S(v)|| <= tol * ||v||.
bool contains(const Subspace& s, const ComplexMatrix& vectors, double tol);

/// i.i.d. CN(0,1) entries, deterministic under the stream's seed.
ComplexMatrix random_gaussian(Eigen::Index rows, Eigen::Index cols, Rng& rng);

/// Debug-dump serialization: {rows, cols, re[], im[]} with row-major entries.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace ria
