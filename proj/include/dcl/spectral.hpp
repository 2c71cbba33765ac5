#pragma once

#include "dcl/types.hpp"

#include <vector>

namespace dcl {

/// Eigenpairs of K v = lambda M v on one connected component of the
/// coupling graph; columns of `vectors` are M-orthonormal.
struct SpectralBlock {
  std::vector<Index> nodes;
  Vector eigenvalues;
  Matrix vectors;
};

struct SpectralData {
  Index size = 0;
  std::vector<SpectralBlock> blocks;
};

/// Connected components of the graph with an edge wherever K or M has a
/// nonzero off-diagonal entry.
std::vector<std::vector<Index>> coupled_components(const SparseMatrix& k, const SparseMatrix& m);

/// Generalized symmetric eigendecomposition per component. Tridiagonal K
/// with diagonal M goes through LAPACK dstevd on M^-1/2 K M^-1/2; anything
/// else through a dense generalized solver. Components larger than
/// max_block are rejected.
SpectralData decompose(const SparseMatrix& k, const SparseMatrix& m, Index max_block = 4000);

/// Largest eigenvalue of a symmetric positive semidefinite operator given
/// by its action, by Lanczos with full reorthogonalization.
template <class Apply>
double lanczos_largest(Index n, Apply&& apply, int max_steps = 80, double rel_tol = 1e-12);

}  // namespace dcl

#include "dcl/spectral_impl.hpp"
