#include "dcl/spectral.hpp"

#include <lapacke.h>

#include <Eigen/Dense>

#include <algorithm>
#include <numeric>
#include <string>

namespace dcl {

namespace {

struct UnionFind {
  std::vector<Index> parent;
  explicit UnionFind(Index n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), Index{0});
  }
  Index find(Index i) {
    while (parent[static_cast<std::size_t>(i)] != i) {
      parent[static_cast<std::size_t>(i)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(i)])];
      i = parent[static_cast<std::size_t>(i)];
    }
    return i;
  }
  void join(Index a, Index b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
  }
};

void add_edges(const SparseMatrix& a, UnionFind& uf) {
  for (Index col = 0; col < a.outerSize(); ++col) {
    for (SparseMatrix::InnerIterator it(a, col); it; ++it) {
      if (it.row() != col && it.value() != 0.0) uf.join(it.row(), col);
    }
  }
}

Matrix dense_block(const SparseMatrix& a, const std::vector<Index>& nodes) {
  const Index n = static_cast<Index>(nodes.size());
  Matrix out = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i; j < n; ++j) {
      out(i, j) = a.coeff(nodes[static_cast<std::size_t>(i)], nodes[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

// Dense block extraction that scales: only the band for tridiagonal data.
void band_block(const SparseMatrix& k, const SparseMatrix& m, const std::vector<Index>& nodes, Vector& kd,
                Vector& ko, Vector& md, bool& banded) {
  const Index n = static_cast<Index>(nodes.size());
  kd.resize(n);
  md.resize(n);
  ko.resize(std::max<Index>(n - 1, 0));
  std::vector<Index> local(static_cast<std::size_t>(k.rows()), -1);
  for (Index i = 0; i < n; ++i) local[static_cast<std::size_t>(nodes[static_cast<std::size_t>(i)])] = i;
  kd.setZero();
  ko.setZero();
  md.setZero();
  banded = true;
  for (Index i = 0; i < n; ++i) {
    const Index g = nodes[static_cast<std::size_t>(i)];
    for (SparseMatrix::InnerIterator it(k, g); it; ++it) {
      const Index r = local[static_cast<std::size_t>(it.row())];
      if (r < 0 || it.value() == 0.0) continue;
      if (r == i) kd[i] = it.value();
      else if (r == i + 1) ko[i] = it.value();
      else if (r != i - 1) banded = false;
    }
    for (SparseMatrix::InnerIterator it(m, g); it; ++it) {
      const Index r = local[static_cast<std::size_t>(it.row())];
      if (r < 0 || it.value() == 0.0) continue;
      if (r == i) md[i] = it.value();
      else banded = false;
    }
  }
}

}  // namespace

std::vector<std::vector<Index>> coupled_components(const SparseMatrix& k, const SparseMatrix& m) {
  const Index n = k.rows();
  UnionFind uf(n);
  add_edges(k, uf);
  add_edges(m, uf);
  std::vector<std::vector<Index>> groups;
  std::vector<Index> slot(static_cast<std::size_t>(n), -1);
  for (Index i = 0; i < n; ++i) {
    const Index r = uf.find(i);
    if (slot[static_cast<std::size_t>(r)] < 0) {
      slot[static_cast<std::size_t>(r)] = static_cast<Index>(groups.size());
      groups.emplace_back();
    }
    groups[static_cast<std::size_t>(slot[static_cast<std::size_t>(r)])].push_back(i);
  }
  return groups;
}

SpectralData decompose(const SparseMatrix& k, const SparseMatrix& m, Index max_block) {
  if (k.rows() != k.cols() || m.rows() != m.cols() || k.rows() != m.rows()) {
    throw InvalidArgument("decompose: K and M must be square of equal size");
  }
  SpectralData data;
  data.size = k.rows();
  for (auto& nodes : coupled_components(k, m)) {
    const Index n = static_cast<Index>(nodes.size());
    if (n > max_block) {
      throw InvalidArgument("decompose: coupled block of size " + std::to_string(n) + " exceeds " +
                            std::to_string(max_block) + "; use resolvent powers instead");
    }
    SpectralBlock block;
    Vector kd, ko, md;
    bool banded = false;
    band_block(k, m, nodes, kd, ko, md, banded);
    if (banded) {
      for (Index i = 0; i < n; ++i) {
        if (!(md[i] > 0.0)) throw NumericalError("decompose: mass matrix is not positive definite");
      }
      const Vector s = md.cwiseSqrt().cwiseInverse();
      Vector d = kd.cwiseProduct(s).cwiseProduct(s);
      Vector e(std::max<Index>(n - 1, 1));
      for (Index i = 0; i + 1 < n; ++i) e[i] = ko[i] * s[i] * s[i + 1];
      Matrix z(n, n);
      const lapack_int info = LAPACKE_dstevd(LAPACK_COL_MAJOR, 'V', static_cast<lapack_int>(n), d.data(), e.data(),
                                             z.data(), static_cast<lapack_int>(n));
      if (info != 0) throw NumericalError("decompose: dstevd failed with info " + std::to_string(info));
      block.eigenvalues = d.cwiseMax(0.0);
      block.vectors = s.asDiagonal() * z;
    } else {
      const Matrix kb = dense_block(k, nodes).selfadjointView<Eigen::Upper>();
      const Matrix mb = dense_block(m, nodes).selfadjointView<Eigen::Upper>();
      Eigen::GeneralizedSelfAdjointEigenSolver<Matrix> es(kb, mb);
      if (es.info() != Eigen::Success) throw NumericalError("decompose: generalized eigensolver failed");
      block.eigenvalues = es.eigenvalues().cwiseMax(0.0);
      block.vectors = es.eigenvectors();
    }
    block.nodes = std::move(nodes);
    data.blocks.push_back(std::move(block));
  }
  return data;
}

}  // namespace dcl
