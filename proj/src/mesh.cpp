#include "dcl/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace dcl {

Mesh::Mesh(std::vector<double> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 3) {
    throw InvalidArgument("mesh needs at least 2 elements, got " +
                          std::to_string(nodes_.empty() ? 0 : nodes_.size() - 1));
  }
  for (std::size_t i = 0; i + 1 < nodes_.size(); ++i) {
    if (!std::isfinite(nodes_[i]) || !(nodes_[i + 1] > nodes_[i])) {
      throw InvalidArgument("mesh nodes must be finite and strictly increasing (index " +
                            std::to_string(i) + ")");
    }
  }
}

double Mesh::min_element_length() const {
  double h = element_length(0);
  for (std::size_t e = 1; e < num_elements(); ++e) h = std::min(h, element_length(e));
  return h;
}

double Mesh::max_element_length() const {
  double h = element_length(0);
  for (std::size_t e = 1; e < num_elements(); ++e) h = std::max(h, element_length(e));
  return h;
}

namespace {

// Lengths of m elements on a segment of length `len`, smallest first,
// consecutive lengths in ratio r.
std::vector<double> geometric_lengths(double len, int m, double r) {
  std::vector<double> h(m);
  if (std::abs(r - 1.0) < 1e-14) {
    std::fill(h.begin(), h.end(), len / m);
    return h;
  }
  const double h0 = len * (r - 1.0) / (std::pow(r, m) - 1.0);
  for (int k = 0; k < m; ++k) h[k] = h0 * std::pow(r, k);
  return h;
}

// Split n elements across segments proportionally to length, honoring minima.
std::vector<int> allocate(const std::vector<double>& lengths, const std::vector<int>& minimum,
                          int n) {
  const double total = std::accumulate(lengths.begin(), lengths.end(), 0.0);
  std::vector<int> count(lengths.size());
  for (std::size_t s = 0; s < lengths.size(); ++s) {
    count[s] = std::max(minimum[s], static_cast<int>(std::lround(n * lengths[s] / total)));
  }
  int sum = std::accumulate(count.begin(), count.end(), 0);
  while (sum != n) {
    // adjust the segment with the largest (or smallest) per-element length
    std::size_t pick = 0;
    double best = sum < n ? -1.0 : 1e300;
    for (std::size_t s = 0; s < lengths.size(); ++s) {
      const double per = lengths[s] / count[s];
      if (sum < n && per > best) {
        best = per;
        pick = s;
      } else if (sum > n && count[s] > minimum[s] && per < best) {
        best = per;
        pick = s;
      }
    }
    if (sum > n && count[pick] <= minimum[pick]) {
      throw InvalidArgument("too few elements for the requested grading points");
    }
    count[pick] += sum < n ? 1 : -1;
    sum += sum < n ? 1 : -1;
  }
  return count;
}

}  // namespace

Mesh build_mesh(Interval domain, int n_elements, const Grading& grading) {
  if (n_elements < 2) {
    throw InvalidArgument("build_mesh: n_elements must be >= 2, got " + std::to_string(n_elements));
  }
  if (!std::isfinite(domain.lo) || !std::isfinite(domain.hi) || !(domain.hi > domain.lo)) {
    throw InvalidArgument("build_mesh: interval must be finite and nondegenerate");
  }

  if (grading.kind == GradingKind::uniform) {
    std::vector<double> x(n_elements + 1);
    const double h = domain.length() / n_elements;
    for (int i = 0; i <= n_elements; ++i) x[i] = domain.lo + i * h;
    x.back() = domain.hi;
    return Mesh(std::move(x));
  }

  if (grading.points.empty()) throw InvalidArgument("build_mesh: geometric grading needs points");
  if (!(grading.ratio > 0.0)) throw InvalidArgument("build_mesh: grading ratio must be positive");

  auto is_point = [&](double x) {
    return std::any_of(grading.points.begin(), grading.points.end(),
                       [&](double p) { return std::abs(p - x) <= 1e-14 * (1.0 + std::abs(x)); });
  };

  std::vector<double> breaks{domain.lo};
  for (double p : grading.points) {
    if (p > domain.lo && p < domain.hi) breaks.push_back(p);
  }
  breaks.push_back(domain.hi);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  const std::size_t n_seg = breaks.size() - 1;
  std::vector<double> seg_len(n_seg);
  std::vector<int> minimum(n_seg);
  for (std::size_t s = 0; s < n_seg; ++s) {
    seg_len[s] = breaks[s + 1] - breaks[s];
    minimum[s] = (is_point(breaks[s]) && is_point(breaks[s + 1])) ? 2 : 1;
  }
  const std::vector<int> count = allocate(seg_len, minimum, n_elements);

  std::vector<double> x{domain.lo};
  for (std::size_t s = 0; s < n_seg; ++s) {
    const double a = breaks[s];
    const double b = breaks[s + 1];
    const bool left = is_point(a);
    const bool right = is_point(b);
    std::vector<double> h;
    if (left && right) {
      const int m1 = count[s] / 2;
      const int m2 = count[s] - m1;
      h = geometric_lengths(0.5 * (b - a), m1, grading.ratio);
      std::vector<double> h2 = geometric_lengths(0.5 * (b - a), m2, grading.ratio);
      h.insert(h.end(), h2.rbegin(), h2.rend());
    } else if (left) {
      h = geometric_lengths(b - a, count[s], grading.ratio);
    } else if (right) {
      h = geometric_lengths(b - a, count[s], grading.ratio);
      std::reverse(h.begin(), h.end());
    } else {
      h.assign(count[s], (b - a) / count[s]);
    }
    double pos = a;
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
      pos += h[k];
      x.push_back(pos);
    }
    x.push_back(b);
  }
  return Mesh(std::move(x));
}

}  // namespace dcl
