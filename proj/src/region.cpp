#include "dcl/region.hpp"

#include "dcl/format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>

namespace dcl {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view s, const char* what) {
  const std::string text(trim(s));
  if (text == "inf" || text == "+inf") return inf;
  if (text == "-inf") return -inf;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw InvalidArgument(std::string(what) + ": cannot parse number '" + text + "'");
  }
  if (used != text.size()) throw InvalidArgument(std::string(what) + ": trailing text in '" + text + "'");
  return v;
}

std::vector<std::string_view> split_union(std::string_view text) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t u = text.find('U', start);
    parts.push_back(trim(text.substr(start, u - start)));
    if (u == std::string_view::npos) break;
    start = u + 1;
  }
  return parts;
}

std::string format_endpoint(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_number(x);
}

}  // namespace

OpenSet::OpenSet(std::vector<Interval> intervals) : intervals_(std::move(intervals)) {
  for (const Interval& iv : intervals_) {
    if (std::isnan(iv.lo) || std::isnan(iv.hi) || !(iv.lo < iv.hi)) {
      throw InvalidArgument("open set: every interval needs lo < hi");
    }
  }
  std::sort(intervals_.begin(), intervals_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
  for (std::size_t i = 1; i < intervals_.size(); ++i) {
    if (intervals_[i].lo < intervals_[i - 1].hi) {
      throw InvalidArgument("open set: intervals overlap");
    }
  }
}

OpenSet OpenSet::whole() { return OpenSet({{-inf, inf}}); }

OpenSet OpenSet::parse(std::string_view text) {
  text = trim(text);
  if (text == "X" || text == "whole") return whole();
  if (text.empty() || text == "{}") return OpenSet{};
  std::vector<Interval> pieces;
  for (std::string_view part : split_union(text)) {
    if (part.size() < 5 || part.front() != '(' || part.back() != ')') {
      throw InvalidArgument("open set: expected '(a,b)', got '" + std::string(part) + "'");
    }
    const std::string_view body = part.substr(1, part.size() - 2);
    const auto comma = body.find(',');
    if (comma == std::string_view::npos) {
      throw InvalidArgument("open set: missing ',' in '" + std::string(part) + "'");
    }
    pieces.push_back({parse_real(body.substr(0, comma), "open set"),
                      parse_real(body.substr(comma + 1), "open set")});
  }
  return OpenSet(std::move(pieces));
}

bool OpenSet::is_whole() const {
  return intervals_.size() == 1 && std::isinf(intervals_[0].lo) && std::isinf(intervals_[0].hi);
}

bool OpenSet::contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo < x && x < iv.hi; });
}

bool OpenSet::closure_contains(double x) const {
  return std::any_of(intervals_.begin(), intervals_.end(),
                     [x](const Interval& iv) { return iv.lo <= x && x <= iv.hi; });
}

double OpenSet::distance_to_complement(double x) const {
  for (const Interval& iv : intervals_) {
    if (iv.lo < x && x < iv.hi) return std::min(x - iv.lo, iv.hi - x);
  }
  return 0.0;
}

std::vector<double> OpenSet::boundary_points(Interval domain) const {
  std::vector<double> pts;
  for (const Interval& iv : intervals_) {
    for (double e : {iv.lo, iv.hi}) {
      if (std::isfinite(e) && domain.lo <= e && e <= domain.hi) pts.push_back(e);
    }
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool OpenSet::meets(Interval domain) const {
  return std::any_of(intervals_.begin(), intervals_.end(), [&](const Interval& iv) {
    return std::max(iv.lo, domain.lo) < std::min(iv.hi, domain.hi);
  });
}

std::string OpenSet::text() const {
  if (intervals_.empty()) return "{}";
  std::string out;
  for (std::size_t i = 0; i < intervals_.size(); ++i) {
    if (i) out += "U";
    out += "(" + format_endpoint(intervals_[i].lo) + "," + format_endpoint(intervals_[i].hi) + ")";
  }
  return out;
}

TargetSet TargetSet::points(std::vector<double> pts) {
  std::vector<Interval> pieces;
  for (double p : pts) {
    if (!std::isfinite(p)) throw InvalidArgument("target set: points must be finite");
    pieces.push_back({p, p});
  }
  return intervals(std::move(pieces));
}

TargetSet TargetSet::intervals(std::vector<Interval> pieces) {
  for (const Interval& iv : pieces) {
    if (!std::isfinite(iv.lo) || !std::isfinite(iv.hi) || iv.lo > iv.hi) {
      throw InvalidArgument("target set: closed intervals need finite lo <= hi");
    }
  }
  std::sort(pieces.begin(), pieces.end(), [](const Interval& a, const Interval& b) {
    return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
  });
  pieces.erase(std::unique(pieces.begin(), pieces.end()), pieces.end());
  TargetSet t;
  t.pieces_ = std::move(pieces);
  return t;
}

TargetSet TargetSet::boundary_of(const OpenSet& omega, Interval domain) {
  return points(omega.boundary_points(domain));
}

TargetSet TargetSet::parse(std::string_view text) {
  text = trim(text);
  if (text == "boundary") {
    TargetSet t;
    t.boundary_keyword_ = true;
    return t;
  }
  std::vector<Interval> pieces;
  if (text.empty()) return {};
  for (std::string_view part : split_union(text)) {
    if (part.size() < 2) throw InvalidArgument("target set: cannot parse '" + std::string(part) + "'");
    const std::string_view body = part.substr(1, part.size() - 2);
    if (part.front() == '{' && part.back() == '}') {
      if (trim(body).empty()) continue;
      std::size_t start = 0;
      while (true) {
        const auto comma = body.find(',', start);
        const double p = parse_real(body.substr(start, comma - start), "target set");
        pieces.push_back({p, p});
        if (comma == std::string_view::npos) break;
        start = comma + 1;
      }
    } else if (part.front() == '[' && part.back() == ']') {
      const auto comma = body.find(',');
      if (comma == std::string_view::npos) {
        throw InvalidArgument("target set: missing ',' in '" + std::string(part) + "'");
      }
      pieces.push_back({parse_real(body.substr(0, comma), "target set"),
                        parse_real(body.substr(comma + 1), "target set")});
    } else {
      throw InvalidArgument("target set: expected '{points}' or '[a,b]', got '" + std::string(part) + "'");
    }
  }
  return intervals(std::move(pieces));
}

TargetSet TargetSet::resolved(const OpenSet& omega, Interval domain) const {
  if (!boundary_keyword_) return *this;
  return boundary_of(omega, domain);
}

double TargetSet::distance(double x) const {
  if (boundary_keyword_) throw InvalidArgument("target set: 'boundary' must be resolved first");
  double d = inf;
  for (const Interval& iv : pieces_) {
    if (x < iv.lo) d = std::min(d, iv.lo - x);
    else if (x > iv.hi) d = std::min(d, x - iv.hi);
    else return 0.0;
  }
  return d;
}

double TargetSet::measure() const {
  // Pieces may overlap; merge before summing.
  double total = 0.0;
  double cur_lo = -inf, cur_hi = -inf;
  for (const Interval& iv : pieces_) {
    if (iv.lo > cur_hi) {
      if (std::isfinite(cur_lo)) total += cur_hi - cur_lo;
      cur_lo = iv.lo;
      cur_hi = iv.hi;
    } else {
      cur_hi = std::max(cur_hi, iv.hi);
    }
  }
  if (std::isfinite(cur_lo)) total += cur_hi - cur_lo;
  return total;
}

std::string TargetSet::text() const {
  if (boundary_keyword_) return "boundary";
  std::vector<double> pts;
  std::string out;
  auto flush_points = [&] {
    if (pts.empty()) return;
    if (!out.empty()) out += "U";
    out += "{";
    for (std::size_t i = 0; i < pts.size(); ++i) out += (i ? "," : "") + format_number(pts[i]);
    out += "}";
    pts.clear();
  };
  for (const Interval& iv : pieces_) {
    if (iv.lo == iv.hi) {
      pts.push_back(iv.lo);
    } else {
      flush_points();
      if (!out.empty()) out += "U";
      out += "[" + format_number(iv.lo) + "," + format_number(iv.hi) + "]";
    }
  }
  flush_points();
  return out.empty() ? "{}" : out;
}

void RegionSpec::validate(Interval domain) const {
  if (!omega.meets(domain)) {
    throw InvalidArgument("region: omega " + omega.text() + " does not meet the domain [" +
                          format_number(domain.lo) + "," + format_number(domain.hi) + "]");
  }
  const TargetSet a = target.resolved(omega, domain);
  for (const Interval& iv : a.pieces()) {
    if (!omega.closure_contains(iv.lo) || !omega.closure_contains(iv.hi) || iv.lo < domain.lo ||
        iv.hi > domain.hi) {
      throw InvalidArgument("region: target " + a.text() + " is not inside closure(omega) within the domain");
    }
    // An interval piece must not cross a gap of omega.
    bool covered = false;
    for (const Interval& o : omega.intervals()) {
      if (o.lo <= iv.lo && iv.hi <= o.hi) covered = true;
    }
    if (!covered && iv.lo != iv.hi) {
      throw InvalidArgument("region: target interval crosses the complement of omega");
    }
  }
  for (std::size_t k = 0; k < radii.size(); ++k) {
    if (!(radii[k] > 0.0) || !std::isfinite(radii[k])) {
      throw InvalidArgument("region: neighbourhood radii must be finite and positive");
    }
    if (k > 0 && !(radii[k] < radii[k - 1])) {
      throw InvalidArgument("region: neighbourhood radii must strictly decrease");
    }
  }
}

std::vector<double> halving_radii(double eps0, int steps) {
  if (!(eps0 > 0.0) || steps < 1) throw InvalidArgument("radii: need eps0 > 0 and steps >= 1");
  std::vector<double> r(static_cast<std::size_t>(steps));
  for (int k = 0; k < steps; ++k) r[static_cast<std::size_t>(k)] = std::ldexp(eps0, -k);
  return r;
}

std::vector<double> default_radii(const Mesh& mesh) {
  return halving_radii(10.0 * mesh.max_element_length(), 6);
}

bool in_neighbourhood(const TargetSet& target, double eps, double x) {
  return target.distance(x) < eps;
}

}  // namespace dcl
