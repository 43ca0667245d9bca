#include "esample/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>

#include "esample/random.hpp"

namespace esample {

WeightedSample partition_sample(const Partition& part, std::span<const Point> pts, std::uint64_t seed) {
  Rng rng(seed);
  WeightedSample out;
  out.method = part.method;
  std::size_t total = part.point_count();
  for (const auto& cell : part.cells) {
    if (cell.points.empty()) throw Error(ErrorCode::EmptyCell, "partition has an empty cell");
    out.points.push_back(pts[cell.points[rng.below(cell.points.size())]]);
    out.weights.push_back(static_cast<double>(cell.points.size()) / static_cast<double>(total));
  }
  out.k_requested = part.cells.size();
  out.k_effective = out.points.size();
  return out;
}

SampleMethod parse_sample_method(const std::string& name) {
  if (name == "random") return SampleMethod::Random;
  if (name == "mat") return SampleMethod::Mat;
  if (name == "chan") return SampleMethod::Chan;
  if (name == "chan_simple") return SampleMethod::ChanSimple;
  if (name == "ham") return SampleMethod::Ham;
  if (name == "double_ham") return SampleMethod::DoubleHam;
  throw Error(ErrorCode::InvalidArgument, "unknown sample method '" + name + "'");
}

std::string to_string(SampleMethod m) {
  switch (m) {
    case SampleMethod::Random: return "random";
    case SampleMethod::Mat: return "mat";
    case SampleMethod::Chan: return "chan";
    case SampleMethod::ChanSimple: return "chan_simple";
    case SampleMethod::Ham: return "ham";
    case SampleMethod::DoubleHam: return "double_ham";
  }
  return "unknown";
}

std::vector<SampleMethod> all_sample_methods() {
  return {SampleMethod::Random, SampleMethod::Mat,  SampleMethod::Chan,
          SampleMethod::ChanSimple, SampleMethod::Ham, SampleMethod::DoubleHam};
}

Presample parse_presample(const std::string& name) {
  if (name == "auto") return Presample::Auto;
  if (name == "on") return Presample::On;
  if (name == "off") return Presample::Off;
  throw Error(ErrorCode::InvalidArgument, "presample must be auto, on or off");
}

std::size_t presample_size(std::size_t n, std::size_t k, double c) {
  double kk = static_cast<double>(k);
  double s = std::ceil(c * kk * kk / std::log(std::max(kk, 2.0)));
  return static_cast<std::size_t>(std::clamp(s, kk, static_cast<double>(n)));
}

WeightedSample epsilon_sample(std::span<const Point> pts, std::size_t k, SampleMethod method,
                              const SampleOptions& opts, std::uint64_t seed) {
  if (k < 2 || k > pts.size()) throw Error(ErrorCode::InvalidK, "k must satisfy 2 <= k <= |X|");
  auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  WeightedSample out;
  if (method == SampleMethod::Random) {
    for (std::size_t i : sample_indices(pts.size(), k, rng)) out.points.push_back(pts[i]);
    out.weights.assign(k, 1.0 / static_cast<double>(k));
  } else {
    bool pre = opts.presample == Presample::On ||
               (opts.presample == Presample::Auto &&
                static_cast<double>(pts.size()) > 10.0 * static_cast<double>(k) * static_cast<double>(k));
    std::vector<Point> subset;
    std::span<const Point> y = pts;
    if (pre) {
      for (std::size_t i : sample_indices(pts.size(), presample_size(pts.size(), k, opts.presample_c), rng)) {
        subset.push_back(pts[i]);
      }
      y = subset;
    }
    std::uint64_t build_seed = rng.next();
    std::size_t leaf = (y.size() + k - 1) / k;
    Partition part;
    switch (method) {
      case SampleMethod::Mat: part = partition_mat(y, k, opts.mat, build_seed); break;
      case SampleMethod::Chan:
      case SampleMethod::ChanSimple: {
        ChanParams p = opts.chan;
        p.simple = method == SampleMethod::ChanSimple;
        part = partition_chan(y, k, p, build_seed);
        break;
      }
      case SampleMethod::Ham: part = ham_tree(y, leaf, opts.ham_t, build_seed); break;
      case SampleMethod::DoubleHam: part = double_ham_tree(y, leaf, opts.ham_t, build_seed); break;
      case SampleMethod::Random: break;
    }
    out = partition_sample(part, y, rng.next());
  }
  out.method = to_string(method);
  out.k_requested = k;
  out.k_effective = out.points.size();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

std::size_t sample_size_for_epsilon(double eps, double c) {
  if (!(eps > 0.0 && eps < 1.0)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in (0, 1)");
  if (!(c > 0.0)) throw Error(ErrorCode::InvalidArgument, "size constant must be positive");
  double k = c * std::pow(eps, -4.0 / 3.0) * std::pow(std::log(1.0 / eps), 2.0 / 3.0);
  return static_cast<std::size_t>(std::ceil(k));
}

namespace {

// Distinct points with value (sample weight) - (share of X).
struct Signed {
  std::vector<Point> pts;
  std::vector<double> val;
};

Signed collapse(std::span<const Point> x, const WeightedSample& s) {
  if (s.points.size() != s.weights.size()) {
    throw Error(ErrorCode::InvalidArgument, "sample points and weights differ in length");
  }
  std::vector<std::pair<Point, double>> all;
  all.reserve(x.size() + s.points.size());
  double share = x.empty() ? 0.0 : 1.0 / static_cast<double>(x.size());
  for (const auto& p : x) all.push_back({p, -share});
  for (std::size_t i = 0; i < s.points.size(); ++i) all.push_back({s.points[i], s.weights[i]});
  std::sort(all.begin(), all.end(), [](const auto& u, const auto& v) {
    return u.first.x < v.first.x || (u.first.x == v.first.x && u.first.y < v.first.y);
  });
  Signed out;
  for (const auto& [p, v] : all) {
    if (!out.pts.empty() && out.pts.back().x == p.x && out.pts.back().y == p.y) {
      out.val.back() += v;
    } else {
      out.pts.push_back(p);
      out.val.push_back(v);
    }
  }
  return out;
}

double cross(double ax, double ay, double bx, double by) { return ax * by - ay * bx; }

struct Dir {
  double dx, dy;  // folded into the upper half-plane
  double rx, ry;  // unfolded offset from the pivot
  double v;
  bool forward;
};

// Largest |value sum| over halfplanes bounded by a line through the pivot
// and another point. Points on the line contribute any prefix or suffix in
// their order along it, which covers every subset a halfplane can cut.
double pivot_sweep(const Signed& s, std::size_t pivot, std::vector<Dir>& dirs) {
  const Point& p = s.pts[pivot];
  dirs.clear();
  double others = 0.0;
  for (std::size_t j = 0; j < s.pts.size(); ++j) {
    if (j == pivot) continue;
    double rx = s.pts[j].x - p.x, ry = s.pts[j].y - p.y;
    bool forward = ry > 0 || (ry == 0 && rx > 0);
    dirs.push_back({forward ? rx : -rx, forward ? ry : -ry, rx, ry, s.val[j], forward});
    others += s.val[j];
  }
  std::sort(dirs.begin(), dirs.end(), [](const Dir& a, const Dir& b) {
    return cross(a.dx, a.dy, b.dx, b.dy) > 0;
  });

  double best = std::abs(s.val[pivot]);
  double left = 0.0;
  std::vector<std::pair<double, double>> on;  // (position along line, value)
  std::size_t g = 0;
  bool first = true;
  while (g < dirs.size()) {
    const Dir& ref = dirs[g];
    std::size_t end = g + 1;
    while (end < dirs.size() && cross(ref.dx, ref.dy, dirs[end].dx, dirs[end].dy) == 0) ++end;
    double fwd = 0.0, bwd = 0.0;
    on.clear();
    on.push_back({0.0, s.val[pivot]});
    for (std::size_t i = g; i < end; ++i) {
      (dirs[i].forward ? fwd : bwd) += dirs[i].v;
      on.push_back({dirs[i].rx * ref.dx + dirs[i].ry * ref.dy, dirs[i].v});
    }
    double at;
    if (first) {
      at = 0.0;
      for (const auto& d : dirs) {
        if (cross(ref.dx, ref.dy, d.rx, d.ry) > 0) at += d.v;
      }
      first = false;
    } else {
      at = left - fwd;
    }
    double right = others - at - fwd - bwd;
    std::sort(on.begin(), on.end(), [](const auto& u, const auto& v) { return u.first < v.first; });
    double on_total = 0.0;
    for (const auto& o : on) on_total += o.second;
    double prefix = 0.0;
    for (std::size_t k = 0; k <= on.size(); ++k) {
      for (double side : {at, right}) {
        best = std::max({best, std::abs(side + prefix), std::abs(side + on_total - prefix)});
      }
      if (k < on.size()) prefix += on[k].second;
    }
    left = at + bwd;
    g = end;
  }
  return best;
}

double error_over_pivots(const Signed& s, std::span<const std::size_t> pivots) {
  if (s.pts.empty()) return 0.0;
  if (s.pts.size() == 1) return std::abs(s.val[0]);
  double best = 0.0;
  std::vector<Dir> dirs;
  dirs.reserve(s.pts.size());
  for (std::size_t i : pivots) best = std::max(best, pivot_sweep(s, i, dirs));
  return std::min(best, 1.0);
}

}  // namespace

double exact_error(std::span<const Point> x, const WeightedSample& s) {
  if (x.size() > kExactErrorLimit) {
    throw Error(ErrorCode::TooLarge, "exact error is limited to " + std::to_string(kExactErrorLimit) +
                                         " input points; use approx_error");
  }
  Signed sig = collapse(x, s);
  std::vector<std::size_t> all(sig.pts.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return error_over_pivots(sig, all);
}

double brute_force_error(std::span<const Point> x, const WeightedSample& s) {
  Signed sig = collapse(x, s);
  const auto& p = sig.pts;
  const auto& v = sig.val;
  double best = 0.0;
  for (double w : v) best = std::max(best, std::abs(w));
  std::vector<std::pair<double, double>> on;
  for (std::size_t i = 0; i < p.size(); ++i) {
    for (std::size_t j = i + 1; j < p.size(); ++j) {
      double dx = p[j].x - p[i].x, dy = p[j].y - p[i].y;
      double left = 0.0, right = 0.0;
      on.clear();
      for (std::size_t q = 0; q < p.size(); ++q) {
        double rx = p[q].x - p[i].x, ry = p[q].y - p[i].y;
        double c = cross(dx, dy, rx, ry);
        if (c > 0) left += v[q];
        else if (c < 0) right += v[q];
        else on.push_back({rx * dx + ry * dy, v[q]});
      }
      std::sort(on.begin(), on.end());
      // Every contiguous run touching an end of the on-line order.
      for (std::size_t k = 0; k <= on.size(); ++k) {
        double head = 0.0, tail = 0.0;
        for (std::size_t q = 0; q < k; ++q) head += on[q].second;
        for (std::size_t q = k; q < on.size(); ++q) tail += on[q].second;
        for (double side : {left, right}) {
          best = std::max({best, std::abs(side + head), std::abs(side + tail)});
        }
      }
    }
  }
  return std::min(best, 1.0);
}

double approx_error(std::span<const Point> x, const WeightedSample& s, std::size_t budget,
                    std::uint64_t seed) {
  if (budget < 1) throw Error(ErrorCode::InvalidArgument, "budget must be >= 1");
  Signed sig = collapse(x, s);
  std::vector<std::size_t> order(sig.pts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (budget < order.size()) {
    // A full shuffle keeps smaller budgets a prefix of larger ones.
    Rng rng(seed);
    shuffle(std::span<std::size_t>(order), rng);
    order.resize(budget);
  }
  return error_over_pivots(sig, order);
}

bool LabeledPoints::inside(const Point& p) const {
  int s = side_of(p, boundary);
  return inside_above ? s >= 0 : s <= 0;
}

LabeledPoints plant_anomaly(std::span<const Point> pts, const PlantParams& params, std::uint64_t seed) {
  for (double f : {params.region_fraction, params.p_in, params.q_in, params.p_out, params.q_out}) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error(ErrorCode::InvalidArgument, "fractions must lie in [0, 1]");
  }
  if (params.p_in + params.q_in > 1.0 + 1e-12 || params.p_out + params.q_out > 1.0 + 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "label probabilities may not sum above 1");
  }
  Rng rng(seed);
  LabeledPoints out;
  out.points.assign(pts.begin(), pts.end());
  const double pi = std::acos(-1.0);
  double theta, c, s;
  do {
    theta = rng.uniform(0.0, 2.0 * pi);
    c = std::cos(theta);
    s = std::sin(theta);
  } while (std::abs(s) < 0.1);

  std::vector<double> proj;
  for (const auto& p : pts) proj.push_back(c * p.x + s * p.y);
  std::vector<double> sorted = proj;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::size_t m = static_cast<std::size_t>(std::llround(params.region_fraction * static_cast<double>(pts.size())));
  m = std::min(m, pts.size());
  double threshold;
  if (sorted.empty()) threshold = 0.0;
  else if (m == 0) threshold = sorted.front() + 1.0;
  else if (m == sorted.size()) threshold = sorted.back() - 1.0;
  else threshold = 0.5 * (sorted[m - 1] + sorted[m]);
  // c*x + s*y >= threshold  <=>  y >= (threshold - c*x)/s when s > 0.
  out.boundary = {-c / s, threshold / s};
  out.inside_above = s > 0;

  out.measured.assign(pts.size(), 0);
  out.baseline.assign(pts.size(), 0);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    bool in = out.inside(pts[i]);
    out.inside_count += in;
    double u = rng.uniform();
    double p = in ? params.p_in : params.p_out;
    double q = in ? params.q_in : params.q_out;
    if (u < p) out.measured[i] = 1;
    else if (u < p + q) out.baseline[i] = 1;
  }
  return out;
}

double scan_phi(const LabeledPoints& data, const Line& l, bool above) {
  std::size_t m_all = 0, b_all = 0, m_in = 0, b_in = 0;
  for (std::size_t i = 0; i < data.points.size(); ++i) {
    int s = side_of(data.points[i], l);
    bool in = above ? s >= 0 : s <= 0;
    m_all += data.measured[i];
    b_all += data.baseline[i];
    if (in) {
      m_in += data.measured[i];
      b_in += data.baseline[i];
    }
  }
  double m = m_all ? static_cast<double>(m_in) / static_cast<double>(m_all) : 0.0;
  double b = b_all ? static_cast<double>(b_in) / static_cast<double>(b_all) : 0.0;
  return std::abs(m - b);
}

namespace {

struct ScanEvent {
  double dx, dy;
  double v;
  bool forward;
  int net;  // index into the net, or -1 for sample points
};

}  // namespace

ScanResult scan_discrepancy(const LabeledPoints& data, const WeightedSample& measured,
                            const WeightedSample& baseline, std::size_t net_size, std::uint64_t seed) {
  if (net_size < 2) throw Error(ErrorCode::InvalidArgument, "net_size must be >= 2");
  if (data.points.size() < 2) throw Error(ErrorCode::TooFewPoints, "scan needs at least 2 points");
  auto start = std::chrono::steady_clock::now();
  Rng rng(seed);
  std::vector<Point> net;
  for (std::size_t i : sample_indices(data.points.size(), std::min(net_size, data.points.size()), rng)) {
    net.push_back(data.points[i]);
  }
  std::vector<Point> spts;
  std::vector<double> sval;
  for (std::size_t i = 0; i < measured.points.size(); ++i) {
    spts.push_back(measured.points[i]);
    sval.push_back(measured.weights[i]);
  }
  for (std::size_t i = 0; i < baseline.points.size(); ++i) {
    spts.push_back(baseline.points[i]);
    sval.push_back(-baseline.weights[i]);
  }

  // For each net pivot, sweep a line around it; the candidate lines are the
  // ones through a second net point and the value of a closed side is the
  // strict side plus everything on the line.
  double best = -1.0;
  std::size_t best_p = 0, best_q = 1;
  bool best_left = true;
  std::vector<ScanEvent> ev;
  for (std::size_t pi = 0; pi < net.size(); ++pi) {
    const Point& p = net[pi];
    ev.clear();
    double at_pivot = 0.0, others = 0.0;
    for (std::size_t i = 0; i < spts.size(); ++i) {
      double rx = spts[i].x - p.x, ry = spts[i].y - p.y;
      if (rx == 0 && ry == 0) {
        at_pivot += sval[i];
        continue;
      }
      bool fwd = ry > 0 || (ry == 0 && rx > 0);
      ev.push_back({fwd ? rx : -rx, fwd ? ry : -ry, sval[i], fwd, -1});
      others += sval[i];
    }
    for (std::size_t qi = 0; qi < net.size(); ++qi) {
      if (qi == pi || approx_eq(net[qi].x, p.x)) continue;
      double rx = net[qi].x - p.x, ry = net[qi].y - p.y;
      bool fwd = ry > 0 || (ry == 0 && rx > 0);
      ev.push_back({fwd ? rx : -rx, fwd ? ry : -ry, 0.0, fwd, static_cast<int>(qi)});
    }
    std::sort(ev.begin(), ev.end(), [](const ScanEvent& a, const ScanEvent& b) {
      double c = cross(a.dx, a.dy, b.dx, b.dy);
      if (c != 0) return c > 0;
      return a.net < b.net;
    });
    double left = 0.0;
    bool first = true;
    std::size_t g = 0;
    while (g < ev.size()) {
      const ScanEvent& ref = ev[g];
      std::size_t end = g + 1;
      while (end < ev.size() && cross(ref.dx, ref.dy, ev[end].dx, ev[end].dy) == 0) ++end;
      double fwd = 0.0, bwd = 0.0;
      int q = -1;
      for (std::size_t i = g; i < end; ++i) {
        (ev[i].forward ? fwd : bwd) += ev[i].v;
        if (ev[i].net >= 0 && q < 0) q = ev[i].net;
      }
      double at;
      if (first) {
        at = 0.0;
        for (std::size_t i = 0; i < spts.size(); ++i) {
          if (cross(ref.dx, ref.dy, spts[i].x - p.x, spts[i].y - p.y) > 0) at += sval[i];
        }
        first = false;
      } else {
        at = left - fwd;
      }
      if (q >= 0) {
        double on = fwd + bwd + at_pivot;
        double right = others - at - fwd - bwd;
        for (bool side_left : {true, false}) {
          double val = std::abs((side_left ? at : right) + on);
          if (val > best) {
            best = val;
            best_p = pi;
            best_q = static_cast<std::size_t>(q);
            best_left = side_left;
          }
        }
      }
      left = at + bwd;
      g = end;
    }
  }

  ScanResult res;
  if (best < 0.0) {
    // Every net pair is vertical; fall back to a horizontal line.
    res.line = {0.0, net.front().y};
    res.above = true;
  } else {
    const Point& p = net[best_p];
    const Point& q = net[best_q];
    res.line = line_through(p, q);
    // The folded sweep direction points right exactly when its x is
    // positive, and then "left" is "above".
    double rx = q.x - p.x, ry = q.y - p.y;
    bool fwd = ry > 0 || (ry == 0 && rx > 0);
    double fx = fwd ? rx : -rx;
    res.above = (fx > 0) == best_left;
  }
  double sample_val = 0.0;
  for (std::size_t i = 0; i < spts.size(); ++i) {
    int s = side_of(spts[i], res.line);
    if (res.above ? s >= 0 : s <= 0) sample_val += sval[i];
  }
  res.phi_sample = std::abs(sample_val);
  res.phi = scan_phi(data, res.line, res.above);
  res.phi_planted = scan_phi(data, data.boundary, data.inside_above);
  res.discrepancy_error = std::abs(res.phi - res.phi_planted);
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

}  // namespace esample
