#include "pantograph/measures.hpp"

#include "pantograph/maxflow.hpp"

#include <cmath>
#include <map>
#include <random>
#include <unordered_map>

namespace pantograph {

namespace {

int algebra_dim(const TauContext& ctx) {
  int c = ctx.n() * ctx.n() - 1;
  return ctx.field() == Field::Complex ? 2 * c : c;
}

// Orthonormal-coordinate sampler for the traceless algebra (Frobenius inner
// product); returns a matrix with ||xi||_F = r.
Mat algebra_direction(std::mt19937_64& rng, const TauContext& ctx) {
  std::normal_distribution<double> g(0.0, 1.0);
  const int n = ctx.n();
  const bool cx = ctx.field() == Field::Complex;
  Mat xi = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) xi(i, j) = cplx(g(rng), cx ? g(rng) : 0.0);
  xi -= (xi.trace() / real_t(n)) * Mat::Identity(n, n);
  real_t nn = xi.norm();
  if ((double)nn < 1e-12) xi(0, 1) = 1.0;
  return xi / xi.norm();
}

double ball_volume(int d, double r) {
  // pi^{d/2} r^d / Gamma(d/2 + 1)
  return std::pow(M_PI, 0.5 * d) * std::pow(r, d) / std::tgamma(0.5 * d + 1.0);
}

// sup ||xi||_F / N_avg(xi), estimated over deterministic directions and
// memoized per context shape.
double norm_ratio_bound(const TauContext& ctx) {
  static std::map<std::pair<int, int>, double> cache;
  auto key = std::make_pair(ctx.n(), int(ctx.field()));
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::mt19937_64 rng(5150);
  double worst = 1.0;
  for (int k = 0; k < 400; ++k) {
    Mat xi = algebra_direction(rng, ctx);
    double na = ctx.metric().algebra_norm(xi);
    if (na > 1e-12) worst = std::max(worst, 1.0 / na);
  }
  worst *= 1.1;
  cache[key] = worst;
  return worst;
}

double safe_dist(const GroupMetric& m, const GroupElement& a, const GroupElement& b) {
  try {
    return m.distance(a, b);
  } catch (const std::domain_error&) {
    return std::numeric_limits<double>::infinity();
  }
}

}  // namespace

BumpFunction::BumpFunction(double eps, const TauContext& ctx, unsigned seed, int samples)
    : eps_(eps) {
  const int d = algebra_dim(ctx);
  const double rho = eps * norm_ratio_bound(ctx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double acc = 0.0, acc2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    Mat dir = algebra_direction(rng, ctx);
    double r = rho * std::pow(u01(rng), 1.0 / d);
    double na = ctx.metric().algebra_norm(Mat(real_t(r) * dir));
    double v = profile((na / eps) * (na / eps));
    acc += v;
    acc2 += v * v;
  }
  double mean = acc / samples;
  norm_ = ball_volume(d, rho) * mean;
  double var = std::max(0.0, acc2 / samples - mean * mean);
  norm_err_ = ball_volume(d, rho) * std::sqrt(var / samples);
}

MonteCarloValue weight_W(const GroupElement& x, const GroupElement& y, double eps, double R,
                         int sign, const TauContext& ctx, unsigned seed, int samples) {
  if (!(eps > 0) || !(R > 0)) throw std::invalid_argument("weight_W: eps, R > 0 required");
  const double eta = eps / R;
  static std::map<std::tuple<double, int, int>, BumpFunction> cache;
  auto key = std::make_tuple(eta, ctx.n(), int(ctx.field()));
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, BumpFunction(eta, ctx)).first;
  const BumpFunction& bump = it->second;

  // Importance sampling from the first bump: g = x exp(xi) with xi drawn
  // proportional to chi(||xi||^2/eta^2) by rejection, so that
  //   W = (1/N_eta) E[ chi_eta-profile(d(y, step(x exp xi))) ].
  const int d = algebra_dim(ctx);
  const double rho = eta * norm_ratio_bound(ctx);
  const double prof_max = BumpFunction::profile(0.0);
  const Mat M = step_multiplier(R, sign, ctx);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double acc = 0.0, acc2 = 0.0;
  for (int k = 0; k < samples; ++k) {
    Mat xi;
    while (true) {
      Mat dir = algebra_direction(rng, ctx);
      double r = rho * std::pow(u01(rng), 1.0 / d);
      xi = real_t(r) * dir;
      double na = ctx.metric().algebra_norm(xi);
      if (u01(rng) * prof_max <= BumpFunction::profile((na / eta) * (na / eta))) break;
    }
    GroupElement g_step(x.mat() * matrix_exp(xi) * M, x.field());
    double dfar = safe_dist(ctx.metric(), y, g_step);
    double v = std::isfinite(dfar) ? BumpFunction::profile((dfar / eta) * (dfar / eta)) : 0.0;
    acc += v;
    acc2 += v * v;
  }
  double mean = acc / samples;
  double var = std::max(0.0, acc2 / samples - mean * mean);
  double scale = 1.0 / bump.normalization();
  return {scale * mean, scale * std::sqrt(var / samples)};
}

double weight_support_radius(double eps, double R, int sign, const TauContext& ctx) {
  const double eta = eps / R;
  Mat Mi = step_multiplier(R, sign, ctx).inverse();
  Mat Mm = step_multiplier(R, sign, ctx);
  std::mt19937_64 rng(6011);
  double cm = 1.0;
  for (int k = 0; k < 200; ++k) {
    Mat xi = algebra_direction(rng, ctx);
    double na = ctx.metric().algebra_norm(xi);
    double nad = ctx.metric().algebra_norm(Mat(Mi * xi * Mm));
    if (na > 1e-12) cm = std::max(cm, nad / na);
  }
  return eta * (1.0 + 1.05 * cm);
}

Mat LatticeProvider::word(const std::vector<int>& w) const {
  Mat m = Mat::Identity(n, n);
  for (int s : w) {
    if (s > 0)
      m = m * generators[s - 1];
    else
      m = m * generators[-s - 1].inverse();
  }
  return m;
}

double LatticeProvider::relation_residual() const {
  double worst = 0.0;
  GroupElement id = GroupElement::identity(n, field);
  for (const auto& r : relations)
    worst = std::max(worst, psl_distance(GroupElement(word(r), field), id));
  return worst;
}

std::vector<Mat> LatticeProvider::ball(int radius) const {
  std::vector<Mat> gens;
  for (const auto& g : generators) {
    gens.push_back(g);
    gens.push_back(g.inverse());
  }
  // Hash-bucketed dedup modulo center: canonicalize the sign/phase by the
  // first entry of significant modulus, then round.
  auto canonical = [&](const Mat& m) {
    cplx pivot(0, 0);
    for (int j = 0; j < n && std::abs(pivot) < 1e-9; ++j)
      for (int i = 0; i < n && std::abs(pivot) < 1e-9; ++i)
        if (std::abs(m(i, j)) > 1e-9) pivot = m(i, j);
    cplx best_phase(1, 0);
    double best_arg = 1e18;
    for (cplx z : center_lifts(n, field)) {
      double a = std::abs(std::arg(z * pivot) - 1e-7);
      if (a < best_arg) {
        best_arg = a;
        best_phase = z;
      }
    }
    return Mat(best_phase * m);
  };
  auto key_of = [&](const Mat& c) {
    uint64_t h = 1469598103934665603ull;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        long long re = llround((double)c(i, j).real() * 1e6);
        long long im = llround((double)c(i, j).imag() * 1e6);
        for (long long v : {re, im}) {
          h ^= (uint64_t)v;
          h *= 1099511628211ull;
        }
      }
    return h;
  };
  std::vector<Mat> out;
  std::unordered_map<uint64_t, std::vector<int>> buckets;
  auto try_insert = [&](const Mat& m) {
    Mat c = canonical(m);
    uint64_t k = key_of(c);
    auto& bucket = buckets[k];
    for (int idx : bucket)
      if (psl_distance(GroupElement(m, field), GroupElement(out[idx], field)) <
          1e-8 * std::max(1.0, (double)m.norm()))
        return false;
    bucket.push_back(int(out.size()));
    out.push_back(m);
    return true;
  };
  try_insert(Mat::Identity(n, n));
  std::vector<Mat> frontier = {Mat::Identity(n, n)};
  for (int r = 0; r < radius; ++r) {
    std::vector<Mat> next;
    for (const auto& f : frontier)
      for (const auto& g : gens) {
        Mat m = f * g;
        if (try_insert(m)) next.push_back(m);
      }
    frontier = std::move(next);
  }
  return out;
}

LatticeProvider trivial_lattice(int n, Field f) {
  LatticeProvider lat;
  lat.name = "trivial";
  lat.n = n;
  lat.field = f;
  lat.cocompact = false;
  return lat;
}

double genus2_covolume() {
  // Area of the curvature -2 quotient surface times the PSO(2) fiber length
  // in the Frobenius left-invariant normalization.
  return 2.0 * M_PI * M_PI * std::sqrt(2.0);
}

namespace {

// Hyperbolic (curvature -1) geometry helpers in the upper half-plane.
std::complex<double> moebius_pt(const Mat& g, std::complex<double> z) {
  std::complex<double> a((double)g(0, 0).real(), (double)g(0, 0).imag());
  std::complex<double> b((double)g(0, 1).real(), (double)g(0, 1).imag());
  std::complex<double> c((double)g(1, 0).real(), (double)g(1, 0).imag());
  std::complex<double> d((double)g(1, 1).real(), (double)g(1, 1).imag());
  return (a * z + b) / (c * z + d);
}

double hyp_dist(std::complex<double> z, std::complex<double> w) {
  double num = std::norm(z - w);
  double den = 2.0 * z.imag() * w.imag();
  return std::acosh(1.0 + num / den);
}

}  // namespace

LatticeProvider genus2_lattice(double R) {
  // Built from the closed-form perfect-pants gluing; the four generators
  // x1 = B*A (a boundary curve), y1, x2, y2 satisfy [x1,y1][x2,y2] = 1.
  // The construction lives in assembly; to keep this provider self-contained
  // we reproduce the tree lift over the theta graph directly.
  TauContext c2(2, Field::Complex);
  GeometricData qp = perfect_geometric_data(c2, R, +1);
  GeometricData qm = perfect_geometric_data(c2, R, -1);

  // v1 tree-lift: child of the root across half-edge 0 (identity marking).
  GroupElement x0 = canonical_gluing_translation(qp, qm, c2);
  GeometricData q1 = qm.left_translated(x0);
  // Holonomies across the two non-tree edges: child half-edge i matched to
  // root half-edge i (i = 1, 2).
  auto lift_back = [&](int i) {
    GeometricData parent = q1;
    for (int k = 0; k < i; ++k) parent = sym(parent, c2);
    GeometricData root_marked = qp;
    for (int k = 0; k < i; ++k) root_marked = sym(root_marked, c2);
    GroupElement x = canonical_gluing_translation(parent, root_marked, c2);
    return x;
  };
  GroupElement f1 = lift_back(1);
  GroupElement f2 = lift_back(2);

  GroupElement a1 = qp.A, a2 = qp.B;
  LatticeProvider lat;
  lat.name = "genus2_fn";
  lat.n = 2;
  lat.field = Field::Real;
  lat.cocompact = true;
  Mat x1 = (a2 * a1).mat().real().cast<cplx>();
  lat.generators = {x1, f2.mat().real().cast<cplx>(), f1.mat().real().cast<cplx>(),
                    a2.mat().real().cast<cplx>()};
  lat.relations = {{1, 2, -1, -2, 3, 4, -3, -4}};  // [x1,y1][x2,y2] = 1

  lat.reduce = [gens = lat.generators](const Mat& g) {
    std::vector<Mat> moves;
    for (const auto& m : gens) {
      moves.push_back(m);
      moves.push_back(m.inverse());
    }
    Mat cur = g;
    std::complex<double> base(0.0, 1.0);
    double best = hyp_dist(moebius_pt(cur, base), base);
    bool improved = true;
    int steps = 0;
    while (improved && steps++ < 2000) {
      improved = false;
      for (const auto& m : moves) {
        Mat cand = m * cur;
        double d = hyp_dist(moebius_pt(cand, base), base);
        if (d < best - 1e-9) {
          best = d;
          cur = cand;
          improved = true;
          break;
        }
      }
      if (!improved) {
        // two-step lookahead to escape shallow local minima
        for (size_t i = 0; i < moves.size() && !improved; ++i)
          for (size_t j = 0; j < moves.size() && !improved; ++j) {
            Mat cand = moves[i] * moves[j] * cur;
            double d = hyp_dist(moebius_pt(cand, base), base);
            if (d < best - 1e-9) {
              best = d;
              cur = cand;
              improved = true;
            }
          }
      }
    }
    return cur;
  };
  return lat;
}

LatticeProvider triangle237_lattice() {
  // Vertices of the (pi/2, pi/3, pi/7) triangle placed by hyperbolic
  // trigonometry; generators are the vertex rotations by twice the angles.
  const double A = M_PI / 2, B = M_PI / 3, C = M_PI / 7;
  // Side lengths from the angular cosine rule: cosh c = (cos A cos B + cos C)/(sin A sin B).
  auto side = [](double a, double b, double c) {
    return std::acosh((std::cos(a) * std::cos(b) + std::cos(c)) / (std::sin(a) * std::sin(b)));
  };
  double c_ab = side(A, B, C);  // between vertices with angles A and B
  double b_ac = side(A, C, B);
  // Place vertex VA at i, VB up the imaginary axis at distance c_ab, VC in
  // the right half plane at distance b_ac from VA, angle A at VA between the
  // two sides.
  auto translate_up = [](double t) { return mat2(std::exp(t / 2), 0, 0, std::exp(-t / 2)); };
  auto rotate_at_i = [](double th) {
    return mat2(std::cos(th / 2), -std::sin(th / 2), std::sin(th / 2), std::cos(th / 2));
  };
  Mat to_vb = translate_up(c_ab);
  Mat to_vc = rotate_at_i(A) * translate_up(b_ac);
  std::complex<double> vb = moebius_pt(to_vb, {0.0, 1.0});
  std::complex<double> vc = moebius_pt(to_vc, {0.0, 1.0});
  auto rotation_about = [&](std::complex<double> p, double angle) {
    double y = p.imag();
    Mat t = mat2(std::sqrt(y), p.real() / std::sqrt(y), 0, 1.0 / std::sqrt(y));
    return Mat(t * rotate_at_i(angle) * t.inverse());
  };
  Mat ra = rotate_at_i(2 * A);
  Mat rb = rotation_about(vb, 2 * B);
  Mat rc = rotation_about(vc, 2 * C);
  // Orientation fix: the three rotations should compose to the identity in
  // one of the two cyclic orders.
  LatticeProvider lat;
  lat.name = "triangle237";
  lat.n = 2;
  lat.field = Field::Real;
  lat.cocompact = true;
  GroupElement id = GroupElement::identity(2, Field::Real);
  if (psl_distance(GroupElement(Mat(ra * rb * rc), Field::Real), id) >
      psl_distance(GroupElement(Mat(rc * rb * ra), Field::Real), id)) {
    std::swap(ra, rc);  // keep the orientation with ra*rb*rc = id
  }
  lat.generators = {ra, rb, rc};
  lat.relations = {{1, 1}, {2, 2, 2}, {3, 3, 3, 3, 3, 3, 3}, {1, 2, 3}};
  return lat;
}

LatticeProvider pslzi_lattice() {
  LatticeProvider lat;
  lat.name = "pslzi";
  lat.n = 2;
  lat.field = Field::Complex;
  lat.cocompact = false;  // non-cocompact: mixing demos only
  lat.generators = {mat2(1, 1, 0, 1), mat2c(1, cplx(0, 1), 0, 1), mat2(0, -1, 1, 0)};
  lat.relations = {{3, 3}};
  return lat;
}

LatticeProvider synthetic_tau_lattice(const TauContext& ctx, double R) {
  LatticeProvider base = genus2_lattice(R);
  LatticeProvider lat;
  lat.name = "synthetic_tau";
  lat.n = ctx.n();
  lat.field = ctx.field();
  lat.cocompact = false;  // finitely generated tau-fuchsian subgroup
  for (const auto& g : base.generators) lat.generators.push_back(ctx.tau(g).mat());
  lat.relations = base.relations;
  return lat;
}

LatticeWeight weight_w(const GroupElement& x, const GroupElement& y, double eps, double R,
                       int sign, const LatticeProvider& lat, int word_radius,
                       const TauContext& ctx, unsigned seed, int samples) {
  LatticeWeight out;
  GroupElement target(x.mat() * step_multiplier(R, sign, ctx), x.field());
  std::vector<Mat> ball =
      lat.generators.empty() ? std::vector<Mat>{Mat::Identity(lat.n, lat.n)}
                             : lat.ball(word_radius);
  // The step image of the first bump's support is a long expanded tube, so a
  // metric-ball cut is useless at large R; a short pilot run detects the
  // translates with genuine overlap before spending the full sample budget.
  const int pilot = std::min(samples, 400);
  double val = 0.0, err2 = 0.0;
  std::vector<size_t> contributing;
  unsigned k = 0;
  for (const auto& gamma : ball) {
    GroupElement gy(gamma * y.mat(), x.field());
    MonteCarloValue probe = weight_W(x, gy, eps, R, sign, ctx, seed + 17 * (k + 1), pilot);
    if (probe.value > 0.0) {
      MonteCarloValue w =
          samples > pilot ? weight_W(x, gy, eps, R, sign, ctx, seed + 17 * (k + 1), samples)
                          : probe;
      val += w.value;
      err2 += w.std_error * w.std_error;
      contributing.push_back(k);
      ++out.terms;
    }
    ++k;
  }
  // Coverage certificate: every contributing translate lies strictly inside
  // the enumerated word ball (word length below the requested radius).
  out.coverage_ok = true;
  if (!lat.generators.empty() && word_radius > 0) {
    std::vector<Mat> inner = lat.ball(word_radius - 1);
    for (size_t idx : contributing)
      if (idx >= inner.size()) out.coverage_ok = false;
  }
  out.value = {val, std::sqrt(err2)};
  if (lat.name == "genus2_fn") {
    out.covolume = genus2_covolume();
    out.value.value *= out.covolume;
    out.value.std_error *= out.covolume;
  }
  return out;
}

MonteCarloValue weight_W_tri(const GroupElement& x, const GroupElement& y0, const GroupElement& y1,
                             const GroupElement& y2, double eps, double R, int sign,
                             const TauContext& ctx, unsigned seed, int samples) {
  auto r1 = [&](const GroupElement& g) { return rot(g, ctx); };
  auto r2 = [&](const GroupElement& g) { return rot2(g, ctx); };
  MonteCarloValue a, b, c;
  if (sign > 0) {
    a = weight_W(x, y0, eps, R, +1, ctx, seed, samples);
    b = weight_W(r2(x), r1(y1), eps, R, +1, ctx, seed + 1, samples);
    c = weight_W(r1(x), r2(y2), eps, R, +1, ctx, seed + 2, samples);
  } else {
    a = weight_W(x, r2(y1), eps, R, -1, ctx, seed, samples);
    b = weight_W(r1(x), r1(y0), eps, R, -1, ctx, seed + 1, samples);
    c = weight_W(r2(x), y2, eps, R, -1, ctx, seed + 2, samples);
  }
  double v = a.value * b.value * c.value;
  double rel2 = 0.0;
  for (const auto& m : {a, b, c}) {
    if (m.value <= 0.0) return {0.0, 0.0};
    rel2 += (m.std_error / m.value) * (m.std_error / m.value);
  }
  return {v, v * std::sqrt(rel2)};
}

MonteCarloValue weight_W_bi(const GroupElement& x, const GroupElement& y0, const GroupElement& y1,
                            double eps, double R, const TauContext& ctx, unsigned seed,
                            int samples) {
  MonteCarloValue a = weight_W(x, y0, eps, R, +1, ctx, seed, samples);
  MonteCarloValue b = weight_W(rot2(x, ctx), rot(y1, ctx), eps, R, +1, ctx, seed + 1, samples);
  if (a.value <= 0.0 || b.value <= 0.0) return {0.0, 0.0};
  double v = a.value * b.value;
  double rel2 = (a.std_error / a.value) * (a.std_error / a.value) +
                (b.std_error / b.value) * (b.std_error / b.value);
  return {v, v * std::sqrt(rel2)};
}

std::array<GroupElement, 4> TriconnPoint::tuple(const TauContext& ctx) const {
  if (sign > 0) {
    return {g, gp, a.inverse() * gp, b * gp};
  }
  GroupElement gpp = a.inverse() * rot(gp, ctx);
  return {g, gpp, a * gpp, (b * a) * gpp};
}

double levy_prokhorov(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2, double bisect_tol) {
  if (std::fabs(mu1.mass() - mu2.mass()) > 1e-9 * std::max(1.0, mu1.mass()))
    throw std::invalid_argument("levy_prokhorov: measures must have equal mass");
  const int n1 = int(mu1.points.size()), n2 = int(mu2.points.size());
  auto metric = mu1.metric ? mu1.metric : mu2.metric;
  if (!metric) throw std::invalid_argument("levy_prokhorov: no metric");
  std::vector<std::vector<double>> d(n1, std::vector<double>(n2));
  double hi = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      d[i][j] = metric(mu1.points[i], mu2.points[j]);
      hi = std::max(hi, d[i][j]);
    }
  const double mass = mu1.mass();
  auto feasible = [&](double delta) {
    MaxFlow mf(n1 + n2 + 2);
    int s = n1 + n2, t = n1 + n2 + 1;
    for (int i = 0; i < n1; ++i) mf.add_edge(s, i, mu1.weights[i]);
    for (int j = 0; j < n2; ++j) mf.add_edge(n1 + j, t, mu2.weights[j]);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        if (d[i][j] <= delta + 1e-15) mf.add_edge(i, n1 + j, mass);
    return mf.run(s, t) >= mass - 1e-9 * std::max(1.0, mass);
  };
  double lo = 0.0;
  if (feasible(0.0)) return 0.0;
  while (hi - lo > bisect_tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

double levy_prokhorov_bruteforce(const DiscreteMeasure& mu1, const DiscreteMeasure& mu2,
                                 double bisect_tol) {
  const int n1 = int(mu1.points.size()), n2 = int(mu2.points.size());
  if (n1 > 20) throw std::invalid_argument("levy_prokhorov_bruteforce: support too large");
  auto metric = mu1.metric ? mu1.metric : mu2.metric;
  std::vector<std::vector<double>> d(n1, std::vector<double>(n2));
  double hi = 0.0;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      d[i][j] = metric(mu1.points[i], mu2.points[j]);
      hi = std::max(hi, d[i][j]);
    }
  auto feasible = [&](double delta) {
    for (unsigned long mask = 1; mask < (1ul << n1); ++mask) {
      double m1 = 0.0, m2 = 0.0;
      for (int i = 0; i < n1; ++i)
        if (mask & (1ul << i)) m1 += mu1.weights[i];
      for (int j = 0; j < n2; ++j) {
        bool inV = false;
        for (int i = 0; i < n1 && !inV; ++i)
          if ((mask & (1ul << i)) && d[i][j] <= delta + 1e-15) inV = true;
        if (inV) m2 += mu2.weights[j];
      }
      if (m1 > m2 + 1e-12) return false;
    }
    return true;
  };
  double lo = 0.0;
  if (feasible(0.0)) return 0.0;
  while (hi - lo > bisect_tol) {
    double mid = 0.5 * (lo + hi);
    (feasible(mid) ? hi : lo) = mid;
  }
  return hi;
}

TorusCheckReport torus_average_check(int N, double delta, int k, int ell, int trials,
                                     unsigned seed) {
  if (N < 2 || k < 1 || ell < k) throw std::invalid_argument("torus_average_check: bad shape");
  TorusCheckReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const double bound = (std::pow(2.0, k) - 1.0) * delta;
  const int total = (ell == 1) ? N : N * N;
  const int w = int(std::floor(bound * N + 1e-12));

  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> h(total);
    for (double& v : h) v = std::exp(delta * u(rng));
    std::vector<double> hbar(total, 0.0);
    if (ell == 1) {
      double mean = 0.0;
      for (double v : h) mean += v;
      mean /= total;
      std::fill(hbar.begin(), hbar.end(), mean);
    } else if (k == ell) {
      double mean = 0.0;
      for (double v : h) mean += v;
      mean /= total;
      std::fill(hbar.begin(), hbar.end(), mean);
    } else {  // k = 1 < ell = 2: average along the first coordinate circles
      for (int j = 0; j < N; ++j) {
        double mean = 0.0;
        for (int i = 0; i < N; ++i) mean += h[i * N + j];
        mean /= N;
        for (int i = 0; i < N; ++i) hbar[i * N + j] = mean;
      }
    }
    // Feasibility of mu1(A) <= mu2(V_bound(A)) via max flow; atoms carry
    // h/total and hbar/total.
    MaxFlow mf(2 * total + 2);
    int s = 2 * total, t = 2 * total + 1;
    double mass = 0.0;
    for (int i = 0; i < total; ++i) {
      mf.add_edge(s, i, h[i]);
      mf.add_edge(total + i, t, hbar[i]);
      mass += h[i];
    }
    if (ell == 1) {
      for (int i = 0; i < total; ++i)
        for (int dj = -w; dj <= w; ++dj) mf.add_edge(i, total + ((i + dj) % N + N) % N, mass);
    } else {
      for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b)
          for (int da = -w; da <= w; ++da)
            for (int db = -w; db <= w; ++db) {
              int a2 = ((a + da) % N + N) % N, b2 = ((b + db) % N + N) % N;
              mf.add_edge(a * N + b, total + a2 * N + b2, mass);
            }
    }
    double fl = mf.run(s, t);
    ++rep.trials;
    if (fl < mass - 1e-9 * mass) ++rep.violations;
    rep.worst_margin = std::max(rep.worst_margin, (mass - fl) / mass);
  }
  return rep;
}

MixingReport mixing_experiment(const LatticeProvider& lat, const Observable& psi,
                               const Observable& theta, const std::vector<double>& R_grid,
                               int samples, unsigned seed) {
  if (!lat.reduce) throw std::invalid_argument("mixing_experiment: provider has no reduction");
  if (lat.n != 2 || lat.field != Field::Real)
    throw std::invalid_argument("mixing_experiment: PSL(2,R) provider required");
  TauContext c2(2, Field::Complex);

  // Exact Dirichlet-domain sampler at base point i.
  // Dirichlet membership needs only the face-pairing翻 translates; validate
  // the radius-2 ball against radius 3 on the warmup sample below.
  std::vector<Mat> nbr = lat.ball(2);
  std::vector<Mat> nbr_check = lat.ball(3);
  std::vector<Mat> eval_ball = lat.ball(2);
  const std::complex<double> base(0.0, 1.0);
  auto in_domain_with = [&](std::complex<double> z, const std::vector<Mat>& ball) {
    double d0 = hyp_dist(z, base);
    for (const auto& g : ball) {
      if ((g - Mat::Identity(2, 2)).norm() < 1e-12) continue;
      if (hyp_dist(moebius_pt(g, z), base) < d0 - 1e-12) return false;
    }
    return true;
  };
  auto in_domain = [&](std::complex<double> z) { return in_domain_with(z, nbr); };
  // Circumradius estimate for the proposal disc.
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  double rad = 0.0;
  bool radius2_valid = true;
  for (int kwarm = 0; kwarm < 300; ++kwarm) {
    double th = 2 * M_PI * u01(rng);
    double r = std::acosh(1.0 + (std::cosh(6.0) - 1.0) * u01(rng));
    std::complex<double> z(std::tanh(r / 2) * std::cos(th), std::tanh(r / 2) * std::sin(th));
    std::complex<double> zu = std::complex<double>(0, 1) * (1.0 + z) / (1.0 - z);  // disc->UHP
    Mat red = lat.reduce(mat2(std::sqrt(zu.imag()), zu.real() / std::sqrt(zu.imag()), 0,
                              1.0 / std::sqrt(zu.imag())));
    std::complex<double> zr = moebius_pt(red, base);
    rad = std::max(rad, hyp_dist(zr, base));
    if (in_domain_with(zr, nbr) != in_domain_with(zr, nbr_check)) radius2_valid = false;
  }
  if (!radius2_valid) nbr = nbr_check;
  const double rho0 = rad + 0.3;

  auto sample_frame = [&]() {
    while (true) {
      double th = 2 * M_PI * u01(rng);
      double r = std::acosh(1.0 + (std::cosh(rho0) - 1.0) * u01(rng));
      std::complex<double> zd(std::tanh(r / 2) * std::cos(th), std::tanh(r / 2) * std::sin(th));
      std::complex<double> z = std::complex<double>(0, 1) * (1.0 + zd) / (1.0 - zd);
      if (!in_domain(z)) continue;
      double ang = M_PI * u01(rng);
      Mat T = mat2(std::sqrt(z.imag()), z.real() / std::sqrt(z.imag()), 0,
                   1.0 / std::sqrt(z.imag()));
      Mat K = mat2(std::cos(ang), -std::sin(ang), std::sin(ang), std::cos(ang));
      return Mat(T * K);
    }
  };

  // Support precut: d_G(x, c) > scale whenever the translation length of
  // c^{-1} x exceeds sqrt(2) kappa scale, with kappa the F-to-averaged norm
  // ratio bound; traces are cheap, logs are not.
  const double kappa = norm_ratio_bound(c2);
  std::vector<Mat> psi_pre, theta_pre;  // center^{-1} * gamma, precomputed
  for (const auto& gamma : eval_ball) {
    if (!psi.constant) psi_pre.push_back(psi.center.mat().inverse() * gamma);
    if (!theta.constant) theta_pre.push_back(theta.center.mat().inverse() * gamma);
  }
  auto eval_obs = [&](const Observable& o, const std::vector<Mat>& pre, const Mat& g_any) {
    if (o.constant) return 1.0;
    Mat g = lat.reduce(g_any);
    const double tr_cut = 2.0 * std::cosh(1.5 * kappa * o.scale);
    double acc = 0.0;
    for (const auto& cg : pre) {
      Mat w = cg * g;
      if (std::abs(w.trace()) > real_t(tr_cut)) continue;
      try {
        double d = c2.metric().algebra_norm(psl_log(GroupElement(w, Field::Complex)));
        acc += BumpFunction::profile((d / o.scale) * (d / o.scale));
      } catch (const std::domain_error&) {
      }
    }
    return acc;
  };

  MixingReport rep;
  const int batches = 32;
  std::vector<Mat> frames(samples);
  for (int i = 0; i < samples; ++i) frames[i] = sample_frame();
  std::vector<double> psi_vals(samples);
  for (int i = 0; i < samples; ++i) psi_vals[i] = eval_obs(psi, psi_pre, frames[i]);

  for (double R : R_grid) {
    Mat flow = c2.phi(R);  // right multiplication by tau(diag(e^{R/2}, e^{-R/2}))
    std::vector<double> prod(samples), th_vals(samples);
    for (int i = 0; i < samples; ++i) {
      th_vals[i] = eval_obs(theta, theta_pre, Mat(frames[i] * flow));
      prod[i] = psi_vals[i] * th_vals[i];
    }
    auto mean = [&](const std::vector<double>& v) {
      double s = 0;
      for (double x : v) s += x;
      return s / v.size();
    };
    double corr = mean(prod) - mean(psi_vals) * mean(th_vals);
    // batch standard error of the correlation
    int bs = samples / batches;
    std::vector<double> bvals;
    for (int b = 0; b < batches; ++b) {
      double mp = 0, m1 = 0, m2 = 0;
      for (int i = b * bs; i < (b + 1) * bs; ++i) {
        mp += prod[i];
        m1 += psi_vals[i];
        m2 += th_vals[i];
      }
      mp /= bs;
      m1 /= bs;
      m2 /= bs;
      bvals.push_back(mp - m1 * m2);
    }
    double bm = mean(bvals), var = 0;
    for (double v : bvals) var += (v - bm) * (v - bm);
    var /= (batches - 1);
    rep.rows.push_back({R, corr, std::sqrt(var / batches)});
  }

  // log-linear fit of |corr| against R
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& row : rep.rows) {
    double y = std::log(std::max(std::fabs(row.correlation), 1e-12));
    sx += row.R;
    sy += y;
    sxx += row.R * row.R;
    sxy += row.R * y;
    ++m;
  }
  rep.fitted_slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return rep;
}

MAlphaResult measure_m_alpha(const std::vector<TriconnPoint>& points, double eps, double R,
                             int sign, const TauContext& ctx, unsigned seed, int samples,
                             const LatticeProvider* lat, int word_radius) {
  MAlphaResult out;
  if (points.empty()) return out;
  GroupElement alpha = points.front().a;
  FootContext fc = make_foot_context(sign > 0 ? alpha : alpha.inverse(), ctx);
  std::vector<GroupElement> apow;
  for (int j = -2; j <= 2; ++j) {
    Mat p = Mat::Identity(alpha.n(), alpha.n());
    for (int t = 0; t < std::abs(j); ++t) p = p * (j > 0 ? alpha.mat() : alpha.mat().inverse());
    apow.emplace_back(p, alpha.field());
  }
  const GroupMetric& gm = ctx.metric();
  out.measure.metric = [apow, &gm](const GroupElement& x, const GroupElement& y) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : apow) {
      try {
        best = std::min(best, gm.distance(GroupElement(p.mat() * x.mat(), x.field()), y));
      } catch (const std::domain_error&) {
      }
    }
    return best;
  };
  out.measure.metric_tag = "L_alpha mod Z_Gamma(alpha)";

  double facc = 0.0;
  int fcount = 0;
  unsigned k = 0;
  for (const auto& pt : points) {
    auto tup = pt.tuple(ctx);
    MonteCarloValue w =
        weight_W_tri(tup[0], tup[1], tup[2], tup[3], eps, R, sign, ctx, seed + 31 * (++k), samples);
    GroupElement foot = GroupElement::identity(ctx.n(), ctx.field());
    try {
      foot = foot_map(pt.g, fc, ctx);
    } catch (const std::domain_error&) {
      ++out.excluded;
      continue;
    }
    out.measure.points.push_back(foot);
    out.measure.weights.push_back(w.value);
    if (lat && !lat->generators.empty()) {
      LatticeWeight f = weight_w(rot(pt.g, ctx), rot2(pt.gp, ctx), eps, R, sign, *lat, word_radius,
                                 ctx, seed + 97 * k, samples);
      facc += f.value.value;
      ++fcount;
    }
  }
  if (fcount > 0) out.f_factor_mean = facc / fcount;
  return out;
}

std::vector<TriconnPoint> flip_family(const std::vector<TriconnPoint>& pts,
                                      const TauContext& ctx) {
  std::vector<TriconnPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts) {
    TriconnPoint q = p;
    q.g = flip_I(p.g, ctx);
    q.gp = flip_I(p.gp, ctx);
    q.sign = -p.sign;
    out.push_back(q);
  }
  return out;
}

}  // namespace pantograph
