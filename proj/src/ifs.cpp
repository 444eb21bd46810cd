#include "singlab/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace singlab {

SimilarityMap SimilarityMap::make(double ratio, const Mat& rotation, const Vec& translation) {
  if (!(ratio > 0.0 && ratio < 1.0)) fail(ErrorCode::InvalidInput, "ratio must lie in (0,1)");
  const auto d = translation.size();
  if (d < 1 || rotation.rows() != d || rotation.cols() != d)
    fail(ErrorCode::InvalidInput, "rotation/translation dimension mismatch");
  if (((rotation.transpose() * rotation) - Mat::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
    fail(ErrorCode::InvalidInput, "rotation is not orthogonal");
  if (std::abs(rotation.determinant() - 1.0) > 1e-10)
    fail(ErrorCode::InvalidInput, "rotation must have determinant +1");
  return SimilarityMap{ratio, rotation, translation};
}

SimilarityMap SimilarityMap::identity(int d) { return SimilarityMap{1.0, Mat::Identity(d, d), Vec::Zero(d)}; }

SimilarityMap SimilarityMap::compose(const SimilarityMap& inner) const {
  return SimilarityMap{ratio * inner.ratio, rotation * inner.rotation, apply(inner.translation)};
}

Vec SimilarityMap::fixed_point() const {
  const auto d = translation.size();
  Mat a = Mat::Identity(d, d) - ratio * rotation;
  return a.partialPivLu().solve(translation);
}

bool Box::contains(const Vec& x, double tol) const {
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x[i] < lo[i] - tol || x[i] > hi[i] + tol) return false;
  return true;
}

double similarity_dimension(const std::vector<SimilarityMap>& maps) {
  if (maps.empty()) fail(ErrorCode::InvalidInput, "empty map list");
  for (const auto& m : maps)
    if (!(m.ratio > 0.0 && m.ratio < 1.0)) fail(ErrorCode::InvalidInput, "ratio must lie in (0,1)");
  auto f = [&](double s) {
    double t = 0.0;
    for (const auto& m : maps) t += std::pow(m.ratio, s);
    return t - 1.0;
  };
  double lo = 0.0, hi = maps.front().dim() + 1.0;
  if (f(lo) <= 0.0) return 0.0;
  while (f(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) > 0.0 ? lo : hi) = mid;
  }
  return std::abs(f(lo)) < std::abs(f(hi)) ? lo : hi;
}

namespace {

Box image_bbox(const SimilarityMap& h, const Box& b) {
  const Vec c = h.apply(b.center());
  const Vec w = h.ratio * (h.rotation.cwiseAbs() * b.half_widths());
  return Box{c - w, c + w};
}

}  // namespace

IfsSystem IfsSystem::create(std::vector<SimilarityMap> maps, std::optional<Box> osc_box,
                            std::optional<std::vector<ExactMap>> exact, std::string name) {
  if (maps.empty()) fail(ErrorCode::InvalidInput, "empty map list");
  const int d = maps.front().dim();
  for (const auto& m : maps) {
    if (m.dim() != d) fail(ErrorCode::InvalidInput, "maps of mixed dimension");
    SimilarityMap::make(m.ratio, m.rotation, m.translation);
  }
  IfsSystem f;
  f.dim_ = d;
  f.maps_ = std::move(maps);
  f.name_ = std::move(name);
  f.s_ = similarity_dimension(f.maps_);
  for (const auto& m : f.maps_) f.weights_.push_back(std::pow(m.ratio, f.s_));

  // Outer enclosure: shrink a ball-sized box by B <- B ∩ T(B) until it stops moving.
  double r0 = 0.0;
  for (const auto& m : f.maps_) r0 = std::max(r0, m.translation.norm() / (1.0 - m.ratio));
  r0 = r0 * (1.0 + 1e-9) + 1e-12;
  Box b{Vec::Constant(d, -r0), Vec::Constant(d, r0)};
  for (int it = 0; it < 5000; ++it) {
    Box t = image_bbox(f.maps_[0], b);
    for (std::size_t i = 1; i < f.maps_.size(); ++i) {
      Box u = image_bbox(f.maps_[i], b);
      t.lo = t.lo.cwiseMin(u.lo);
      t.hi = t.hi.cwiseMax(u.hi);
    }
    Box nb{b.lo.cwiseMax(t.lo), b.hi.cwiseMin(t.hi)};
    if (nb.lo == b.lo && nb.hi == b.hi) break;
    b = nb;
  }
  f.box_ = b;
  const double scale = std::max(1.0, b.diagonal());
  f.box_nested_ = true;
  for (const auto& m : f.maps_) {
    Box im = image_bbox(m, b);
    if (!b.contains(im.lo, 1e-12 * scale) || !b.contains(im.hi, 1e-12 * scale)) f.box_nested_ = false;
  }
  f.ball_center_ = b.center();
  double rb = 0.5 * b.diagonal();
  for (const auto& m : f.maps_) rb = std::max(rb, (m.apply(f.ball_center_) - f.ball_center_).norm() / (1.0 - m.ratio));
  f.ball_radius_ = rb;

  // Diameter: box diagonal, tightened by a cylinder-ball cover when that is smaller.
  double diam = b.diagonal();
  int depth = 0;
  for (std::size_t cnt = f.maps_.size(); cnt <= 4096; cnt *= f.maps_.size()) ++depth;
  if (depth >= 1 && f.maps_.size() > 1) {
    std::vector<Vec> centers;
    std::vector<double> radii;
    for (const auto& w : all_words(f.size(), depth)) {
      SimilarityMap h = SimilarityMap::identity(d);
      for (int sym : w) h = h.compose(f.maps_[sym]);
      centers.push_back(h.apply(f.ball_center_));
      radii.push_back(h.ratio * rb);
    }
    double cover = 0.0;
    for (std::size_t i = 0; i < centers.size(); ++i)
      for (std::size_t j = i + 1; j < centers.size(); ++j)
        cover = std::max(cover, (centers[i] - centers[j]).norm() + radii[i] + radii[j]);
    diam = std::min(diam, cover);
  }
  f.diam_ = diam;
  double nb = 0.0;
  for (int mask = 0; mask < (1 << d); ++mask) {
    Vec corner(d);
    for (int i = 0; i < d; ++i) corner[i] = (mask >> i & 1) ? b.hi[i] : b.lo[i];
    nb = std::max(nb, corner.norm());
  }
  f.norm_bound_ = std::min(nb, f.ball_center_.norm() + rb);

  if (osc_box) {
    if (osc_box->lo.size() != d || osc_box->hi.size() != d)
      fail(ErrorCode::InvalidInput, "osc_box dimension mismatch");
    if (!check_osc_box(f, *osc_box)) fail(ErrorCode::InvalidInput, "osc_box fails the open set condition check");
    f.osc_box_ = osc_box;
  }
  if (exact) {
    if (exact->size() != f.maps_.size()) fail(ErrorCode::InvalidInput, "exact map data size mismatch");
    f.exact_ = std::move(exact);
  }
  return f;
}

double IfsSystem::min_ratio() const {
  double r = 1.0;
  for (const auto& m : maps_) r = std::min(r, m.ratio);
  return r;
}

double IfsSystem::max_ratio() const {
  double r = 0.0;
  for (const auto& m : maps_) r = std::max(r, m.ratio);
  return r;
}

bool IfsSystem::enclosure_contains(const SimilarityMap& h, const Vec& x, double tol) const {
  const Vec y = h.apply_inverse(x);
  const double t = tol / h.ratio;
  if (box_nested_) return box_.contains(y, t);
  return (y - ball_center_).norm() <= ball_radius_ + t;
}

SimilarityMap compose_word(const IfsSystem& ifs, const Word& w) {
  SimilarityMap h = SimilarityMap::identity(ifs.dim());
  for (int sym : w) {
    if (sym < 0 || sym >= ifs.size()) fail(ErrorCode::InvalidInput, "symbol out of range");
    h = h.compose(ifs.map(sym));
  }
  return h;
}

CylinderInfo cylinder_info(const IfsSystem& ifs, const Word& w) {
  SimilarityMap h = compose_word(ifs, w);
  double rho = 1.0;
  for (int sym : w) rho *= ifs.map(sym).ratio;
  return CylinderInfo{w, h, ifs.diam_K() * rho, std::pow(rho, ifs.sim_dim())};
}

double rho_cocycle(const IfsSystem& ifs, const Word& w, int n) {
  if (n < 0 || n > static_cast<int>(w.size())) fail(ErrorCode::InvalidInput, "n exceeds word length");
  double r = 1.0;
  for (int k = 0; k < n; ++k) {
    if (w[k] < 0 || w[k] >= ifs.size()) fail(ErrorCode::InvalidInput, "symbol out of range");
    r *= ifs.map(w[k]).ratio;
  }
  return r;
}

Vec code_point(const IfsSystem& ifs, const Word& w) {
  if (w.empty()) fail(ErrorCode::InvalidInput, "code_point needs a non-empty word");
  const SimilarityMap h = compose_word(ifs, w);
  return h.apply(ifs.map(w.back()).fixed_point());
}

Word random_word(const IfsSystem& ifs, Rng& rng, int depth) {
  const auto& wt = ifs.weights();
  Word w(depth);
  for (int k = 0; k < depth; ++k) {
    const double u = rng.uniform();
    double acc = 0.0;
    int pick = ifs.size() - 1;
    for (int i = 0; i < ifs.size(); ++i) {
      acc += wt[i];
      if (u < acc) {
        pick = i;
        break;
      }
    }
    w[k] = pick;
  }
  return w;
}

std::vector<Word> sample_words(const IfsSystem& ifs, std::uint64_t seed, int depth, int count) {
  if (depth < 1 || count < 1) fail(ErrorCode::InvalidInput, "depth and count must be positive");
  Rng rng(seed);
  std::vector<Word> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) out.push_back(random_word(ifs, rng, depth));
  return out;
}

std::vector<Vec> sample_measure(const IfsSystem& ifs, std::uint64_t seed, int depth, int count) {
  std::vector<Vec> out;
  for (const auto& w : sample_words(ifs, seed, depth, count)) out.push_back(code_point(ifs, w));
  return out;
}

namespace {

bool assign_dfs(const IfsSystem& ifs, const Vec& x, int n, const SimilarityMap& h, Word& w) {
  if (static_cast<int>(w.size()) == n) return true;
  for (int i = ifs.size() - 1; i >= 0; --i) {
    SimilarityMap c = h.compose(ifs.map(i));
    if (!ifs.enclosure_contains(c, x, kTolGeom)) continue;
    w.push_back(i);
    if (assign_dfs(ifs, x, n, c, w)) return true;
    w.pop_back();
  }
  return false;
}

}  // namespace

Word assign_word(const IfsSystem& ifs, const Vec& x, int n) {
  if (x.size() != ifs.dim()) fail(ErrorCode::InvalidInput, "point dimension mismatch");
  if (n < 0) fail(ErrorCode::InvalidInput, "negative depth");
  const SimilarityMap id = SimilarityMap::identity(ifs.dim());
  Word w;
  if (!ifs.enclosure_contains(id, x, kTolGeom) || !assign_dfs(ifs, x, n, id, w))
    fail(ErrorCode::OutsideAttractor, "point lies in no cylinder enclosure");
  return w;
}

std::vector<Word> complete_prefix_set(const IfsSystem& ifs, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) fail(ErrorCode::InvalidInput, "eps must lie in (0,1)");
  // Relative slack so that eps given as an exact ratio product selects that level.
  const double thr = eps * (1.0 + 1e-12);
  std::vector<Word> out;
  Word w;
  std::vector<double> rho{1.0};
  // Explicit stack: (depth, next child to visit).
  std::vector<int> next{0};
  while (!next.empty()) {
    int& i = next.back();
    if (i >= ifs.size()) {
      next.pop_back();
      rho.pop_back();
      if (!w.empty()) w.pop_back();
      continue;
    }
    const int sym = i++;
    const double r = rho.back() * ifs.map(sym).ratio;
    w.push_back(sym);
    if (r <= thr) {
      out.push_back(w);
      w.pop_back();
    } else {
      rho.push_back(r);
      next.push_back(0);
    }
  }
  return out;
}

std::vector<Word> all_words(int alphabet, int n) {
  std::vector<Word> out;
  Word w(n, 0);
  while (true) {
    out.push_back(w);
    int k = n - 1;
    while (k >= 0 && w[k] == alphabet - 1) w[k--] = 0;
    if (k < 0) break;
    ++w[k];
  }
  return out;
}

// ---------------------------------------------------------------- OSC checks

namespace {

struct OrientedBox {
  Vec c;
  Mat axes;  // columns
  Vec w;
};

OrientedBox image_obox(const SimilarityMap& h, const Box& b) {
  return OrientedBox{h.apply(b.center()), h.rotation, h.ratio * b.half_widths()};
}

double proj_radius(const OrientedBox& o, const Vec& n) {
  double r = 0.0;
  for (Eigen::Index k = 0; k < o.axes.cols(); ++k) r += std::abs(n.dot(o.axes.col(k))) * o.w[k];
  return r;
}

bool interiors_disjoint(const OrientedBox& a, const OrientedBox& b, double tol) {
  std::vector<Vec> axes;
  for (Eigen::Index k = 0; k < a.axes.cols(); ++k) axes.push_back(a.axes.col(k));
  for (Eigen::Index k = 0; k < b.axes.cols(); ++k) axes.push_back(b.axes.col(k));
  if (a.c.size() == 3) {
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        Eigen::Vector3d u = a.axes.col(i), v = b.axes.col(j);
        Eigen::Vector3d x = u.cross(v);
        if (x.norm() > 1e-12) axes.push_back(Vec(x.normalized()));
      }
  }
  for (const auto& n : axes) {
    const double gap = std::abs(n.dot(a.c - b.c)) - proj_radius(a, n) - proj_radius(b, n);
    if (gap >= -tol) return true;
  }
  return false;
}

}  // namespace

bool check_osc_box(const IfsSystem& ifs, const Box& box) {
  const double tol = 1e-12 * std::max(1.0, box.diagonal());
  std::vector<OrientedBox> ims;
  for (const auto& m : ifs.maps()) {
    OrientedBox o = image_obox(m, box);
    // All corners of the image inside the box.
    const int d = ifs.dim();
    for (int mask = 0; mask < (1 << d); ++mask) {
      Vec corner = o.c;
      for (int k = 0; k < d; ++k) corner += ((mask >> k & 1) ? 1.0 : -1.0) * o.w[k] * o.axes.col(k);
      if (!box.contains(corner, tol)) return false;
    }
    ims.push_back(o);
  }
  for (std::size_t i = 0; i < ims.size(); ++i)
    for (std::size_t j = i + 1; j < ims.size(); ++j)
      if (!interiors_disjoint(ims[i], ims[j], tol)) return false;
  return true;
}

namespace {

struct ExactBox {
  std::vector<Rational> lo, hi;
};

ExactBox exact_osc(const IfsSystem& ifs) {
  if (!ifs.exact() || !ifs.osc_box()) fail(ErrorCode::NotApplicable, "exact mode needs rational maps and an OSC box");
  ExactBox b;
  for (int i = 0; i < ifs.dim(); ++i) {
    b.lo.emplace_back(ifs.osc_box()->lo[i]);
    b.hi.emplace_back(ifs.osc_box()->hi[i]);
  }
  return b;
}

// y = R^T (x - b) / rho for a signed-permutation rotation.
std::vector<Rational> exact_inverse(const ExactMap& m, const std::vector<Rational>& x) {
  const std::size_t d = x.size();
  std::vector<Rational> y(d, Rational(0));
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < d; ++j) {
      const int r = m.rotation[j * d + i];
      if (r != 0) y[i] += r * (x[j] - m.translation[j]);
    }
  for (auto& v : y) v /= m.ratio;
  return y;
}

bool exact_dfs(const IfsSystem& ifs, const ExactBox& box, const std::vector<Rational>& y, int n, Word& w) {
  if (static_cast<int>(w.size()) == n) return true;
  const auto& em = *ifs.exact();
  for (int i = ifs.size() - 1; i >= 0; --i) {
    std::vector<Rational> z = exact_inverse(em[i], y);
    bool inside = true;
    for (std::size_t k = 0; k < z.size() && inside; ++k) inside = z[k] >= box.lo[k] && z[k] <= box.hi[k];
    if (!inside) continue;
    w.push_back(i);
    if (exact_dfs(ifs, box, z, n, w)) return true;
    w.pop_back();
  }
  return false;
}

}  // namespace

Word assign_word_exact(const IfsSystem& ifs, const std::vector<Rational>& x, int n) {
  const ExactBox box = exact_osc(ifs);
  if (static_cast<int>(x.size()) != ifs.dim()) fail(ErrorCode::InvalidInput, "point dimension mismatch");
  for (int k = 0; k < ifs.dim(); ++k)
    if (x[k] < box.lo[k] || x[k] > box.hi[k]) fail(ErrorCode::OutsideAttractor, "point outside the OSC box");
  Word w;
  if (!exact_dfs(ifs, box, x, n, w)) fail(ErrorCode::OutsideAttractor, "point lies in no cylinder");
  return w;
}

bool check_osc_box_exact(const IfsSystem& ifs) {
  const ExactBox box = exact_osc(ifs);
  const std::size_t d = ifs.dim();
  std::vector<ExactBox> ims;
  for (const auto& m : *ifs.exact()) {
    ExactBox im;
    for (std::size_t i = 0; i < d; ++i) {
      Rational lo(0), hi(0);
      for (std::size_t j = 0; j < d; ++j) {
        const int r = m.rotation[i * d + j];
        if (r == 1) {
          lo += box.lo[j];
          hi += box.hi[j];
        } else if (r == -1) {
          lo -= box.hi[j];
          hi -= box.lo[j];
        }
      }
      im.lo.push_back(m.ratio * lo + m.translation[i]);
      im.hi.push_back(m.ratio * hi + m.translation[i]);
      if (im.lo[i] < box.lo[i] || im.hi[i] > box.hi[i]) return false;
    }
    ims.push_back(im);
  }
  for (std::size_t a = 0; a < ims.size(); ++a)
    for (std::size_t b = a + 1; b < ims.size(); ++b) {
      bool sep = false;
      for (std::size_t i = 0; i < d && !sep; ++i)
        sep = ims[a].hi[i] <= ims[b].lo[i] || ims[b].hi[i] <= ims[a].lo[i];
      if (!sep) return false;
    }
  return true;
}

// ------------------------------------------------------------------ presets

namespace {

IfsSystem grid_preset(const std::string& name, int d, int base, const std::vector<int>& digits) {
  // Maps (x + v)/base with v ranging over digits^d in lexicographic order.
  std::vector<SimilarityMap> maps;
  std::vector<ExactMap> exact;
  const int m = static_cast<int>(digits.size());
  int total = 1;
  for (int i = 0; i < d; ++i) total *= m;
  std::vector<int> eye(d * d, 0);
  for (int i = 0; i < d; ++i) eye[i * d + i] = 1;
  for (int idx = 0; idx < total; ++idx) {
    Vec t(d);
    std::vector<Rational> et(d);
    int rem = idx;
    for (int i = d - 1; i >= 0; --i) {
      const int dig = digits[rem % m];
      rem /= m;
      t[i] = static_cast<double>(dig) / base;
      et[i] = Rational(dig, base);
    }
    maps.push_back(SimilarityMap::make(1.0 / base, Mat::Identity(d, d), t));
    exact.push_back(ExactMap{Rational(1, base), eye, et});
  }
  Box box{Vec::Zero(d), Vec::Ones(d)};
  return IfsSystem::create(std::move(maps), box, std::move(exact), name);
}

}  // namespace

Mat rotation_from_degrees(double deg) {
  Mat r(2, 2);
  const double q = deg / 90.0;
  if (q == std::floor(q)) {
    const int k = ((static_cast<long long>(q) % 4) + 4) % 4;
    const double c[4] = {1, 0, -1, 0}, s[4] = {0, 1, 0, -1};
    r << c[k], -s[k], s[k], c[k];
    return r;
  }
  const double a = deg * M_PI / 180.0;
  r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return r;
}

IfsSystem make_homogeneous(double rho, double alpha, int k) {
  if (k < 1) fail(ErrorCode::InvalidInput, "homog needs at least one map");
  Mat r(2, 2);
  r << std::cos(alpha), -std::sin(alpha), std::sin(alpha), std::cos(alpha);
  std::vector<SimilarityMap> maps;
  for (int j = 0; j < k; ++j) {
    const double a = 2.0 * M_PI * j / k;
    Vec t(2);
    t << (1.0 - rho) * std::cos(a), (1.0 - rho) * std::sin(a);
    maps.push_back(SimilarityMap::make(rho, r, t));
  }
  std::ostringstream name;
  name << "homog(" << rho << "," << alpha << "," << k << ")";
  return IfsSystem::create(std::move(maps), std::nullopt, std::nullopt, name.str());
}

std::vector<std::string> preset_names() {
  return {"cantor3", "cantor3x3", "cantor3x3x3", "sierpinski3", "interval2", "square2", "cube2", "homog(rho,alpha_rad,k)"};
}

IfsSystem make_preset(const std::string& name) {
  if (name == "cantor3") return grid_preset(name, 1, 3, {0, 2});
  if (name == "cantor3x3") return grid_preset(name, 2, 3, {0, 2});
  if (name == "interval2") return grid_preset(name, 1, 2, {0, 1});
  if (name == "square2") return grid_preset(name, 2, 2, {0, 1});
  if (name == "cube2") return grid_preset(name, 3, 2, {0, 1});
  if (name == "cantor3x3x3") return grid_preset(name, 3, 3, {0, 2});
  if (name == "sierpinski3") {
    const double h = std::sqrt(3.0) / 2.0;
    std::vector<SimilarityMap> maps;
    const double tx[3] = {0.0, 0.5, 0.25}, ty[3] = {0.0, 0.0, 0.5 * h};
    for (int i = 0; i < 3; ++i) maps.push_back(SimilarityMap::make(0.5, Mat::Identity(2, 2), Vec::Map(std::vector<double>{tx[i], ty[i]}.data(), 2)));
    Box box{Vec::Zero(2), (Vec(2) << 1.0, h).finished()};
    return IfsSystem::create(std::move(maps), box, std::nullopt, name);
  }
  double rho = 0.0, alpha = 0.0;
  int k = 0;
  char tail = 0;
  if (std::sscanf(name.c_str(), "homog(%lf,%lf,%d%c", &rho, &alpha, &k, &tail) == 4 && tail == ')')
    return make_homogeneous(rho, alpha, k);
  std::string list;
  for (const auto& p : preset_names()) list += (list.empty() ? "" : ", ") + p;
  fail(ErrorCode::Validation, "unknown preset '" + name + "'; known presets: " + list);
}

Rational parse_rational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos)
    return parse_rational(text.substr(0, slash)) / parse_rational(text.substr(slash + 1));
  // Decimal literal, parsed digit by digit.
  std::size_t i = 0;
  bool neg = false;
  while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) neg = text[i++] == '-';
  boost::multiprecision::cpp_int num = 0, den = 1;
  bool any = false, frac = false;
  for (; i < text.size(); ++i) {
    const char ch = text[i];
    if (ch == '.' && !frac) {
      frac = true;
    } else if (std::isdigit(static_cast<unsigned char>(ch))) {
      num = num * 10 + (ch - '0');
      if (frac) den *= 10;
      any = true;
    } else if (ch == 'e' || ch == 'E') {
      const long e = std::stol(text.substr(i + 1));
      boost::multiprecision::cpp_int p = boost::multiprecision::pow(boost::multiprecision::cpp_int(10), static_cast<unsigned>(std::labs(e)));
      if (e >= 0) num *= p; else den *= p;
      break;
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      fail(ErrorCode::Validation, "not a rational literal: '" + text + "'");
    }
  }
  if (!any) fail(ErrorCode::Validation, "not a rational literal: '" + text + "'");
  Rational r(num, den);
  return neg ? Rational(-r) : r;
}

}  // namespace singlab
