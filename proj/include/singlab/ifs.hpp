#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "singlab/common.hpp"

namespace singlab {

using Rational = boost::multiprecision::cpp_rational;

struct SimilarityMap {
  double ratio = 1.0;
  Mat rotation;
  Vec translation;

  // Validates 0 < ratio < 1 and rotation in SO(d).
  static SimilarityMap make(double ratio, const Mat& rotation, const Vec& translation);
  static SimilarityMap identity(int d);

  int dim() const { return static_cast<int>(translation.size()); }
  Vec apply(const Vec& x) const { return ratio * (rotation * x) + translation; }
  Vec apply_inverse(const Vec& y) const { return rotation.transpose() * (y - translation) / ratio; }
  // this ∘ inner
  SimilarityMap compose(const SimilarityMap& inner) const;
  Vec fixed_point() const;
};

struct Box {
  Vec lo, hi;
  Vec center() const { return 0.5 * (lo + hi); }
  Vec half_widths() const { return 0.5 * (hi - lo); }
  double diagonal() const { return (hi - lo).norm(); }
  bool contains(const Vec& x, double tol) const;
};

// Rational description of a map whose rotation is a signed permutation.
struct ExactMap {
  Rational ratio;
  std::vector<int> rotation;  // row-major d×d, entries in {-1,0,1}
  std::vector<Rational> translation;
};

class IfsSystem {
 public:
  static IfsSystem create(std::vector<SimilarityMap> maps, std::optional<Box> osc_box = std::nullopt,
                          std::optional<std::vector<ExactMap>> exact = std::nullopt,
                          std::string name = "custom");

  int dim() const { return dim_; }
  int size() const { return static_cast<int>(maps_.size()); }
  const std::vector<SimilarityMap>& maps() const { return maps_; }
  const SimilarityMap& map(int i) const { return maps_[i]; }
  double sim_dim() const { return s_; }
  double diam_K() const { return diam_; }
  double norm_bound() const { return norm_bound_; }
  const std::optional<Box>& osc_box() const { return osc_box_; }
  const std::optional<std::vector<ExactMap>>& exact() const { return exact_; }
  const std::string& name() const { return name_; }

  // Attractor enclosure used for membership tests. When every map sends the
  // box into itself the box is used; otherwise a self-nested ball.
  const Box& box() const { return box_; }
  bool box_nested() const { return box_nested_; }
  const Vec& ball_center() const { return ball_center_; }
  double ball_radius() const { return ball_radius_; }

  // Symbol probabilities ratio_i^s.
  const std::vector<double>& weights() const { return weights_; }
  double min_ratio() const;
  double max_ratio() const;
  // Does the enclosure of h(K) contain x (tolerance in ambient units)?
  bool enclosure_contains(const SimilarityMap& h, const Vec& x, double tol) const;

 private:
  int dim_ = 0;
  std::vector<SimilarityMap> maps_;
  double s_ = 0.0, diam_ = 0.0, norm_bound_ = 0.0;
  std::optional<Box> osc_box_;
  std::optional<std::vector<ExactMap>> exact_;
  std::string name_;
  Box box_;
  bool box_nested_ = false;
  Vec ball_center_;
  double ball_radius_ = 0.0;
  std::vector<double> weights_;
};

inline constexpr double kTolGeom = 1e-9;

struct CylinderInfo {
  Word word;
  SimilarityMap map;
  double diameter;
  double mass;
};

double similarity_dimension(const std::vector<SimilarityMap>& maps);
SimilarityMap compose_word(const IfsSystem& ifs, const Word& w);
CylinderInfo cylinder_info(const IfsSystem& ifs, const Word& w);
double rho_cocycle(const IfsSystem& ifs, const Word& w, int n);
Vec code_point(const IfsSystem& ifs, const Word& w);
std::vector<Word> sample_words(const IfsSystem& ifs, std::uint64_t seed, int depth, int count);
std::vector<Vec> sample_measure(const IfsSystem& ifs, std::uint64_t seed, int depth, int count);
Word random_word(const IfsSystem& ifs, Rng& rng, int depth);
Word assign_word(const IfsSystem& ifs, const Vec& x, int n);
std::vector<Word> complete_prefix_set(const IfsSystem& ifs, double eps);
// Every word of length n in lexicographic order.
std::vector<Word> all_words(int alphabet, int n);

// Exact-rational membership; requires exact map data and an OSC box.
Word assign_word_exact(const IfsSystem& ifs, const std::vector<Rational>& x, int n);
// Checks the OSC box: images inside and pairwise disjoint interiors.
bool check_osc_box(const IfsSystem& ifs, const Box& box);
bool check_osc_box_exact(const IfsSystem& ifs);

// Presets: cantor3, cantor3x3, sierpinski3, interval2, square2,
// homog(rho,alpha_rad,k).
IfsSystem make_preset(const std::string& name);
std::vector<std::string> preset_names();
IfsSystem make_homogeneous(double rho, double alpha, int k);

// JSON IFS definition (see README for the grammar).
IfsSystem parse_ifs_json(const std::string& text);
Mat rotation_from_degrees(double deg);

Rational parse_rational(const std::string& text);

}  // namespace singlab
