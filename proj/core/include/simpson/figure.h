#ifndef SIMPSON_FIGURE_H_
#define SIMPSON_FIGURE_H_

// Two parallel unit segments: the top one carries the exposed conditionals
// p(x|y,z'), p(x|y,z) and the marginal p(x|y) between them, the bottom one the
// unexposed counterparts. Each marginal cuts its segment in the ratio of the
// stratifier weights, which the figure marks with braces.

#include <array>
#include <optional>
#include <string>
#include <utility>

#include "simpson/tables.h"

namespace simpson {

struct WeightRatio {
  Probability z;        // p(z | arm), labels the piece between p(x|arm,z') and p(x|arm)
  Probability z_prime;  // p(z' | arm), labels the piece between p(x|arm) and p(x|arm,z)

  // Reduced integer ratio, e.g. "1:3".
  std::string text() const;
};

struct FigureModel {
  // {p(x|arm,z'), p(x|arm,z), p(x|arm)} for arm = y (top) and y' (bottom).
  std::array<Probability, 3> top_marks;
  std::array<Probability, 3> bottom_marks;
  // Absent when the arm's two conditionals coincide.
  std::optional<WeightRatio> top_ratio;
  std::optional<WeightRatio> bottom_ratio;
  // Intersection of the two spanned intervals when it has positive length.
  // Reversal in either direction is impossible without it.
  std::optional<std::pair<Rational, Rational>> overlap_interval;
  std::string z_label;
  std::string z_prime_label;
};

// z is the first stratum and z' the second.
FigureModel build_figure(const StratifiedTable& stratified);

struct SvgOptions {
  double width = 600.0;  // length of the unit segments in user units
  bool labels = true;
};

std::string render_svg(const FigureModel& model, const SvgOptions& options = {});

}  // namespace simpson

#endif  // SIMPSON_FIGURE_H_
