#include "simpson/figure.h"

#include <fmt/format.h>

#include <string_view>

namespace simpson {

std::string WeightRatio::text() const {
  // a/b : c/d  ->  a*d : c*b after clearing denominators and common factors.
  const Rational r = z.value() / z_prime.value();
  return r.num_string() + ":" + r.den_string();
}

namespace {

Error zero_margin(const Stratum& s, Exposure side) {
  return Error(ErrorCode::kZeroMargin,
               "stratum '" + s.label + "': " +
                   (side == Exposure::kExposed ? "exposed margin (y) is empty"
                                               : "unexposed margin (y') is empty"));
}

}  // namespace

FigureModel build_figure(const StratifiedTable& stratified) {
  if (stratified.size() != 2) {
    throw Error(ErrorCode::kNotBinaryStratifier,
                "the figure needs exactly two strata, got " + std::to_string(stratified.size()));
  }
  const Stratum& z = stratified[0];
  const Stratum& zp = stratified[1];
  const CellCounts pooled = z.counts + zp.counts;

  FigureModel model;
  model.z_label = z.label;
  model.z_prime_label = zp.label;

  auto arm = [&](Exposure side, std::array<Probability, 3>& marks,
                 std::optional<WeightRatio>& ratio) {
    for (const Stratum* s : {&z, &zp}) {
      if (s->counts.margin(side).is_zero()) throw zero_margin(*s, side);
    }
    marks = {cond_prob(zp.counts, Outcome::kSuccess, side),
             cond_prob(z.counts, Outcome::kSuccess, side),
             cond_prob(pooled, Outcome::kSuccess, side)};
    if (marks[0] != marks[1]) {
      const Rational m = pooled.margin(side);
      ratio = WeightRatio{Probability(z.counts.margin(side) / m),
                          Probability(zp.counts.margin(side) / m)};
    }
  };
  arm(Exposure::kExposed, model.top_marks, model.top_ratio);
  arm(Exposure::kUnexposed, model.bottom_marks, model.bottom_ratio);

  const Rational lo = max(min(model.top_marks[0].value(), model.top_marks[1].value()),
                          min(model.bottom_marks[0].value(), model.bottom_marks[1].value()));
  const Rational hi = min(max(model.top_marks[0].value(), model.top_marks[1].value()),
                          max(model.bottom_marks[0].value(), model.bottom_marks[1].value()));
  if (lo < hi) model.overlap_interval = std::make_pair(lo, hi);
  return model;
}

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string num(double v) { return fmt::format("{:.6f}", v); }

class SvgWriter {
 public:
  explicit SvgWriter(double width) : width_(width) {}

  double x(const Rational& p) const { return p.to_double() * width_; }

  void line(double x1, double y1, double x2, double y2, std::string_view extra = {}) {
    out_ += fmt::format("    <line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\"{}/>\n", num(x1), num(y1),
                        num(x2), num(y2), extra);
  }
  void text(double x, double y, std::string_view anchor, std::string_view body,
            std::string_view cls) {
    out_ += fmt::format("    <text x=\"{}\" y=\"{}\" text-anchor=\"{}\" class=\"{}\">{}</text>\n",
                        num(x), num(y), anchor, cls, escape(body));
  }
  void raw(std::string_view s) { out_ += s; }
  std::string take() { return std::move(out_); }

 private:
  double width_;
  std::string out_;
};

// Bracket spanning [a, b] on the axis at height `y`, opening towards `dir`.
std::string bracket(double a, double b, double y, double dir) {
  if (b < a) std::swap(a, b);
  return fmt::format("    <path d=\"M {} {} L {} {} L {} {} L {} {}\"/>\n", num(a), num(y), num(a),
                     num(y + 6 * dir), num(b), num(y + 6 * dir), num(b), num(y));
}

}  // namespace

std::string render_svg(const FigureModel& model, const SvgOptions& options) {
  const double w = options.width;
  const double h = w / 2;
  const double pad_left = 60;
  const double pad_right = 190;
  const double pad_y = 70;
  SvgWriter svg(w);

  svg.raw("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n");
  svg.raw(fmt::format(
      "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{}\" height=\"{}\" "
      "viewBox=\"{} {} {} {}\">\n",
      num(w + pad_left + pad_right), num(h + 2 * pad_y), num(-pad_left), num(-pad_y),
      num(w + pad_left + pad_right), num(h + 2 * pad_y)));
  svg.raw("  <title>Exposed and unexposed conditionals with stratum weights</title>\n");
  svg.raw(
      "  <style>text{font-family:serif;font-size:13px;fill:#222}"
      ".value{font-size:11px;fill:#555}.note{font-size:15px;fill:#a33}</style>\n");

  if (model.overlap_interval) {
    const double a = svg.x(model.overlap_interval->first);
    const double b = svg.x(model.overlap_interval->second);
    svg.raw(fmt::format(
        "  <rect id=\"overlap\" x=\"{}\" y=\"{}\" width=\"{}\" height=\"{}\" fill=\"#4c78a8\" "
        "fill-opacity=\"0.12\"/>\n",
        num(a), num(0.0), num(b - a), num(h)));
  }

  svg.raw("  <g id=\"frame\" stroke=\"gray\" stroke-width=\"2\" fill=\"none\">\n");
  svg.line(0, 0, w, 0);
  svg.line(0, h, w, h);
  svg.line(0, 0, 0, h);
  svg.line(w, 0, w, h);
  svg.raw("  </g>\n");

  // Connectors join the z' marks, the z marks and the marginals.
  static constexpr std::string_view kRoles[3] = {"z-prime", "z", "marginal"};
  svg.raw("  <g id=\"connectors\" stroke=\"gray\" stroke-width=\"1.5\">\n");
  for (int i = 0; i < 3; ++i) {
    const std::string extra = fmt::format(" class=\"{}\"{}", kRoles[i],
                                          i == 2 ? " stroke-dasharray=\"6 4\"" : "");
    svg.line(svg.x(model.top_marks[i].value()), 0, svg.x(model.bottom_marks[i].value()), h, extra);
  }
  svg.raw("  </g>\n");

  svg.raw("  <g id=\"marks\" fill=\"#222\">\n");
  for (int i = 0; i < 3; ++i) {
    svg.raw(fmt::format("    <circle cx=\"{}\" cy=\"{}\" r=\"3\" class=\"top {}\"/>\n",
                        num(svg.x(model.top_marks[i].value())), num(0.0), kRoles[i]));
  }
  for (int i = 0; i < 3; ++i) {
    svg.raw(fmt::format("    <circle cx=\"{}\" cy=\"{}\" r=\"3\" class=\"bottom {}\"/>\n",
                        num(svg.x(model.bottom_marks[i].value())), num(h), kRoles[i]));
  }
  svg.raw("  </g>\n");

  auto braces = [&](const std::array<Probability, 3>& marks, const std::optional<WeightRatio>& ratio,
                    double y, double dir, std::string_view arm) {
    if (!ratio) return;
    const double zp = svg.x(marks[0].value());
    const double z = svg.x(marks[1].value());
    const double m = svg.x(marks[2].value());
    svg.raw(fmt::format("  <g class=\"ratio {}\" stroke=\"#4c78a8\" fill=\"none\">\n", arm));
    svg.raw(bracket(zp, m, y, dir));
    svg.raw(bracket(m, z, y, dir));
    svg.raw("  </g>\n");
    if (!options.labels) return;
    const double ty = y + dir * 22;
    svg.text((zp + m) / 2, ty, "middle",
             fmt::format("{{p(z|{})}} = {}", arm, ratio->z.value().to_string()), "ratio");
    svg.text((m + z) / 2, ty, "middle",
             fmt::format("{{p(z'|{})}} = {}", arm, ratio->z_prime.value().to_string()), "ratio");
    svg.text(w + 12, y + dir * 4, "start",
             fmt::format("{{p(z|{0})}}:{{p(z'|{0})}} = {1}", arm, ratio->text()), "ratio-text");
  };
  braces(model.top_marks, model.top_ratio, 4, 1, "y");
  braces(model.bottom_marks, model.bottom_ratio, h - 4, -1, "y'");

  if (options.labels) {
    svg.raw("  <g id=\"labels\">\n");
    static constexpr std::string_view kTop[3] = {"p(x|y,z')", "p(x|y,z)", "p(x|y)"};
    static constexpr std::string_view kBottom[3] = {"p(x|y',z')", "p(x|y',z)", "p(x|y')"};
    for (int i = 0; i < 3; ++i) {
      const double tx = svg.x(model.top_marks[i].value());
      svg.text(tx, -30, "middle", kTop[i], "name");
      svg.text(tx, -14, "middle", model.top_marks[i].value().to_string(), "value");
      const double bx = svg.x(model.bottom_marks[i].value());
      svg.text(bx, h + 22, "middle", kBottom[i], "name");
      svg.text(bx, h + 38, "middle", model.bottom_marks[i].value().to_string(), "value");
    }
    svg.text(-12, 4, "end", "y", "arm");
    svg.text(-12, h + 4, "end", "y'", "arm");
    svg.text(0, h + 56, "middle", "0", "axis");
    svg.text(w, h + 56, "middle", "1", "axis");
    svg.text(w + 12, h / 2 - 8, "start", "z = " + model.z_label, "legend");
    svg.text(w + 12, h / 2 + 10, "start", "z' = " + model.z_prime_label, "legend");
    svg.raw("  </g>\n");
  }
  if (!model.overlap_interval) {
    svg.text(w / 2, h / 2, "middle", "no reversal possible", "note");
  }
  svg.raw("</svg>\n");
  return svg.take();
}

}  // namespace simpson
