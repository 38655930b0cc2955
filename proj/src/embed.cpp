#include "embed.hpp"

#include <algorithm>
#include <cmath>

#include "errors.hpp"
#include "extremality.hpp"
#include "textio.hpp"

namespace eeclass {

namespace {

struct GroupRefs {
  FunctionalDataset a;
  FunctionalDataset b;
};

GroupRefs split_reference(const FunctionalDataset& reference) {
  GroupRefs refs{reference.subset(reference.group_rows(0)),
                 reference.subset(reference.group_rows(1))};
  if (refs.a.curve_count() == 0 || refs.b.curve_count() == 0) {
    throw DataError("reference sample must contain curves of both groups");
  }
  return refs;
}

Embedded2D assemble(const FunctionalDataset& eval, const GroupRefs& refs,
                    EmbeddingKind kind, const std::vector<double>& u,
                    const std::vector<double>& v) {
  Embedded2D out;
  out.kind = kind;
  out.labels = eval.labels;
  out.label_names = eval.label_names;
  out.reference_sizes = {refs.a.curve_count(), refs.b.curve_count()};
  out.points.resize(eval.curve_count());
  for (std::size_t i = 0; i < eval.curve_count(); ++i) {
    out.points[i] = {u[i], v[i]};
  }
  return out;
}

}  // namespace

const char* embedding_kind_name(EmbeddingKind kind) {
  switch (kind) {
    case EmbeddingKind::EE_MEI: return "ee-mei";
    case EmbeddingKind::EE_MHI: return "ee-mhi";
    case EmbeddingKind::DD_FM: return "dd-fm";
    case EmbeddingKind::DD_HM: return "dd-hm";
    case EmbeddingKind::DD_RP: return "dd-rp";
  }
  return "?";
}

EmbeddingKind parse_embedding_kind(const std::string& text) {
  if (text == "ee-mei") return EmbeddingKind::EE_MEI;
  if (text == "ee-mhi") return EmbeddingKind::EE_MHI;
  if (text == "dd-fm") return EmbeddingKind::DD_FM;
  if (text == "dd-hm") return EmbeddingKind::DD_HM;
  if (text == "dd-rp") return EmbeddingKind::DD_RP;
  throw DataError("unknown embedding kind '" + text +
                  "' (want ee-mei|ee-mhi|dd-fm|dd-hm|dd-rp)");
}

Embedded2D ee_coordinates(const FunctionalDataset& eval,
                          const FunctionalDataset& reference, EmbeddingKind kind) {
  if (kind != EmbeddingKind::EE_MEI && kind != EmbeddingKind::EE_MHI) {
    throw DataError("ee_coordinates expects an ee-* embedding kind");
  }
  const GroupRefs refs = split_reference(reference);
  const ScoreKind score =
      kind == EmbeddingKind::EE_MEI ? ScoreKind::MEI : ScoreKind::MHI;
  const IndexVector u = index_vector(eval, refs.a, score);
  const IndexVector v = index_vector(eval, refs.b, score);
  return assemble(eval, refs, kind, u.values, v.values);
}

Embedded2D dd_coordinates(const FunctionalDataset& eval,
                          const FunctionalDataset& reference, EmbeddingKind kind,
                          const DepthParams& params) {
  const GroupRefs refs = split_reference(reference);
  IndexVector u;
  IndexVector v;
  switch (kind) {
    case EmbeddingKind::DD_FM:
      u = fm_depth(eval, refs.a);
      v = fm_depth(eval, refs.b);
      break;
    case EmbeddingKind::DD_HM:
      u = hmode_depth(eval, refs.a, params.hm_quantile);
      v = hmode_depth(eval, refs.b, params.hm_quantile);
      break;
    case EmbeddingKind::DD_RP:
      u = rp_depth(eval, refs.a, params.rp_projections, params.rp_seed);
      v = rp_depth(eval, refs.b, params.rp_projections, params.rp_seed);
      break;
    default:
      throw DataError("dd_coordinates expects a dd-* embedding kind");
  }
  return assemble(eval, refs, kind, u.values, v.values);
}

Embedded2D embed(const FunctionalDataset& eval, const FunctionalDataset& reference,
                 EmbeddingKind kind, const DepthParams& params) {
  if (kind == EmbeddingKind::EE_MEI || kind == EmbeddingKind::EE_MHI) {
    return ee_coordinates(eval, reference, kind);
  }
  return dd_coordinates(eval, reference, kind, params);
}

std::string emit_points_csv(const Embedded2D& embedded) {
  std::string out = "label,u,v\n";
  for (std::size_t i = 0; i < embedded.points.size(); ++i) {
    out += embedded.label_names[static_cast<std::size_t>(embedded.labels[i])];
    out += ',';
    append_double(out, embedded.points[i][0]);
    out += ',';
    append_double(out, embedded.points[i][1]);
    out += '\n';
  }
  return out;
}

namespace {

void append_attr(std::string& s, const char* name, double value) {
  s += ' ';
  s += name;
  s += "=\"";
  append_double(s, value);
  s += '"';
}

}  // namespace

std::string emit_svg(const Embedded2D& embedded, int width_px, int height_px) {
  if (width_px <= 0 || height_px <= 0) {
    throw DataError("svg dimensions must be positive");
  }
  const double margin = 40.0;
  const double w = static_cast<double>(width_px);
  const double h = static_cast<double>(height_px);
  const double plot_w = w - 2.0 * margin;
  const double plot_h = h - 2.0 * margin;
  if (plot_w <= 0.0 || plot_h <= 0.0) {
    throw DataError("svg dimensions too small for the 40px margins");
  }

  // Fixed unit axes except for the unbounded kernel-depth coordinates.
  double lo = 0.0;
  double hi = 1.0;
  if (embedded.kind == EmbeddingKind::DD_HM && !embedded.points.empty()) {
    hi = 0.0;
    for (const auto& p : embedded.points) hi = std::max({hi, p[0], p[1]});
    if (hi <= 0.0) hi = 1.0;
    hi *= 1.05;
  }
  const auto map_x = [&](double u) { return margin + (u - lo) / (hi - lo) * plot_w; };
  const auto map_y = [&](double v) {
    return h - margin - (v - lo) / (hi - lo) * plot_h;
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" +
       std::to_string(width_px) + "\" height=\"" + std::to_string(height_px) +
       "\" viewBox=\"0 0 " + std::to_string(width_px) + " " +
       std::to_string(height_px) + "\">\n";
  s += "<rect width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  s += "<rect";
  append_attr(s, "x", margin);
  append_attr(s, "y", margin);
  append_attr(s, "width", plot_w);
  append_attr(s, "height", plot_h);
  s += " fill=\"none\" stroke=\"#444444\"/>\n";

  // Axis extent labels and axis names.
  const auto text = [&](double x, double y, const char* anchor,
                        const std::string& body) {
    s += "<text";
    append_attr(s, "x", x);
    append_attr(s, "y", y);
    s += " font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\" "
         "text-anchor=\"";
    s += anchor;
    s += "\">" + body + "</text>\n";
  };
  text(margin, h - margin + 16.0, "middle", format_double(lo));
  text(w - margin, h - margin + 16.0, "middle", format_double(hi));
  text(margin - 6.0, h - margin + 4.0, "end", format_double(lo));
  text(margin - 6.0, margin + 4.0, "end", format_double(hi));
  text(w / 2.0, h - margin + 32.0, "middle",
       "u (vs " + embedded.label_names[0] + ")");
  s += "<text";
  append_attr(s, "x", 12.0);
  append_attr(s, "y", h / 2.0);
  s += " font-family=\"sans-serif\" font-size=\"12\" fill=\"#444444\" "
       "text-anchor=\"middle\" transform=\"rotate(-90 12 ";
  append_double(s, h / 2.0);
  s += ")\">v (vs " + embedded.label_names[1] + ")</text>\n";

  if (embedded.kind == EmbeddingKind::EE_MEI ||
      embedded.kind == EmbeddingKind::EE_MHI) {
    s += "<line";
    append_attr(s, "x1", map_x(lo));
    append_attr(s, "y1", map_y(lo));
    append_attr(s, "x2", map_x(hi));
    append_attr(s, "y2", map_y(hi));
    s += " stroke=\"#999999\" stroke-dasharray=\"4 3\"/>\n";
  }

  static const char* kGroupColor[2] = {"#1b6ca8", "#d1495b"};
  for (std::size_t i = 0; i < embedded.points.size(); ++i) {
    s += "<circle";
    append_attr(s, "cx", map_x(embedded.points[i][0]));
    append_attr(s, "cy", map_y(embedded.points[i][1]));
    s += " r=\"3\" fill=\"";
    s += kGroupColor[embedded.labels[i] == 0 ? 0 : 1];
    s += "\" fill-opacity=\"0.7\"/>\n";
  }

  // Legend swatches in the top-right corner of the frame, one per group
  // that actually appears in the data.
  for (int g = 0; g < 2; ++g) {
    const bool present = std::any_of(embedded.labels.begin(), embedded.labels.end(),
                                     [&](int l) { return (l == 0 ? 0 : 1) == g; });
    if (!present) continue;
    const double y = margin + 14.0 + 16.0 * g;
    s += "<circle";
    append_attr(s, "cx", w - margin - 70.0);
    append_attr(s, "cy", y - 4.0);
    s += " r=\"4\" fill=\"";
    s += kGroupColor[g];
    s += "\"/>\n";
    text(w - margin - 60.0, y, "start", embedded.label_names[g]);
  }
  s += "</svg>\n";
  return s;
}

}  // namespace eeclass
