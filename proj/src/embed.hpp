#pragma once

#include <array>
#include <string>
#include <vector>

#include "depth.hpp"
#include "fdata.hpp"

namespace eeclass {

// 2-D embeddings: EE kinds place each curve at its extremality index taken
// against group A (u) and group B (v) of the reference sample; DD kinds use
// a functional depth instead.
enum class EmbeddingKind { EE_MEI, EE_MHI, DD_FM, DD_HM, DD_RP };

const char* embedding_kind_name(EmbeddingKind kind);
// Parses the CLI spelling (ee-mei|ee-mhi|dd-fm|dd-hm|dd-rp).
EmbeddingKind parse_embedding_kind(const std::string& text);

struct Embedded2D {
  std::vector<std::array<double, 2>> points;  // (u, v) per evaluated curve
  std::vector<int> labels;                    // copied from the evaluated set
  EmbeddingKind kind = EmbeddingKind::EE_MEI;
  std::array<std::size_t, 2> reference_sizes{0, 0};
  std::array<std::string, 2> label_names{"A", "B"};
};

// Index-based coordinates (kind EE_MEI or EE_MHI). The reference must hold
// both groups; evaluating the reference itself gives the training picture in
// which every curve is a member of its own group's sample, and held-out
// curves are scored against the same frozen reference groups.
Embedded2D ee_coordinates(const FunctionalDataset& eval,
                          const FunctionalDataset& reference, EmbeddingKind kind);

// Depth-based coordinates (kind DD_FM, DD_HM, or DD_RP). The projection
// kinds reuse one direction set, drawn from params.rp_seed, for both
// coordinates.
Embedded2D dd_coordinates(const FunctionalDataset& eval,
                          const FunctionalDataset& reference, EmbeddingKind kind,
                          const DepthParams& params = {});

// Dispatch to ee_coordinates or dd_coordinates by kind.
Embedded2D embed(const FunctionalDataset& eval, const FunctionalDataset& reference,
                 EmbeddingKind kind, const DepthParams& params = {});

// CSV with header `label,u,v`, one row per point in order, canonical floats.
std::string emit_points_csv(const Embedded2D& embedded);

// Self-contained scatter plot. Axes span [0,1] squared except for DD_HM,
// whose positive unbounded coordinates get data-driven bounds; EE kinds draw
// the diagonal reference line. Byte output is deterministic per input.
std::string emit_svg(const Embedded2D& embedded, int width_px, int height_px);

}  // namespace eeclass
