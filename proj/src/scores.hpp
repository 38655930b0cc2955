#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace eeclass {

// Per-curve score families: four extremality indexes and three depths.
enum class ScoreKind { EI, HI, MEI, MHI, FM, HM, RP };

// One score per evaluated curve, tagged with the score family and the size
// of the reference sample the scores were taken against.
struct IndexVector {
  ScoreKind kind = ScoreKind::EI;
  std::vector<double> values;
  std::size_t reference_size = 0;
};

const char* score_kind_name(ScoreKind kind);

// Parses the CLI spelling (ei|hi|mei|mhi|fm|hm|rp); throws DataError on
// anything else.
ScoreKind parse_score_kind(const std::string& text);

}  // namespace eeclass
