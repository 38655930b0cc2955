#include "scores.hpp"

#include "errors.hpp"

namespace eeclass {

const char* score_kind_name(ScoreKind kind) {
  switch (kind) {
    case ScoreKind::EI: return "ei";
    case ScoreKind::HI: return "hi";
    case ScoreKind::MEI: return "mei";
    case ScoreKind::MHI: return "mhi";
    case ScoreKind::FM: return "fm";
    case ScoreKind::HM: return "hm";
    case ScoreKind::RP: return "rp";
  }
  return "?";
}

ScoreKind parse_score_kind(const std::string& text) {
  if (text == "ei") return ScoreKind::EI;
  if (text == "hi") return ScoreKind::HI;
  if (text == "mei") return ScoreKind::MEI;
  if (text == "mhi") return ScoreKind::MHI;
  if (text == "fm") return ScoreKind::FM;
  if (text == "hm") return ScoreKind::HM;
  if (text == "rp") return ScoreKind::RP;
  throw DataError("unknown score kind '" + text + "' (want ei|hi|mei|mhi|fm|hm|rp)");
}

}  // namespace eeclass
