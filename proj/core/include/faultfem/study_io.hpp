#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "faultfem/adapt.hpp"

namespace faultfem {

/// Results of one run: the resolved configuration (ordered key/value echo)
/// and one record per iteration.
struct StudyOutput {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<StudyRecord> records;
};

/// 17-significant-digit decimal form; round-trips doubles exactly.
std::string format_double(double v);

/// CSV: "# key=value" config lines, a fixed column header, one row per record.
/// Fields without an exact solution are left empty.
void write_study_csv(std::ostream& os, const StudyOutput& out);
StudyOutput read_study_csv(std::istream& is);

void write_study_json(std::ostream& os, const StudyOutput& out);
StudyOutput read_study_json(std::istream& is);

}  // namespace faultfem
