#pragma once

#include <iosfwd>
#include <string>

#include "ktchart/chart.hpp"
#include "ktchart/svdd.hpp"

namespace ktchart {

inline constexpr int kModelFormatVersion = 1;

/// Line-oriented text schema; see README for the layout. Loading throws
/// FormatError naming the offending field and never yields a partial object.
void save_svdd_model(std::ostream& out, const SvddModel& model);
SvddModel load_svdd_model(std::istream& in);

void save_phase1_model(std::ostream& out, const PhaseIModel& model);
PhaseIModel load_phase1_model(std::istream& in);

enum class ModelFileKind { svdd, phase1 };
/// Peeks at the leading tag without consuming the stream.
ModelFileKind detect_model_kind(std::istream& in);

void save_svdd_model_file(const std::string& path, const SvddModel& model);
SvddModel load_svdd_model_file(const std::string& path);
void save_phase1_model_file(const std::string& path, const PhaseIModel& model);
PhaseIModel load_phase1_model_file(const std::string& path);

}  // namespace ktchart
