#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "icct/config.hpp"
#include "icct/types.hpp"

namespace icct::io {

// Ordinal survey as read from disk: first column respondent id, one column
// per item, empty cell = missing.
struct RawSurveyTable {
  std::vector<std::string> item_ids;
  std::vector<std::string> respondent_ids;
  std::vector<std::vector<std::optional<int>>> ratings;  // [respondent][item]
  int levels = 4;

  friend bool operator==(const RawSurveyTable&, const RawSurveyTable&) = default;
};

struct CsvRecord {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line where the record starts
};

// Splits CSV text into records, skipping blank lines. Supports quoted fields with doubled quotes,
// LF or CRLF line endings. Throws ValidationError with line/column on
// malformed quoting.
std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source = "<input>");

// Validates ratings in 1..levels, rectangular rows and unique ids. Errors
// name the line, column and offending value.
RawSurveyTable parse_survey_csv(std::string_view text, int levels, const std::string& source = "<input>");
RawSurveyTable load_survey_csv(const std::filesystem::path& path, int levels);

// Maps a rating onto (0, 1). midpoint: (r - 0.5) / R; affine: [eps, 1 - eps].
double rescale_rating(int rating, int levels, const Rescaling& rule);

// Throws ValidationError when a respondent or item ends up with no ratings.
ResponseMatrix rescale(const RawSurveyTable& table, const Rescaling& rule = {});

// Same layout as the survey CSV but with values already in (0, 1).
ResponseMatrix parse_unit_csv(std::string_view text, const std::string& source = "<input>");
ResponseMatrix load_unit_csv(const std::filesystem::path& path);

// Reads a data file according to config.input_scale.
ResponseMatrix load_response_matrix(const std::filesystem::path& path, const StudyConfig& config);

std::string format_survey_csv(const RawSurveyTable& table);
std::string format_unit_csv(const ResponseMatrix& data);

// Bins unit values into ratings: r = min(R, floor(x * R) + 1).
RawSurveyTable discretize(const ResponseMatrix& data, int levels);

// Two-column covariate file: respondent id, level. Header row required.
std::vector<std::pair<std::string, std::string>> load_covariates(const std::filesystem::path& path);

// Shortest round-trip decimal in fixed notation.
std::string format_number(double value);
std::string csv_escape(std::string_view field);

std::string read_text(const std::filesystem::path& path);
// Writes to a temporary sibling and renames it over `path`.
void write_text_atomic(const std::filesystem::path& path, std::string_view content);

}  // namespace icct::io
