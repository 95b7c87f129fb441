#include "icct/io/csv.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <system_error>

#include "icct/errors.hpp"

namespace icct::io {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return std::string(s.substr(first, last - first + 1));
}

std::string where(const std::string& source, std::size_t line, std::size_t column) {
  return source + " line " + std::to_string(line) + ", column " + std::to_string(column);
}

struct Grid {
  std::vector<std::string> item_ids;
  std::vector<std::string> respondent_ids;
  std::vector<CsvRecord> rows;
};

Grid split_grid(std::string_view text, const std::string& source) {
  auto records = parse_csv(text, source);
  if (records.empty()) throw ValidationError(source + ": empty file");
  Grid grid;
  const auto& header = records.front();
  if (header.fields.size() < 2) throw ValidationError(source + ": header needs an id column and at least one item");
  std::set<std::string> seen;
  for (std::size_t k = 1; k < header.fields.size(); ++k) {
    auto id = trim(header.fields[k]);
    if (id.empty()) throw ValidationError(where(source, header.line, k + 1) + ": empty item id");
    if (!seen.insert(id).second) throw ValidationError(where(source, header.line, k + 1) + ": duplicate item id \"" + id + "\"");
    grid.item_ids.push_back(std::move(id));
  }
  seen.clear();
  for (std::size_t r = 1; r < records.size(); ++r) {
    auto& rec = records[r];
    if (rec.fields.size() != header.fields.size()) {
      throw ValidationError(source + " line " + std::to_string(rec.line) + ": expected " +
                            std::to_string(header.fields.size()) + " fields, found " + std::to_string(rec.fields.size()));
    }
    auto id = trim(rec.fields[0]);
    if (id.empty()) throw ValidationError(where(source, rec.line, 1) + ": empty respondent id");
    if (!seen.insert(id).second) throw ValidationError(where(source, rec.line, 1) + ": duplicate respondent id \"" + id + "\"");
    grid.respondent_ids.push_back(std::move(id));
    grid.rows.push_back(std::move(rec));
  }
  return grid;
}

}  // namespace

std::vector<CsvRecord> parse_csv(std::string_view text, const std::string& source) {
  std::vector<CsvRecord> records;
  CsvRecord current;
  std::string field;
  std::size_t line = 1;
  current.line = 1;
  bool quoted = false;
  bool field_was_quoted = false;
  auto end_record = [&] {
    current.fields.push_back(std::move(field));
    field.clear();
    const bool blank = current.fields.size() == 1 && current.fields[0].empty() && !field_was_quoted;
    if (!blank) records.push_back(std::move(current));
    current = CsvRecord{};
    field_was_quoted = false;
  };
  std::size_t column = 1;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (quoted) {
      if (ch == '"') {
        if (pos + 1 < text.size() && text[pos + 1] == '"') {
          field.push_back('"');
          ++pos;
        } else {
          quoted = false;
        }
      } else {
        if (ch == '\n') ++line;
        field.push_back(ch);
      }
      continue;
    }
    switch (ch) {
      case '"':
        if (!trim(field).empty()) {
          throw ValidationError(where(source, line, column) + ": unexpected quote inside unquoted field");
        }
        field.clear();
        quoted = true;
        field_was_quoted = true;
        break;
      case ',':
        current.fields.push_back(std::move(field));
        field.clear();
        ++column;
        break;
      case '\r':
        if (pos + 1 < text.size() && text[pos + 1] == '\n') break;
        field.push_back(ch);
        break;
      case '\n':
        end_record();
        ++line;
        current.line = line;
        column = 1;
        break;
      default:
        field.push_back(ch);
    }
  }
  if (quoted) throw ValidationError(where(source, line, column) + ": unterminated quoted field");
  if (!field.empty() || !current.fields.empty() || field_was_quoted) end_record();
  return records;
}

RawSurveyTable parse_survey_csv(std::string_view text, int levels, const std::string& source) {
  if (levels < 2) throw ValidationError("ordinal levels must be >= 2");
  auto grid = split_grid(text, source);
  RawSurveyTable table;
  table.levels = levels;
  table.item_ids = std::move(grid.item_ids);
  table.respondent_ids = std::move(grid.respondent_ids);
  for (const auto& rec : grid.rows) {
    std::vector<std::optional<int>> row;
    for (std::size_t k = 1; k < rec.fields.size(); ++k) {
      const auto cell = trim(rec.fields[k]);
      if (cell.empty()) {
        row.emplace_back();
        continue;
      }
      int value = 0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || value < 1 || value > levels) {
        throw ValidationError(where(source, rec.line, k + 1) + " (respondent \"" + trim(rec.fields[0]) + "\", item \"" +
                              table.item_ids[k - 1] + "\"): rating \"" + cell + "\" is not an integer in 1.." +
                              std::to_string(levels));
      }
      row.emplace_back(value);
    }
    table.ratings.push_back(std::move(row));
  }
  return table;
}

RawSurveyTable load_survey_csv(const std::filesystem::path& path, int levels) {
  return parse_survey_csv(read_text(path), levels, path.string());
}

double rescale_rating(int rating, int levels, const Rescaling& rule) {
  if (rating < 1 || rating > levels) {
    throw ValidationError("rating " + std::to_string(rating) + " outside 1.." + std::to_string(levels));
  }
  const double r = rating;
  const double R = levels;
  if (rule.rule == RescaleRule::midpoint) return (r - 0.5) / R;
  return rule.epsilon + (r - 1.0) / (R - 1.0) * (1.0 - 2.0 * rule.epsilon);
}

ResponseMatrix rescale(const RawSurveyTable& table, const Rescaling& rule) {
  const std::size_t N = table.respondent_ids.size();
  const std::size_t K = table.item_ids.size();
  std::vector<double> values(N * K, 0.5);
  std::vector<bool> mask(N * K, false);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t k = 0; k < K; ++k) {
      const auto& r = table.ratings[i][k];
      if (!r) continue;
      values[i * K + k] = rescale_rating(*r, table.levels, rule);
      mask[i * K + k] = true;
    }
  }
  return ResponseMatrix(N, K, std::move(values), std::move(mask), table.respondent_ids, table.item_ids);
}

ResponseMatrix parse_unit_csv(std::string_view text, const std::string& source) {
  auto grid = split_grid(text, source);
  const std::size_t N = grid.respondent_ids.size();
  const std::size_t K = grid.item_ids.size();
  std::vector<double> values(N * K, 0.5);
  std::vector<bool> mask(N * K, false);
  for (std::size_t i = 0; i < N; ++i) {
    const auto& rec = grid.rows[i];
    for (std::size_t k = 0; k < K; ++k) {
      const auto cell = trim(rec.fields[k + 1]);
      if (cell.empty()) continue;
      double value = 0.0;
      const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
      if (ec != std::errc{} || ptr != cell.data() + cell.size() || !(value > 0.0 && value < 1.0)) {
        throw ValidationError(where(source, rec.line, k + 2) + " (respondent \"" + grid.respondent_ids[i] +
                              "\", item \"" + grid.item_ids[k] + "\"): value \"" + cell +
                              "\" is not a number in (0, 1)");
      }
      values[i * K + k] = value;
      mask[i * K + k] = true;
    }
  }
  return ResponseMatrix(N, K, std::move(values), std::move(mask), std::move(grid.respondent_ids),
                        std::move(grid.item_ids));
}

ResponseMatrix load_unit_csv(const std::filesystem::path& path) { return parse_unit_csv(read_text(path), path.string()); }

ResponseMatrix load_response_matrix(const std::filesystem::path& path, const StudyConfig& config) {
  if (config.input_scale == InputScale::unit) return load_unit_csv(path);
  return rescale(load_survey_csv(path, config.ordinal_levels), config.rescaling);
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char ch : field) {
    if (ch == '"') out.push_back('"');
    out.push_back(ch);
  }
  out.push_back('"');
  return out;
}

std::string format_number(double value) {
  char buffer[512];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value, std::chars_format::fixed);
  if (ec != std::errc{}) throw NumericalError("cannot format number");
  return std::string(buffer, ptr);
}

std::string format_survey_csv(const RawSurveyTable& table) {
  std::string out = "respondent_id";
  for (const auto& id : table.item_ids) out += "," + csv_escape(id);
  out += "\n";
  for (std::size_t i = 0; i < table.respondent_ids.size(); ++i) {
    out += csv_escape(table.respondent_ids[i]);
    for (const auto& r : table.ratings[i]) {
      out += ",";
      if (r) out += std::to_string(*r);
    }
    out += "\n";
  }
  return out;
}

std::string format_unit_csv(const ResponseMatrix& data) {
  std::string out = "respondent_id";
  for (const auto& id : data.item_ids()) out += "," + csv_escape(id);
  out += "\n";
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    out += csv_escape(data.respondent_ids()[i]);
    for (std::size_t k = 0; k < data.items(); ++k) {
      out += ",";
      if (data.observed(i, k)) out += format_number(data.value(i, k));
    }
    out += "\n";
  }
  return out;
}

RawSurveyTable discretize(const ResponseMatrix& data, int levels) {
  RawSurveyTable table;
  table.levels = levels;
  table.item_ids = data.item_ids();
  table.respondent_ids = data.respondent_ids();
  for (std::size_t i = 0; i < data.respondents(); ++i) {
    std::vector<std::optional<int>> row;
    for (std::size_t k = 0; k < data.items(); ++k) {
      if (!data.observed(i, k)) {
        row.emplace_back();
        continue;
      }
      const int r = static_cast<int>(std::floor(data.value(i, k) * levels)) + 1;
      row.emplace_back(std::min(r, levels));
    }
    table.ratings.push_back(std::move(row));
  }
  return table;
}

std::vector<std::pair<std::string, std::string>> load_covariates(const std::filesystem::path& path) {
  const auto source = path.string();
  const auto records = parse_csv(read_text(path), source);
  if (records.empty()) throw ValidationError(source + ": empty file");
  std::vector<std::pair<std::string, std::string>> out;
  std::set<std::string> seen;
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.fields.size() != 2) {
      throw ValidationError(source + " line " + std::to_string(rec.line) + ": expected 2 fields (respondent id, level)");
    }
    auto id = trim(rec.fields[0]);
    if (!seen.insert(id).second) throw ValidationError(where(source, rec.line, 1) + ": duplicate respondent id \"" + id + "\"");
    out.emplace_back(std::move(id), trim(rec.fields[1]));
  }
  return out;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_text_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace icct::io
