#include "dmkit/csv.hpp"

#include <algorithm>
#include <istream>
#include <iterator>
#include <map>

#include "dmkit/errors.hpp"

namespace dmkit {

std::size_t RawTable::column(std::string_view name) const {
  auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? std::string_view::npos
                            : static_cast<std::size_t>(it - header.begin());
}

namespace {

struct Record {
  std::vector<std::string> cells;
  std::size_t line = 0;
};

class CsvReader {
 public:
  explicit CsvReader(std::string_view text) : text_(text) {}

  bool next(Record& rec) {
    while (pos_ < text_.size()) {
      // skip blank lines
      std::size_t end = pos_;
      while (end < text_.size() && text_[end] == '\r') ++end;
      if (end < text_.size() && text_[end] == '\n') {
        pos_ = end + 1;
        ++line_;
        continue;
      }
      if (end == text_.size()) {
        pos_ = end;
        return false;
      }
      read_record(rec);
      return true;
    }
    return false;
  }

 private:
  void read_record(Record& rec) {
    rec.cells.clear();
    rec.line = line_;
    std::string cell;
    bool quoted = false;
    bool was_quoted = false;
    std::size_t quote_line = line_;

    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (quoted) {
        if (c == '"') {
          if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '"') {
            cell.push_back('"');
            pos_ += 2;
            continue;
          }
          quoted = false;
          ++pos_;
          continue;
        }
        if (c == '\n') ++line_;
        cell.push_back(c);
        ++pos_;
        continue;
      }
      if (c == '"' && !was_quoted && cell.empty()) {
        quoted = true;
        was_quoted = true;
        quote_line = line_;
        ++pos_;
        continue;
      }
      if (c == ',') {
        rec.cells.push_back(std::move(cell));
        cell.clear();
        was_quoted = false;
        ++pos_;
        continue;
      }
      if (c == '\n') {
        ++pos_;
        ++line_;
        break;
      }
      if (c == '\r' && (pos_ + 1 == text_.size() || text_[pos_ + 1] == '\n')) {
        ++pos_;
        continue;
      }
      cell.push_back(c);
      ++pos_;
    }
    if (quoted) {
      throw data_error("unterminated quoted field starting at line " + std::to_string(quote_line));
    }
    rec.cells.push_back(std::move(cell));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

bool needs_quotes(const std::string& cell) {
  if (cell.empty()) return false;
  if (cell.front() == ' ' || cell.back() == ' ') return true;
  return cell.find_first_of(",\"\r\n") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
  if (!needs_quotes(cell)) {
    out += cell;
    return;
  }
  out.push_back('"');
  for (char c : cell) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
}

}  // namespace

RawTable parse_csv(std::string_view text) {
  // tolerate a UTF-8 byte order mark
  if (text.starts_with("\xEF\xBB\xBF")) text.remove_prefix(3);

  CsvReader reader(text);
  Record rec;
  RawTable table;
  if (!reader.next(rec)) throw data_error("CSV input has no header line");
  table.header = std::move(rec.cells);
  while (reader.next(rec)) {
    if (rec.cells.size() != table.header.size()) {
      throw data_error("ragged row at line " + std::to_string(rec.line) + ": " +
                       std::to_string(rec.cells.size()) + " cells, header has " +
                       std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(rec.cells));
  }
  return table;
}

RawTable parse_csv(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_csv(text);
}

std::string write_csv(const RawTable& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out.push_back(',');
      append_cell(out, cells[i]);
    }
    // a lone empty cell would read back as a blank line
    if (cells.size() == 1 && cells[0].empty()) out += "\"\"";
    out.push_back('\n');
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  return out;
}

Dataset table_to_nominal_dataset(const RawTable& table, std::string relation) {
  const std::size_t n = table.num_columns();
  std::vector<std::vector<std::string>> values(n);
  std::vector<std::map<std::string, std::size_t, std::less<>>> lookup(n);

  std::vector<Row> rows;
  rows.reserve(table.rows.size());
  for (const auto& raw : table.rows) {
    Row row(n);
    for (std::size_t c = 0; c < n; ++c) {
      const std::string& cell = raw[c];
      if (cell.empty()) continue;
      auto [it, inserted] = lookup[c].try_emplace(cell, values[c].size());
      if (inserted) values[c].push_back(cell);
      row[c] = CellValue::nominal(it->second);
    }
    rows.push_back(std::move(row));
  }

  std::vector<AttributeSpec> attrs;
  for (std::size_t c = 0; c < n; ++c) {
    if (values[c].empty()) {
      throw data_error("column '" + table.header[c] + "' has no values");
    }
    attrs.push_back(AttributeSpec::nominal(table.header[c], std::move(values[c])));
  }
  return Dataset(std::move(relation), std::move(attrs), std::move(rows));
}

}  // namespace dmkit
