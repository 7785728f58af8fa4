#include "dmkit/arff.hpp"

#include <cctype>
#include <charconv>
#include <istream>
#include <iterator>
#include <ostream>
#include <sstream>

#include "dmkit/errors.hpp"

namespace dmkit {

namespace {

bool is_blank(char c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_blank(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_blank(s.back())) s.remove_suffix(1);
  return s;
}

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(a[i])) !=
        std::tolower(static_cast<unsigned char>(b[i]))) {
      return false;
    }
  }
  return true;
}

struct Token {
  std::string text;
  bool quoted = false;
};

/// Cursor over one logical line.
class LineScanner {
 public:
  LineScanner(std::string_view line, std::size_t line_no) : s_(line), line_no_(line_no) {}

  void skip_blanks() {
    while (pos_ < s_.size() && is_blank(s_[pos_])) ++pos_;
  }
  bool done() {
    skip_blanks();
    return pos_ >= s_.size();
  }
  char peek() {
    skip_blanks();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }
  void expect(char c) {
    if (peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  std::string_view rest() {
    skip_blanks();
    return s_.substr(pos_);
  }

  /// Reads a quoted token or a bare run of characters up to a delimiter.
  /// With `list_mode`, blanks are allowed inside bare tokens (only ',' and
  /// the closing brace end them).
  Token token(bool list_mode) {
    skip_blanks();
    if (pos_ >= s_.size()) fail("unexpected end of line");
    char q = s_[pos_];
    if (q == '\'' || q == '"') return quoted_token(q);

    std::size_t start = pos_;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (c == ',' || (list_mode && c == '}') || (!list_mode && (is_blank(c) || c == '{'))) break;
      ++pos_;
    }
    return {std::string(trim(s_.substr(start, pos_ - start))), false};
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw format_error("line " + std::to_string(line_no_) + ": " + what);
  }

  std::size_t line_no() const { return line_no_; }

 private:
  Token quoted_token(char q) {
    ++pos_;
    std::string out;
    while (pos_ < s_.size()) {
      char c = s_[pos_++];
      if (c == '\\' && pos_ < s_.size()) {
        char e = s_[pos_++];
        switch (e) {
          case 'n': out.push_back('\n'); break;
          case 't': out.push_back('\t'); break;
          case 'r': out.push_back('\r'); break;
          default: out.push_back(e); break;
        }
        continue;
      }
      if (c == q) return {std::move(out), true};
      out.push_back(c);
    }
    fail("unterminated quoted string");
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  std::size_t line_no_;
};

AttributeSpec parse_attribute(LineScanner& sc) {
  Token name = sc.token(false);
  if (name.text.empty() && !name.quoted) sc.fail("attribute name missing");

  if (sc.peek() == '{') {
    sc.expect('{');
    std::vector<std::string> values;
    if (sc.peek() == '}') sc.fail("nominal attribute '" + name.text + "' has no values");
    while (true) {
      values.push_back(sc.token(true).text);
      char c = sc.peek();
      if (c == ',') {
        sc.expect(',');
        continue;
      }
      sc.expect('}');
      break;
    }
    if (!sc.done()) sc.fail("trailing text after nominal value list");
    try {
      return AttributeSpec::nominal(std::move(name.text), std::move(values));
    } catch (const usage_error& e) {
      sc.fail(e.what());
    }
  }

  Token type = sc.token(false);
  if (iequals(type.text, "numeric") || iequals(type.text, "real") ||
      iequals(type.text, "integer")) {
    return AttributeSpec::numeric(std::move(name.text));
  }
  if (iequals(type.text, "string") || iequals(type.text, "date") ||
      iequals(type.text, "relational")) {
    sc.fail("attribute '" + name.text + "': type '" + type.text + "' is not supported");
  }
  sc.fail("attribute '" + name.text + "': unknown type '" + type.text + "'");
}

double parse_number(const std::string& text, const AttributeSpec& spec, std::size_t line_no) {
  double v = 0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last) {
    throw data_error("line " + std::to_string(line_no) + ": value '" + text +
                     "' is not numeric for attribute " + spec.name());
  }
  return v;
}

Row parse_row(LineScanner& sc, const std::vector<AttributeSpec>& attrs) {
  if (sc.peek() == '{') sc.fail("sparse data rows are not supported");
  Row row;
  row.reserve(attrs.size());
  while (true) {
    Token t = sc.token(true);
    if (row.size() >= attrs.size()) {
      throw data_error("line " + std::to_string(sc.line_no()) + ": row has more than " +
                       std::to_string(attrs.size()) + " values");
    }
    const AttributeSpec& spec = attrs[row.size()];
    if (!t.quoted && t.text == "?") {
      row.push_back(CellValue::missing());
    } else if (spec.is_nominal()) {
      auto idx = spec.index_of(t.text);
      if (!idx) {
        throw data_error("line " + std::to_string(sc.line_no()) + ": undeclared value '" +
                         t.text + "' for attribute " + spec.name());
      }
      row.push_back(CellValue::nominal(*idx));
    } else {
      row.push_back(CellValue::numeric(parse_number(t.text, spec, sc.line_no())));
    }
    if (sc.done()) break;
    sc.expect(',');
  }
  if (row.size() != attrs.size()) {
    throw data_error("line " + std::to_string(sc.line_no()) + ": row has " +
                     std::to_string(row.size()) + " values, expected " +
                     std::to_string(attrs.size()));
  }
  return row;
}

/// Splits the leading '@keyword' off a header line.
std::string_view keyword(std::string_view line, std::string_view& rest) {
  std::size_t end = 0;
  while (end < line.size() && !is_blank(line[end])) ++end;
  rest = line.substr(end);
  return line.substr(0, end);
}

}  // namespace

Dataset parse_arff(std::string_view text) {
  enum class Section { header, data };
  Section section = Section::header;
  bool saw_relation = false;
  std::string relation;
  std::vector<AttributeSpec> attrs;
  std::vector<Row> rows;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos
                                                                          : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
    ++line_no;

    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '%') continue;

    if (section == Section::data) {
      LineScanner sc(line, line_no);
      rows.push_back(parse_row(sc, attrs));
      continue;
    }

    if (line.front() != '@') {
      throw format_error("line " + std::to_string(line_no) + ": expected a declaration, found '" +
                         std::string(line) + "'");
    }
    std::string_view rest;
    std::string_view kw = keyword(line, rest);
    LineScanner sc(rest, line_no);
    if (iequals(kw, "@relation")) {
      relation = sc.token(false).text;
      saw_relation = true;
    } else if (iequals(kw, "@attribute")) {
      if (!saw_relation) sc.fail("@attribute before @relation");
      attrs.push_back(parse_attribute(sc));
    } else if (iequals(kw, "@data")) {
      if (!saw_relation) sc.fail("@data before @relation");
      if (attrs.empty()) sc.fail("@data without any @attribute");
      section = Section::data;
    } else {
      sc.fail("unknown declaration '" + std::string(kw) + "'");
    }
  }

  if (section != Section::data) throw format_error("missing @data section");
  return Dataset(std::move(relation), std::move(attrs), std::move(rows));
}

Dataset parse_arff(std::istream& in) {
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_arff(text);
}

std::string arff_quote(std::string_view token) {
  bool quote = token.empty() || token == "?";
  for (char c : token) {
    if (is_blank(c) || c == '{' || c == '}' || c == ',' || c == '%' || c == '\'' || c == '"' ||
        c == '\\') {
      quote = true;
      break;
    }
  }
  if (!quote) return std::string(token);
  std::string out = "'";
  for (char c : token) {
    switch (c) {
      case '\'': out += "\\'"; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c); break;
    }
  }
  out.push_back('\'');
  return out;
}

void write_arff(const Dataset& d, std::ostream& out) {
  out << "@relation " << arff_quote(d.relation_name()) << "\n\n";
  for (const auto& a : d.attributes()) {
    out << "@attribute " << arff_quote(a.name()) << ' ';
    if (a.is_numeric()) {
      out << "numeric\n";
      continue;
    }
    out << '{';
    for (std::size_t i = 0; i < a.num_values(); ++i) {
      if (i) out << ',';
      out << arff_quote(a.values()[i]);
    }
    out << "}\n";
  }
  out << "\n@data\n";

  char buf[64];
  for (const Row& row : d.rows()) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      const CellValue& v = row[c];
      if (v.is_missing()) {
        out << '?';
      } else if (v.is_nominal()) {
        out << arff_quote(d.attribute(c).values()[v.index()]);
      } else {
        auto res = std::to_chars(buf, buf + sizeof buf, v.number());
        out.write(buf, res.ptr - buf);
      }
    }
    out << '\n';
  }
}

std::string write_arff(const Dataset& d) {
  std::ostringstream os;
  write_arff(d, os);
  return os.str();
}

}  // namespace dmkit
