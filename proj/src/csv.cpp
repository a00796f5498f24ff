#include "qsuggest/csv.hpp"

#include <charconv>
#include <istream>

#include "qsuggest/errors.hpp"

namespace qsuggest::csv {

Reader::Reader(std::istream& in) : in_(in) {}

int Reader::get() {
  const int c = in_.get();
  if (c == '\n') ++line_;
  return c;
}

int Reader::peek() { return in_.peek(); }

bool Reader::next(Record& record) {
  while (read_record(record)) {
    if (first_) {
      first_ = false;
      if (!record.fields.empty() && record.fields[0].starts_with("\xEF\xBB\xBF")) {
        record.fields[0].erase(0, 3);
      }
    }
    const bool blank = record.fields.size() == 1 && record.fields[0].empty() && !last_quoted_;
    if (!blank) return true;
  }
  return false;
}

bool Reader::read_record(Record& record) {
  record.fields.clear();
  if (peek() == std::char_traits<char>::eof()) return false;

  record.line = line_;
  std::string field;
  bool quoted = false;
  bool field_started_quoted = false;
  auto finish_field = [&] {
    last_quoted_ = field_started_quoted;
    record.fields.push_back(std::move(field));
    field.clear();
    field_started_quoted = false;
  };
  while (true) {
    const int c = get();
    if (c == std::char_traits<char>::eof()) {
      if (quoted) {
        throw InputError("unterminated quoted field starting on line " + std::to_string(record.line));
      }
      finish_field();
      return true;
    }
    if (quoted) {
      if (c == '"') {
        if (peek() == '"') {
          get();
          field.push_back('"');
        } else {
          quoted = false;
        }
      } else {
        field.push_back(static_cast<char>(c));
      }
      continue;
    }
    if (c == '"' && field.empty() && !field_started_quoted) {
      quoted = true;
      field_started_quoted = true;
    } else if (c == ',') {
      finish_field();
    } else if (c == '\r' && peek() == '\n') {
      // CRLF: the LF ends the record on the next iteration.
    } else if (c == '\n') {
      finish_field();
      return true;
    } else {
      field.push_back(static_cast<char>(c));
    }
  }
}

std::string escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string join(const std::vector<std::string>& fields) {
  std::string out;
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += escape(fields[i]);
  }
  return out;
}

std::string number(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc{}) throw ContractViolation("cannot format number");
  return std::string(buf, end);
}

}  // namespace qsuggest::csv
