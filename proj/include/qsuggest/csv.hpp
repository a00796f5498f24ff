#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace qsuggest::csv {

struct Record {
  std::vector<std::string> fields;
  std::size_t line = 0;  // 1-based line on which the record starts
};

// RFC 4180 reader: quoted fields may hold commas, doubled quotes and line
// breaks; CRLF and LF line endings are both accepted. A UTF-8 byte-order mark
// on the first line is skipped.
class Reader {
 public:
  explicit Reader(std::istream& in);

  // False at end of input. Blank lines are skipped. Throws InputError on an
  // unterminated quote.
  bool next(Record& record);

 private:
  bool read_record(Record& record);
  int get();
  int peek();

  std::istream& in_;
  std::size_t line_ = 1;
  bool first_ = true;
  bool last_quoted_ = false;
};

// Quotes the field if it contains a comma, quote, CR or LF.
std::string escape(std::string_view field);
std::string join(const std::vector<std::string>& fields);

// Shortest decimal form that reads back to the same double.
std::string number(double value);

}  // namespace qsuggest::csv
