#include "qsuggest/errors.hpp"

namespace qsuggest {
namespace {

std::string join_report(const std::string& headline, const std::vector<std::string>& problems) {
  std::string out = headline;
  for (const auto& p : problems) {
    out += "\n  ";
    out += p;
  }
  return out;
}

}  // namespace

ReportError::ReportError(const std::string& headline, std::vector<std::string> problems)
    : InputError(join_report(headline, problems)), problems_(std::move(problems)) {}

}  // namespace qsuggest
