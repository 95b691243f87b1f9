#include "text_util.h"

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "macroplace/error.h"

namespace macroplace {

LineReader::LineReader(const std::filesystem::path& path) : path_(path), in_(path) {
  if (!in_) throw Error(ErrorKind::MissingFile, path.string());
}

bool LineReader::next(std::vector<std::string>& tokens) {
  while (std::getline(in_, buffer_)) {
    ++line_;
    tokens.clear();
    std::string current;
    for (char c : buffer_) {
      if (c == '#') break;
      if (c == ' ' || c == '\t' || c == '\r' || c == ':') {
        if (!current.empty()) tokens.push_back(std::move(current));
        current.clear();
        if (c == ':') tokens.emplace_back(":");
      } else {
        current.push_back(c);
      }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    if (!tokens.empty()) return true;
  }
  return false;
}

void LineReader::fail(const std::string& reason) const {
  throw Error(ErrorKind::MalformedLine, path_.string() + ":" + std::to_string(line_) + ": " + reason);
}

double LineReader::number(const std::string& token, std::string_view what) const {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(token.c_str(), &end);
  if (end == token.c_str() || *end != '\0' || errno == ERANGE || !std::isfinite(v)) {
    fail("bad " + std::string(what) + " '" + token + "'");
  }
  return v;
}

std::string fixed6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  // Avoid "-0.000000".
  if (std::string_view(buf) == "-0.000000") return "0.000000";
  return buf;
}

}  // namespace macroplace
