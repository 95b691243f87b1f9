#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <string_view>
#include <vector>

namespace macroplace {

// Reads whitespace-tokenized lines, skipping blanks and '#' comments. A ':'
// is always its own token, so "NumNodes:12" and "NumNodes : 12" tokenize the
// same way.
class LineReader {
 public:
  explicit LineReader(const std::filesystem::path& path);

  bool next(std::vector<std::string>& tokens);
  std::size_t line() const { return line_; }

  [[noreturn]] void fail(const std::string& reason) const;
  double number(const std::string& token, std::string_view what) const;

 private:
  std::filesystem::path path_;
  std::ifstream in_;
  std::string buffer_;
  std::size_t line_ = 0;
};

// Fixed six-decimal rendering used by every writer.
std::string fixed6(double v);

}  // namespace macroplace
