#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "genldpc/matrix.hpp"

namespace genldpc {

// Raised on malformed alist input; carries the 1-based line number of the
// offending line when known.
class AlistError : public std::runtime_error {
  public:
    AlistError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "alist line " + std::to_string(line) + ": " + what
                                      : "alist: " + what),
          line_(line) {}
    int line() const { return line_; }

  private:
    int line_;
};

// MacKay alist convention: "n m", "max_col max_row", column weights, row
// weights, per-column 1-based row indices (zero padding tolerated), then
// per-row column indices. Both index sections must describe the same edges.
ParityCheckMatrix parse_alist(const std::string& text);
std::string format_alist(const ParityCheckMatrix& H);

ParityCheckMatrix read_alist(const std::filesystem::path& path);
void write_alist(const ParityCheckMatrix& H, const std::filesystem::path& path);

} // namespace genldpc
