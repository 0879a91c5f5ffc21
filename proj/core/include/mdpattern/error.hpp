#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mdpattern {

/// Position of a token or form in an MD source file. Lines and columns are 1-based.
struct SourceLocation {
  std::string file;
  std::uint32_t line = 1;
  std::uint32_t column = 1;

  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
};

enum class ErrorCode {
  // md_reader
  UnterminatedString,
  UnterminatedBlock,
  UnterminatedComment,
  UnbalancedParen,
  UnexpectedToken,
  MissingInclude,
  IncludeCycle,
  MissingTemplateVector,
  // rtl_core
  NotAList,
  EmptyList,
  BadCodeTable,
  // similarity
  BothEmpty,
  EmptyTarget,
  // archive
  BadHeader,
  DanglingPatternId,
  MalformedEntry,
  ArityMismatch,
  // io / cli
  IoError,
  BadManifest,
};

[[nodiscard]] std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, SourceLocation where = {});

  [[nodiscard]] ErrorCode code() const noexcept { return code_; }
  [[nodiscard]] const SourceLocation& where() const noexcept { return where_; }
  /// The message without the location prefix.
  [[nodiscard]] const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  SourceLocation where_;
  std::string detail_;
};

}  // namespace mdpattern
