#include "mdpattern/error.hpp"

namespace mdpattern {

std::string SourceLocation::to_string() const {
  std::string out = file.empty() ? std::string("<input>") : file;
  out += ':';
  out += std::to_string(line);
  out += ':';
  out += std::to_string(column);
  return out;
}

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::UnterminatedString: return "UnterminatedString";
    case ErrorCode::UnterminatedBlock: return "UnterminatedBlock";
    case ErrorCode::UnterminatedComment: return "UnterminatedComment";
    case ErrorCode::UnbalancedParen: return "UnbalancedParen";
    case ErrorCode::UnexpectedToken: return "UnexpectedToken";
    case ErrorCode::MissingInclude: return "MissingInclude";
    case ErrorCode::IncludeCycle: return "IncludeCycle";
    case ErrorCode::MissingTemplateVector: return "MissingTemplateVector";
    case ErrorCode::NotAList: return "NotAList";
    case ErrorCode::EmptyList: return "EmptyList";
    case ErrorCode::BadCodeTable: return "BadCodeTable";
    case ErrorCode::BothEmpty: return "BothEmpty";
    case ErrorCode::EmptyTarget: return "EmptyTarget";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::DanglingPatternId: return "DanglingPatternId";
    case ErrorCode::MalformedEntry: return "MalformedEntry";
    case ErrorCode::ArityMismatch: return "ArityMismatch";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::BadManifest: return "BadManifest";
  }
  return "Unknown";
}

namespace {

std::string compose(ErrorCode code, const std::string& message, const SourceLocation& where) {
  std::string out;
  if (!where.file.empty() || where.line != 1 || where.column != 1) {
    out += where.to_string();
    out += ": ";
  }
  out += error_code_name(code);
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, std::string message, SourceLocation where)
    : std::runtime_error(compose(code, message, where)),
      code_(code),
      where_(std::move(where)),
      detail_(std::move(message)) {}

}  // namespace mdpattern
