#pragma once

#include <stdexcept>
#include <string>

namespace termsearch {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error {
  using Error::Error;
};
struct UnknownTermError : ParseError {
  explicit UnknownTermError(const std::string& name)
      : ParseError("unknown term: " + name), term_name(name) {}
  std::string term_name;
};
struct MalformedLineError : ParseError {
  MalformedLineError(int line_no, const std::string& what)
      : ParseError("line " + std::to_string(line_no) + ": " + what), line_no(line_no) {}
  int line_no;
};
struct ForwardReferenceError : ParseError {
  ForwardReferenceError(int line_no, int ref)
      : ParseError("line " + std::to_string(line_no) + ": reference to line " +
                   std::to_string(ref) + " which is not defined yet"),
        line_no(line_no) {}
  int line_no;
};
struct EmptyQueryError : ParseError {
  EmptyQueryError() : ParseError("empty query") {}
};
struct QueryVanishedError : Error {
  QueryVanishedError() : Error("normalization removed every leaf of the query") {}
};

struct KindMismatchError : Error {
  using Error::Error;
};
struct TooManyTermsError : Error {
  using Error::Error;
};

struct DuplicateDocError : Error {
  explicit DuplicateDocError(const std::string& id)
      : Error("duplicate doc_id: " + id), doc_id(id) {}
  std::string doc_id;
};
struct BadFractionsError : Error {
  using Error::Error;
};

struct EmptyCorpusError : Error {
  EmptyCorpusError() : Error("empty corpus") {}
};
struct DegenerateLabelsError : Error {
  using Error::Error;
};
struct DivergedError : Error {
  using Error::Error;
};
struct VocabularyMismatchError : Error {
  using Error::Error;
};

struct LengthMismatchError : Error {
  using Error::Error;
};
struct ZeroVarianceError : Error {
  using Error::Error;
};
struct MissingTermScoreError : Error {
  using Error::Error;
};
struct EmptyGridError : Error {
  using Error::Error;
};
struct InfeasibleCorrelationError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};
struct MissingArtifactError : Error {
  using Error::Error;
};

}  // namespace termsearch
