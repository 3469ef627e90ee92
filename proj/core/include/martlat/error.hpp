#ifndef MARTLAT_ERROR_HPP
#define MARTLAT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace martlat {

/// Base of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input (rationals, JSON documents, scenario schema).
/// `path` points into the offending document when known, e.g. "/filtration/levels/2".
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& what, std::string path = {})
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// The requested operation has no closed form for the given representation
/// (e.g. operator norm of a rank-one operator, misaligned block composition).
class UnsupportedError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition was violated (index out of range, shape mismatch).
class PreconditionError : public Error {
 public:
  using Error::Error;
};

}  // namespace martlat

#endif  // MARTLAT_ERROR_HPP
