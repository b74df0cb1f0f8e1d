#pragma once

#include <stdexcept>
#include <string>

namespace treeshift {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidAddress : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

/// An unrooted-only operation was invoked on a rooted tree.
class RootedTree : public Error {
 public:
  using Error::Error;
};

class InvalidSpace : public Error {
 public:
  using Error::Error;
};

class EmptyIndexSet : public Error {
 public:
  using Error::Error;
};

/// chi_n(v, n) is empty: v has no descendants n generations down.
class EmptyFiber : public Error {
 public:
  using Error::Error;
};

class CriterionTooWeak : public Error {
 public:
  using Error::Error;
};

class UnknownPreset : public Error {
 public:
  using Error::Error;
};

/// A lazy enumeration would visit more vertices than the configured cap.
class EnumerationCapExceeded : public Error {
 public:
  using Error::Error;
};

/// Exact arithmetic was requested for a configuration that has no exact form.
class InexactMode : public Error {
 public:
  using Error::Error;
};

}  // namespace treeshift
