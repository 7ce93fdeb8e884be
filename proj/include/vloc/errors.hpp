#pragma once

#include <stdexcept>
#include <string>

namespace vloc {

/// Base class for all library errors.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// geometry
class BehindCamera : public Error { public: using Error::Error; };

// feature sampling / containers
class OutOfBounds : public Error { public: using Error::Error; };
class BadStride : public Error { public: using Error::Error; };
class EmptyInput : public Error { public: using Error::Error; };
class ExtentMismatch : public Error { public: using Error::Error; };
class DepthMismatch : public Error { public: using Error::Error; };
class LevelMissing : public Error { public: using Error::Error; };
class NonFiniteInput : public Error { public: using Error::Error; };

// file I/O
class ParseError : public Error { public: using Error::Error; };
class BadMagic : public Error { public: using Error::Error; };
class ChecksumError : public Error { public: using Error::Error; };
class IntegrityError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

// map / retrieval
class UnknownId : public Error { public: using Error::Error; };
class ZeroVector : public Error { public: using Error::Error; };
class TooFewSamples : public Error { public: using Error::Error; };
class EmptyDatabase : public Error { public: using Error::Error; };

// matching / pose solving
class TooFewMatches : public Error { public: using Error::Error; };
class NoModelFound : public Error { public: using Error::Error; };

// optimization
class NoValidPoints : public Error { public: using Error::Error; };
class SingularSystem : public Error { public: using Error::Error; };

// configuration
class ConfigError : public Error { public: using Error::Error; };

}  // namespace vloc
