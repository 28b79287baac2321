#pragma once

#include <stdexcept>
#include <string>

namespace emoclick {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Transient transport failure; retried by backend wrappers before being
// surfaced as BackendUnavailableError.
class TransportError : public Error {
public:
    using Error::Error;
};

class OutOfRangeError : public Error { public: using Error::Error; };
class UnknownLabelError : public Error { public: using Error::Error; };
class EmptyDistributionError : public Error { public: using Error::Error; };
class DimMismatchError : public Error { public: using Error::Error; };
class ZeroVectorError : public Error { public: using Error::Error; };
class EmptyTextError : public Error { public: using Error::Error; };
class EmptyCorpusError : public Error { public: using Error::Error; };
class BackendUnavailableError : public Error { public: using Error::Error; };
class TaxonomyMismatchError : public Error { public: using Error::Error; };
class UnknownStyleError : public Error { public: using Error::Error; };
class TemplateMissingError : public Error { public: using Error::Error; };
class EmptyGenerationError : public Error { public: using Error::Error; };
class ContextOverflowError : public Error { public: using Error::Error; };
class EmptyInputError : public Error { public: using Error::Error; };
class ParseError : public Error { public: using Error::Error; };
class MissingFieldError : public Error { public: using Error::Error; };
class UnknownPostError : public Error { public: using Error::Error; };
class NoCandidatesError : public Error { public: using Error::Error; };
class IncompleteRunError : public Error { public: using Error::Error; };
class ConfigError : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

}  // namespace emoclick
