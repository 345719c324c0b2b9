#ifndef SEMCHANGE_ERRORS_HPP
#define SEMCHANGE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace semchange {

/// Base class for all library errors.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class EmptyCorpus : public Error { public: using Error::Error; };
class InvalidEncoding : public Error { public: using Error::Error; };
class NoCommonVocabulary : public Error { public: using Error::Error; };
class MissingEmbedding : public Error { public: using Error::Error; };
class DimensionMismatch : public Error { public: using Error::Error; };
class ZeroVector : public Error { public: using Error::Error; };
class AbsentWord : public Error { public: using Error::Error; };
class NeighborCountTooLarge : public Error { public: using Error::Error; };
class RankDeficient : public Error { public: using Error::Error; };
class InsufficientData : public Error { public: using Error::Error; };
class EmptySupport : public Error { public: using Error::Error; };
class NoFittableWords : public Error { public: using Error::Error; };
class IncompleteSystem : public Error { public: using Error::Error; };
class UnstableProcess : public Error { public: using Error::Error; };
class InvalidSpec : public Error { public: using Error::Error; };
class UnknownWord : public Error { public: using Error::Error; };
class IoError : public Error { public: using Error::Error; };

} // namespace semchange

#endif
