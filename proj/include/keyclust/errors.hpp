#ifndef KEYCLUST_ERRORS_HPP
#define KEYCLUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace keyclust {

/// Base class for every error raised by the toolkit.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define KEYCLUST_DEFINE_ERROR(Name, Base)  \
    class Name : public Base {             \
    public:                                \
        using Base::Base;                  \
    }

KEYCLUST_DEFINE_ERROR(MissingPath, Error);
KEYCLUST_DEFINE_ERROR(ParseError, Error);
KEYCLUST_DEFINE_ERROR(InvalidBatchSize, Error);
KEYCLUST_DEFINE_ERROR(IoError, Error);
KEYCLUST_DEFINE_ERROR(MissingStage, IoError);
KEYCLUST_DEFINE_ERROR(SchemaMismatch, Error);
KEYCLUST_DEFINE_ERROR(InvalidPattern, Error);
KEYCLUST_DEFINE_ERROR(InvalidConfig, Error);
KEYCLUST_DEFINE_ERROR(EmptyCorpus, Error);
KEYCLUST_DEFINE_ERROR(DimensionTooLarge, Error);
KEYCLUST_DEFINE_ERROR(LengthMismatch, Error);
KEYCLUST_DEFINE_ERROR(QueryNotInVocabulary, Error);
KEYCLUST_DEFINE_ERROR(TooFewDistinctPoints, Error);
KEYCLUST_DEFINE_ERROR(NonFiniteInput, Error);
KEYCLUST_DEFINE_ERROR(InvalidClusterIndex, Error);

#undef KEYCLUST_DEFINE_ERROR

}  // namespace keyclust

#endif  // KEYCLUST_ERRORS_HPP
