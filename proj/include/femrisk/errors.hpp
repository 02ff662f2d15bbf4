#pragma once

#include <stdexcept>
#include <string>

namespace femrisk {

// Base for everything thrown by this library. Catching femrisk::Error at the
// CLI boundary is sufficient; nothing else escapes on bad input.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& message) : std::runtime_error(message) {}
};

// A label was looked up in a catalog that does not define it.
class UnknownLevelError : public Error {
public:
    using Error::Error;
};

// A factor id has no catalog in the rulebase, or a rule term references one.
class UnknownFactorError : public Error {
public:
    using Error::Error;
};

// A rule id was requested that the rulebase does not contain.
class UnknownRuleError : public Error {
public:
    using Error::Error;
};

// NaN or infinity where a finite number is required.
class NonFiniteError : public Error {
public:
    using Error::Error;
};

// A finite number fell outside its documented range.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

// An aggregate that has no identity element received zero operands.
class EmptyInputError : public Error {
public:
    using Error::Error;
};

// Weighted aggregation was asked about a rule with no recorded activation.
class MissingActivationError : public Error {
public:
    using Error::Error;
};

// Input text is not well-formed for its format (JSON or CSV).
class SyntaxError : public Error {
public:
    using Error::Error;
};

// Well-formed input whose structure violates the document schema:
// unknown keys, wrong types, missing fields, values outside schema bounds.
class SchemaError : public Error {
public:
    using Error::Error;
};

// Structurally valid rulebase that fails semantic validation.
class ValidationError : public Error {
public:
    using Error::Error;
};

// A case record mixes coordinate-pair input with factor assignments.
class CaseModeError : public Error {
public:
    using Error::Error;
};

// Two case records share an id within one input file.
class DuplicateCaseError : public Error {
public:
    using Error::Error;
};

// Filesystem-level failure: missing file, unreadable path, failed write.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace femrisk
