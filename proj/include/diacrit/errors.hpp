#ifndef DIACRIT_ERRORS_HPP
#define DIACRIT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace diacrit {

/// Base class for all data errors raised by this library. The CLI maps any
/// DiacritError to exit code 1 and prints name() plus the message.
class DiacritError : public std::runtime_error {
public:
    DiacritError(std::string name, const std::string& message)
        : std::runtime_error(message), name_(std::move(name)) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

/// Parallel data is corrupt: token lengths differ or base characters mismatch.
class AlignmentError : public DiacritError {
public:
    explicit AlignmentError(const std::string& message)
        : DiacritError("AlignmentError", message) {}
};

/// Malformed serialized instruction or other textual artifact.
class ParseError : public DiacritError {
public:
    ParseError(const std::string& message, size_t offset)
        : DiacritError("ParseError", message + " (offset " + std::to_string(offset) + ")"),
          offset_(offset) {}

    size_t offset() const { return offset_; }

private:
    size_t offset_;
};

/// Malformed M2 document.
class M2FormatError : public DiacritError {
public:
    M2FormatError(const std::string& message, size_t line)
        : DiacritError("M2FormatError", message + " (line " + std::to_string(line) + ")"),
          line_(line) {}

    size_t line() const { return line_; }

private:
    size_t line_;
};

/// Corrupt or version-mismatched model/instruction-set/vocabulary file.
class ModelFormatError : public DiacritError {
public:
    explicit ModelFormatError(const std::string& message)
        : DiacritError("ModelFormatError", message) {}
};

/// Hypothesis and gold differ in sentence or word counts.
class LengthMismatchError : public DiacritError {
public:
    explicit LengthMismatchError(const std::string& message)
        : DiacritError("LengthMismatchError", message) {}
};

/// Nothing to evaluate: no mask-true alphabetic word in the corpus.
class EmptyEvaluationError : public DiacritError {
public:
    explicit EmptyEvaluationError(const std::string& message)
        : DiacritError("EmptyEvaluationError", message) {}
};

/// Token spans overlap; tokenization output is corrupt.
class SpanOverlapError : public DiacritError {
public:
    explicit SpanOverlapError(const std::string& message)
        : DiacritError("SpanOverlapError", message) {}
};

/// An annotation item lacks one of its two verdict rows.
class PairingError : public DiacritError {
public:
    explicit PairingError(const std::string& message)
        : DiacritError("PairingError", message) {}
};

/// File could not be opened or written.
class IoError : public DiacritError {
public:
    explicit IoError(const std::string& message)
        : DiacritError("IoError", message) {}
};

}  // namespace diacrit

#endif  // DIACRIT_ERRORS_HPP
