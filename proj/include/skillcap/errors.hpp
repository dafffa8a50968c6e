#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace skillcap {

/// Malformed input document. Carries the byte offset where parsing stopped.
class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t byte_offset)
        : std::runtime_error(what), byte_offset_(byte_offset) {}
    std::size_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::size_t byte_offset_;
};

/// Structurally valid document that violates the log schema. Names the field.
class SchemaError : public std::runtime_error {
public:
    SchemaError(const std::string& what, std::string field)
        : std::runtime_error(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Inconsistent or incomplete data encountered mid-pipeline.
class DataError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Non-finite intermediate or otherwise failed numeric computation.
class NumericError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace skillcap
