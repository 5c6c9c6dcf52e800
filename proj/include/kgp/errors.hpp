// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace kgp {

// Base class for all library errors so callers can catch kgp failures
// separately from generic std exceptions.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad argument values (out-of-range parameters, empty required inputs).
class InputError : public Error {
 public:
  using Error::Error;
};

// Corpus file violates the schema. Message names the file and field.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class DuplicateIdError : public Error {
 public:
  using Error::Error;
};

class EmptyDocumentError : public Error {
 public:
  using Error::Error;
};

class EmptyCorpusError : public Error {
 public:
  using Error::Error;
};

// Two inputs that must describe the same passage set do not.
class InconsistentInputError : public Error {
 public:
  using Error::Error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

class MissingEmbeddingError : public Error {
 public:
  using Error::Error;
};

// Entity extraction failed for a passage; message names the passage id.
class ExtractionError : public Error {
 public:
  using Error::Error;
};

// Structural augmentation found an impossible page/table reference.
class StructureError : public Error {
 public:
  using Error::Error;
};

// Unknown or duplicate node/document id.
class IdError : public Error {
 public:
  using Error::Error;
};

class DeserializationError : public Error {
 public:
  using Error::Error;
};

// Remote endpoint kept failing after retries; message carries attempt
// count and last status.
class ProviderError : public Error {
 public:
  using Error::Error;
};

// Every candidate of the current path is already on the path.
class ExhaustedCandidatesError : public Error {
 public:
  using Error::Error;
};

class EmptyGraphError : public Error {
 public:
  using Error::Error;
};

// A structural question referenced a page/table the graph does not hold.
class StructureNotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgp
