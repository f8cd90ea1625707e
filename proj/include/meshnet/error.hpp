#pragma once

#include <stdexcept>
#include <string>

namespace meshnet {

/* Every failure the engine can signal.  One exception class carrying a code
 * keeps call sites terse and lets tests assert on the exact condition instead
 * of parsing message text. */
enum class Errc {
  // mesh core
  DuplicateSubnetName,
  UnknownSubnet,
  UnknownNeuron,
  UnknownConnection,
  UnknownEndpoint,
  ArityTooSmall,
  NotATargetSubnet,
  NotAttributeSubnet,
  UnroutableInput,
  InvalidArgument,
  // prior knowledge
  InvalidRange,
  MissingPriorSubnet,
  // schema / prediction
  DuplicateAttribute,
  NoTarget,
  SchemaMismatch,
  NoAxisForCategorical,
  EmptySubnet,
  EmptyIntersection,
  DuplicateBiasTag,
  UnknownBiasTag,
  BiasOnCategoricalTarget,
  NoEvidence,
  EmptyVotes,
  MixedKinds,
  TooFewRecords,
  // image
  MalformedImage,
  UnsupportedFormat,
  EmptyImage,
  NotAShapeSubnet,
  EmptyModel,
  // io
  HeaderMismatch,
  RowParseError,
  SchemaFileError,
  ArchiveVersionMismatch,
  CorruptArchive,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace meshnet
