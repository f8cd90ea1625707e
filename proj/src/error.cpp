#include "meshnet/error.hpp"

namespace meshnet {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::DuplicateSubnetName: return "DuplicateSubnetName";
    case Errc::UnknownSubnet: return "UnknownSubnet";
    case Errc::UnknownNeuron: return "UnknownNeuron";
    case Errc::UnknownConnection: return "UnknownConnection";
    case Errc::UnknownEndpoint: return "UnknownEndpoint";
    case Errc::ArityTooSmall: return "ArityTooSmall";
    case Errc::NotATargetSubnet: return "NotATargetSubnet";
    case Errc::NotAttributeSubnet: return "NotAttributeSubnet";
    case Errc::UnroutableInput: return "UnroutableInput";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::InvalidRange: return "InvalidRange";
    case Errc::MissingPriorSubnet: return "MissingPriorSubnet";
    case Errc::DuplicateAttribute: return "DuplicateAttribute";
    case Errc::NoTarget: return "NoTarget";
    case Errc::SchemaMismatch: return "SchemaMismatch";
    case Errc::NoAxisForCategorical: return "NoAxisForCategorical";
    case Errc::EmptySubnet: return "EmptySubnet";
    case Errc::EmptyIntersection: return "EmptyIntersection";
    case Errc::DuplicateBiasTag: return "DuplicateBiasTag";
    case Errc::UnknownBiasTag: return "UnknownBiasTag";
    case Errc::BiasOnCategoricalTarget: return "BiasOnCategoricalTarget";
    case Errc::NoEvidence: return "NoEvidence";
    case Errc::EmptyVotes: return "EmptyVotes";
    case Errc::MixedKinds: return "MixedKinds";
    case Errc::TooFewRecords: return "TooFewRecords";
    case Errc::MalformedImage: return "MalformedImage";
    case Errc::UnsupportedFormat: return "UnsupportedFormat";
    case Errc::EmptyImage: return "EmptyImage";
    case Errc::NotAShapeSubnet: return "NotAShapeSubnet";
    case Errc::EmptyModel: return "EmptyModel";
    case Errc::HeaderMismatch: return "HeaderMismatch";
    case Errc::RowParseError: return "RowParseError";
    case Errc::SchemaFileError: return "SchemaFileError";
    case Errc::ArchiveVersionMismatch: return "ArchiveVersionMismatch";
    case Errc::CorruptArchive: return "CorruptArchive";
  }
  return "Error";
}

}  // namespace meshnet
