#pragma once

#include <stdexcept>
#include <string>

namespace revmine {

/// Base class for all revmine errors.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// extract_text found no non-math body text.
struct NoTextExtracted : Error {
  NoTextExtracted() : Error("no non-math body text extracted") {}
};

/// metadata.json is missing a field or violates an invariant.
struct MalformedMetadata : Error {
  explicit MalformedMetadata(const std::string& field_path)
      : Error("malformed metadata: " + field_path), field(field_path) {}
  std::string field;
};

/// The corpus root holds no papers, or build_idf got no documents.
struct EmptyCorpus : Error {
  EmptyCorpus() : Error("corpus is empty") {}
};

/// sample_pairs asked for more pairs than exist.
struct SampleTooLarge : Error {
  SampleTooLarge(std::size_t requested, std::size_t available)
      : Error("sample size " + std::to_string(requested) + " exceeds pool of " +
              std::to_string(available)) {}
};

/// Fleiss' kappa is undefined: all ratings fall in one category.
struct DegenerateAgreement : Error {
  DegenerateAgreement() : Error("kappa undefined: all ratings in a single category") {}
};

/// Majority threshold <= raters/2 cannot guarantee a unique majority label.
struct ThresholdTooLow : Error {
  ThresholdTooLow(int threshold, int raters)
      : Error("majority threshold " + std::to_string(threshold) +
              " is not greater than half of " + std::to_string(raters) + " raters") {}
};

/// strength_change_rate over an empty majority subset.
struct EmptySubset : Error {
  EmptySubset() : Error("majority subset is empty") {}
};

/// stats requested before the pairs file exists.
struct MissingPairs : Error {
  explicit MissingPairs(const std::string& path) : Error("pairs file missing: " + path) {}
};

/// Label CSV rejected; message carries the row number or pair id.
struct LabelIngestError : Error {
  using Error::Error;
};

/// Pipeline configuration out of range.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace revmine
