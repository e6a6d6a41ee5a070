#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "forge/core_types.hpp"

namespace forge::serializer {

/// Flattens a tripleset into the marker-token sequence
///   <subject> S <predicate> P <object> O <eot> ...
/// one block per triple, single-spaced throughout.
std::string linearize_tripleset(const TripleSet& ts);

/// Inverse of linearize_tripleset. Throws forge::DataError naming the
/// 1-based token position for out-of-order markers, missing <eot> or empty
/// fields.
TripleSet delinearize(std::string_view seq);

/// (source, target) pair for one record: linearized triples and the raw
/// verbalization text, both true-cased as stored.
std::pair<std::string, std::string> build_training_pair(const PairRecord& rec);

}  // namespace forge::serializer
