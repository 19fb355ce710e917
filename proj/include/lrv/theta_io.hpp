#pragma once

#include <cstdint>
#include <string>

#include "lrv/mcnet.hpp"
#include "lrv/trainer.hpp"

namespace lrv {

// Theta artifact: magic line, 8-byte little-endian JSON header length, the
// JSON header (proposal spec + seed), then the raw little-endian doubles.
// Writing the same vector twice produces byte-identical files.
void save_theta(const std::string& path, const ThetaVector& theta, std::uint64_t seed);
ThetaVector load_theta(const std::string& path);
ThetaVector load_theta(const std::string& path, std::uint64_t* seed_out);

// Checkpoint: theta plus optimizer accumulators and stream positions.
void save_checkpoint(const std::string& path, const Checkpoint& ck, std::uint64_t seed);
Checkpoint load_checkpoint(const std::string& path);

// JSON serialization of the proposal spec (shared by theta files and
// experiment configs).
std::string proposal_spec_to_json(const ProposalSpec& spec);
ProposalSpec proposal_spec_from_json_text(const std::string& text);

}  // namespace lrv
