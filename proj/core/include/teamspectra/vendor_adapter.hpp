#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "teamspectra/match.hpp"

namespace teamspectra::client {

// Translation between the vendor's REST document shapes (match-v5-style
// metadata/info envelopes, frame-nested timeline events, league entries)
// and the canonical records the rest of the library consumes. Canonical
// player ids are the vendor puuids.

struct VendorSummoner {
    std::string summoner_id;
    std::string puuid;
    std::string name;
};

struct VendorParticipant {
    std::string puuid;
    std::string summoner_id;
};

// {"id": ..., "puuid": ..., "name": ...}
VendorSummoner summoner_from_vendor(std::string_view raw_json);
std::string summoner_to_vendor(const VendorSummoner& summoner);

// A bare JSON array of match id strings.
std::vector<std::string> match_ids_from_vendor(std::string_view raw_json);
std::string match_ids_to_vendor(const std::vector<std::string>& ids);

// Canonical match from a vendor match document. Queue ids 420/440 map to
// the ranked queues, anything else to Other; participant team positions
// TOP/JUNGLE/MIDDLE/BOTTOM/UTILITY map to roles; elite kills are dragon
// plus baron takedowns. Ranks are not part of the vendor match document
// and stay empty; the crawler merges league entries separately.
MatchRecord match_from_vendor(std::string_view raw_json);

// The 10 participant identity pairs of a vendor match document, in
// participant order (team one first).
std::vector<VendorParticipant> participants_from_vendor(std::string_view raw_json);

// Vendor rendering of a canonical match, used by the stub server and
// fixtures. summoner_ids supplies the per-participant summoner ids in
// participant order; puuids come from the canonical player ids.
std::string match_to_vendor(const MatchRecord& match,
                            const std::vector<std::string>& summoner_ids);

// Canonical timeline from a vendor timeline document: kill, building and
// elite-monster events collected across frames in order, plus one
// position frame per vendor frame that carries participant positions.
Timeline timeline_from_vendor(std::string_view raw_json);
std::string timeline_to_vendor(const Timeline& timeline);

// Rank from a league-v4 entries array. Prefers the solo-queue entry,
// falls back to flex; empty when the player holds no ranked entry.
std::optional<Rank> rank_from_vendor_entries(std::string_view raw_json);
std::string rank_to_vendor_entries(const std::optional<Rank>& rank,
                                   const std::string& summoner_id);

}  // namespace teamspectra::client
