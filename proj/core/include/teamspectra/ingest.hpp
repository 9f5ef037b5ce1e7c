#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "teamspectra/match.hpp"

namespace teamspectra::ingest {

// Queues accepted by filter_corpus. Both ranked queues qualify by default;
// flex can be switched off in configurations that want solo-queue only.
struct FilterOptions {
    bool include_ranked_solo = true;
    bool include_ranked_flex = true;
    std::int64_t min_duration_s = 1380;  // 23 minutes
};

// Parses one canonical match document. Unknown fields are ignored.
// Throws SchemaError on missing/ill-typed fields, CardinalityError when a
// team does not have exactly 5 players or the match not exactly 2 teams.
MatchRecord parse_match(std::string_view raw_json);

// Parses one canonical timeline document.
Timeline parse_timeline(std::string_view raw_json);

// Canonical encodings. Both are bit-exact round-trippable:
// serialize(parse(serialize(x))) == serialize(x).
std::string serialize_match(const MatchRecord& match);
std::string serialize_timeline(const Timeline& timeline);

// Keeps ranked, full-length, ten-player matches; drops remakes/surrenders
// and duplicate match_ids (first occurrence wins). Order preserved.
std::vector<MatchRecord> filter_corpus(std::vector<MatchRecord> records,
                                       const FilterOptions& opts = {});

// raw * 60 / duration_s. Throws DomainError when duration_s == 0.
double per_minute(double raw, std::int64_t duration_s);

// All five per-minute rates for one player row.
PerMinuteMetrics per_minute_metrics(const PlayerRow& row, std::int64_t duration_s);

// Convenience wrappers over the per-document parsers.
MatchRecord load_match_file(const std::filesystem::path& path);
Timeline load_timeline_file(const std::filesystem::path& path);

}  // namespace teamspectra::ingest
