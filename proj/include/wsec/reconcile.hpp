#pragma once

#include <vector>

#include "wsec/formats.hpp"

namespace wsec {

// Temporal intersection of two [begin, begin+duration) intervals.
double overlap_length(double begin_a, double dur_a, double begin_b, double dur_b);

// Assign a speaker to every recognized word by intersecting word timings with
// diarization turns.
//
// Rules: overlaps of turns belonging to the same speaker are summed; the word
// takes the speaker with the largest total overlap; equal overlaps resolve to
// the speaker whose earliest contributing turn has the earlier onset; a word
// overlapping no turn takes the speaker of the turn nearest to the word
// midpoint. Speaker labels are reindexed to integers in order of first
// appearance in the output word sequence; the text labels are kept in
// Session::speaker_names.
Session attribute_words(const std::vector<CtmWord>& words,
                        const std::vector<RttmSegment>& turns);

// Runs attribute_words per recording id found in the CTM.
// Sessions are returned ordered by first appearance in the CTM.
std::vector<Session> attribute_recordings(const std::vector<CtmWord>& words,
                                          const std::vector<RttmSegment>& turns);

}  // namespace wsec
