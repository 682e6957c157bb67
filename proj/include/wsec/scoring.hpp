#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wsec/formats.hpp"

namespace wsec {

enum class PairKind { Correct, Substitution, Insertion, Deletion };

// One step of a word alignment. Insertions have no ref side, deletions no hyp
// side; speaker_match is defined only for Correct/Substitution.
struct AlignedPair {
    PairKind kind;
    std::optional<std::string> ref_word;
    std::optional<std::string> hyp_word;
    std::optional<int> ref_speaker;
    std::optional<int> hyp_speaker;
    bool speaker_match = false;
};

struct AlignmentResult {
    std::vector<AlignedPair> pairs;
    long correct = 0;       // C
    long substitutions = 0; // S
    long insertions = 0;    // I
    long deletions = 0;     // D
    long correct_is = 0;    // C_IS: correct word, incorrect speaker
    long sub_is = 0;        // S_IS: substituted word, incorrect speaker
};

struct SpeakerWord {
    std::string word;
    int speaker = 0;
};

// One reference speaker's words in time order (times drive chunked scoring).
struct RefStream {
    int speaker = 0;
    std::vector<std::string> words;
    std::vector<double> begins;     // empty means no timing available
    std::vector<double> durations;  // parallel to begins
};

// Minimum-edit-distance alignment with unit S/I/D costs. Word comparison is
// case-insensitive after trimming. Among minimum-cost alignments the one with
// the most Correct pairs is chosen, then the one whose deletions occur
// earliest (deterministic backtrace).
AlignmentResult align_words(const std::vector<SpeakerWord>& ref,
                            const std::vector<SpeakerWord>& hyp);

// Joint alignment of up to 4 reference speaker streams against a single
// hypothesis stream. Any interleaving of the streams that preserves each
// stream's internal word order is admissible; the DP minimizes edit cost,
// then maximizes the number of Correct pairs. More than 4 streams is an
// unsupported configuration.
AlignmentResult align_multistream(const std::vector<RefStream>& ref_streams,
                                  const std::vector<SpeakerWord>& hyp);

// (S_IS + C_IS) / (S + C). Throws when S + C == 0.
double compute_wder(const AlignmentResult& a);

struct SessionScore {
    std::string session_id;
    AlignmentResult alignment;
    double wer = 0.0;
    std::optional<double> wder;  // unset when S + C == 0
};

struct ScoreReport {
    std::vector<SessionScore> sessions;
    long correct = 0, substitutions = 0, insertions = 0, deletions = 0;
    long correct_is = 0, sub_is = 0;
    double wer = 0.0;
    std::optional<double> wder;
};

struct ScoreOptions {
    bool multistream = false;
    // Multistream sessions are aligned in chunks of at most this many
    // hypothesis words to bound the joint-DP state space.
    size_t chunk_hyp_words = 200;
};

// Scores hyp_sessions against ref_sessions (matched one-to-one by session
// id). Pooled metrics come from summed counts, not averaged rates.
ScoreReport score_report(const std::vector<Session>& ref_sessions,
                         const std::vector<Session>& hyp_sessions,
                         const ScoreOptions& opts = {});

// Case-insensitive word equality after trimming, as used by the aligners.
bool words_equal(const std::string& a, const std::string& b);

}  // namespace wsec
