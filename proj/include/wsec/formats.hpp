#pragma once

#include <optional>
#include <string>
#include <vector>
#include <iosfwd>

namespace wsec {

// One ASR-recognized word from a CTM file.
struct CtmWord {
    std::string recording_id;
    std::string channel;
    double begin = 0.0;
    double duration = 0.0;
    std::string word;
    std::optional<double> confidence;
};

// One diarization speaker turn from an RTTM SPEAKER record.
struct RttmSegment {
    std::string recording_id;
    std::string channel;
    double onset = 0.0;
    double duration = 0.0;
    std::string speaker;
};

// One recognized word with an integer speaker id assigned.
struct AttributedWord {
    std::string word;
    double begin = 0.0;
    double duration = 0.0;
    int speaker = 0;
    std::optional<double> score;  // speaker score from the first-pass SD, if any

    double end() const { return begin + duration; }
};

struct Session {
    std::string session_id;
    std::vector<AttributedWord> words;
    int n_speakers = 1;
    // Original text labels of the integer speaker inventory, in id order.
    // Populated by reconciliation; empty for synthetic/loaded sessions.
    std::vector<std::string> speaker_names;
};

// --- CTM ------------------------------------------------------------------
// `<recording> <channel> <begin> <duration> <word> [<confidence>]`
// `#`-prefixed comment lines and blank lines are ignored.
std::vector<CtmWord> parse_ctm(std::istream& in);
std::vector<CtmWord> parse_ctm_file(const std::string& path);

// --- RTTM -----------------------------------------------------------------
// 10-field SPEAKER records; all other record types are skipped.
std::vector<RttmSegment> parse_rttm(std::istream& in);
std::vector<RttmSegment> parse_rttm_file(const std::string& path);

// --- Transcript JSONL -------------------------------------------------------
// One session object per line:
//   {"session": "<id>", "n_speakers": <int>,
//    "words": [{"w": "<text>", "start": <sec>, "dur": <sec>, "spk": <int>,
//               "score": <float, optional>} ...]}
// Reals are serialized with 6 decimal places.
std::vector<Session> read_transcript(std::istream& in);
std::vector<Session> read_transcript_file(const std::string& path);
void write_transcript(const std::vector<Session>& sessions, std::ostream& out);
void write_transcript_file(const std::vector<Session>& sessions, const std::string& path);

// Validates the Session invariants (speaker ids in range, words sorted by
// begin time). Throws std::runtime_error naming the offending field.
void validate_session(const Session& s);

}  // namespace wsec
