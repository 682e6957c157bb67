#include "wsec/reconcile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace wsec {

double overlap_length(double begin_a, double dur_a, double begin_b, double dur_b) {
    double lo = std::max(begin_a, begin_b);
    double hi = std::min(begin_a + dur_a, begin_b + dur_b);
    return std::max(0.0, hi - lo);
}

namespace {

struct Turn {
    double onset;
    double end;
    int speaker;  // index into label table
};

// Distance from a point to a closed interval (0 if inside).
double point_interval_distance(double x, double lo, double hi) {
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return 0.0;
}

}  // namespace

Session attribute_words(const std::vector<CtmWord>& words,
                        const std::vector<RttmSegment>& turns) {
    if (turns.empty()) throw std::runtime_error("no speaker segments");
    for (const auto& w : words) {
        if (w.recording_id != turns.front().recording_id)
            throw std::runtime_error("recording_id mismatch: CTM has '" + w.recording_id +
                                     "', RTTM has '" + turns.front().recording_id + "'");
    }
    for (const auto& t : turns) {
        if (t.recording_id != turns.front().recording_id)
            throw std::runtime_error("recording_id mismatch within RTTM: '" + t.recording_id +
                                     "' vs '" + turns.front().recording_id + "'");
    }

    // Speaker label table, stable in order of first appearance in the RTTM.
    std::vector<std::string> turn_labels;
    std::unordered_map<std::string, int> label_index;
    std::vector<Turn> sorted;
    sorted.reserve(turns.size());
    for (const auto& t : turns) {
        auto it = label_index.find(t.speaker);
        int idx;
        if (it == label_index.end()) {
            idx = (int)turn_labels.size();
            label_index.emplace(t.speaker, idx);
            turn_labels.push_back(t.speaker);
        } else {
            idx = it->second;
        }
        sorted.push_back({t.onset, t.onset + t.duration, idx});
    }
    std::stable_sort(sorted.begin(), sorted.end(),
                     [](const Turn& a, const Turn& b) { return a.onset < b.onset; });
    std::vector<double> onsets(sorted.size());
    for (size_t i = 0; i < sorted.size(); ++i) onsets[i] = sorted[i].onset;

    struct Acc {
        double overlap = 0.0;
        double first_onset = std::numeric_limits<double>::infinity();
    };

    Session out;
    out.words.reserve(words.size());
    for (const auto& w : words) {
        double wb = w.begin;
        double we = w.begin + w.duration;

        // Candidate turns start before the word ends; turns at or after the
        // word end cannot overlap a half-open interval.
        size_t hi = std::upper_bound(onsets.begin(), onsets.end(), we) - onsets.begin();
        std::map<int, Acc> per_speaker;  // ordered map keeps iteration deterministic
        for (size_t i = 0; i < hi; ++i) {
            const Turn& t = sorted[i];
            double ov = std::max(0.0, std::min(we, t.end) - std::max(wb, t.onset));
            if (ov <= 0.0) continue;
            Acc& a = per_speaker[t.speaker];
            a.overlap += ov;
            a.first_onset = std::min(a.first_onset, t.onset);
        }

        int chosen = -1;
        if (!per_speaker.empty()) {
            double best_ov = -1.0;
            double best_onset = std::numeric_limits<double>::infinity();
            for (const auto& [spk, acc] : per_speaker) {
                if (acc.overlap > best_ov ||
                    (acc.overlap == best_ov && acc.first_onset < best_onset)) {
                    best_ov = acc.overlap;
                    best_onset = acc.first_onset;
                    chosen = spk;
                }
            }
        } else {
            // No overlapping turn: nearest turn by word-midpoint distance,
            // ties to the earlier onset.
            double mid = 0.5 * (wb + we);
            double best_dist = std::numeric_limits<double>::infinity();
            double best_onset = std::numeric_limits<double>::infinity();
            for (const Turn& t : sorted) {
                double d = point_interval_distance(mid, t.onset, t.end);
                if (d < best_dist || (d == best_dist && t.onset < best_onset)) {
                    best_dist = d;
                    best_onset = t.onset;
                    chosen = t.speaker;
                }
            }
        }

        AttributedWord aw;
        aw.word = w.word;
        aw.begin = w.begin;
        aw.duration = w.duration;
        aw.speaker = chosen;  // still an RTTM label index; reindexed below
        out.words.push_back(std::move(aw));
    }

    std::stable_sort(out.words.begin(), out.words.end(),
                     [](const AttributedWord& a, const AttributedWord& b) {
                         return a.begin < b.begin;
                     });

    // Reindex speakers in order of first appearance among the output words.
    std::vector<int> remap(turn_labels.size(), -1);
    for (auto& w : out.words) {
        if (remap[w.speaker] < 0) {
            remap[w.speaker] = (int)out.speaker_names.size();
            out.speaker_names.push_back(turn_labels[w.speaker]);
        }
        w.speaker = remap[w.speaker];
    }
    out.session_id = turns.front().recording_id;
    out.n_speakers = std::max<int>(1, (int)out.speaker_names.size());
    return out;
}

std::vector<Session> attribute_recordings(const std::vector<CtmWord>& words,
                                          const std::vector<RttmSegment>& turns) {
    std::vector<std::string> order;
    std::unordered_map<std::string, std::vector<CtmWord>> words_by_rec;
    for (const auto& w : words) {
        if (!words_by_rec.count(w.recording_id)) order.push_back(w.recording_id);
        words_by_rec[w.recording_id].push_back(w);
    }
    std::unordered_map<std::string, std::vector<RttmSegment>> turns_by_rec;
    for (const auto& t : turns) turns_by_rec[t.recording_id].push_back(t);

    std::vector<Session> sessions;
    sessions.reserve(order.size());
    for (const auto& rec : order) {
        auto it = turns_by_rec.find(rec);
        if (it == turns_by_rec.end())
            throw std::runtime_error("no speaker segments for recording '" + rec + "'");
        sessions.push_back(attribute_words(words_by_rec[rec], it->second));
    }
    return sessions;
}

}  // namespace wsec
