#include "wsec/scoring.hpp"

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <limits>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace wsec {

namespace {

std::string normalize_word(const std::string& w) {
    size_t b = 0, e = w.size();
    while (b < e && std::isspace((unsigned char)w[b])) ++b;
    while (e > b && std::isspace((unsigned char)w[e - 1])) --e;
    std::string out = w.substr(b, e - b);
    for (char& c : out) c = (char)std::tolower((unsigned char)c);
    return out;
}

void count_pair(AlignmentResult& r, const AlignedPair& p) {
    switch (p.kind) {
        case PairKind::Correct:
            ++r.correct;
            if (!p.speaker_match) ++r.correct_is;
            break;
        case PairKind::Substitution:
            ++r.substitutions;
            if (!p.speaker_match) ++r.sub_is;
            break;
        case PairKind::Insertion:
            ++r.insertions;
            break;
        case PairKind::Deletion:
            ++r.deletions;
            break;
    }
}

}  // namespace

bool words_equal(const std::string& a, const std::string& b) {
    return normalize_word(a) == normalize_word(b);
}

AlignmentResult align_words(const std::vector<SpeakerWord>& ref,
                            const std::vector<SpeakerWord>& hyp) {
    const size_t n = ref.size(), m = hyp.size();
    std::vector<std::string> rnorm(n), hnorm(m);
    for (size_t i = 0; i < n; ++i) rnorm[i] = normalize_word(ref[i].word);
    for (size_t j = 0; j < m; ++j) hnorm[j] = normalize_word(hyp[j].word);

    // dp[i][j] = best (cost, -correct) achievable from (i, j) to the end.
    // Computed backwards so the reconstruction below is a forward walk and
    // the move preference order (delete, pair, insert) yields the earliest
    // possible deletions among co-optimal alignments.
    struct Cell {
        int32_t cost;
        int32_t neg_correct;
        bool operator<(const Cell& o) const {
            return cost != o.cost ? cost < o.cost : neg_correct < o.neg_correct;
        }
        Cell plus(int32_t c, int32_t corr) const { return {cost + c, neg_correct - corr}; }
    };
    std::vector<Cell> dp((n + 1) * (m + 1));
    auto at = [&](size_t i, size_t j) -> Cell& { return dp[i * (m + 1) + j]; };

    at(n, m) = {0, 0};
    for (size_t j = m; j-- > 0;) at(n, j) = at(n, j + 1).plus(1, 0);  // insertions
    for (size_t i = n; i-- > 0;) {
        at(i, m) = at(i + 1, m).plus(1, 0);  // deletions
        for (size_t j = m; j-- > 0;) {
            bool match = rnorm[i] == hnorm[j];
            Cell best = at(i + 1, j + 1).plus(match ? 0 : 1, match ? 1 : 0);
            best = std::min(best, at(i + 1, j).plus(1, 0));
            best = std::min(best, at(i, j + 1).plus(1, 0));
            at(i, j) = best;
        }
    }

    AlignmentResult result;
    size_t i = 0, j = 0;
    auto equals = [](const Cell& a, const Cell& b) {
        return a.cost == b.cost && a.neg_correct == b.neg_correct;
    };
    while (i < n || j < m) {
        const Cell cur = at(i, j);
        AlignedPair p;
        if (i < n && equals(at(i + 1, j).plus(1, 0), cur)) {
            p.kind = PairKind::Deletion;
            p.ref_word = ref[i].word;
            p.ref_speaker = ref[i].speaker;
            ++i;
        } else if (i < n && j < m) {
            bool match = rnorm[i] == hnorm[j];
            Cell via = at(i + 1, j + 1).plus(match ? 0 : 1, match ? 1 : 0);
            if (equals(via, cur)) {
                p.kind = match ? PairKind::Correct : PairKind::Substitution;
                p.ref_word = ref[i].word;
                p.hyp_word = hyp[j].word;
                p.ref_speaker = ref[i].speaker;
                p.hyp_speaker = hyp[j].speaker;
                p.speaker_match = ref[i].speaker == hyp[j].speaker;
                ++i;
                ++j;
            } else {
                p.kind = PairKind::Insertion;
                p.hyp_word = hyp[j].word;
                p.hyp_speaker = hyp[j].speaker;
                ++j;
            }
        } else if (i < n) {
            p.kind = PairKind::Deletion;
            p.ref_word = ref[i].word;
            p.ref_speaker = ref[i].speaker;
            ++i;
        } else {
            p.kind = PairKind::Insertion;
            p.hyp_word = hyp[j].word;
            p.hyp_speaker = hyp[j].speaker;
            ++j;
        }
        count_pair(result, p);
        result.pairs.push_back(std::move(p));
    }
    return result;
}

// --- Joint multi-stream alignment -------------------------------------------

namespace {

// Packed DP value: cost in the high 16 bits, (0xFFFF - n_correct) in the low
// 16 bits, so a plain uint32 comparison realizes the lexicographic
// (min cost, max correct) objective.
constexpr uint32_t kCostUnit = 0x10000u;
constexpr uint32_t kInit = 0xFFFFu;
constexpr uint32_t kUnset = std::numeric_limits<uint32_t>::max();

AlignmentResult align_multistream_block(const std::vector<RefStream>& streams,
                                        const std::vector<SpeakerWord>& hyp) {
    const size_t r_count = streams.size();
    const size_t m = hyp.size();
    size_t total_words = m;
    for (const auto& s : streams) total_words += s.words.size();
    if (total_words > 60000)
        throw std::runtime_error("alignment block too large for the packed DP cost field");

    std::vector<std::vector<std::string>> rnorm(r_count);
    for (size_t r = 0; r < r_count; ++r) {
        rnorm[r].reserve(streams[r].words.size());
        for (const auto& w : streams[r].words) rnorm[r].push_back(normalize_word(w));
    }
    std::vector<std::string> hnorm(m);
    for (size_t j = 0; j < m; ++j) hnorm[j] = normalize_word(hyp[j].word);

    // State (i_0, .., i_{R-1}, j): i_r words of stream r and j hypothesis
    // words consumed. Flattened row-major with the hyp index fastest.
    std::vector<size_t> dims(r_count + 1);
    for (size_t r = 0; r < r_count; ++r) dims[r] = streams[r].words.size() + 1;
    dims[r_count] = m + 1;
    std::vector<size_t> stride(r_count + 1);
    size_t total = 1;
    for (size_t k = dims.size(); k-- > 0;) {
        stride[k] = total;
        total *= dims[k];
    }
    if (total > (size_t)1 << 28)
        throw std::runtime_error("alignment block too large: " + std::to_string(total) +
                                 " DP states");

    std::vector<uint32_t> dp(total, kUnset);
    // Backpointer: 0..R-1 pair with stream r, R..2R-1 delete from stream r,
    // 2R insert hypothesis word, 0xFF start state.
    std::vector<uint8_t> bp(total, 0xFF);
    dp[0] = kInit;

    std::vector<size_t> idx(r_count + 1, 0);
    for (size_t flat = 0; flat < total; ++flat) {
        // Decode the multi-index (kept incrementally for speed).
        if (flat > 0) {
            size_t k = r_count;
            while (true) {
                if (++idx[k] < dims[k]) break;
                idx[k] = 0;
                --k;
            }
        }
        uint32_t best = dp[flat];
        uint8_t move = bp[flat];
        const size_t j = idx[r_count];
        for (size_t r = 0; r < r_count; ++r) {
            if (idx[r] == 0) continue;
            const size_t ir = idx[r] - 1;
            if (j > 0) {  // pair stream r's next word with hyp[j-1]
                uint32_t prev = dp[flat - stride[r] - stride[r_count]];
                if (prev != kUnset) {
                    bool match = rnorm[r][ir] == hnorm[j - 1];
                    uint32_t cand = prev + (match ? 0 : kCostUnit) - (match ? 1 : 0);
                    if (cand < best) {
                        best = cand;
                        move = (uint8_t)r;
                    }
                }
            }
            uint32_t prev = dp[flat - stride[r]];  // delete stream r's word
            if (prev != kUnset) {
                uint32_t cand = prev + kCostUnit;
                if (cand < best) {
                    best = cand;
                    move = (uint8_t)(r_count + r);
                }
            }
        }
        if (j > 0) {  // insertion
            uint32_t prev = dp[flat - stride[r_count]];
            if (prev != kUnset) {
                uint32_t cand = prev + kCostUnit;
                if (cand < best) {
                    best = cand;
                    move = (uint8_t)(2 * r_count);
                }
            }
        }
        if (flat > 0) {
            dp[flat] = best;
            bp[flat] = move;
        }
    }

    // Backtrace from the full-consumption state.
    AlignmentResult result;
    std::vector<size_t> cur(dims);
    for (auto& d : cur) --d;
    size_t flat = total - 1;
    std::vector<AlignedPair> rev;
    while (bp[flat] != 0xFF) {
        uint8_t move = bp[flat];
        AlignedPair p;
        if (move < r_count) {
            size_t r = move;
            size_t ir = cur[r] - 1;
            size_t j = cur[r_count] - 1;
            bool match = rnorm[r][ir] == hnorm[j];
            p.kind = match ? PairKind::Correct : PairKind::Substitution;
            p.ref_word = streams[r].words[ir];
            p.ref_speaker = streams[r].speaker;
            p.hyp_word = hyp[j].word;
            p.hyp_speaker = hyp[j].speaker;
            p.speaker_match = streams[r].speaker == hyp[j].speaker;
            --cur[r];
            --cur[r_count];
            flat -= stride[r] + stride[r_count];
        } else if (move < 2 * r_count) {
            size_t r = move - r_count;
            size_t ir = cur[r] - 1;
            p.kind = PairKind::Deletion;
            p.ref_word = streams[r].words[ir];
            p.ref_speaker = streams[r].speaker;
            --cur[r];
            flat -= stride[r];
        } else {
            size_t j = cur[r_count] - 1;
            p.kind = PairKind::Insertion;
            p.hyp_word = hyp[j].word;
            p.hyp_speaker = hyp[j].speaker;
            --cur[r_count];
            flat -= stride[r_count];
        }
        count_pair(result, p);
        rev.push_back(std::move(p));
    }
    result.pairs.assign(rev.rbegin(), rev.rend());
    return result;
}

void merge_counts(AlignmentResult& into, AlignmentResult&& part) {
    into.correct += part.correct;
    into.substitutions += part.substitutions;
    into.insertions += part.insertions;
    into.deletions += part.deletions;
    into.correct_is += part.correct_is;
    into.sub_is += part.sub_is;
    for (auto& p : part.pairs) into.pairs.push_back(std::move(p));
}

}  // namespace

AlignmentResult align_multistream(const std::vector<RefStream>& ref_streams,
                                  const std::vector<SpeakerWord>& hyp) {
    if (ref_streams.size() > 4)
        throw std::runtime_error("unsupported configuration: " +
                                 std::to_string(ref_streams.size()) +
                                 " reference streams (at most 4 supported)");
    for (const auto& s : ref_streams) {
        if (!s.begins.empty() &&
            (s.begins.size() != s.words.size() || s.durations.size() != s.words.size()))
            throw std::runtime_error("reference stream timing arrays do not match word count");
    }
    return align_multistream_block(ref_streams, hyp);
}

double compute_wder(const AlignmentResult& a) {
    long denom = a.substitutions + a.correct;
    if (denom == 0) throw std::runtime_error("WDER undefined: no correct or substituted words");
    return (double)(a.sub_is + a.correct_is) / (double)denom;
}

namespace {

std::vector<SpeakerWord> to_speaker_words(const Session& s) {
    std::vector<SpeakerWord> out;
    out.reserve(s.words.size());
    for (const auto& w : s.words) out.push_back({w.word, w.speaker});
    return out;
}

std::vector<RefStream> to_streams(const Session& s) {
    std::map<int, RefStream> by_speaker;
    for (const auto& w : s.words) {
        RefStream& st = by_speaker[w.speaker];
        st.speaker = w.speaker;
        st.words.push_back(w.word);
        st.begins.push_back(w.begin);
        st.durations.push_back(w.duration);
    }
    std::vector<RefStream> out;
    out.reserve(by_speaker.size());
    for (auto& [spk, st] : by_speaker) out.push_back(std::move(st));
    return out;
}

// Chunked multistream scoring: the hypothesis is cut into blocks of at most
// chunk_hyp_words words and each reference stream is cut at the same time
// boundaries (word midpoint decides the side). Counts are summed.
AlignmentResult score_session_multistream(const Session& ref, const Session& hyp,
                                          size_t chunk_hyp_words) {
    auto streams = to_streams(ref);
    if (streams.size() > 4)
        throw std::runtime_error("session " + ref.session_id + ": " +
                                 std::to_string(streams.size()) +
                                 " reference speakers (multistream supports at most 4)");
    auto hyp_words = to_speaker_words(hyp);
    if (hyp_words.size() <= chunk_hyp_words) return align_multistream(streams, hyp_words);

    AlignmentResult total;
    size_t n = hyp_words.size();
    std::vector<size_t> stream_pos(streams.size(), 0);
    for (size_t a = 0; a < n; a += chunk_hyp_words) {
        size_t b = std::min(n, a + chunk_hyp_words);
        double t_hi = std::numeric_limits<double>::infinity();
        if (b < n)
            t_hi = 0.5 * (hyp.words[b - 1].end() + hyp.words[b].begin);
        std::vector<SpeakerWord> hyp_chunk(hyp_words.begin() + a, hyp_words.begin() + b);
        std::vector<RefStream> ref_chunk(streams.size());
        for (size_t r = 0; r < streams.size(); ++r) {
            ref_chunk[r].speaker = streams[r].speaker;
            size_t& p = stream_pos[r];
            while (p < streams[r].words.size()) {
                double mid = streams[r].begins[p] + 0.5 * streams[r].durations[p];
                if (mid >= t_hi) break;
                ref_chunk[r].words.push_back(streams[r].words[p]);
                ++p;
            }
        }
        merge_counts(total, align_multistream(ref_chunk, hyp_chunk));
    }
    return total;
}

double compute_wer(const AlignmentResult& a) {
    long ref_words = a.correct + a.substitutions + a.deletions;
    long errs = a.substitutions + a.deletions + a.insertions;
    if (ref_words == 0) return errs > 0 ? 1.0 : 0.0;
    return (double)errs / (double)ref_words;
}

}  // namespace

ScoreReport score_report(const std::vector<Session>& ref_sessions,
                         const std::vector<Session>& hyp_sessions,
                         const ScoreOptions& opts) {
    std::unordered_map<std::string, const Session*> hyp_by_id;
    for (const auto& h : hyp_sessions) {
        if (!hyp_by_id.emplace(h.session_id, &h).second)
            throw std::runtime_error("duplicate hypothesis session id: " + h.session_id);
    }
    std::unordered_map<std::string, bool> ref_seen;
    for (const auto& r : ref_sessions) ref_seen.emplace(r.session_id, false);
    std::string unmatched;
    for (const auto& h : hyp_sessions)
        if (!ref_seen.count(h.session_id)) unmatched += " " + h.session_id;
    for (const auto& r : ref_sessions)
        if (!hyp_by_id.count(r.session_id)) unmatched += " " + r.session_id;
    if (!unmatched.empty())
        throw std::runtime_error("unmatched session ids:" + unmatched);

    ScoreReport report;
    for (const auto& ref : ref_sessions) {
        const Session& hyp = *hyp_by_id.at(ref.session_id);
        SessionScore sc;
        sc.session_id = ref.session_id;
        sc.alignment = opts.multistream
                           ? score_session_multistream(ref, hyp, opts.chunk_hyp_words)
                           : align_words(to_speaker_words(ref), to_speaker_words(hyp));
        sc.wer = compute_wer(sc.alignment);
        if (sc.alignment.correct + sc.alignment.substitutions > 0)
            sc.wder = compute_wder(sc.alignment);
        report.correct += sc.alignment.correct;
        report.substitutions += sc.alignment.substitutions;
        report.insertions += sc.alignment.insertions;
        report.deletions += sc.alignment.deletions;
        report.correct_is += sc.alignment.correct_is;
        report.sub_is += sc.alignment.sub_is;
        report.sessions.push_back(std::move(sc));
    }
    AlignmentResult pooled;
    pooled.correct = report.correct;
    pooled.substitutions = report.substitutions;
    pooled.insertions = report.insertions;
    pooled.deletions = report.deletions;
    pooled.correct_is = report.correct_is;
    pooled.sub_is = report.sub_is;
    report.wer = compute_wer(pooled);
    if (pooled.correct + pooled.substitutions > 0) report.wder = compute_wder(pooled);
    return report;
}

}  // namespace wsec
