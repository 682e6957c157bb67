#pragma once

#include <map>
#include <string>
#include <vector>

#include "wsec/formats.hpp"
#include "wsec/rng.hpp"

namespace wsec {

// Per-epoch corruption probabilities. Endpoints follow the training recipe:
// the word-substitution probability ramps 1.0 -> 0.08 and the speaker-flip
// probability 0.0 -> 0.14 over the first ramp_epochs epochs, in uniform
// steps, constant afterwards.
struct CurriculumSchedule {
    double p_asr_start = 1.0;
    double p_asr_end = 0.08;
    double p_spk_start = 0.0;
    double p_spk_end = 0.14;
    int ramp_epochs = 10;
};

struct CurriculumPoint {
    double p_asr = 0.0;
    double p_spk = 0.0;
};

// Linear interpolation over epochs 1..ramp_epochs, exact endpoints, constant
// for epoch >= ramp_epochs. epoch is 1-based.
CurriculumPoint p_at(const CurriculumSchedule& schedule, int epoch);

// Each word independently replaced with probability p_asr by a uniform draw
// from vocab excluding the original word. Length-preserving.
std::vector<std::string> corrupt_words(const std::vector<std::string>& words, double p_asr,
                                       const std::vector<std::string>& vocab, Rng& rng);

// Each label independently replaced with probability p_spk by a uniform draw
// over the other n_speakers - 1 ids.
std::vector<int> corrupt_speakers(const std::vector<int>& speakers, double p_spk,
                                  int n_speakers, Rng& rng);

// --- Synthetic dialogue grammar ---------------------------------------------

// Turn templates per turn type, with {slot} placeholders filled from the slot
// table. The default grammar is a two-speaker telephone-style conversation
// with lexically cued turn changes (greeting/reply, question/answer,
// backchannels).
struct GrammarConfig {
    std::map<std::string, std::vector<std::string>> templates;
    std::map<std::string, std::vector<std::string>> slots;
    double same_speaker_prob = 0.15;  // chance a non-response turn keeps the speaker
    double word_rate = 0.3;           // seconds per word
};

GrammarConfig default_grammar();

// One two-speaker dialogue with n_turns turns. Word timings are synthesized
// at grammar.word_rate seconds per word. Deterministic under a fixed rng.
Session generate_dialogue(const GrammarConfig& grammar, int n_turns, Rng& rng,
                          const std::string& session_id = "syn");

struct CorpusConfig {
    GrammarConfig grammar;
    int n_train = 400;
    int n_dev = 50;
    int n_test = 50;
    int min_turns = 8;
    int max_turns = 14;
};

struct Corpus {
    std::vector<Session> train, dev, test;
};

// Session ids are disjoint across splits; each session is generated from a
// seed derived from (seed, session index) so generation order is immaterial.
Corpus generate_corpus(const CorpusConfig& config, uint64_t seed);

// --- Training windows --------------------------------------------------------

struct TrainingWindow {
    std::vector<std::string> words;   // corrupted at p_asr
    std::vector<int> input_speakers;  // corrupted at p_spk, then permuted
    std::vector<int> target_speakers; // ground truth, same permutation
    std::string session_id;
    int window_index = 0;
};

// Chunks two-speaker sessions into word windows of length <= max_len and
// applies the epoch's corruption probabilities. A per-window random
// permutation of {0,1} is applied identically to inputs and targets so the
// corrector becomes invariant to the arbitrary label order of a first-pass
// clustering. Sessions without exactly two speakers are skipped and counted
// in *skipped (when non-null).
std::vector<TrainingWindow> make_training_windows(const std::vector<Session>& sessions,
                                                  const CurriculumSchedule& schedule, int epoch,
                                                  int max_len, Rng& rng,
                                                  const std::vector<std::string>& vocab,
                                                  size_t* skipped = nullptr);

// Paired-data variant: input speaker labels come from externally supplied
// sessions (e.g. reconciled first-pass output) instead of simulation. Words
// are taken from the input sessions, targets from the ground truth. Sessions
// are matched by id and must agree on word count.
std::vector<TrainingWindow> make_paired_windows(const std::vector<Session>& truth_sessions,
                                                const std::vector<Session>& input_sessions,
                                                int max_len, Rng& rng, size_t* skipped = nullptr);

// Sorted distinct lowercased word list of a corpus (substitution vocabulary).
std::vector<std::string> corpus_vocabulary(const std::vector<Session>& sessions);

// Applies word and speaker corruption to whole sessions (used to synthesize
// first-pass inputs for evaluation). Word timings are preserved.
std::vector<Session> corrupt_sessions(const std::vector<Session>& sessions, double p_asr,
                                      double p_spk, const std::vector<std::string>& vocab,
                                      Rng& rng);

}  // namespace wsec
