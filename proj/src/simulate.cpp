#include "wsec/simulate.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>
#include <stdexcept>

namespace wsec {

CurriculumPoint p_at(const CurriculumSchedule& s, int epoch) {
    if (epoch < 1) throw std::runtime_error("epoch must be >= 1");
    if (s.ramp_epochs < 1) throw std::runtime_error("ramp_epochs must be >= 1");
    auto check = [](double p, const char* name) {
        if (p < 0.0 || p > 1.0)
            throw std::runtime_error(std::string(name) + " outside [0,1]");
    };
    check(s.p_asr_start, "p_asr_start");
    check(s.p_asr_end, "p_asr_end");
    check(s.p_spk_start, "p_spk_start");
    check(s.p_spk_end, "p_spk_end");
    // Exact endpoints; interpolation only strictly inside the ramp.
    if (epoch >= s.ramp_epochs) return {s.p_asr_end, s.p_spk_end};
    if (epoch == 1) return {s.p_asr_start, s.p_spk_start};
    double t = (double)(epoch - 1) / (double)(s.ramp_epochs - 1);
    return {s.p_asr_start + t * (s.p_asr_end - s.p_asr_start),
            s.p_spk_start + t * (s.p_spk_end - s.p_spk_start)};
}

std::vector<std::string> corrupt_words(const std::vector<std::string>& words, double p_asr,
                                       const std::vector<std::string>& vocab, Rng& rng) {
    if (vocab.size() < 2) throw std::runtime_error("substitution vocabulary needs >= 2 words");
    std::vector<std::string> out;
    out.reserve(words.size());
    for (const auto& w : words) {
        if (p_asr > 0.0 && rng.next_bool(p_asr)) {
            // Uniform over vocab excluding the original word.
            uint64_t k = rng.next_below(vocab.size() - 1);
            const std::string& cand = vocab[k];
            out.push_back(cand == w ? vocab[vocab.size() - 1] : cand);
            if (out.back() == w) out.back() = vocab[k == 0 ? 1 : 0];
        } else {
            out.push_back(w);
        }
    }
    return out;
}

std::vector<int> corrupt_speakers(const std::vector<int>& speakers, double p_spk,
                                  int n_speakers, Rng& rng) {
    if (n_speakers < 2) throw std::runtime_error("speaker corruption needs >= 2 speakers");
    std::vector<int> out;
    out.reserve(speakers.size());
    for (int s : speakers) {
        if (s < 0 || s >= n_speakers)
            throw std::runtime_error("speaker id " + std::to_string(s) + " outside [0, " +
                                     std::to_string(n_speakers) + ")");
        if (p_spk > 0.0 && rng.next_bool(p_spk)) {
            int k = (int)rng.next_below((uint64_t)n_speakers - 1);
            out.push_back(k >= s ? k + 1 : k);  // uniform over the other ids
        } else {
            out.push_back(s);
        }
    }
    return out;
}

// --- Grammar -----------------------------------------------------------------

GrammarConfig default_grammar() {
    GrammarConfig g;
    g.templates = {
        {"greeting",
         {"hello there", "hi how are you doing", "hey good morning", "good evening my friend",
          "hi there how is everything"}},
        {"greeting_reply",
         {"i am doing good thanks", "pretty good how about you", "not bad at all thanks",
          "i am fine thank you", "doing alright i suppose"}},
        {"question",
         {"do you like {topic}", "what do you think about {topic}",
          "have you ever tried {activity}", "how was your {event}",
          "did you hear about the {topic} news", "are you still into {activity}",
          "when did you last visit the {place}"}},
        {"answer",
         {"i really like {topic} actually", "i think {topic} is {adjective}",
          "yes i tried {activity} last {time}", "my {event} was really {adjective}",
          "no i have not heard about it", "honestly i find {topic} quite {adjective}",
          "i visited the {place} last {time}"}},
        {"statement",
         {"i went to the {place} last {time}", "the {topic} documentary was {adjective}",
          "my {relative} lives near the {place}", "i have been doing {activity} lately",
          "we should talk about {topic} sometime", "the weather has been {adjective} all {time}",
          "my {relative} recommended that {place}"}},
        {"backchannel",
         {"oh really", "yeah that makes sense", "right right", "uh huh", "oh wow",
          "i see what you mean", "hmm interesting"}},
        {"farewell",
         {"well it was nice talking to you", "i have to go now sorry",
          "talk to you later then", "anyway i should get going"}},
        {"farewell_reply",
         {"sure take care of yourself", "okay bye bye", "see you soon then",
          "alright have a good one"}},
    };
    g.slots = {
        {"topic",
         {"music", "football", "cooking", "photography", "gardening", "politics", "astronomy",
          "literature", "economics", "architecture"}},
        {"activity",
         {"hiking", "painting", "jogging", "knitting", "fishing", "chess", "woodworking",
          "birdwatching"}},
        {"place",
         {"market", "library", "mountains", "riverside", "museum", "airport", "bakery",
          "harbor"}},
        {"time", {"week", "weekend", "month", "summer", "winter", "spring"}},
        {"adjective",
         {"wonderful", "terrible", "interesting", "boring", "fantastic", "strange",
          "surprising", "disappointing"}},
        {"relative", {"brother", "sister", "cousin", "neighbor", "uncle", "grandmother"}},
        {"event", {"trip", "meeting", "vacation", "interview", "concert", "checkup"}},
    };
    return g;
}

namespace {

const std::vector<std::string>& pick_templates(const GrammarConfig& g, const std::string& type) {
    auto it = g.templates.find(type);
    if (it == g.templates.end() || it->second.empty())
        throw std::runtime_error("grammar has no templates for turn type '" + type + "'");
    return it->second;
}

std::string fill_template(const GrammarConfig& g, const std::string& tpl, Rng& rng) {
    std::string out;
    size_t pos = 0;
    while (pos < tpl.size()) {
        size_t open = tpl.find('{', pos);
        if (open == std::string::npos) {
            out += tpl.substr(pos);
            break;
        }
        out += tpl.substr(pos, open - pos);
        size_t close = tpl.find('}', open);
        if (close == std::string::npos)
            throw std::runtime_error("unterminated slot in template '" + tpl + "'");
        std::string slot = tpl.substr(open + 1, close - open - 1);
        auto it = g.slots.find(slot);
        if (it == g.slots.end() || it->second.empty())
            throw std::runtime_error("unknown slot '{" + slot + "}' in template '" + tpl + "'");
        out += it->second[rng.next_below(it->second.size())];
        pos = close + 1;
    }
    return out;
}

std::vector<std::string> split_words(const std::string& text) {
    std::vector<std::string> words;
    std::istringstream iss(text);
    std::string w;
    while (iss >> w) words.push_back(w);
    return words;
}

// Turn-type flow. Response types force a speaker change, which is what gives
// the corrector its lexical signal.
struct TurnChoice {
    std::string type;
    bool forced_change;
};

TurnChoice next_turn(const std::string& prev_type, Rng& rng) {
    if (prev_type == "greeting") return {"greeting_reply", true};
    if (prev_type == "question") return {"answer", true};
    if (prev_type == "farewell") return {"farewell_reply", true};
    if (prev_type == "backchannel") return {"statement", true};
    // statement / answer / greeting_reply / farewell_reply continue the body
    double r = rng.next_real();
    if (r < 0.35) return {"question", false};
    if (r < 0.55) return {"backchannel", true};
    return {"statement", false};
}

}  // namespace

Session generate_dialogue(const GrammarConfig& grammar, int n_turns, Rng& rng,
                          const std::string& session_id) {
    if (n_turns < 2) throw std::runtime_error("a dialogue needs at least 2 turns");
    Session s;
    s.session_id = session_id;
    s.n_speakers = 2;

    int speaker = (int)rng.next_below(2);
    std::string type = "greeting";
    double t = 0.0;
    for (int turn = 0; turn < n_turns; ++turn) {
        const auto& tpls = pick_templates(grammar, type);
        std::string text = fill_template(grammar, tpls[rng.next_below(tpls.size())], rng);
        for (const auto& w : split_words(text)) {
            AttributedWord aw;
            aw.word = w;
            aw.begin = t;
            aw.duration = grammar.word_rate;
            aw.speaker = speaker;
            s.words.push_back(std::move(aw));
            t += grammar.word_rate;
        }
        if (turn + 1 >= n_turns) break;
        TurnChoice nxt;
        if (turn == n_turns - 2 && type != "farewell") {
            nxt = {"farewell", type == "greeting" || type == "question"};
            // a farewell is a fresh turn; speaker change decided below
            nxt.forced_change = false;
        } else {
            nxt = next_turn(type, rng);
        }
        bool change = nxt.forced_change || !rng.next_bool(grammar.same_speaker_prob);
        if (change) speaker = 1 - speaker;
        type = nxt.type;
    }
    return s;
}

Corpus generate_corpus(const CorpusConfig& config, uint64_t seed) {
    if (config.min_turns < 2 || config.max_turns < config.min_turns)
        throw std::runtime_error("invalid turn range");
    Rng root(seed);
    Corpus corpus;
    int total = config.n_train + config.n_dev + config.n_test;
    for (int i = 0; i < total; ++i) {
        Rng session_rng = root.derive("dialogue", (uint64_t)i);
        int span = config.max_turns - config.min_turns + 1;
        int n_turns = config.min_turns + (int)session_rng.next_below((uint64_t)span);
        char id[32];
        std::snprintf(id, sizeof(id), "syn-%05d", i);
        Session s = generate_dialogue(config.grammar, n_turns, session_rng, id);
        if (i < config.n_train)
            corpus.train.push_back(std::move(s));
        else if (i < config.n_train + config.n_dev)
            corpus.dev.push_back(std::move(s));
        else
            corpus.test.push_back(std::move(s));
    }
    return corpus;
}

std::vector<std::string> corpus_vocabulary(const std::vector<Session>& sessions) {
    std::set<std::string> vocab;
    for (const auto& s : sessions)
        for (const auto& w : s.words) {
            std::string lw = w.word;
            for (char& c : lw) c = (char)std::tolower((unsigned char)c);
            vocab.insert(lw);
        }
    return {vocab.begin(), vocab.end()};
}

std::vector<TrainingWindow> make_training_windows(const std::vector<Session>& sessions,
                                                  const CurriculumSchedule& schedule, int epoch,
                                                  int max_len, Rng& rng,
                                                  const std::vector<std::string>& vocab,
                                                  size_t* skipped) {
    if (max_len < 1) throw std::runtime_error("max_len must be >= 1");
    CurriculumPoint p = p_at(schedule, epoch);
    std::vector<TrainingWindow> windows;
    size_t skip_count = 0;
    for (const auto& s : sessions) {
        int distinct = 0;
        {
            std::set<int> ids;
            for (const auto& w : s.words) ids.insert(w.speaker);
            distinct = (int)ids.size();
        }
        if (s.n_speakers != 2 || distinct > 2) {
            ++skip_count;
            continue;
        }
        for (size_t start = 0, wi = 0; start < s.words.size(); start += (size_t)max_len, ++wi) {
            size_t end = std::min(s.words.size(), start + (size_t)max_len);
            TrainingWindow w;
            w.session_id = s.session_id;
            w.window_index = (int)wi;
            for (size_t k = start; k < end; ++k) {
                w.words.push_back(s.words[k].word);
                w.target_speakers.push_back(s.words[k].speaker);
            }
            w.words = corrupt_words(w.words, p.p_asr, vocab, rng);
            w.input_speakers = corrupt_speakers(w.target_speakers, p.p_spk, 2, rng);
            if (rng.next_bool(0.5)) {  // random relabeling of {0,1}
                for (int& v : w.input_speakers) v = 1 - v;
                for (int& v : w.target_speakers) v = 1 - v;
            }
            windows.push_back(std::move(w));
        }
    }
    if (skipped) *skipped = skip_count;
    return windows;
}

std::vector<TrainingWindow> make_paired_windows(const std::vector<Session>& truth_sessions,
                                                const std::vector<Session>& input_sessions,
                                                int max_len, Rng& rng, size_t* skipped) {
    if (max_len < 1) throw std::runtime_error("max_len must be >= 1");
    std::map<std::string, const Session*> inputs;
    for (const auto& s : input_sessions) inputs[s.session_id] = &s;
    std::vector<TrainingWindow> windows;
    size_t skip_count = 0;
    for (const auto& truth : truth_sessions) {
        auto it = inputs.find(truth.session_id);
        if (it == inputs.end())
            throw std::runtime_error("no paired input session for '" + truth.session_id + "'");
        const Session& in = *it->second;
        if (in.words.size() != truth.words.size())
            throw std::runtime_error("paired session '" + truth.session_id +
                                     "': word count mismatch (" +
                                     std::to_string(in.words.size()) + " vs " +
                                     std::to_string(truth.words.size()) + ")");
        bool two_speakers = truth.n_speakers == 2 && in.n_speakers <= 2;
        for (const auto& w : in.words)
            if (w.speaker > 1) two_speakers = false;
        if (!two_speakers) {
            ++skip_count;
            continue;
        }
        for (size_t start = 0, wi = 0; start < truth.words.size();
             start += (size_t)max_len, ++wi) {
            size_t end = std::min(truth.words.size(), start + (size_t)max_len);
            TrainingWindow w;
            w.session_id = truth.session_id;
            w.window_index = (int)wi;
            for (size_t k = start; k < end; ++k) {
                w.words.push_back(in.words[k].word);
                w.input_speakers.push_back(in.words[k].speaker);
                w.target_speakers.push_back(truth.words[k].speaker);
            }
            if (rng.next_bool(0.5)) {
                for (int& v : w.input_speakers) v = 1 - v;
                for (int& v : w.target_speakers) v = 1 - v;
            }
            windows.push_back(std::move(w));
        }
    }
    if (skipped) *skipped = skip_count;
    return windows;
}

std::vector<Session> corrupt_sessions(const std::vector<Session>& sessions, double p_asr,
                                      double p_spk, const std::vector<std::string>& vocab,
                                      Rng& rng) {
    std::vector<Session> out;
    out.reserve(sessions.size());
    for (const auto& s : sessions) {
        Session c = s;
        std::vector<std::string> words;
        std::vector<int> speakers;
        for (const auto& w : s.words) {
            words.push_back(w.word);
            speakers.push_back(w.speaker);
        }
        if (p_asr > 0.0) words = corrupt_words(words, p_asr, vocab, rng);
        if (p_spk > 0.0 && s.n_speakers >= 2)
            speakers = corrupt_speakers(speakers, p_spk, s.n_speakers, rng);
        for (size_t i = 0; i < c.words.size(); ++i) {
            c.words[i].word = words[i];
            c.words[i].speaker = speakers[i];
        }
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace wsec
