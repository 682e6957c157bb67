#include "wsec/formats.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace wsec {

namespace {

using json = nlohmann::json;

[[noreturn]] void parse_fail(size_t line_no, const std::string& line, const std::string& why) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + why +
                             " in \"" + line + "\"");
}

std::vector<std::string> split_ws(const std::string& line) {
    std::vector<std::string> fields;
    std::istringstream iss(line);
    std::string tok;
    while (iss >> tok) fields.push_back(tok);
    return fields;
}

double parse_real(const std::string& s, size_t line_no, const std::string& line,
                  const char* what) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        parse_fail(line_no, line, std::string("bad ") + what + " value '" + s + "'");
    return v;
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open file: " + path);
    return in;
}

}  // namespace

std::vector<CtmWord> parse_ctm(std::istream& in) {
    std::vector<CtmWord> words;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields.size() != 5 && fields.size() != 6)
            parse_fail(line_no, line,
                       "expected 5 or 6 fields, got " + std::to_string(fields.size()));
        CtmWord w;
        w.recording_id = fields[0];
        w.channel = fields[1];
        w.begin = parse_real(fields[2], line_no, line, "begin");
        w.duration = parse_real(fields[3], line_no, line, "duration");
        w.word = fields[4];
        if (w.begin < 0) parse_fail(line_no, line, "negative begin time");
        if (w.duration < 0) parse_fail(line_no, line, "negative duration");
        if (w.word.empty()) parse_fail(line_no, line, "empty word");
        if (fields.size() == 6) {
            double c = parse_real(fields[5], line_no, line, "confidence");
            if (c < 0.0 || c > 1.0) parse_fail(line_no, line, "confidence outside [0,1]");
            w.confidence = c;
        }
        words.push_back(std::move(w));
    }
    return words;
}

std::vector<RttmSegment> parse_rttm(std::istream& in) {
    std::vector<RttmSegment> segs;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        auto fields = split_ws(line);
        if (fields.empty()) continue;
        if (fields[0] != "SPEAKER") continue;  // other record types are skipped
        if (fields.size() != 10)
            parse_fail(line_no, line,
                       "SPEAKER record needs 10 fields, got " + std::to_string(fields.size()));
        RttmSegment s;
        s.recording_id = fields[1];
        s.channel = fields[2];
        s.onset = parse_real(fields[3], line_no, line, "onset");
        s.duration = parse_real(fields[4], line_no, line, "duration");
        s.speaker = fields[7];
        if (s.duration <= 0) parse_fail(line_no, line, "non-positive duration");
        if (s.speaker.empty() || s.speaker == "<NA>")
            parse_fail(line_no, line, "missing speaker name");
        segs.push_back(std::move(s));
    }
    return segs;
}

void validate_session(const Session& s) {
    if (s.session_id.empty()) throw std::runtime_error("session: empty session id");
    if (s.n_speakers < 1)
        throw std::runtime_error("session " + s.session_id + ": n_speakers must be >= 1");
    double prev = -1.0;
    for (size_t i = 0; i < s.words.size(); ++i) {
        const auto& w = s.words[i];
        if (w.word.empty())
            throw std::runtime_error("session " + s.session_id + ": word " + std::to_string(i) +
                                     " has empty text");
        if (!(w.begin >= 0) || !std::isfinite(w.begin) || w.duration < 0)
            throw std::runtime_error("session " + s.session_id + ": word " + std::to_string(i) +
                                     " has invalid timing");
        if (w.speaker < 0 || w.speaker >= s.n_speakers)
            throw std::runtime_error("session " + s.session_id + ": word " + std::to_string(i) +
                                     " speaker id " + std::to_string(w.speaker) +
                                     " outside [0, " + std::to_string(s.n_speakers) + ")");
        if (w.score && (*w.score < 0.0 || *w.score > 1.0))
            throw std::runtime_error("session " + s.session_id + ": word " + std::to_string(i) +
                                     " score outside [0,1]");
        if (w.begin < prev)
            throw std::runtime_error("session " + s.session_id + ": words not sorted by start time (word " +
                                     std::to_string(i) + ")");
        prev = w.begin;
    }
}

std::vector<Session> read_transcript(std::istream& in) {
    std::vector<Session> sessions;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            parse_fail(line_no, "<json>", e.what());
        }
        auto require = [&](const char* key) -> const json& {
            if (!j.contains(key))
                throw std::runtime_error("line " + std::to_string(line_no) +
                                         ": missing field \"" + key + "\"");
            return j.at(key);
        };
        Session s;
        const json& sid = require("session");
        if (!sid.is_string())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": field \"session\" must be a string");
        s.session_id = sid.get<std::string>();
        const json& nspk = require("n_speakers");
        if (!nspk.is_number_integer())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": field \"n_speakers\" must be an integer");
        s.n_speakers = nspk.get<int>();
        const json& jwords = require("words");
        if (!jwords.is_array())
            throw std::runtime_error("line " + std::to_string(line_no) +
                                     ": field \"words\" must be an array");
        for (const json& jw : jwords) {
            AttributedWord w;
            auto wrequire = [&](const char* key) -> const json& {
                if (!jw.is_object() || !jw.contains(key))
                    throw std::runtime_error("line " + std::to_string(line_no) +
                                             ": word missing field \"" + std::string(key) + "\"");
                return jw.at(key);
            };
            w.word = wrequire("w").get<std::string>();
            w.begin = wrequire("start").get<double>();
            w.duration = wrequire("dur").get<double>();
            w.speaker = wrequire("spk").get<int>();
            if (jw.contains("score")) w.score = jw.at("score").get<double>();
            s.words.push_back(std::move(w));
        }
        try {
            validate_session(s);
        } catch (const std::runtime_error& e) {
            throw std::runtime_error("line " + std::to_string(line_no) + ": " + e.what());
        }
        sessions.push_back(std::move(s));
    }
    return sessions;
}

void write_transcript(const std::vector<Session>& sessions, std::ostream& out) {
    for (const auto& s : sessions) {
        validate_session(s);
        // Hand-assembled so reals come out with exactly 6 decimal places.
        out << "{\"session\": " << json(s.session_id).dump()
            << ", \"n_speakers\": " << s.n_speakers << ", \"words\": [";
        for (size_t i = 0; i < s.words.size(); ++i) {
            const auto& w = s.words[i];
            if (i) out << ", ";
            out << "{\"w\": " << json(w.word).dump() << ", \"start\": " << fmt_real(w.begin)
                << ", \"dur\": " << fmt_real(w.duration) << ", \"spk\": " << w.speaker;
            if (w.score) out << ", \"score\": " << fmt_real(*w.score);
            out << "}";
        }
        out << "]}\n";
    }
}

std::vector<CtmWord> parse_ctm_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_ctm(in);
}

std::vector<RttmSegment> parse_rttm_file(const std::string& path) {
    auto in = open_or_throw(path);
    return parse_rttm(in);
}

std::vector<Session> read_transcript_file(const std::string& path) {
    auto in = open_or_throw(path);
    return read_transcript(in);
}

void write_transcript_file(const std::vector<Session>& sessions, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open file for writing: " + path);
    write_transcript(sessions, out);
}

}  // namespace wsec
