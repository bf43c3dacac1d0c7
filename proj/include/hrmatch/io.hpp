#pragma once

#include <cstdint>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "core.hpp"

namespace hrmatch::io {

// Instance format "HRLQ 1" (UTF-8, LF):
//   HRLQ 1
//   residents <n>
//   hospitals <m>
//   r <id> : <hospital ids, most preferred first>      (n lines, ids 1..n)
//   h <id> <lq> <uq> : <resident ids, most preferred first>   (m lines, ids 1..m)
// Lines starting with '#' and blank lines are ignored. Canonical serialization
// emits ids in ascending order, single spaces, no comments, trailing newline.
//
// Matching format: zero or more lines "<resident id> <hospital id>", sorted
// ascending by resident id; '#' comments and blank lines ignored.

struct SyntaxError : Error {
    int line;
    SyntaxError(int line_, const std::string& msg)
        : Error("line " + std::to_string(line_) + ": " + msg), line(line_) {}
};

struct AsymmetricEdge : Error {
    using Error::Error;
};

struct QuotaError : Error {
    using Error::Error;
};

struct DuplicatePreference : Error {
    using Error::Error;
};

struct UnknownId : Error {
    using Error::Error;
};

struct NotAnEdge : Error {
    using Error::Error;
};

struct DuplicateResident : Error {
    using Error::Error;
};

namespace detail {

// Content lines with original 1-based line numbers; comments/blanks dropped.
inline std::vector<std::pair<int, std::string>> content_lines(const std::string& text) {
    std::vector<std::pair<int, std::string>> out;
    int no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        size_t nl = text.find('\n', pos);
        std::string line = text.substr(pos, nl == std::string::npos ? nl : nl - pos);
        pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
        ++no;
        size_t b = line.find_first_not_of(" \t\r");
        if (b == std::string::npos) continue;
        if (line[b] == '#') continue;
        size_t e = line.find_last_not_of(" \t\r");
        out.emplace_back(no, line.substr(b, e - b + 1));
    }
    return out;
}

inline std::vector<std::string> tokens(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream is(line);
    std::string t;
    while (is >> t) out.push_back(t);
    return out;
}

inline int64_t parse_int(const std::string& t, int line, const char* what) {
    try {
        size_t used = 0;
        int64_t v = std::stoll(t, &used);
        if (used != t.size()) throw std::invalid_argument(t);
        return v;
    } catch (const std::exception&) {
        throw SyntaxError(line, std::string("expected ") + what + ", got '" + t + "'");
    }
}

}  // namespace detail

inline Instance parse_instance(const std::string& text) {
    auto lines = detail::content_lines(text);
    size_t at = 0;
    auto need = [&](const char* what) -> const std::pair<int, std::string>& {
        if (at >= lines.size())
            throw SyntaxError(lines.empty() ? 1 : lines.back().first + 1,
                              std::string("unexpected end of document, expected ") + what);
        return lines[at++];
    };

    {
        const auto& [no, line] = need("header 'HRLQ 1'");
        if (line != "HRLQ 1") throw SyntaxError(no, "expected header 'HRLQ 1'");
    }
    int64_t n = 0, m = 0;
    {
        const auto& [no, line] = need("'residents <n>'");
        auto t = detail::tokens(line);
        if (t.size() != 2 || t[0] != "residents")
            throw SyntaxError(no, "expected 'residents <n>'");
        n = detail::parse_int(t[1], no, "resident count");
        if (n < 0) throw SyntaxError(no, "resident count must be non-negative");
    }
    {
        const auto& [no, line] = need("'hospitals <m>'");
        auto t = detail::tokens(line);
        if (t.size() != 2 || t[0] != "hospitals")
            throw SyntaxError(no, "expected 'hospitals <m>'");
        m = detail::parse_int(t[1], no, "hospital count");
        if (m < 0) throw SyntaxError(no, "hospital count must be non-negative");
    }

    Instance g;
    g.rpref.assign(n, {});
    g.hpref.assign(m, {});
    g.lq.assign(m, 0);
    g.uq.assign(m, 0);
    std::vector<int8_t> seen_r(n, 0), seen_h(m, 0);

    auto parse_id = [](int64_t v, int64_t count, int no, const char* side) {
        if (v < 1 || v > count)
            throw SyntaxError(no, std::string(side) + " id " + std::to_string(v) +
                                      " outside 1.." + std::to_string(count));
        return static_cast<int32_t>(v - 1);
    };

    for (int64_t i = 0; i < n; ++i) {
        const auto& [no, line] = need("'r <id> : ...'");
        auto t = detail::tokens(line);
        if (t.size() < 3 || t[0] != "r" || t[2] != ":")
            throw SyntaxError(no, "expected 'r <id> : <hospital ids>'");
        int32_t r = parse_id(detail::parse_int(t[1], no, "resident id"), n, no, "resident");
        if (seen_r[r]++) throw SyntaxError(no, "resident " + t[1] + " defined twice");
        std::vector<int8_t> dup(m, 0);
        for (size_t j = 3; j < t.size(); ++j) {
            int32_t h = parse_id(detail::parse_int(t[j], no, "hospital id"), m, no, "hospital");
            if (dup[h]++)
                throw DuplicatePreference("resident " + t[1] + " lists hospital " + t[j] +
                                          " twice");
            g.rpref[r].push_back(h);
        }
    }
    for (int64_t i = 0; i < m; ++i) {
        const auto& [no, line] = need("'h <id> <lq> <uq> : ...'");
        auto t = detail::tokens(line);
        if (t.size() < 5 || t[0] != "h" || t[4] != ":")
            throw SyntaxError(no, "expected 'h <id> <lq> <uq> : <resident ids>'");
        int32_t h = parse_id(detail::parse_int(t[1], no, "hospital id"), m, no, "hospital");
        if (seen_h[h]++) throw SyntaxError(no, "hospital " + t[1] + " defined twice");
        int64_t lo = detail::parse_int(t[2], no, "lower quota");
        int64_t up = detail::parse_int(t[3], no, "upper quota");
        if (up < 1) throw QuotaError("hospital " + t[1] + ": upper quota must be >= 1");
        if (lo < 0 || lo > up)
            throw QuotaError("hospital " + t[1] + ": need 0 <= lq <= uq, got [" +
                             std::to_string(lo) + "," + std::to_string(up) + "]");
        g.lq[h] = static_cast<int32_t>(lo);
        g.uq[h] = static_cast<int32_t>(up);
        std::vector<int8_t> dup(n, 0);
        for (size_t j = 5; j < t.size(); ++j) {
            int32_t r = parse_id(detail::parse_int(t[j], no, "resident id"), n, no, "resident");
            if (dup[r]++)
                throw DuplicatePreference("hospital " + t[1] + " lists resident " + t[j] +
                                          " twice");
            g.hpref[h].push_back(r);
        }
    }
    if (at != lines.size())
        throw SyntaxError(lines[at].first, "unexpected content after instance");

    std::vector<std::vector<int8_t>> redge(n, std::vector<int8_t>(m, 0));
    for (int r = 0; r < n; ++r)
        for (int32_t h : g.rpref[r]) redge[r][h] = 1;
    int64_t hedges = 0;
    for (int h = 0; h < m; ++h)
        for (int32_t r : g.hpref[h]) {
            if (!redge[r][h])
                throw AsymmetricEdge("hospital " + std::to_string(h + 1) + " lists resident " +
                                     std::to_string(r + 1) + " who does not list it");
            ++hedges;
        }
    if (hedges != g.edge_count())
        throw AsymmetricEdge("some resident lists a hospital that does not list it back");
    return g;
}

inline std::string serialize_instance(const Instance& g) {
    std::string out = "HRLQ 1\n";
    out += "residents " + std::to_string(g.n_residents()) + "\n";
    out += "hospitals " + std::to_string(g.n_hospitals()) + "\n";
    for (int r = 0; r < g.n_residents(); ++r) {
        out += "r " + std::to_string(r + 1) + " :";
        for (int32_t h : g.rpref[r]) out += " " + std::to_string(h + 1);
        out += "\n";
    }
    for (int h = 0; h < g.n_hospitals(); ++h) {
        out += "h " + std::to_string(h + 1) + " " + std::to_string(g.lq[h]) + " " +
               std::to_string(g.uq[h]) + " :";
        for (int32_t r : g.hpref[h]) out += " " + std::to_string(r + 1);
        out += "\n";
    }
    return out;
}

inline Matching parse_matching(const Instance& g, const std::string& text) {
    Matching m(g.n_residents(), -1);
    for (const auto& [no, line] : detail::content_lines(text)) {
        auto t = detail::tokens(line);
        if (t.size() != 2) throw SyntaxError(no, "expected '<resident id> <hospital id>'");
        int64_t rv = detail::parse_int(t[0], no, "resident id");
        int64_t hv = detail::parse_int(t[1], no, "hospital id");
        if (rv < 1 || rv > g.n_residents())
            throw UnknownId("unknown resident id " + std::to_string(rv));
        if (hv < 1 || hv > g.n_hospitals())
            throw UnknownId("unknown hospital id " + std::to_string(hv));
        int r = static_cast<int>(rv - 1), h = static_cast<int>(hv - 1);
        if (m[r] != -1)
            throw DuplicateResident("resident " + std::to_string(rv) + " matched twice");
        bool edge = false;
        for (int32_t x : g.rpref[r])
            if (x == h) { edge = true; break; }
        if (!edge)
            throw NotAnEdge("(" + std::to_string(rv) + "," + std::to_string(hv) +
                            ") is not an edge of the instance");
        m[r] = h;
    }
    return m;
}

inline std::string serialize_matching(const Instance&, const Matching& m) {
    std::string out;
    for (size_t r = 0; r < m.size(); ++r)
        if (m[r] >= 0)
            out += std::to_string(r + 1) + " " + std::to_string(m[r] + 1) + "\n";
    return out;
}

// HR-with-couples ingestion (best effort; the source dataset's grammar is not
// published, so this adapter documents and accepts the following form):
//   HRC <n residents> <m hospitals>
//   <resident name> : <hospital names...>          (n lines; repeats allowed)
//   <hospital name> <capacity> : <resident names...>   (m lines)
// Cleanup applied, in order: each resident list deduplicated keeping the first
// occurrence; each side restricted to pairs listed by both (couples files are
// double-restricted, so asymmetric leftovers are dropped, not errors);
// residents whose lists become empty are dropped. Every repair is recorded as
// a warning. Output ids are dense and 1-based in input order; original names
// are returned alongside.
struct IngestResult {
    Instance instance;
    std::vector<std::string> resident_names;
    std::vector<std::string> hospital_names;
    std::vector<std::string> warnings;
};

inline IngestResult ingest_hrc(const std::string& text) {
    auto lines = detail::content_lines(text);
    if (lines.empty()) throw SyntaxError(1, "empty document");
    auto head = detail::tokens(lines[0].second);
    if (head.size() != 3 || head[0] != "HRC")
        throw SyntaxError(lines[0].first, "expected header 'HRC <n> <m>'");
    int64_t n = detail::parse_int(head[1], lines[0].first, "resident count");
    int64_t m = detail::parse_int(head[2], lines[0].first, "hospital count");
    if (n < 0 || m < 0) throw SyntaxError(lines[0].first, "counts must be non-negative");
    if (static_cast<int64_t>(lines.size()) != 1 + n + m)
        throw SyntaxError(lines.back().first,
                          "expected " + std::to_string(1 + n + m) + " content lines, got " +
                              std::to_string(lines.size()));

    IngestResult out;
    std::unordered_map<std::string, int> rid, hid;
    std::vector<std::vector<std::string>> rlists(n);
    std::vector<std::vector<std::string>> hlists(m);
    std::vector<int32_t> caps(m);

    for (int64_t i = 0; i < n; ++i) {
        const auto& [no, line] = lines[1 + i];
        auto t = detail::tokens(line);
        if (t.size() < 2 || t[1] != ":")
            throw SyntaxError(no, "expected '<resident name> : <hospital names>'");
        if (!rid.emplace(t[0], static_cast<int>(i)).second)
            throw SyntaxError(no, "resident '" + t[0] + "' defined twice");
        out.resident_names.push_back(t[0]);
        rlists[i].assign(t.begin() + 2, t.end());
    }
    for (int64_t i = 0; i < m; ++i) {
        const auto& [no, line] = lines[1 + n + i];
        auto t = detail::tokens(line);
        if (t.size() < 3 || t[2] != ":")
            throw SyntaxError(no, "expected '<hospital name> <capacity> : <resident names>'");
        if (!hid.emplace(t[0], static_cast<int>(i)).second)
            throw SyntaxError(no, "hospital '" + t[0] + "' defined twice");
        int64_t cap = detail::parse_int(t[1], no, "capacity");
        if (cap < 1) throw SyntaxError(no, "capacity must be >= 1");
        out.hospital_names.push_back(t[0]);
        caps[i] = static_cast<int32_t>(cap);
        hlists[i].assign(t.begin() + 3, t.end());
    }

    // First-unique-copy dedupe on resident lists.
    std::vector<std::vector<int>> rpref(n), hpref(m);
    for (int64_t r = 0; r < n; ++r) {
        std::unordered_set<int> seen;
        for (const auto& name : rlists[r]) {
            auto it = hid.find(name);
            if (it == hid.end())
                throw SyntaxError(0, "resident '" + out.resident_names[r] +
                                         "' lists unknown hospital '" + name + "'");
            if (seen.insert(it->second).second) {
                rpref[r].push_back(it->second);
            } else {
                out.warnings.push_back("resident " + out.resident_names[r] +
                                       ": dropped repeated hospital " + name);
            }
        }
    }
    for (int64_t h = 0; h < m; ++h) {
        std::unordered_set<int> seen;
        for (const auto& name : hlists[h]) {
            auto it = rid.find(name);
            if (it == rid.end())
                throw SyntaxError(0, "hospital '" + out.hospital_names[h] +
                                         "' lists unknown resident '" + name + "'");
            if (seen.insert(it->second).second) {
                hpref[h].push_back(it->second);
            } else {
                out.warnings.push_back("hospital " + out.hospital_names[h] +
                                       ": dropped repeated resident " + name);
            }
        }
    }

    // Restrict to mutually listed pairs.
    std::vector<std::unordered_set<int>> rset(n), hset(m);
    for (int64_t r = 0; r < n; ++r) rset[r].insert(rpref[r].begin(), rpref[r].end());
    for (int64_t h = 0; h < m; ++h) hset[h].insert(hpref[h].begin(), hpref[h].end());
    for (int64_t r = 0; r < n; ++r) {
        std::vector<int> keep;
        for (int h : rpref[r]) {
            if (hset[h].count(static_cast<int>(r))) {
                keep.push_back(h);
            } else {
                out.warnings.push_back("dropped one-sided pair: resident " +
                                       out.resident_names[r] + " lists hospital " +
                                       out.hospital_names[h] + " but not vice versa");
            }
        }
        rpref[r] = std::move(keep);
        rset[r].clear();
        rset[r].insert(rpref[r].begin(), rpref[r].end());
    }
    for (int64_t h = 0; h < m; ++h) {
        std::vector<int> keep;
        for (int r : hpref[h]) {
            if (rset[r].count(static_cast<int>(h))) {
                keep.push_back(r);
            } else {
                out.warnings.push_back("dropped one-sided pair: hospital " +
                                       out.hospital_names[h] + " lists resident " +
                                       out.resident_names[r] + " but not vice versa");
            }
        }
        hpref[h] = std::move(keep);
    }

    // Drop residents left with empty lists; remap ids densely.
    std::vector<int> rmap(n, -1);
    std::vector<std::string> kept_names;
    int nr = 0;
    for (int64_t r = 0; r < n; ++r) {
        if (rpref[r].empty()) {
            out.warnings.push_back("dropped resident " + out.resident_names[r] +
                                   ": empty preference list after cleanup");
        } else {
            rmap[r] = nr++;
            kept_names.push_back(out.resident_names[r]);
        }
    }
    out.resident_names = std::move(kept_names);

    Instance& g = out.instance;
    g.rpref.assign(nr, {});
    g.hpref.assign(m, {});
    g.lq.assign(m, 0);
    g.uq = caps;
    for (int64_t r = 0; r < n; ++r) {
        if (rmap[r] < 0) continue;
        for (int h : rpref[r]) g.rpref[rmap[r]].push_back(static_cast<int32_t>(h));
    }
    for (int64_t h = 0; h < m; ++h)
        for (int r : hpref[h])
            if (rmap[r] >= 0) g.hpref[h].push_back(static_cast<int32_t>(rmap[r]));
    validate(g);
    return out;
}

// Re-emit an ingested instance in HRC form (used to state and test that
// ingestion is idempotent: ingesting this output changes nothing).
inline std::string serialize_hrc(const IngestResult& res) {
    const Instance& g = res.instance;
    std::string out = "HRC " + std::to_string(g.n_residents()) + " " +
                      std::to_string(g.n_hospitals()) + "\n";
    for (int r = 0; r < g.n_residents(); ++r) {
        out += res.resident_names[r] + " :";
        for (int32_t h : g.rpref[r]) out += " " + res.hospital_names[h];
        out += "\n";
    }
    for (int h = 0; h < g.n_hospitals(); ++h) {
        out += res.hospital_names[h] + " " + std::to_string(g.uq[h]) + " :";
        for (int32_t r : g.hpref[h]) out += " " + res.resident_names[r];
        out += "\n";
    }
    return out;
}

}  // namespace hrmatch::io
