#pragma once

// Brute-force reference implementation of candidate extraction and greedy
// scoring, kept deliberately independent of the miner: plain double loops,
// naive rewriting, and J computed from the definition.

#include <cmath>
#include <optional>

#include "absolve/miner.hpp"

namespace absolve::oracle {

inline bool same_candidate(const Candidate& a, const Candidate& b) {
    return a.elements == b.elements && a.relpos == b.relpos;
}

inline std::vector<Candidate> candidates_bruteforce(const Dataset& data, std::size_t max_len) {
    std::vector<Candidate> out;
    for (const auto& entry : data.entries) {
        const ProjectedTrace& t = entry.trace;
        for (std::size_t i = 0; i < t.size(); ++i) {
            for (std::size_t j = i + 1; j < t.size() && j - i + 1 <= max_len; ++j) {
                Candidate c;
                for (std::size_t k = i; k <= j; ++k) {
                    c.elements.push_back(t[k].element);
                    if (data.kind == ProjectionKind::RelAbs && k > i) c.relpos.push_back(*t[k].rel);
                }
                bool dup = false;
                for (const auto& prev : out) {
                    if (same_candidate(prev, c)) { dup = true; break; }
                }
                if (!dup) out.push_back(std::move(c));
            }
        }
    }
    return out;
}

inline ProjectedTrace rewrite_bruteforce(const ProjectedTrace& trace, const Candidate& cand,
                                         ProjectionKind kind, const std::string& token) {
    ProjectedTrace out;
    std::size_t i = 0;
    while (i < trace.size()) {
        bool match = i + cand.elements.size() <= trace.size();
        for (std::size_t j = 0; match && j < cand.elements.size(); ++j) {
            if (trace[i + j].element != cand.elements[j]) match = false;
            if (match && kind == ProjectionKind::RelAbs && j > 0 &&
                !(trace[i + j].rel.has_value() && *trace[i + j].rel == cand.relpos[j - 1])) {
                match = false;
            }
        }
        if (match) {
            out.push_back(ProjectedAction{token, trace[i].rel});
            i += cand.elements.size();
        } else {
            out.push_back(trace[i]);
            ++i;
        }
    }
    return out;
}

// S(a) = J(L) - J(L ∪ {a}) with J computed from the definition on the
// rewritten dataset.
inline double score_bruteforce(const Dataset& data, const Candidate& cand, std::size_t k) {
    std::size_t before = 0;
    std::size_t after = 0;
    for (const auto& entry : data.entries) {
        before += entry.trace.size();
        after += rewrite_bruteforce(entry.trace, cand, data.kind, "?").size();
    }
    return static_cast<double>(before) * std::log(static_cast<double>(k)) -
           static_cast<double>(after) * std::log(static_cast<double>(k + 1));
}

// argmax of S over all candidates, ties broken longer-first then
// lexicographically; nullopt when no candidate scores strictly positive.
inline std::optional<Candidate> first_pick_bruteforce(const Dataset& data, std::size_t k,
                                                      std::size_t max_len, double* best_score) {
    std::optional<Candidate> best;
    double best_s = 0.0;
    for (const Candidate& cand : candidates_bruteforce(data, max_len)) {
        double s = score_bruteforce(data, cand, k);
        if (s <= 0.0) continue;
        bool take = !best.has_value() || s > best_s;
        if (best.has_value() && s == best_s) {
            if (cand.elements.size() != best->elements.size()) {
                take = cand.elements.size() > best->elements.size();
            } else if (cand.elements != best->elements) {
                take = cand.elements < best->elements;
            } else {
                take = cand.relpos < best->relpos;
            }
        }
        if (take) {
            best = cand;
            best_s = s;
        }
    }
    if (best_score) *best_score = best_s;
    return best;
}

}  // namespace absolve::oracle
