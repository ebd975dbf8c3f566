#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "absolve/agent.hpp"
#include "absolve/miner.hpp"
#include "absolve/trace.hpp"

namespace absolve {

class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

inline constexpr int kFormatVersion = 1;

// Library file: one JSON document with a version header.
std::string library_to_json(const Library& library);
Library library_from_json(const std::string& text);
void save_library(const Library& library, const std::string& path);
Library load_library(const std::string& path);

// Dataset file: JSON lines, header line first, one projected trace per line.
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);
void save_dataset(const Dataset& dataset, const std::string& path);
Dataset load_dataset(const std::string& path);

// Trace file: JSON lines, header line first, one solution per line.
// Abstract steps embed their axiom-level witnesses.
std::string traces_to_jsonl(const std::vector<SolutionTrace>& traces);
std::vector<SolutionTrace> traces_from_jsonl(const std::string& text);
void save_traces(const std::vector<SolutionTrace>& traces, const std::string& path);
std::vector<SolutionTrace> load_traces(const std::string& path);

// Scorer checkpoint: weights, feature-space spec and rng state.
std::string checkpoint_to_json(const ScorerParams& params, const std::string& rng_state);
ScorerParams checkpoint_from_json(const std::string& text, std::string* rng_state = nullptr);
void save_checkpoint(const ScorerParams& params, const std::string& rng_state,
                     const std::string& path);
ScorerParams load_checkpoint(const std::string& path, std::string* rng_state = nullptr);

// Axiom catalog and equation template files.
std::string axiom_catalog_to_json(const std::vector<AxiomInfo>& axioms);
std::vector<AxiomInfo> axiom_catalog_from_json(const std::string& text);
std::vector<std::string> load_template_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace absolve
