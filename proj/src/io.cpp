#include "absolve/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace absolve {

using nlohmann::json;

namespace {

json relpos_to_json(const RelPos& r) {
    return json::array({r.first.steps, r.second.steps});
}

RelPos relpos_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2) throw IoError("malformed relative position");
    return RelPos{Path(j[0].get<std::string>()), Path(j[1].get<std::string>())};
}

json action_to_json(const ActionInstance& a) {
    json j;
    j["id"] = a.axiom;
    j["path"] = a.path.steps;
    json params = json::array();
    for (const auto& p : a.params) params.push_back(rational_to_string(p));
    j["params"] = std::move(params);
    if (a.variant != 0) j["variant"] = a.variant;
    return j;
}

ActionInstance action_from_json(const json& j) {
    ActionInstance a;
    a.axiom = j.at("id").get<std::string>();
    a.path = Path(j.at("path").get<std::string>());
    for (const auto& p : j.at("params")) {
        a.params.push_back(rational_from_string(p.get<std::string>()));
    }
    a.variant = static_cast<std::uint8_t>(j.value("variant", 0));
    return a;
}

void check_version(const json& j, const char* what) {
    if (!j.contains("version") || j["version"].get<int>() != kFormatVersion) {
        throw IoError(std::string("unsupported ") + what + " format version");
    }
}

json parse_json(const std::string& text, const char* what) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw IoError(std::string("malformed JSON in ") + what);
    return j;
}

}  // namespace

// ---------------------------------------------------------------------------
// Library
// ---------------------------------------------------------------------------

std::string library_to_json(const Library& library) {
    json j;
    j["version"] = kFormatVersion;
    json items = json::array();
    for (const Abstraction& a : library.items()) {
        json item;
        item["id"] = a.id;
        item["kind"] = projection_kind_name(a.kind);
        item["elements"] = a.elements;
        json rel = json::array();
        for (const RelPos& r : a.relpos) rel.push_back(relpos_to_json(r));
        item["relpos"] = std::move(rel);
        item["round"] = a.round;
        item["score"] = a.score;
        items.push_back(std::move(item));
    }
    j["abstractions"] = std::move(items);
    return j.dump(2);
}

Library library_from_json(const std::string& text) {
    json j = parse_json(text, "library");
    check_version(j, "library");
    Library library;
    for (const auto& item : j.at("abstractions")) {
        Abstraction a;
        a.id = item.at("id").get<std::string>();
        a.kind = projection_kind_from_name(item.at("kind").get<std::string>());
        a.elements = item.at("elements").get<std::vector<std::string>>();
        for (const auto& r : item.at("relpos")) a.relpos.push_back(relpos_from_json(r));
        a.round = item.value("round", 0);
        a.score = item.value("score", 0.0);
        if (a.elements.size() < 2) throw IoError("abstraction '" + a.id + "' has fewer than 2 elements");
        if (a.kind == ProjectionKind::RelAbs && a.relpos.size() + 1 != a.elements.size()) {
            throw IoError("abstraction '" + a.id + "' has inconsistent relpos length");
        }
        library.add(std::move(a));
    }
    return library;
}

// ---------------------------------------------------------------------------
// Dataset
// ---------------------------------------------------------------------------

std::string dataset_to_jsonl(const Dataset& dataset) {
    std::string out;
    json header;
    header["version"] = kFormatVersion;
    header["type"] = "dataset";
    header["kind"] = projection_kind_name(dataset.kind);
    header["action_space"] = dataset.action_space;
    out += header.dump();
    out += '\n';
    for (const auto& entry : dataset.entries) {
        json line;
        line["problem"] = entry.problem;
        json elements = json::array();
        json relpos = json::array();
        for (std::size_t i = 0; i < entry.trace.size(); ++i) {
            elements.push_back(entry.trace[i].element);
            if (dataset.kind == ProjectionKind::RelAbs && i > 0) {
                if (!entry.trace[i].rel) throw IoError("missing relative position in RelAbs trace");
                relpos.push_back(relpos_to_json(*entry.trace[i].rel));
            }
        }
        line["elements"] = std::move(elements);
        if (dataset.kind == ProjectionKind::RelAbs) line["relpos"] = std::move(relpos);
        out += line.dump();
        out += '\n';
    }
    return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty dataset file");
    json header = parse_json(line, "dataset header");
    check_version(header, "dataset");
    Dataset dataset;
    dataset.kind = projection_kind_from_name(header.at("kind").get<std::string>());
    dataset.action_space = header.at("action_space").get<std::vector<std::string>>();
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = parse_json(line, "dataset entry");
        DatasetEntry entry;
        entry.problem = j.at("problem").get<std::string>();
        auto elements = j.at("elements").get<std::vector<std::string>>();
        for (std::size_t i = 0; i < elements.size(); ++i) {
            ProjectedAction action;
            action.element = elements[i];
            if (dataset.kind == ProjectionKind::RelAbs && i > 0) {
                action.rel = relpos_from_json(j.at("relpos").at(i - 1));
            }
            entry.trace.push_back(std::move(action));
        }
        dataset.entries.push_back(std::move(entry));
    }
    return dataset;
}

// ---------------------------------------------------------------------------
// Traces
// ---------------------------------------------------------------------------

std::string traces_to_jsonl(const std::vector<SolutionTrace>& traces) {
    std::string out;
    json header;
    header["version"] = kFormatVersion;
    header["type"] = "traces";
    out += header.dump();
    out += '\n';
    for (const auto& trace : traces) {
        json line;
        line["problem"] = print_expr(trace.problem);
        json steps = json::array();
        for (const auto& step : trace.steps) {
            json s;
            s["action"] = action_to_json(step.action);
            if (step.is_abstract()) {
                json witness = json::array();
                for (const auto& w : step.witness) witness.push_back(action_to_json(w));
                s["witness"] = std::move(witness);
            }
            s["state"] = print_expr(step.state);
            steps.push_back(std::move(s));
        }
        line["steps"] = std::move(steps);
        out += line.dump();
        out += '\n';
    }
    return out;
}

std::vector<SolutionTrace> traces_from_jsonl(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty trace file");
    json header = parse_json(line, "trace header");
    check_version(header, "traces");
    std::vector<SolutionTrace> traces;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        json j = parse_json(line, "trace entry");
        SolutionTrace trace;
        trace.problem = parse(j.at("problem").get<std::string>());
        for (const auto& s : j.at("steps")) {
            SolutionStep step;
            step.action = action_from_json(s.at("action"));
            if (s.contains("witness")) {
                for (const auto& w : s.at("witness")) step.witness.push_back(action_from_json(w));
            }
            step.state = parse(s.at("state").get<std::string>());
            trace.steps.push_back(std::move(step));
        }
        traces.push_back(std::move(trace));
    }
    return traces;
}

// ---------------------------------------------------------------------------
// Checkpoint
// ---------------------------------------------------------------------------

std::string checkpoint_to_json(const ScorerParams& params, const std::string& rng_state) {
    json j;
    j["version"] = kFormatVersion;
    j["feature_spec"] = {{"ngram_buckets", params.spec.ngram_buckets}};
    j["weights"] = params.weights;
    j["bias"] = params.bias;
    j["rng_state"] = rng_state;
    return j.dump();
}

ScorerParams checkpoint_from_json(const std::string& text, std::string* rng_state) {
    json j = parse_json(text, "checkpoint");
    check_version(j, "checkpoint");
    ScorerParams params;
    params.spec.ngram_buckets = j.at("feature_spec").at("ngram_buckets").get<std::size_t>();
    params.weights = j.at("weights").get<std::vector<double>>();
    params.bias = j.at("bias").get<double>();
    if (params.weights.size() != params.spec.dimension()) {
        throw IoError("checkpoint weight vector does not match the feature spec");
    }
    if (rng_state) *rng_state = j.value("rng_state", "");
    return params;
}

void save_checkpoint(const ScorerParams& params, const std::string& rng_state,
                     const std::string& path) {
    write_text_file(path, checkpoint_to_json(params, rng_state));
}

ScorerParams load_checkpoint(const std::string& path, std::string* rng_state) {
    return checkpoint_from_json(read_text_file(path), rng_state);
}

// ---------------------------------------------------------------------------
// Axiom catalogs and templates
// ---------------------------------------------------------------------------

std::string axiom_catalog_to_json(const std::vector<AxiomInfo>& axioms) {
    json j;
    j["version"] = kFormatVersion;
    json items = json::array();
    for (const auto& a : axioms) {
        items.push_back({{"id", a.id},
                         {"domain", domain_kind_name(a.domain)},
                         {"parameterized", a.parameterized},
                         {"description", a.description}});
    }
    j["axioms"] = std::move(items);
    return j.dump(2);
}

std::vector<AxiomInfo> axiom_catalog_from_json(const std::string& text) {
    json j = parse_json(text, "axiom catalog");
    check_version(j, "axiom catalog");
    std::vector<AxiomInfo> axioms;
    for (const auto& item : j.at("axioms")) {
        AxiomInfo a;
        a.id = item.at("id").get<std::string>();
        std::string domain = item.at("domain").get<std::string>();
        if (domain == "equations") {
            a.domain = DomainKind::Equations;
        } else if (domain == "fractions") {
            a.domain = DomainKind::Fractions;
        } else {
            throw IoError("unknown domain '" + domain + "' in axiom catalog");
        }
        a.parameterized = item.at("parameterized").get<bool>();
        a.description = item.value("description", "");
        axioms.push_back(std::move(a));
    }
    return axioms;
}

std::vector<std::string> load_template_file(const std::string& path) {
    json j = parse_json(read_text_file(path), "template file");
    check_version(j, "template file");
    auto templates = j.at("templates").get<std::vector<std::string>>();
    if (templates.empty()) throw IoError("template file lists no templates");
    return templates;
}

// ---------------------------------------------------------------------------
// Plain files
// ---------------------------------------------------------------------------

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out) throw IoError("failed writing '" + path + "'");
}

void save_library(const Library& library, const std::string& path) {
    write_text_file(path, library_to_json(library));
}

Library load_library(const std::string& path) {
    return library_from_json(read_text_file(path));
}

void save_dataset(const Dataset& dataset, const std::string& path) {
    write_text_file(path, dataset_to_jsonl(dataset));
}

Dataset load_dataset(const std::string& path) {
    return dataset_from_jsonl(read_text_file(path));
}

void save_traces(const std::vector<SolutionTrace>& traces, const std::string& path) {
    write_text_file(path, traces_to_jsonl(traces));
}

std::vector<SolutionTrace> load_traces(const std::string& path) {
    return traces_from_jsonl(read_text_file(path));
}

}  // namespace absolve
