#pragma once

#include <string>

#include <json.hpp>

#include "fpphe/errors.hpp"
#include "fpphe/fpp.hpp"
#include "fpphe/geometry.hpp"
#include "fpphe/graph.hpp"
#include "fpphe/mdla.hpp"
#include "fpphe/multiscale.hpp"
#include "fpphe/sweep.hpp"

namespace fpphe {

using nlohmann::json;

inline constexpr int kSchemaVersion = 1;

// Documents are {"format": "fpphe", "version": N, "kind": K, "data": ...}.
// Keys are sorted and doubles are written in shortest round-trip form, with
// infinities and NaN as the strings "inf", "-inf" and "nan".
json wrap_document(const std::string& kind, json data);

// Throws ParseError for anything that is not an fpphe document of this kind
// and VersionError for another schema version.
const json& unwrap_document(const json& doc, const std::string& kind);

std::string dump_canonical(const json& doc);
json parse_text(const std::string& text);
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

json encode_double(double x);
double decode_double(const json& j);

json to_json(const Graph& g);
json to_json(const Trace& t);
json to_json(const StopRule& s);
json to_json(const MdlaState& s);
json to_json(const EmbeddedTree& t);
json to_json(const EscapeRay& r);
json to_json(const ScaleParams& p);
json to_json(const CylinderVerdict& v);
json to_json(const GoodPathResult& r);
json to_json(const BallChainPlan& p);
json to_json(const BallChainEvents& e);
json to_json(const OutcomeProxies& o);
json to_json(const SweepSpec& s);
json to_json(const SweepResult& r);

template <class T>
T from_json(const json& j);

// Kind tags used in documents.
template <class T>
const char* document_kind();

template <> Graph from_json<Graph>(const json& j);
template <> Trace from_json<Trace>(const json& j);
template <> StopRule from_json<StopRule>(const json& j);
template <> OutcomeProxies from_json<OutcomeProxies>(const json& j);
template <> MdlaState from_json<MdlaState>(const json& j);
template <> EmbeddedTree from_json<EmbeddedTree>(const json& j);
template <> EscapeRay from_json<EscapeRay>(const json& j);
template <> ScaleParams from_json<ScaleParams>(const json& j);
template <> CylinderVerdict from_json<CylinderVerdict>(const json& j);
template <> GoodPathResult from_json<GoodPathResult>(const json& j);
template <> BallChainPlan from_json<BallChainPlan>(const json& j);
template <> BallChainEvents from_json<BallChainEvents>(const json& j);
template <> SweepSpec from_json<SweepSpec>(const json& j);
template <> SweepResult from_json<SweepResult>(const json& j);

template <> const char* document_kind<Graph>();
template <> const char* document_kind<Trace>();
template <> const char* document_kind<StopRule>();
template <> const char* document_kind<OutcomeProxies>();
template <> const char* document_kind<MdlaState>();
template <> const char* document_kind<EmbeddedTree>();
template <> const char* document_kind<EscapeRay>();
template <> const char* document_kind<ScaleParams>();
template <> const char* document_kind<CylinderVerdict>();
template <> const char* document_kind<GoodPathResult>();
template <> const char* document_kind<BallChainPlan>();
template <> const char* document_kind<BallChainEvents>();
template <> const char* document_kind<SweepSpec>();
template <> const char* document_kind<SweepResult>();

template <class T>
std::string save_document(const T& value) {
    return dump_canonical(wrap_document(document_kind<T>(), to_json(value)));
}

// Rethrows JSON library errors (missing keys, wrong types) as ParseError.
template <class F>
auto rethrow_as_parse_error(F&& f) -> decltype(f()) {
    try {
        return f();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed document: ") + e.what());
    }
}

template <class T>
T load_document(const std::string& text) {
    return rethrow_as_parse_error(
        [&] { return from_json<T>(unwrap_document(parse_text(text), document_kind<T>())); });
}

template <class T>
void save_file(const std::string& path, const T& value) {
    write_text_file(path, save_document(value));
}

template <class T>
T load_file(const std::string& path) {
    return rethrow_as_parse_error(
        [&] { return from_json<T>(unwrap_document(read_json_file(path), document_kind<T>())); });
}

// A graph named by generator parameters, e.g. {"family": "tessellation",
// "p": 3, "q": 7, "layers": 10}, or {"file": "g.json"} resolved against
// base_dir when relative. Families: regular_tree, tessellation, lattice,
// free_product, t3.
Graph build_graph(const json& ref, const std::string& base_dir = "");

}  // namespace fpphe
