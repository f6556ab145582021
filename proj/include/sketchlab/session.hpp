#pragma once

#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "json.hpp"
#include "sketchlab/ast.hpp"
#include "sketchlab/eval.hpp"

namespace sketchlab {

using Json = nlohmann::json;

inline constexpr size_t kUndoLimit = 100;

/// One editing session. Invariant at rest: canvas == evaluate(program).
struct Session {
    Program program;
    Canvas canvas;
    std::vector<std::string> selection;  // feature ids, in click order
    std::deque<Program> undo;            // most recent at the back
    bool showGhosts = true;
    std::optional<Program> dragBase;  // program at the start of a live drag
    std::mt19937 rng;

    explicit Session(unsigned seed = 1);
};

/// Every request kind the protocol understands.
const std::vector<std::string>& requestKinds();

/// Apply one request `{id, kind, payload}`. The reply is
/// `{id, ok: true, payload: {code, svg, features, widgets, lambdas, selection, ...}}`
/// or `{id, ok: false, error: CODE, message}`; on error the session is untouched.
Json handleRequest(Session& s, const Json& request);

/// Sessions keyed by the request's `session` field, each serialized.
class SessionStore {
public:
    explicit SessionStore(unsigned seed = 1) : seed_(seed) {}
    Json handle(const Json& request);
    /// Parse one JSON text and handle it; malformed input yields an error reply.
    std::string handleText(const std::string& text);

private:
    struct Slot {
        std::mutex mu;
        std::unique_ptr<Session> session;
    };
    std::mutex mu_;
    std::map<std::string, std::shared_ptr<Slot>> slots_;
    unsigned seed_;
};

}  // namespace sketchlab
