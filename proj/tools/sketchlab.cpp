#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "httplib.h"
#include "sketchlab/eval.hpp"
#include "sketchlab/little.hpp"
#include "sketchlab/session.hpp"

using namespace sketchlab;

namespace {

std::string readAll(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Json nodeJson(const SvgNode& n) {
    Json attrs = Json::object();
    for (const auto& [k, v] : n.attrs) {
        if (auto* num = std::get_if<NumVal>(&v)) {
            attrs[k] = num->value;
        } else if (auto* s = std::get_if<std::string>(&v)) {
            attrs[k] = *s;
        } else if (auto* pts = std::get_if<std::vector<Point>>(&v)) {
            Json a = Json::array();
            for (const auto& p : *pts) a.push_back({p.x.value, p.y.value});
            attrs[k] = a;
        } else if (auto* cmds = std::get_if<std::vector<PathCmd>>(&v)) {
            Json a = Json::array();
            for (const auto& c : *cmds) {
                Json cmd = Json::array({std::string(1, c.verb)});
                for (const auto& p : c.pts) cmd.push_back({p.x.value, p.y.value});
                a.push_back(cmd);
            }
            attrs[k] = a;
        }
    }
    Json kids = Json::array();
    for (const auto& k : n.children) kids.push_back(nodeJson(k));
    Json out = {{"tag", n.tag}, {"attrs", attrs}};
    if (n.ghost) out["ghost"] = true;
    if (!kids.empty()) out["children"] = kids;
    return out;
}

int runApply(const std::string& file, const std::string& script, unsigned seed, bool svgOut) {
    Session s(seed);
    Json r = handleRequest(s, {{"id", 0}, {"kind", "load"}, {"payload", {{"source", readAll(file)}}}});
    if (!r["ok"].get<bool>()) {
        std::cerr << file << ": " << r["error"].get<std::string>() << ": " << r["message"].get<std::string>() << "\n";
        return 1;
    }
    std::istringstream lines(readAll(script));
    std::string line;
    int lineNo = 0;
    while (std::getline(lines, line)) {
        ++lineNo;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        Json req;
        try {
            req = Json::parse(line);
        } catch (const Json::parse_error& e) {
            std::cerr << script << ":" << lineNo << ": malformed JSON\n";
            return 1;
        }
        r = handleRequest(s, req);
        if (!r["ok"].get<bool>()) {
            std::cerr << script << ":" << lineNo << ": " << r["error"].get<std::string>() << ": "
                      << r["message"].get<std::string>() << "\n";
            return 1;
        }
    }
    RenderOptions ro;
    ro.showGhosts = s.showGhosts;
    std::cout << (svgOut ? renderSvg(s.canvas, ro) : unparse(s.program));
    return 0;
}

int runPipe(unsigned seed) {
    SessionStore store(seed);
    std::string line;
    while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::cout << store.handleText(line) << "\n" << std::flush;
    }
    return 0;
}

int runServe(int port, const std::string& root, unsigned seed) {
    SessionStore store(seed);
    httplib::Server server;
    server.Post("/rpc", [&](const httplib::Request& req, httplib::Response& res) {
        res.set_content(store.handleText(req.body), "application/json");
    });
    server.Get("/health", [](const httplib::Request&, httplib::Response& res) { res.set_content("ok", "text/plain"); });
    if (!root.empty() && !server.set_mount_point("/", root)) {
        std::cerr << "cannot serve " << root << "\n";
        return 1;
    }
    std::cerr << "listening on 127.0.0.1:" << port << "\n";
    return server.listen("127.0.0.1", port) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"sketchlab: edit little programs by direct manipulation"};
    app.require_subcommand(1);
    unsigned seed = 1;
    app.add_option("--seed", seed, "seed for shape colors when a request gives none");

    std::string file, script, root;
    bool noGhosts = false, svgOut = false;
    int port = 8080;

    auto* evalCmd = app.add_subcommand("eval", "print the evaluated canvas as JSON");
    evalCmd->add_option("FILE", file, "program (- for stdin)")->required();
    auto* svgCmd = app.add_subcommand("svg", "print the program's SVG output");
    svgCmd->add_option("FILE", file, "program (- for stdin)")->required();
    svgCmd->add_flag("--no-ghosts", noGhosts, "hide ghost shapes");
    auto* applyCmd = app.add_subcommand("apply", "run a script of requests (one JSON object per line)");
    applyCmd->add_option("FILE", file, "starting program")->required();
    applyCmd->add_option("SCRIPT", script, "request script")->required();
    applyCmd->add_flag("--svg", svgOut, "print the final SVG instead of the code");
    app.add_subcommand("pipe", "answer newline-delimited JSON requests on stdin");
    auto* serveCmd = app.add_subcommand("serve", "serve /rpc and the UI over HTTP");
    serveCmd->add_option("--port", port, "TCP port");
    serveCmd->add_option("--root", root, "directory of UI assets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*evalCmd) {
            Program p = parse(readAll(file));
            Canvas c = evaluate(p);
            Json out = Json::array();
            for (const auto& n : c.root) out.push_back(nodeJson(n));
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        if (*svgCmd) {
            RenderOptions ro;
            ro.showGhosts = !noGhosts;
            std::cout << renderSvg(evaluate(parse(readAll(file))), ro);
            return 0;
        }
        if (*applyCmd) return runApply(file, script, seed, svgOut);
        if (app.got_subcommand("pipe")) return runPipe(seed);
        if (*serveCmd) return runServe(port, root, seed);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
