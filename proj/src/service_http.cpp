#include <httplib.h>

#include "saad/service.hpp"

namespace saad {

namespace {

void send(httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_content(reply.body, reply.content_type);
}

std::multimap<std::string, std::string> query(const httplib::Request& req) {
    return {req.params.begin(), req.params.end()};
}

}  // namespace

void install_routes(httplib::Server& server, TriageService& service) {
    server.Get("/api/candidates", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.handle_candidates(query(req), req.get_header_value("X-Annotator")));
    });
    server.Post("/api/annotations", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.handle_submit(req.body, req.get_header_value("X-Annotator")));
    });
    server.Get("/api/agreement", [&service](const httplib::Request& req, httplib::Response& res) {
        send(res, service.handle_agreement(query(req)));
    });
    server.Get("/api/patterns/fp", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_patterns_fp());
    });
    server.Get("/api/iterations", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_iterations());
    });
    server.Get("/", [&service](const httplib::Request&, httplib::Response& res) {
        send(res, service.handle_index());
    });
}

void serve(TriageService& service, const std::string& host, int port) {
    httplib::Server server;
    install_routes(server, service);
    if (!server.listen(host, port))
        throw IoError("cannot listen on " + host + ":" + std::to_string(port));
}

}  // namespace saad
