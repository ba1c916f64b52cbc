#include "tradecredit/server.hpp"

#include "tradecredit/api.hpp"
#include "tradecredit/errors.hpp"
#include "tradecredit/report.hpp"

// after Eigen: <resolv.h> defines a `_res` macro that Eigen uses as a name
#include "httplib.h"

namespace tradecredit {

struct Server::Impl {
  ServerOptions options;
  ScenarioStore store;
  httplib::Server http;

  explicit Impl(ServerOptions opts) : options(std::move(opts)), store(options.store_dir) {}
};

namespace {

void reply(httplib::Response& res, const ApiResponse& response) {
  res.status = response.status;
  res.set_content(dump_machine(response.body), "application/json");
}

}  // namespace

Server::Server(ServerOptions options) : impl_(std::make_unique<Impl>(std::move(options))) {
  auto& http = impl_->http;
  auto& store = impl_->store;

  http.Post("/api/evaluate", [&store](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_raw(req.body, [&](const nlohmann::json& j) { return handle_evaluate(j, &store); }));
  });
  http.Post("/api/frontier", [](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_raw(req.body, handle_frontier));
  });
  http.Post("/api/simulate", [](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_raw(req.body, handle_simulate));
  });
  http.Get(R"(/api/scenarios/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    reply(res, handle_get_scenario(req.matches[1], store));
  });
  http.Put(R"(/api/scenarios/([^/]+))", [&store](const httplib::Request& req, httplib::Response& res) {
    const std::string name = req.matches[1];
    reply(res, handle_raw(req.body, [&](const nlohmann::json& j) { return handle_put_scenario(name, j, store); }));
  });

  if (impl_->options.static_dir) {
    if (!http.set_mount_point("/", impl_->options.static_dir->string()))
      throw IoError("static asset directory '" + impl_->options.static_dir->string() + "' does not exist");
  }
}

Server::~Server() { stop(); }

int Server::bind() {
  auto& http = impl_->http;
  const auto& opts = impl_->options;
  int port = opts.port;
  if (port == 0) {
    port = http.bind_to_any_port(opts.host);
    if (port < 0) throw IoError("cannot bind " + opts.host);
  } else if (!http.bind_to_port(opts.host, port)) {
    throw IoError("cannot bind " + opts.host + ":" + std::to_string(port));
  }
  return port;
}

void Server::run() { impl_->http.listen_after_bind(); }

void Server::wait_until_ready() const { impl_->http.wait_until_ready(); }

void Server::stop() {
  if (impl_ && impl_->http.is_running()) impl_->http.stop();
}

}  // namespace tradecredit
