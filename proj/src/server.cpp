#include "zeroml/server.hpp"

#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include <httplib.h>

#include "zeroml/artifact.hpp"
#include "zeroml/errors.hpp"

namespace zeroml {

using nlohmann::json;

Dataset instances_to_dataset(const FeatureSchema& schema, const json& instances) {
    if (!instances.is_array()) throw SchemaError("\"instances\" must be an array");
    for (const auto& inst : instances) {
        if (!inst.is_object()) throw SchemaError("every instance must be a JSON object");
    }
    std::vector<std::string> absent;
    for (const auto& t : schema.inputs) {
        for (const auto& inst : instances) {
            if (!inst.contains(t.column)) {
                absent.push_back(t.column);
                break;
            }
        }
    }
    if (!absent.empty()) {
        std::string names;
        for (const auto& a : absent) names += (names.empty() ? "" : ", ") + a;
        throw SchemaError("missing input column(s): " + names);
    }

    std::vector<Column> cols;
    for (const auto& t : schema.inputs) {
        if (t.kind == TransformKind::OneHot) {
            std::vector<std::optional<std::string>> cells;
            for (const auto& inst : instances) {
                const json& v = inst.at(t.column);
                if (v.is_null()) {
                    cells.emplace_back(std::nullopt);
                } else if (v.is_string()) {
                    cells.emplace_back(std::string(trim(v.get<std::string>())));
                } else if (v.is_boolean()) {
                    cells.emplace_back(v.get<bool>() ? "true" : "false");
                } else if (v.is_number()) {
                    cells.emplace_back(format_number(v.get<double>()));
                } else {
                    throw SchemaError("column '" + t.column + "' expects a scalar value");
                }
            }
            cols.push_back(Column::categorical(t.column, cells));
        } else {
            std::vector<double> values;
            std::vector<std::uint8_t> missing;
            for (const auto& inst : instances) {
                const json& v = inst.at(t.column);
                double x = 0.0;
                bool gap = false;
                if (v.is_null()) {
                    gap = true;
                } else if (v.is_number()) {
                    x = v.get<double>();
                } else if (v.is_boolean()) {
                    x = v.get<bool>() ? 1.0 : 0.0;
                } else if (v.is_string()) {
                    const std::string s(trim(v.get<std::string>()));
                    if (auto parsed = parse_number(s)) {
                        x = *parsed;
                    } else if (s == "true" || s == "false") {
                        x = s == "true" ? 1.0 : 0.0;
                    } else if (s.empty()) {
                        gap = true;
                    } else {
                        throw SchemaError("column '" + t.column + "' expects a number, got \"" + s + "\"");
                    }
                } else {
                    throw SchemaError("column '" + t.column + "' expects a number");
                }
                values.push_back(x);
                missing.push_back(gap ? 1 : 0);
            }
            cols.push_back(Column::numeric(t.column, std::move(values), std::move(missing)));
        }
    }
    if (cols.empty()) {
        // A schema with no inputs still needs a row count.
        cols.push_back(Column::numeric("__rows", std::vector<double>(instances.size(), 0.0)));
    }
    return Dataset(std::move(cols));
}

HttpReply handle_predict(const TrainedModel& model, std::string_view body) {
    json request;
    try {
        request = json::parse(body);
    } catch (const json::parse_error& e) {
        return {400, json{{"error", std::string("malformed JSON: ") + e.what()}}};
    }
    if (!request.is_object() || !request.contains("instances")) {
        return {400, json{{"error", "body must be an object with an \"instances\" array"}}};
    }
    try {
        const Dataset d = instances_to_dataset(model.schema, request.at("instances"));
        const auto predictions = model.predict(d);
        json out = json::array();
        for (double p : predictions) {
            if (model.task() == TaskKind::Classification) {
                out.push_back(model.label(p));
            } else {
                out.push_back(p);
            }
        }
        return {200, json{{"predictions", out}}};
    } catch (const SchemaError& e) {
        json err{{"error", e.what()}};
        std::vector<std::string> missing;
        const auto& instances = request.at("instances");
        if (instances.is_array()) {
            for (const auto& t : model.schema.inputs) {
                for (const auto& inst : instances) {
                    if (inst.is_object() && !inst.contains(t.column)) {
                        missing.push_back(t.column);
                        break;
                    }
                }
            }
        }
        if (!missing.empty()) err["missing"] = missing;
        return {400, err};
    } catch (const std::exception& e) {
        std::cerr << "zeroml serve: predict failed: " << e.what() << "\n";
        return {400, json{{"error", e.what()}}};
    }
}

std::pair<std::string, int> parse_endpoint(std::string_view text) {
    const auto colon = text.rfind(':');
    if (colon == std::string_view::npos) throw SchemaError("api destination must be host:port, got '" + std::string(text) + "'");
    std::string host(text.substr(0, colon));
    const std::string port_text(text.substr(colon + 1));
    int port = 0;
    try {
        std::size_t used = 0;
        port = std::stoi(port_text, &used);
        if (used != port_text.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
        throw SchemaError("invalid port '" + port_text + "'");
    }
    if (port < 0 || port > 65535) throw SchemaError("port out of range: " + port_text);
    if (host.empty()) host = "0.0.0.0";
    return {host, port};
}

namespace {

void send_json(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json");
}

}  // namespace

PredictionServer::PredictionServer(std::shared_ptr<const TrainedModel> model)
    : model_(std::move(model)), http_(std::make_unique<httplib::Server>()) {
    auto& svr = *http_;
    const auto model_ptr = model_;
    svr.Get("/health", [](const httplib::Request&, httplib::Response& res) {
        send_json(res, 200, json{{"status", "ok"}});
    });
    svr.Get("/report", [model_ptr](const httplib::Request&, httplib::Response& res) {
        if (!model_ptr->report) {
            send_json(res, 404, json{{"error", "artifact carries no training report"}});
            return;
        }
        send_json(res, 200, report_to_json(*model_ptr->report));
    });
    svr.Post("/predict", [model_ptr](const httplib::Request& req, httplib::Response& res) {
        const HttpReply reply = handle_predict(*model_ptr, req.body);
        send_json(res, reply.status, reply.body);
    });
    const auto not_allowed = [](const httplib::Request& req, httplib::Response& res) {
        send_json(res, 405, json{{"error", "method " + req.method + " not allowed on " + req.path}});
    };
    for (const char* path : {"/health", "/report"}) {
        svr.Post(path, not_allowed);
        svr.Put(path, not_allowed);
        svr.Delete(path, not_allowed);
    }
    svr.Get("/predict", not_allowed);
    svr.Put("/predict", not_allowed);
    svr.Delete("/predict", not_allowed);
}

PredictionServer::~PredictionServer() = default;

int PredictionServer::bind(const std::string& host, int port) {
    int bound = port;
    if (port == 0) {
        bound = http_->bind_to_any_port(host);
    } else if (!http_->bind_to_port(host, port)) {
        bound = -1;
    }
    if (bound <= 0) throw IoError("cannot bind " + host + ":" + std::to_string(port));
    return bound;
}

void PredictionServer::listen() { http_->listen_after_bind(); }

void PredictionServer::stop() { http_->stop(); }

void serve_model(std::shared_ptr<const TrainedModel> model, const std::string& host, int port) {
    PredictionServer server(std::move(model));
    const int bound = server.bind(host, port);
    std::cerr << "zeroml: serving on http://" << host << ":" << bound << " (Ctrl-C to stop)\n";

    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    pthread_sigmask(SIG_BLOCK, &signals, nullptr);
    std::jthread waiter([&] {
        int received = 0;
        sigwait(&signals, &received);
        server.stop();
    });
    server.listen();
    // If listen returned for another reason, wake the waiter.
    pthread_kill(waiter.native_handle(), SIGTERM);
}

void serve(const std::filesystem::path& artifact_path, const std::string& host, int port) {
    serve_model(std::make_shared<const TrainedModel>(load_artifact(artifact_path)), host, port);
}

}  // namespace zeroml
