#pragma once

#include <filesystem>
#include <memory>
#include <string>
#include <string_view>

#include <json.hpp>

#include "zeroml/automl.hpp"

namespace httplib {
class Server;
}

namespace zeroml {

/// Builds a Dataset holding the schema's input columns from JSON instances
/// (objects mapping column name to number, string, bool or null). Unknown
/// keys are ignored. Throws SchemaError naming absent columns or bad values.
Dataset instances_to_dataset(const FeatureSchema& schema, const nlohmann::json& instances);

struct HttpReply {
    int status = 200;
    nlohmann::json body;
};

/// POST /predict body handler, usable without a socket.
HttpReply handle_predict(const TrainedModel& model, std::string_view body);

/// Parses "host:port" (host may be empty, meaning 0.0.0.0).
std::pair<std::string, int> parse_endpoint(std::string_view text);

/// HTTP front end over one immutable model: GET /health, GET /report,
/// POST /predict. Requests are served concurrently by httplib's thread pool.
class PredictionServer {
public:
    explicit PredictionServer(std::shared_ptr<const TrainedModel> model);
    ~PredictionServer();
    PredictionServer(const PredictionServer&) = delete;
    PredictionServer& operator=(const PredictionServer&) = delete;

    /// Binds; port 0 picks a free port. Returns the bound port. Throws IoError.
    int bind(const std::string& host, int port);
    /// Blocks until stop().
    void listen();
    void stop();

private:
    std::shared_ptr<const TrainedModel> model_;
    std::unique_ptr<httplib::Server> http_;
};

/// Loads an artifact and serves it until SIGINT/SIGTERM.
void serve(const std::filesystem::path& artifact_path, const std::string& host, int port);
void serve_model(std::shared_ptr<const TrainedModel> model, const std::string& host, int port);

}  // namespace zeroml
