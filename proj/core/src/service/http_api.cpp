#include "docqa/service/http_api.hpp"

#include <httplib.h>

#include <fstream>
#include <mutex>

#include "docqa/error.hpp"
#include "json_io.hpp"

namespace docqa::service {
namespace {

void reply_json(httplib::Response& res, const std::string& body, int status = 200) {
  res.status = status;
  res.set_content(body, "application/json");
}

void reply_error(httplib::Response& res, int status, const std::string& msg) {
  reply_json(res, json{{"error", msg}}.dump(), status);
}

template <class F>
void guarded(httplib::Response& res, F&& body) {
  try {
    body();
  } catch (const NotFoundError& e) {
    reply_error(res, 404, e.what());
  } catch (const ValidationError& e) {
    reply_error(res, 400, e.what());
  } catch (const IngestError& e) {
    reply_error(res, 400, e.what());
  } catch (const StageError& e) {
    reply_error(res, 502, e.what());
  } catch (const json::exception& e) {
    reply_error(res, 400, std::string("bad JSON: ") + e.what());
  } catch (const std::exception& e) {
    reply_error(res, 500, e.what());
  }
}

}  // namespace

struct ApiServer::Impl {
  Pipeline& pipeline;
  httplib::Server server;
  // Temporary uploads are written under the data directory.
  std::mutex upload_mu;
  unsigned upload_seq = 0;

  explicit Impl(Pipeline& p) : pipeline(p) { routes(); }

  void routes() {
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
      res.set_header("Access-Control-Allow-Headers", "Content-Type");
      res.status = 204;
    });

    server.Get("/healthz", [](const httplib::Request&, httplib::Response& res) {
      reply_json(res, R"({"status":"ok"})");
    });

    server.Get("/documents", [this](const httplib::Request&, httplib::Response& res) {
      guarded(res, [&] {
        json out = json::array();
        for (const auto& d : pipeline.store().list()) {
          out.push_back({{"doc_id", d.doc_id},
                         {"title", d.title},
                         {"passages", d.passages},
                         {"source", std::string(corpus::to_string(d.source))}});
        }
        reply_json(res, out.dump());
      });
    });

    server.Get(R"(/documents/([^/]+)/passages)",
               [this](const httplib::Request& req, httplib::Response& res) {
                 guarded(res, [&] {
                   const auto stored = pipeline.store().get(req.matches[1]);
                   reply_json(res, json(stored->doc.passages).dump());
                 });
               });

    server.Post(R"(/documents/([^/]+)/ask)",
                [this](const httplib::Request& req, httplib::Response& res) {
                  guarded(res, [&] {
                    const auto body = json::parse(req.body);
                    const auto question = body.at("question").get<std::string>();
                    if (question.find_first_not_of(" \t\n") == std::string::npos)
                      throw ValidationError("question is empty");
                    AskOptions opts;
                    if (body.contains("k") && !body["k"].is_null()) opts.k = body["k"].get<int>();
                    if (body.contains("retriever") && !body["retriever"].is_null())
                      opts.retriever = retrieve::retriever_from_string(body["retriever"].get<std::string>());
                    reply_json(res, pipeline.ask(req.matches[1], question, opts).to_json());
                  });
                });

    server.Post("/documents", [this](const httplib::Request& req, httplib::Response& res) {
      guarded(res, [&] { upload(req, res); });
    });
  }

  void upload(const httplib::Request& req, httplib::Response& res) {
    if (!req.is_multipart_form_data()) throw ValidationError("expected multipart/form-data");
    const bool has_pdf = req.has_file("pdf");
    const bool has_chars = req.has_file("chars");
    if (!has_pdf && !has_chars) throw ValidationError("upload needs a 'pdf' file part");

    RegionSpec spec;
    if (req.has_file("sidecar")) {
      spec.source = RegionSource::sidecar;
      spec.regions = extract::parse_region_sidecar(req.get_file_value("sidecar").content, "sidecar");
    } else {
      const auto mode = req.has_file("mode") ? req.get_file_value("mode").content : std::string();
      if (mode == "detect") spec.source = RegionSource::detector;
      else if (mode.empty() || mode == "fallback") spec.source = RegionSource::fallback;
      else throw ValidationError("mode must be 'fallback' or 'detect'");
    }
    std::string title = req.has_file("title") ? req.get_file_value("title").content : std::string();

    std::filesystem::path pdf_path;
    unsigned seq = 0;
    {
      std::lock_guard lock(upload_mu);
      seq = upload_seq++;
    }
    const auto tmp_dir = pipeline.store().data_dir() / "tmp";
    std::filesystem::create_directories(tmp_dir);
    if (has_pdf) {
      const auto& file = req.get_file_value("pdf");
      pdf_path = tmp_dir / ("upload-" + std::to_string(seq) + ".pdf");
      std::ofstream(pdf_path, std::ios::binary) << file.content;
      if (title.empty() && !file.filename.empty())
        title = std::filesystem::path(file.filename).stem().string();
    }

    IngestResult result;
    try {
      if (has_chars) {
        const auto dump = extract::parse_char_dump(req.get_file_value("chars").content, "chars");
        result = pipeline.ingest_chars(dump, spec, title, pdf_path);
      } else {
        result = pipeline.ingest_pdf(pdf_path, spec, title);
      }
    } catch (...) {
      if (!pdf_path.empty()) std::filesystem::remove(pdf_path);
      throw;
    }
    if (!pdf_path.empty()) std::filesystem::remove(pdf_path);
    reply_json(res,
               json{{"doc_id", result.doc_id}, {"passages", result.passages}, {"created", result.created}}
                   .dump(),
               result.created ? 201 : 200);
  }
};

ApiServer::ApiServer(Pipeline& pipeline) : impl_(std::make_unique<Impl>(pipeline)) {}
ApiServer::~ApiServer() { stop(); }

void ApiServer::mount_static(const std::filesystem::path& dir) {
  if (!impl_->server.set_mount_point("/", dir.string()))
    throw ValidationError("cannot serve static files from " + dir.string());
}

int ApiServer::bind(const std::string& host, int port) {
  if (port == 0) {
    const int bound = impl_->server.bind_to_any_port(host);
    if (bound < 0) throw Error("cannot bind " + host);
    return bound;
  }
  if (!impl_->server.bind_to_port(host, port))
    throw Error("cannot bind " + host + ":" + std::to_string(port));
  return port;
}

void ApiServer::listen() { impl_->server.listen_after_bind(); }
void ApiServer::stop() {
  if (impl_ && impl_->server.is_running()) impl_->server.stop();
}
bool ApiServer::running() const { return impl_->server.is_running(); }

}  // namespace docqa::service
