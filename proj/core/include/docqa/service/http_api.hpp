#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "docqa/service/pipeline.hpp"

namespace docqa::service {

// HTTP API over a Pipeline:
//   POST /documents               multipart: pdf, sidecar?, chars?, title?, mode?
//                                 -> {doc_id, passages, created}
//   GET  /documents               -> [{doc_id, title, passages, source}]
//   GET  /documents/{id}/passages -> [passage, ...]
//   POST /documents/{id}/ask      {question, k?, retriever?} -> AskResponse
//   GET  /healthz                 -> {"status":"ok"}
// Errors come back as {"error": message} with 400 (bad input), 404 (unknown
// document), 502 (backend stage failure) or 500.
class ApiServer {
 public:
  explicit ApiServer(Pipeline& pipeline);
  ~ApiServer();
  ApiServer(const ApiServer&) = delete;
  ApiServer& operator=(const ApiServer&) = delete;

  // Serves files from `dir` under "/" (e.g. a built web client).
  void mount_static(const std::filesystem::path& dir);

  // Returns the bound port; pass 0 to pick a free one.
  int bind(const std::string& host, int port);
  // Blocks until stop() is called.
  void listen();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace docqa::service
