// Copyright (c) 2026 The asrwb Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "asrwb/error.hpp"
#include "asrwb/service/service.hpp"

namespace asrwb::service {

struct HttpOptions {
  std::string host = "127.0.0.1";
  int port = 8080;  // 0 picks a free port
  std::size_t worker_threads = 16;
  /// Served at /audio/ for playback; defaults to <data_dir>/audio.
  std::optional<std::filesystem::path> audio_dir;
  /// Static browser client served at /, if present.
  std::optional<std::filesystem::path> ui_dir;
};

/// 401 auth, 404 not found, 409 version conflict, 503 no model, 500 I/O,
/// 400 for everything else the request got wrong.
int http_status(Errc code);

/// JSON over HTTP in front of a CorpusService:
///   POST /api/login             {"user_id","password"} -> {"token","user_id","expires_ms"}
///   GET  /api/transcripts       -> [{"doc_id","audio_filename","version"}]
///   GET  /api/transcripts/{id}  -> {"doc_id","audio_filename","text","version","language_id"}
///   PUT  /api/transcripts/{id}  {"text","base_version"} -> {"new_version"}
///   POST /api/normalize         {"text","kind":"numbers"|"abbrev"} -> {"text"}
///   GET  /api/edits?doc=|user=  -> [EditRecord]
///   POST /api/recognize         WAV as {"audio": base64}, multipart field
///                               "audio", or a raw audio/wav body
/// Authenticated routes expect "Authorization: Bearer <token>". Errors are
/// {"error": <code>, "message": <text>}.
class HttpServer {
 public:
  HttpServer(CorpusService& service, HttpOptions options);
  ~HttpServer();

  HttpServer(const HttpServer&) = delete;
  HttpServer& operator=(const HttpServer&) = delete;

  /// Binds the socket and returns the bound port.
  int bind();
  /// Blocks until stop() is called from another thread.
  void listen();
  /// bind() + listen() on a background thread; returns the bound port.
  int start();
  void stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  std::thread thread_;
};

}  // namespace asrwb::service
