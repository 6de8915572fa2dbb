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

#include "asrwb/service/http.hpp"

#include <openssl/evp.h>

#include <httplib.h>

#include <json.hpp>

namespace asrwb::service {
using nlohmann::json;

int http_status(Errc code) {
  switch (code) {
    case Errc::kAuthFailed: return 401;
    case Errc::kNotFound: return 404;
    case Errc::kVersionConflict: return 409;
    case Errc::kNoModelLoaded: return 503;
    case Errc::kIo: return 500;
    default: return 400;
  }
}

namespace {

void send_json(httplib::Response& res, const json& body, int status = 200) {
  res.status = status;
  res.set_content(body.dump(), "application/json; charset=utf-8");
}

void send_error(httplib::Response& res, Errc code, const std::string& message) {
  send_json(res, {{"error", errc_name(code)}, {"message", message}}, http_status(code));
}

std::string bearer_token(const httplib::Request& req) {
  const std::string h = req.get_header_value("Authorization");
  constexpr std::string_view kPrefix = "Bearer ";
  if (h.size() <= kPrefix.size() || h.compare(0, kPrefix.size(), kPrefix) != 0) return {};
  return h.substr(kPrefix.size());
}

json parse_body(const httplib::Request& req) {
  try {
    return json::parse(req.body);
  } catch (const json::exception& e) {
    throw Error(Errc::kInvalidArgument, std::string("request body is not JSON: ") + e.what());
  }
}

template <typename T>
T field(const json& body, const char* name) {
  const auto it = body.find(name);
  if (it == body.end()) throw Error(Errc::kInvalidArgument, std::string("missing field ") + name);
  try {
    return it->get<T>();
  } catch (const json::exception&) {
    throw Error(Errc::kInvalidArgument, std::string("field ") + name + " has the wrong type");
  }
}

std::vector<std::uint8_t> base64_decode(std::string_view in) {
  std::string clean;
  clean.reserve(in.size());
  for (char c : in)
    if (c != '\n' && c != '\r' && c != ' ') clean.push_back(c);
  if (clean.size() % 4 != 0) throw Error(Errc::kInvalidArgument, "bad base64 length");
  std::vector<std::uint8_t> out(clean.size() / 4 * 3);
  const int n = EVP_DecodeBlock(out.data(), reinterpret_cast<const unsigned char*>(clean.data()),
                                static_cast<int>(clean.size()));
  if (n < 0) throw Error(Errc::kInvalidArgument, "bad base64 payload");
  // EVP_DecodeBlock counts padding as zero bytes.
  std::size_t pad = 0;
  if (!clean.empty() && clean.back() == '=') ++pad;
  if (clean.size() > 1 && clean[clean.size() - 2] == '=') ++pad;
  out.resize(static_cast<std::size_t>(n) - pad);
  return out;
}

json doc_json(const TranscriptDoc& d) {
  return {{"doc_id", d.doc_id}, {"audio_filename", d.audio_filename}, {"text", d.text},
          {"version", d.version}, {"language_id", d.language_id}};
}

json record_json(const EditRecord& r) {
  return {{"record_id", r.record_id},       {"doc_id", r.doc_id},
          {"user_id", r.user_id},           {"timestamp_ms", r.timestamp_ms},
          {"before_text", r.before_text},   {"after_text", r.after_text},
          {"resulting_version", r.resulting_version}};
}

}  // namespace

struct HttpServer::Impl {
  CorpusService& service;
  HttpOptions options;
  httplib::Server server;

  Impl(CorpusService& s, HttpOptions o) : service(s), options(std::move(o)) {}

  // Every handler runs through here so errors map to one JSON shape.
  template <typename F>
  httplib::Server::Handler wrap(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const Error& e) {
        send_error(res, e.code(), e.what());
      } catch (const std::exception& e) {
        send_error(res, Errc::kIo, e.what());
      }
    };
  }

  void routes() {
    server.Post("/api/login", wrap([this](const auto& req, auto& res) {
      const json body = parse_body(req);
      const SessionToken s = service.login(field<std::string>(body, "user_id"),
                                           field<std::string>(body, "password"));
      send_json(res, {{"token", s.token}, {"user_id", s.user_id}, {"expires_ms", s.expires_ms}});
    }));

    server.Get("/api/transcripts", wrap([this](const auto& req, auto& res) {
      json out = json::array();
      for (const TranscriptSummary& t : service.list_transcripts(bearer_token(req)))
        out.push_back(
            {{"doc_id", t.doc_id}, {"audio_filename", t.audio_filename}, {"version", t.version}});
      send_json(res, out);
    }));

    server.Get(R"(/api/transcripts/([^/]+))", wrap([this](const auto& req, auto& res) {
      send_json(res, doc_json(service.get_transcript(bearer_token(req), req.matches[1])));
    }));

    server.Put(R"(/api/transcripts/([^/]+))", wrap([this](const auto& req, auto& res) {
      const std::string token = bearer_token(req);
      const json body = parse_body(req);
      const std::uint64_t v =
          service.save_transcript(token, req.matches[1], field<std::string>(body, "text"),
                                  field<std::uint64_t>(body, "base_version"));
      send_json(res, {{"new_version", v}});
    }));

    server.Post("/api/normalize", wrap([this](const auto& req, auto& res) {
      const std::string token = bearer_token(req);
      const json body = parse_body(req);
      const std::string kind = field<std::string>(body, "kind");
      NormalizeKind k;
      if (kind == "numbers")
        k = NormalizeKind::kNumbers;
      else if (kind == "abbrev")
        k = NormalizeKind::kAbbreviations;
      else
        throw Error(Errc::kInvalidArgument, "kind must be numbers or abbrev");
      send_json(res, {{"text", service.normalize_selection(token, field<std::string>(body, "text"), k)}});
    }));

    server.Get("/api/edits", wrap([this](const auto& req, auto& res) {
      HistoryFilter f;
      if (req.has_param("doc")) f.doc_id = req.get_param_value("doc");
      if (req.has_param("user")) f.user_id = req.get_param_value("user");
      json out = json::array();
      for (const EditRecord& r : service.edit_history(bearer_token(req), f))
        out.push_back(record_json(r));
      send_json(res, out);
    }));

    server.Post("/api/recognize", wrap([this](const auto& req, auto& res) {
      const std::string token = bearer_token(req);
      std::vector<std::uint8_t> wav;
      if (req.is_multipart_form_data()) {
        if (!req.has_file("audio"))
          throw Error(Errc::kInvalidArgument, "multipart body lacks an 'audio' part");
        const std::string& c = req.get_file_value("audio").content;
        wav.assign(c.begin(), c.end());
      } else if (req.get_header_value("Content-Type").rfind("application/json", 0) == 0) {
        wav = base64_decode(field<std::string>(parse_body(req), "audio"));
      } else {
        wav.assign(req.body.begin(), req.body.end());
      }
      const RecognizeResult r = service.recognize(token, wav);
      json segs = json::array();
      for (const auto& s : r.segments)
        segs.push_back({{"start_sample", s.start_sample}, {"end_sample", s.end_sample}});
      send_json(res, {{"segments", segs},
                      {"state_sequence", r.state_sequence},
                      {"phone_sequence", r.phone_sequence}});
    }));

    const auto audio_dir = options.audio_dir.value_or(service.config().data_dir / "audio");
    if (std::filesystem::is_directory(audio_dir))
      server.set_mount_point("/audio", audio_dir.string());
    if (options.ui_dir && std::filesystem::is_directory(*options.ui_dir))
      server.set_mount_point("/", options.ui_dir->string());
  }
};

HttpServer::HttpServer(CorpusService& service, HttpOptions options)
    : impl_(std::make_unique<Impl>(service, std::move(options))) {
  const std::size_t n = std::max<std::size_t>(1, impl_->options.worker_threads);
  impl_->server.new_task_queue = [n] { return new httplib::ThreadPool(n); };
  impl_->routes();
}

HttpServer::~HttpServer() { stop(); }

int HttpServer::bind() {
  const HttpOptions& o = impl_->options;
  int port = o.port;
  if (port == 0) {
    port = impl_->server.bind_to_any_port(o.host);
    if (port < 0) throw Error(Errc::kIo, "cannot bind " + o.host);
  } else if (!impl_->server.bind_to_port(o.host, port)) {
    throw Error(Errc::kIo, "cannot bind " + o.host + ":" + std::to_string(port));
  }
  return port;
}

void HttpServer::listen() { impl_->server.listen_after_bind(); }

int HttpServer::start() {
  const int port = bind();
  thread_ = std::thread([this] { listen(); });
  impl_->server.wait_until_ready();
  return port;
}

void HttpServer::stop() {
  impl_->server.stop();
  if (thread_.joinable()) thread_.join();
}

}  // namespace asrwb::service
