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

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "asrwb/net/model_io.hpp"
#include "asrwb/service/store.hpp"
#include "asrwb/vad/vad.hpp"

namespace asrwb::service {

struct SessionToken {
  std::string token;
  std::string user_id;
  std::int64_t expires_ms = 0;
};

struct TranscriptSummary {
  std::string doc_id;
  std::string audio_filename;
  std::uint64_t version = 0;
};

enum class NormalizeKind { kNumbers, kAbbreviations };

struct HistoryFilter {
  std::optional<std::string> doc_id;
  std::optional<std::string> user_id;
};

struct RecognizeResult {
  std::vector<vad::SpeechSegment> segments;  // 16 kHz sample indices
  std::vector<int> state_sequence;           // per frame, after gating
  std::vector<std::string> phone_sequence;   // runs collapsed, silence dropped
};

struct ServiceConfig {
  std::filesystem::path data_dir;
  std::optional<std::filesystem::path> model_path;
  std::chrono::milliseconds session_ttl = std::chrono::hours(12);
  vad::VadConfig vad;
  /// Milliseconds since the Unix epoch. Injected so tests can expire sessions.
  std::function<std::int64_t()> clock;
};

std::int64_t system_clock_ms();

/// Every public operation except login() and the admin calls takes a session
/// token and throws Error(kAuthFailed) when it is missing, unknown or
/// expired. Reads of a document take its lock shared; saves take it
/// exclusively, so saves to one document are serialized while reads of any
/// document proceed in parallel.
class CorpusService {
 public:
  explicit CorpusService(ServiceConfig config);
  /// For tests that swap the persistence layer.
  CorpusService(ServiceConfig config, std::unique_ptr<Storage> storage);
  ~CorpusService();

  CorpusService(const CorpusService&) = delete;
  CorpusService& operator=(const CorpusService&) = delete;

  SessionToken login(const std::string& user_id, const std::string& password);
  void logout(const std::string& token);

  std::vector<TranscriptSummary> list_transcripts(const std::string& token) const;
  TranscriptDoc get_transcript(const std::string& token, const std::string& doc_id) const;
  /// Returns the new version. Throws kNotFound or kVersionConflict; on
  /// conflict nothing changes.
  std::uint64_t save_transcript(const std::string& token, const std::string& doc_id,
                                const std::string& new_text, std::uint64_t base_version);
  std::string normalize_selection(const std::string& token, const std::string& text,
                                  NormalizeKind kind) const;
  /// Records in (timestamp, record_id) order.
  std::vector<EditRecord> edit_history(const std::string& token,
                                       const HistoryFilter& filter) const;
  RecognizeResult recognize(const std::string& token,
                            std::span<const std::uint8_t> wav_bytes) const;

  // Administration, used by the CLI; not exposed over HTTP.
  void add_user(const std::string& user_id, const std::string& password,
                const std::string& language_id, int pbkdf2_iterations = 0);
  /// Manifest lines: doc_id <TAB> audio_filename <TAB> transcript_path, the
  /// path relative to the manifest. New docs start at version 1 with no
  /// records; existing ids are skipped. Returns the number imported.
  std::size_t import_manifest(const std::filesystem::path& manifest,
                              const std::string& language_id);
  void set_model(net::Model model);
  bool has_model() const;

  /// Pure pipeline behind recognize(), usable without a session.
  static RecognizeResult run_recognizer(const net::Model& model, const vad::VadConfig& vad,
                                        std::span<const std::uint8_t> wav_bytes);

  const ServiceConfig& config() const { return config_; }

 private:
  struct DocEntry {
    mutable std::shared_mutex mu;
    TranscriptDoc doc;
  };

  std::string authenticate(const std::string& token) const;
  std::shared_ptr<DocEntry> find_doc(const std::string& doc_id) const;
  std::int64_t now_ms() const { return config_.clock(); }

  ServiceConfig config_;
  std::unique_ptr<Storage> storage_;

  mutable std::mutex sessions_mu_;
  mutable std::unordered_map<std::string, SessionToken> sessions_;

  mutable std::shared_mutex users_mu_;
  std::map<std::string, UserAccount> users_;
  std::string dummy_hash_;

  mutable std::shared_mutex docs_mu_;  // guards the map, not the documents
  std::map<std::string, std::shared_ptr<DocEntry>> docs_;

  mutable std::shared_mutex records_mu_;
  std::vector<EditRecord> records_;

  mutable std::shared_mutex model_mu_;
  std::shared_ptr<const net::Model> model_;
};

}  // namespace asrwb::service
