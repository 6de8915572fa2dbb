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

#include <cstdint>
#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

namespace asrwb::service {

struct UserAccount {
  std::string user_id;
  std::string password_hash;
  std::string language_id;
  bool operator==(const UserAccount&) const = default;
};

struct TranscriptDoc {
  std::string doc_id;
  std::string audio_filename;
  std::string text;
  std::uint64_t version = 1;
  std::string language_id;
  bool operator==(const TranscriptDoc&) const = default;
};

struct EditRecord {
  std::uint64_t record_id = 0;
  std::string doc_id;
  std::string user_id;
  std::int64_t timestamp_ms = 0;  // UTC
  std::string before_text;
  std::string after_text;
  std::uint64_t resulting_version = 0;
  bool operator==(const EditRecord&) const = default;
};

struct StoreSnapshot {
  std::vector<UserAccount> users;
  std::vector<TranscriptDoc> documents;
  std::vector<EditRecord> records;  // log order
};

/// Persistence behind the corpus service. Implementations must make
/// commit_save durable before returning: after a crash the record and the
/// document either both survive or the document can be rebuilt from the log.
class Storage {
 public:
  virtual ~Storage() = default;

  virtual StoreSnapshot load() = 0;
  virtual void put_user(const UserAccount& user) = 0;
  virtual void put_document(const TranscriptDoc& doc) = 0;
  /// Assigns record.record_id, appends the record, then stores `doc`.
  virtual void commit_save(const TranscriptDoc& doc, EditRecord& record) = 0;
};

/// Directory layout:
///   users.json            accounts
///   docs/<id>.json        one file per transcript
///   txt/<id>.txt          plain-text export, rewritten on each save
///   edits.jsonl           append-only change log, one JSON record per line
/// Every write is fsynced; whole-file writes go through a temp file + rename.
class FileStorage final : public Storage {
 public:
  explicit FileStorage(std::filesystem::path root);

  StoreSnapshot load() override;
  void put_user(const UserAccount& user) override;
  void put_document(const TranscriptDoc& doc) override;
  void commit_save(const TranscriptDoc& doc, EditRecord& record) override;

  const std::filesystem::path& root() const { return root_; }

  /// Document ids become file names, so they are restricted to
  /// [A-Za-z0-9._-], 1..128 chars, not starting with '.'.
  static bool valid_doc_id(std::string_view id);

 private:
  void write_document_files(const TranscriptDoc& doc);

  std::filesystem::path root_;
  std::mutex users_mu_;
  std::mutex log_mu_;
  std::uint64_t next_record_id_ = 1;
  std::vector<UserAccount> users_;
};

}  // namespace asrwb::service
