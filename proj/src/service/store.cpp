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

#include "asrwb/service/store.hpp"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "asrwb/error.hpp"

namespace asrwb::service {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void io_fail(const std::string& what, const fs::path& p) {
  throw Error(Errc::kIo, what + " " + p.string() + ": " + std::strerror(errno));
}

void write_all(int fd, std::string_view data, const fs::path& p) {
  while (!data.empty()) {
    const ssize_t n = ::write(fd, data.data(), data.size());
    if (n < 0) {
      if (errno == EINTR) continue;
      io_fail("write", p);
    }
    data.remove_prefix(static_cast<std::size_t>(n));
  }
}

void fsync_dir(const fs::path& dir) {
  const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY);
  if (fd < 0) io_fail("open", dir);
  ::fsync(fd);
  ::close(fd);
}

// Temp file in the same directory, fsync, rename over the target, fsync the
// directory. Readers see either the old or the new file.
void atomic_write(const fs::path& target, std::string_view data) {
  fs::path tmp = target;
  tmp += ".tmp";
  const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("open", tmp);
  try {
    write_all(fd, data, tmp);
    if (::fsync(fd) != 0) io_fail("fsync", tmp);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
  if (::rename(tmp.c_str(), target.c_str()) != 0) io_fail("rename", tmp);
  fsync_dir(target.parent_path());
}

void append_durable(const fs::path& target, std::string_view line) {
  const int fd = ::open(target.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) io_fail("open", target);
  try {
    write_all(fd, line, target);
    if (::fsync(fd) != 0) io_fail("fsync", target);
  } catch (...) {
    ::close(fd);
    throw;
  }
  ::close(fd);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) io_fail("open", p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json to_json(const UserAccount& u) {
  return {{"user_id", u.user_id}, {"password_hash", u.password_hash},
          {"language_id", u.language_id}};
}

json to_json(const TranscriptDoc& d) {
  return {{"doc_id", d.doc_id}, {"audio_filename", d.audio_filename}, {"text", d.text},
          {"version", d.version}, {"language_id", d.language_id}};
}

json to_json(const EditRecord& r) {
  return {{"record_id", r.record_id},   {"doc_id", r.doc_id},
          {"user_id", r.user_id},       {"timestamp_ms", r.timestamp_ms},
          {"before_text", r.before_text}, {"after_text", r.after_text},
          {"resulting_version", r.resulting_version}};
}

UserAccount user_from(const json& j) {
  return {j.at("user_id").get<std::string>(), j.at("password_hash").get<std::string>(),
          j.at("language_id").get<std::string>()};
}

TranscriptDoc doc_from(const json& j) {
  return {j.at("doc_id").get<std::string>(), j.at("audio_filename").get<std::string>(),
          j.at("text").get<std::string>(), j.at("version").get<std::uint64_t>(),
          j.at("language_id").get<std::string>()};
}

EditRecord record_from(const json& j) {
  return {j.at("record_id").get<std::uint64_t>(),  j.at("doc_id").get<std::string>(),
          j.at("user_id").get<std::string>(),      j.at("timestamp_ms").get<std::int64_t>(),
          j.at("before_text").get<std::string>(),  j.at("after_text").get<std::string>(),
          j.at("resulting_version").get<std::uint64_t>()};
}

}  // namespace

FileStorage::FileStorage(fs::path root) : root_(std::move(root)) {
  std::error_code ec;
  fs::create_directories(root_ / "docs", ec);
  if (!ec) fs::create_directories(root_ / "txt", ec);
  if (ec) throw Error(Errc::kIo, "cannot create " + root_.string() + ": " + ec.message());
}

bool FileStorage::valid_doc_id(std::string_view id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  return std::all_of(id.begin(), id.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '.' || c == '_' || c == '-';
  });
}

StoreSnapshot FileStorage::load() {
  StoreSnapshot snap;

  const fs::path users_path = root_ / "users.json";
  if (fs::exists(users_path)) {
    try {
      for (const json& j : json::parse(slurp(users_path))) snap.users.push_back(user_from(j));
    } catch (const json::exception& e) {
      throw Error(Errc::kIo, "corrupt " + users_path.string() + ": " + e.what());
    }
  }

  std::map<std::string, TranscriptDoc> docs;
  for (const auto& entry : fs::directory_iterator(root_ / "docs")) {
    if (entry.path().extension() != ".json") continue;
    try {
      TranscriptDoc d = doc_from(json::parse(slurp(entry.path())));
      docs.emplace(d.doc_id, std::move(d));
    } catch (const json::exception& e) {
      throw Error(Errc::kIo, "corrupt " + entry.path().string() + ": " + e.what());
    }
  }

  // A crash mid-append can leave a torn final line; anything after the last
  // newline never got acknowledged, so it is cut off here.
  const fs::path log_path = root_ / "edits.jsonl";
  if (fs::exists(log_path)) {
    const std::string log = slurp(log_path);
    const std::size_t keep = log.rfind('\n') == std::string::npos ? 0 : log.rfind('\n') + 1;
    if (keep != log.size()) {
      fs::resize_file(log_path, keep);
    }
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < keep) {
      const std::size_t nl = log.find('\n', pos);
      ++line_no;
      const std::string_view line(log.data() + pos, nl - pos);
      pos = nl + 1;
      if (line.empty()) continue;
      try {
        snap.records.push_back(record_from(json::parse(line)));
      } catch (const json::exception& e) {
        throw Error(Errc::kIo, "corrupt change log line " + std::to_string(line_no) + ": " +
                                   e.what());
      }
    }
  }

  // Roll documents forward from the log when the doc file lags behind it.
  for (const EditRecord& r : snap.records) {
    next_record_id_ = std::max(next_record_id_, r.record_id + 1);
    auto it = docs.find(r.doc_id);
    if (it == docs.end() || r.resulting_version <= it->second.version) continue;
    it->second.text = r.after_text;
    it->second.version = r.resulting_version;
    write_document_files(it->second);
  }

  for (auto& [id, d] : docs) snap.documents.push_back(std::move(d));
  {
    std::lock_guard lock(users_mu_);
    users_ = snap.users;
  }
  return snap;
}

void FileStorage::put_user(const UserAccount& user) {
  std::lock_guard lock(users_mu_);
  auto it = std::find_if(users_.begin(), users_.end(),
                         [&](const UserAccount& u) { return u.user_id == user.user_id; });
  if (it == users_.end())
    users_.push_back(user);
  else
    *it = user;
  json arr = json::array();
  for (const UserAccount& u : users_) arr.push_back(to_json(u));
  atomic_write(root_ / "users.json", arr.dump(2) + "\n");
}

void FileStorage::write_document_files(const TranscriptDoc& doc) {
  if (!valid_doc_id(doc.doc_id))
    throw Error(Errc::kInvalidArgument, "invalid document id '" + doc.doc_id + "'");
  atomic_write(root_ / "docs" / (doc.doc_id + ".json"), to_json(doc).dump(2) + "\n");
  atomic_write(root_ / "txt" / (doc.doc_id + ".txt"), doc.text);
}

void FileStorage::put_document(const TranscriptDoc& doc) { write_document_files(doc); }

void FileStorage::commit_save(const TranscriptDoc& doc, EditRecord& record) {
  {
    std::lock_guard lock(log_mu_);
    record.record_id = next_record_id_++;
    append_durable(root_ / "edits.jsonl", to_json(record).dump() + "\n");
  }
  write_document_files(doc);
}

}  // namespace asrwb::service
