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

#include "asrwb/service/service.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "asrwb/audio/audio.hpp"
#include "asrwb/error.hpp"
#include "asrwb/net/features.hpp"
#include "asrwb/net/train.hpp"
#include "asrwb/service/auth.hpp"
#include "asrwb/textnorm/textnorm.hpp"

namespace asrwb::service {
namespace fs = std::filesystem;

std::int64_t system_clock_ms() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

CorpusService::CorpusService(ServiceConfig config)
    : CorpusService(config, std::make_unique<FileStorage>(config.data_dir)) {}

CorpusService::CorpusService(ServiceConfig config, std::unique_ptr<Storage> storage)
    : config_(std::move(config)), storage_(std::move(storage)) {
  if (!config_.clock) config_.clock = system_clock_ms;
  config_.vad.validate();

  StoreSnapshot snap = storage_->load();
  for (UserAccount& u : snap.users) users_.emplace(u.user_id, std::move(u));
  for (TranscriptDoc& d : snap.documents) {
    auto entry = std::make_shared<DocEntry>();
    entry->doc = std::move(d);
    docs_.emplace(entry->doc.doc_id, std::move(entry));
  }
  records_ = std::move(snap.records);
  // Unknown users are checked against this so both failure paths cost one
  // PBKDF2 evaluation.
  dummy_hash_ = hash_password(random_token());

  if (config_.model_path) set_model(net::load_model(*config_.model_path));
}

CorpusService::~CorpusService() = default;

SessionToken CorpusService::login(const std::string& user_id, const std::string& password) {
  std::string stored;
  {
    std::shared_lock lock(users_mu_);
    const auto it = users_.find(user_id);
    stored = it == users_.end() ? std::string() : it->second.password_hash;
  }
  const bool known = !stored.empty();
  const bool ok = verify_password(password, known ? stored : dummy_hash_);
  if (!known || !ok) throw Error(Errc::kAuthFailed, "invalid credentials");

  SessionToken s{random_token(), user_id, now_ms() + config_.session_ttl.count()};
  std::lock_guard lock(sessions_mu_);
  sessions_.emplace(s.token, s);
  return s;
}

void CorpusService::logout(const std::string& token) {
  std::lock_guard lock(sessions_mu_);
  sessions_.erase(token);
}

std::string CorpusService::authenticate(const std::string& token) const {
  std::lock_guard lock(sessions_mu_);
  const auto it = sessions_.find(token);
  if (it == sessions_.end()) throw Error(Errc::kAuthFailed, "invalid session");
  if (it->second.expires_ms <= now_ms()) {
    sessions_.erase(it);
    throw Error(Errc::kAuthFailed, "session expired");
  }
  return it->second.user_id;
}

std::shared_ptr<CorpusService::DocEntry> CorpusService::find_doc(
    const std::string& doc_id) const {
  std::shared_lock lock(docs_mu_);
  const auto it = docs_.find(doc_id);
  if (it == docs_.end()) throw Error(Errc::kNotFound, "no document '" + doc_id + "'");
  return it->second;
}

std::vector<TranscriptSummary> CorpusService::list_transcripts(const std::string& token) const {
  const std::string user_id = authenticate(token);
  std::string language;
  {
    std::shared_lock lock(users_mu_);
    const auto it = users_.find(user_id);
    if (it == users_.end()) throw Error(Errc::kAuthFailed, "account removed");
    language = it->second.language_id;
  }
  std::vector<std::shared_ptr<DocEntry>> entries;
  {
    std::shared_lock lock(docs_mu_);
    for (const auto& [id, e] : docs_) entries.push_back(e);
  }
  std::vector<TranscriptSummary> out;
  for (const auto& e : entries) {
    std::shared_lock lock(e->mu);
    if (e->doc.language_id == language)
      out.push_back({e->doc.doc_id, e->doc.audio_filename, e->doc.version});
  }
  return out;
}

TranscriptDoc CorpusService::get_transcript(const std::string& token,
                                            const std::string& doc_id) const {
  authenticate(token);
  const auto entry = find_doc(doc_id);
  std::shared_lock lock(entry->mu);
  return entry->doc;
}

std::uint64_t CorpusService::save_transcript(const std::string& token,
                                             const std::string& doc_id,
                                             const std::string& new_text,
                                             std::uint64_t base_version) {
  const std::string user_id = authenticate(token);
  const auto entry = find_doc(doc_id);

  std::unique_lock doc_lock(entry->mu);
  if (base_version != entry->doc.version)
    throw Error(Errc::kVersionConflict, "document '" + doc_id + "' is at version " +
                                            std::to_string(entry->doc.version));
  TranscriptDoc next = entry->doc;
  next.text = new_text;
  next.version = entry->doc.version + 1;

  EditRecord record;
  record.doc_id = doc_id;
  record.user_id = user_id;
  record.timestamp_ms = now_ms();
  record.before_text = entry->doc.text;
  record.after_text = new_text;
  record.resulting_version = next.version;
  storage_->commit_save(next, record);

  // Both locks held: no reader sees the new version without its record.
  std::unique_lock records_lock(records_mu_);
  records_.push_back(record);
  entry->doc = std::move(next);
  return entry->doc.version;
}

std::string CorpusService::normalize_selection(const std::string& token,
                                               const std::string& text,
                                               NormalizeKind kind) const {
  authenticate(token);
  textnorm::NormalizeOptions opts;
  opts.numbers = kind == NormalizeKind::kNumbers;
  opts.abbreviations = kind == NormalizeKind::kAbbreviations;
  // Unknown abbreviations and out-of-range numbers come back unchanged.
  return textnorm::normalize_text(text, textnorm::NumberWordTable::bundled(),
                                  textnorm::AbbrevTable::bundled(), opts);
}

std::vector<EditRecord> CorpusService::edit_history(const std::string& token,
                                                    const HistoryFilter& filter) const {
  authenticate(token);
  std::vector<EditRecord> out;
  {
    std::shared_lock lock(records_mu_);
    for (const EditRecord& r : records_) {
      if (filter.doc_id && r.doc_id != *filter.doc_id) continue;
      if (filter.user_id && r.user_id != *filter.user_id) continue;
      out.push_back(r);
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const EditRecord& a, const EditRecord& b) {
    return a.timestamp_ms != b.timestamp_ms ? a.timestamp_ms < b.timestamp_ms
                                            : a.record_id < b.record_id;
  });
  return out;
}

RecognizeResult CorpusService::run_recognizer(const net::Model& model,
                                              const vad::VadConfig& vad_cfg,
                                              std::span<const std::uint8_t> wav_bytes) {
  const audio::AudioBuffer mono = audio::to_mono_16k(audio::parse_wav(wav_bytes));
  RecognizeResult result;
  if (mono.samples.empty()) return result;
  result.segments = vad::detect_segments(mono, vad_cfg);
  if (result.segments.empty()) return result;

  const audio::AudioBuffer gated = vad::gate_audio(mono, result.segments);
  if (gated.samples.size() < model.features.window_samples) return result;
  const net::FeatureMatrix feats = net::extract_features(gated, model.features);
  if (feats.frames.cols() != model.net.input_dim())
    throw Error(Errc::kShapeMismatch, "model expects " +
                                          std::to_string(model.net.input_dim()) +
                                          " features per frame");

  const net::Activations acts = net::forward(model.net, feats.frames);
  result.state_sequence = net::argmax_rows(acts.posteriors());

  const bool labelled =
      model.topology && model.topology->total_states() == model.net.output_dim();
  // A phone spans up to three consecutive states, so runs collapse on the label.
  std::string previous;
  for (int s : result.state_sequence) {
    std::string label = labelled ? model.topology->state_phone(s) : "s" + std::to_string(s);
    if (label != previous && label != "sil") result.phone_sequence.push_back(label);
    previous = std::move(label);
  }
  return result;
}

RecognizeResult CorpusService::recognize(const std::string& token,
                                         std::span<const std::uint8_t> wav_bytes) const {
  authenticate(token);
  std::shared_ptr<const net::Model> model;
  {
    std::shared_lock lock(model_mu_);
    model = model_;
  }
  if (!model) throw Error(Errc::kNoModelLoaded, "no model loaded");
  return run_recognizer(*model, config_.vad, wav_bytes);
}

void CorpusService::add_user(const std::string& user_id, const std::string& password,
                             const std::string& language_id, int pbkdf2_iterations) {
  if (user_id.empty()) throw Error(Errc::kInvalidArgument, "empty user id");
  if (password.empty()) throw Error(Errc::kInvalidArgument, "empty password");
  UserAccount account{user_id,
                      hash_password(password, pbkdf2_iterations > 0
                                                  ? pbkdf2_iterations
                                                  : kDefaultPbkdf2Iterations),
                      language_id};
  std::unique_lock lock(users_mu_);
  storage_->put_user(account);
  users_[user_id] = std::move(account);
}

std::size_t CorpusService::import_manifest(const fs::path& manifest,
                                           const std::string& language_id) {
  std::ifstream in(manifest, std::ios::binary);
  if (!in) throw Error(Errc::kIo, "cannot open manifest " + manifest.string());
  const fs::path base = manifest.parent_path();

  std::size_t imported = 0;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    std::vector<std::string> cols;
    std::size_t pos = 0;
    for (;;) {
      const std::size_t tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    const std::string where = "manifest line " + std::to_string(line_no);
    if (cols.size() != 3) throw Error(Errc::kInvalidArgument, where + ": expected 3 columns");
    if (!FileStorage::valid_doc_id(cols[0]))
      throw Error(Errc::kInvalidArgument, where + ": invalid doc id '" + cols[0] + "'");

    std::ifstream txt(base / cols[2], std::ios::binary);
    if (!txt) throw Error(Errc::kIo, where + ": cannot open " + (base / cols[2]).string());
    std::ostringstream ss;
    ss << txt.rdbuf();
    std::string text = ss.str();
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();

    TranscriptDoc doc{cols[0], cols[1], std::move(text), 1, language_id};
    std::unique_lock lock(docs_mu_);
    if (docs_.count(doc.doc_id) != 0) continue;
    storage_->put_document(doc);
    auto entry = std::make_shared<DocEntry>();
    entry->doc = std::move(doc);
    docs_.emplace(entry->doc.doc_id, std::move(entry));
    ++imported;
  }
  return imported;
}

void CorpusService::set_model(net::Model model) {
  auto shared = std::make_shared<const net::Model>(std::move(model));
  std::unique_lock lock(model_mu_);
  model_ = std::move(shared);
}

bool CorpusService::has_model() const {
  std::shared_lock lock(model_mu_);
  return model_ != nullptr;
}

}  // namespace asrwb::service
