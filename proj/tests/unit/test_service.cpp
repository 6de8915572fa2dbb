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

#include <doctest.h>

#include <atomic>
#include <filesystem>
#include <thread>

#include "asrwb/error.hpp"
#include "asrwb/service/auth.hpp"
#include "asrwb/net/features.hpp"
#include "asrwb/net/train.hpp"
#include "asrwb/service/service.hpp"
#include "support/service_fixture.hpp"
#include "support/toy_model.hpp"

using namespace asrwb;
using service::CorpusService;

namespace {

Errc error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::kIo;  // sentinel: no error
}

service::ServiceConfig config_for(const fixture::TempDir& dir) {
  service::ServiceConfig cfg;
  cfg.data_dir = dir.path();
  return cfg;
}

}  // namespace

TEST_CASE("password hashes are salted and verify in constant time") {
  const std::string h1 = service::hash_password("secret", 1000);
  const std::string h2 = service::hash_password("secret", 1000);
  CHECK(h1 != h2);
  CHECK(h1.rfind("pbkdf2-sha256$1000$", 0) == 0);
  CHECK(service::verify_password("secret", h1));
  CHECK(!service::verify_password("Secret", h1));
  CHECK(!service::verify_password("secret", ""));
  CHECK(!service::verify_password("secret", "pbkdf2-sha256$x$00$00"));
  CHECK(service::random_token().size() == 64);
  CHECK(service::random_token() != service::random_token());
}

TEST_CASE("login: wrong password and unknown user fail identically") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  std::string msg_wrong, msg_unknown;
  try {
    svc.login("asha", "nope");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kAuthFailed);
    msg_wrong = e.what();
  }
  try {
    svc.login("nobody", "nope");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::kAuthFailed);
    msg_unknown = e.what();
  }
  CHECK(!msg_wrong.empty());
  CHECK(msg_wrong == msg_unknown);
}

TEST_CASE("parallel sessions per user; logout and expiry end them") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  std::atomic<std::int64_t> now{1'000'000};
  auto cfg = config_for(dir);
  cfg.session_ttl = std::chrono::minutes(1);
  cfg.clock = [&now] { return now.load(); };
  CorpusService svc(cfg);

  const auto a = svc.login("asha", "pw-asha");
  const auto b = svc.login("asha", "pw-asha");
  CHECK(a.token != b.token);
  CHECK(svc.list_transcripts(a.token).size() == 2);
  CHECK(svc.list_transcripts(b.token).size() == 2);

  svc.logout(a.token);
  CHECK(error_of([&] { svc.list_transcripts(a.token); }) == Errc::kAuthFailed);

  now += 60'000;
  CHECK(error_of([&] { svc.list_transcripts(b.token); }) == Errc::kAuthFailed);
  CHECK(error_of([&] { svc.get_transcript(b.token, "utt001"); }) == Errc::kAuthFailed);
  CHECK(error_of([&] { svc.save_transcript(b.token, "utt001", "x", 1); }) == Errc::kAuthFailed);
  CHECK(error_of([&] { svc.normalize_selection(b.token, "1", service::NormalizeKind::kNumbers); }) ==
        Errc::kAuthFailed);
  CHECK(error_of([&] { svc.edit_history(b.token, {}); }) == Errc::kAuthFailed);
  CHECK(error_of([&] { svc.recognize(b.token, {}); }) == Errc::kAuthFailed);
  CHECK(error_of([&] { svc.list_transcripts(""); }) == Errc::kAuthFailed);
}

TEST_CASE("listing filters by the user's language and never mutates") {
  fixture::TempDir empty_dir;
  CorpusService empty(config_for(empty_dir));
  empty.add_user("u", "p", "hi", fixture::kTestPbkdf2Iterations);
  CHECK(empty.list_transcripts(empty.login("u", "p").token).empty());

  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  const auto hi = svc.list_transcripts(svc.login("asha", "pw-asha").token);
  REQUIRE(hi.size() == 2);
  CHECK(hi[0].doc_id == "utt001");
  CHECK(hi[0].audio_filename == "utt001.wav");
  CHECK(hi[0].version == 1);
  const auto ta = svc.list_transcripts(svc.login("kavya", "pw-kavya").token);
  REQUIRE(ta.size() == 1);
  CHECK(ta[0].doc_id == "ta001");
  const auto again = svc.list_transcripts(svc.login("asha", "pw-asha").token);
  CHECK(again.size() == 2);
  CHECK(again[0].version == 1);
}

TEST_CASE("save: version bump, one record, txt export; conflicts change nothing") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("ravi", "pw-ravi").token;

  const auto doc = svc.get_transcript(t, "utt001");
  CHECK(doc.text == "मैं 19 किताबें पढ़ता हूँ");
  CHECK(svc.edit_history(t, {"utt001", {}}).empty());

  CHECK(svc.save_transcript(t, "utt001", "नया पाठ", 1) == 2);
  const auto recs = svc.edit_history(t, {"utt001", {}});
  REQUIRE(recs.size() == 1);
  CHECK(recs[0].user_id == "ravi");
  CHECK(recs[0].before_text == doc.text);
  CHECK(recs[0].after_text == "नया पाठ");
  CHECK(recs[0].resulting_version == 2);
  CHECK(fixture::read_file(dir.path() / "txt" / "utt001.txt") == "नया पाठ");

  CHECK(error_of([&] { svc.save_transcript(t, "utt001", "stale", 1); }) == Errc::kVersionConflict);
  CHECK(svc.get_transcript(t, "utt001").text == "नया पाठ");
  CHECK(svc.edit_history(t, {}).size() == 1);
  CHECK(error_of([&] { svc.save_transcript(t, "nope", "x", 1); }) == Errc::kNotFound);
  CHECK(error_of([&] { svc.get_transcript(t, "nope"); }) == Errc::kNotFound);
}

TEST_CASE("two concurrent saves at the same base: exactly one wins") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("asha", "pw-asha").token;
  for (int round = 0; round < 20; ++round) {
    const std::uint64_t base = svc.get_transcript(t, "utt002").version;
    std::atomic<int> wins{0}, conflicts{0};
    std::vector<std::thread> threads;
    for (int i = 0; i < 2; ++i)
      threads.emplace_back([&, i] {
        try {
          svc.save_transcript(t, "utt002", "r" + std::to_string(round) + "-" + std::to_string(i), base);
          ++wins;
        } catch (const Error& e) {
          if (e.code() == Errc::kVersionConflict) ++conflicts;
        }
      });
    for (auto& th : threads) th.join();
    CHECK(wins == 1);
    CHECK(conflicts == 1);
  }
  const auto recs = svc.edit_history(t, {"utt002", {}});
  CHECK(recs.size() == 20);
  CHECK(svc.get_transcript(t, "utt002").version == 21);
  for (std::size_t i = 0; i < recs.size(); ++i) CHECK(recs[i].resulting_version == i + 2);
}

TEST_CASE("edit history filters by user and orders by time") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  std::int64_t now = 5000;
  auto cfg = config_for(dir);
  cfg.clock = [&now] { return now; };
  CorpusService svc(cfg);
  const std::string a = svc.login("asha", "pw-asha").token, r = svc.login("ravi", "pw-ravi").token;
  now = 7000;
  svc.save_transcript(a, "utt001", "one", 1);
  now = 6000;  // clocks may step back; order follows timestamps
  svc.save_transcript(r, "utt002", "two", 1);
  now = 8000;
  svc.save_transcript(a, "utt002", "three", 2);

  const auto all = svc.edit_history(a, {});
  REQUIRE(all.size() == 3);
  CHECK(all[0].after_text == "two");
  CHECK(all[1].after_text == "one");
  CHECK(all[2].after_text == "three");
  const auto by_asha = svc.edit_history(a, {{}, "asha"});
  CHECK(by_asha.size() == 2);
  for (const auto& rec : by_asha) CHECK(rec.user_id == "asha");
  CHECK(svc.edit_history(a, {"utt002", "ravi"}).size() == 1);
}

TEST_CASE("normalize_selection delegates to textnorm") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("asha", "pw-asha").token;
  using service::NormalizeKind;
  CHECK(svc.normalize_selection(t, "19", NormalizeKind::kNumbers) == "उन्नीस");
  CHECK(svc.normalize_selection(t, "डॉ.", NormalizeKind::kAbbreviations) == "डॉक्टर");
  CHECK(svc.normalize_selection(t, "अज्ञ.", NormalizeKind::kAbbreviations) == "अज्ञ.");
  CHECK(svc.normalize_selection(t, "डॉ. 19", NormalizeKind::kNumbers) == "डॉ. उन्नीस");
  CHECK(svc.normalize_selection(t, "", NormalizeKind::kNumbers).empty());
}

TEST_CASE("recognize pipeline") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("asha", "pw-asha").token;
  const auto loud = audio::write_wav(fixture::loud_audio(16000, 1, 0.5));
  CHECK(error_of([&] { svc.recognize(t, loud); }) == Errc::kNoModelLoaded);

  svc.set_model(fixture::toy_model(2));
  CHECK(svc.has_model());
  const auto r = svc.recognize(t, loud);
  REQUIRE(r.segments.size() == 1);
  CHECK(r.segments[0] == vad::SpeechSegment{0, 8000});
  CHECK(r.state_sequence.size() == net::frame_count(8000, 400, 160));
  for (int s : r.state_sequence) CHECK(s == 2);
  CHECK(r.phone_sequence == std::vector<std::string>{"a"});

  // The forward pass itself is the oracle for the dominant state.
  const auto model = fixture::toy_model(5);
  svc.set_model(model);
  const auto feats = net::extract_features(audio::parse_wav(loud));
  const auto expect = net::argmax_rows(net::forward(model.net, feats.frames).posteriors());
  const auto r5 = svc.recognize(t, loud);
  CHECK(r5.state_sequence == expect);
  CHECK(r5.phone_sequence == std::vector<std::string>{"k"});

  audio::AudioBuffer silence;
  silence.samples.assign(16000, 0.0f);
  const auto quiet = svc.recognize(t, audio::write_wav(silence));
  CHECK(quiet.segments.empty());
  CHECK(quiet.phone_sequence.empty());

  const auto stereo = svc.recognize(t, audio::write_wav(fixture::loud_audio(44100, 2, 0.3)));
  CHECK(!stereo.segments.empty());
  CHECK(stereo.phone_sequence == std::vector<std::string>{"k"});

  const std::vector<std::uint8_t> junk{'R', 'I', 'F', 'F', 0, 0};
  CHECK(error_of([&] { svc.recognize(t, junk); }) == Errc::kMalformedContainer);
}

TEST_CASE("state survives a restart exactly") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  std::vector<service::EditRecord> before;
  service::TranscriptDoc doc_before;
  {
    CorpusService svc(config_for(dir));
    const std::string t = svc.login("asha", "pw-asha").token;
    svc.save_transcript(t, "utt001", "पहला", 1);
    svc.save_transcript(t, "utt001", "दूसरा\nपंक्ति \"quoted\"", 2);
    before = svc.edit_history(t, {});
    doc_before = svc.get_transcript(t, "utt001");
  }
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("asha", "pw-asha").token;
  CHECK(svc.edit_history(t, {}) == before);
  CHECK(svc.get_transcript(t, "utt001") == doc_before);
  CHECK(svc.save_transcript(t, "utt001", "तीसरा", 3) == 4);
  CHECK(svc.edit_history(t, {}).back().record_id > before.back().record_id);
}

TEST_CASE("recovery replays the log over a stale document and drops a torn tail") {
  fixture::TempDir dir;
  fixture::seed_corpus(dir.path());
  const auto doc_path = dir.path() / "docs" / "utt001.json";
  const std::string v1 = fixture::read_file(doc_path);
  {
    CorpusService svc(config_for(dir));
    const std::string t = svc.login("asha", "pw-asha").token;
    svc.save_transcript(t, "utt001", "बाद वाला", 1);
  }
  // Crash between the log append and the document rename.
  fixture::write_file(doc_path, v1);
  {
    std::ofstream log(dir.path() / "edits.jsonl", std::ios::app | std::ios::binary);
    log << "{\"record_id\": 99, \"doc_";
  }
  CorpusService svc(config_for(dir));
  const std::string t = svc.login("asha", "pw-asha").token;
  const auto doc = svc.get_transcript(t, "utt001");
  CHECK(doc.version == 2);
  CHECK(doc.text == "बाद वाला");
  CHECK(svc.edit_history(t, {}).size() == 1);
  CHECK(svc.save_transcript(t, "utt001", "फिर", 2) == 3);
  CHECK(fixture::read_file(dir.path() / "txt" / "utt001.txt") == "फिर");
}

TEST_CASE("manifest import") {
  fixture::TempDir dir;
  CorpusService svc(config_for(dir));
  fixture::write_file(dir.path() / "a.txt", "पाठ\n");
  fixture::write_file(dir.path() / "m.tsv", "# header\nx1\tx1.wav\ta.txt\nx2\tx2.wav\ta.txt\n");
  CHECK(svc.import_manifest(dir.path() / "m.tsv", "hi") == 2);
  CHECK(svc.import_manifest(dir.path() / "m.tsv", "hi") == 0);  // existing ids are kept
  svc.add_user("u", "p", "hi", fixture::kTestPbkdf2Iterations);
  const std::string t = svc.login("u", "p").token;
  const auto d = svc.get_transcript(t, "x1");
  CHECK(d.text == "पाठ");
  CHECK(d.version == 1);
  CHECK(svc.edit_history(t, {}).empty());

  fixture::write_file(dir.path() / "bad.tsv", "only\ttwo\n");
  CHECK(error_of([&] { svc.import_manifest(dir.path() / "bad.tsv", "hi"); }) == Errc::kInvalidArgument);
  fixture::write_file(dir.path() / "evil.tsv", "../x\tx.wav\ta.txt\n");
  CHECK(error_of([&] { svc.import_manifest(dir.path() / "evil.tsv", "hi"); }) == Errc::kInvalidArgument);
  fixture::write_file(dir.path() / "gone.tsv", "y\ty.wav\tmissing.txt\n");
  CHECK(error_of([&] { svc.import_manifest(dir.path() / "gone.tsv", "hi"); }) == Errc::kIo);
}

TEST_CASE("doc ids are restricted to safe file names") {
  CHECK(service::FileStorage::valid_doc_id("utt_001-a.b"));
  CHECK(!service::FileStorage::valid_doc_id(""));
  CHECK(!service::FileStorage::valid_doc_id(".hidden"));
  CHECK(!service::FileStorage::valid_doc_id("a/b"));
  CHECK(!service::FileStorage::valid_doc_id(std::string(129, 'a')));
}
