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

#include "asrwb/cli/cli.hpp"

#include <pthread.h>
#include <signal.h>

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <json.hpp>

#include "asrwb/audio/audio.hpp"
#include "asrwb/error.hpp"
#include "asrwb/g2p/g2p.hpp"
#include "asrwb/net/features.hpp"
#include "asrwb/net/model_io.hpp"
#include "asrwb/net/viterbi.hpp"
#include "asrwb/service/http.hpp"
#include "asrwb/service/service.hpp"
#include "asrwb/textnorm/textnorm.hpp"
#include "asrwb/vad/vad.hpp"

namespace asrwb::cli {
namespace {
using nlohmann::json;

std::string read_text(const std::string& path) {
  const auto bytes = net::read_file(path);
  return std::string(bytes.begin(), bytes.end());
}

void write_text(const std::string& path, std::string_view text) {
  net::write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

audio::AudioBuffer read_wav(const std::string& path) { return audio::parse_wav(net::read_file(path)); }

std::vector<std::string> split_ws(std::string_view s) {
  std::vector<std::string> out;
  std::istringstream in{std::string(s)};
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

json segments_json(const std::vector<vad::SpeechSegment>& segs) {
  json arr = json::array();
  for (const auto& s : segs) arr.push_back({{"start_sample", s.start_sample}, {"end_sample", s.end_sample}});
  return arr;
}

void emit(std::ostream& out, const json& j) { out << j.dump(2) << '\n'; }

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw CLI::ValidationError("--format", "unsupported value '" + format + "'");
}

// Sub-command state lives here so option bindings outlive parse().
struct Options {
  std::string in, out, format = "json";

  int rate = 16000;

  vad::VadConfig vad;
  std::string gate;

  std::string text, kind = "all";

  std::vector<std::string> words;

  int label = -1;

  std::string data, model, prior_out;
  std::size_t classes = 0, hidden = 64;
  bool topology = false, no_prior = false;
  net::TrainOptions train;
  net::AdaptOptions adapt;
  std::size_t adapt_batch = 32;

  std::string phones, word;
  bool no_leading = false, no_trailing = false;

  std::string host = "127.0.0.1", ui;
  int port = 8080;

  std::string user, password, language = "hi";
  int iterations = 0;
  std::string manifest;
};

int cmd_resample(const Options& o, std::ostream& out) {
  const audio::AudioBuffer in = read_wav(o.in);
  const audio::AudioBuffer res = audio::resample_decimate(audio::mixdown(in), o.rate);
  if (!o.out.empty()) {
    const auto bytes = audio::write_wav(res);
    net::write_file(o.out, bytes);
  }
  emit(out, {{"input_rate", in.sample_rate_hz},
             {"input_channels", in.channels},
             {"input_frames", in.frames()},
             {"output_rate", res.sample_rate_hz},
             {"output_frames", res.frames()}});
  return kExitOk;
}

int cmd_vad(const Options& o, std::ostream& out) {
  require_format(o.format, {"json", "tsv"});
  const audio::AudioBuffer mono = audio::to_mono_16k(read_wav(o.in));
  const auto segs = vad::detect_segments(mono, o.vad);
  if (!o.gate.empty()) net::write_file(o.gate, audio::write_wav(vad::gate_audio(mono, segs)));
  if (o.format == "tsv") {
    for (const auto& s : segs) out << s.start_sample << '\t' << s.end_sample << '\n';
  } else {
    emit(out, {{"sample_rate", mono.sample_rate_hz},
               {"samples", mono.samples.size()},
               {"segments", segments_json(segs)},
               {"speech_samples", vad::total_length(segs)}});
  }
  return kExitOk;
}

int cmd_normalize(const Options& o, std::ostream& out) {
  require_format(o.format, {"json", "text"});
  if (o.text.empty() == o.in.empty() && !(o.text.empty() && o.in.empty()))
    throw CLI::ValidationError("normalize", "give either --text or --in");
  const std::string text = o.in.empty() ? o.text : read_text(o.in);
  textnorm::NormalizeOptions opts;
  if (o.kind == "numbers") opts.abbreviations = false;
  else if (o.kind == "abbrev") opts.numbers = false;
  else if (o.kind != "all") throw CLI::ValidationError("--kind", "expected all, numbers or abbrev");
  const std::string result = textnorm::normalize_text(text, textnorm::NumberWordTable::bundled(),
                                                      textnorm::AbbrevTable::bundled(), opts);
  if (o.format == "text")
    out << result << '\n';
  else
    emit(out, {{"text", result}});
  return kExitOk;
}

int cmd_g2p(const Options& o, std::ostream& out) {
  require_format(o.format, {"text", "json"});
  json arr = json::array();
  for (const std::string& w : o.words) {
    const g2p::PhoneSeq phones = g2p::g2p(w);
    if (o.format == "text")
      out << g2p::join_phones(phones) << '\n';
    else
      arr.push_back({{"word", w}, {"phones", phones}});
  }
  if (o.format == "json") emit(out, arr);
  return kExitOk;
}

int cmd_lexicon(const Options& o, std::ostream& out, std::ostream& err) {
  require_format(o.format, {"json", "tsv"});
  const g2p::Lexicon lex = g2p::build_lexicon(split_ws(read_text(o.in)));
  for (const auto& f : lex.failures) err << "skipped " << f.word << ": " << f.reason << '\n';
  const std::string tsv = g2p::format_lexicon(lex.entries);
  if (!o.out.empty()) write_text(o.out, tsv);
  if (o.format == "tsv") {
    out << tsv;
  } else {
    json entries = json::array(), failures = json::array();
    for (const auto& e : lex.entries) entries.push_back({{"word", e.word}, {"phones", e.phones}});
    for (const auto& f : lex.failures) failures.push_back({{"word", f.word}, {"reason", f.reason}});
    emit(out, {{"entries", entries}, {"failures", failures}});
  }
  return kExitOk;
}

int cmd_features(const Options& o, std::ostream& out) {
  require_format(o.format, {"json", "tsv"});
  const net::FeatureMatrix f = net::extract_features(audio::to_mono_16k(read_wav(o.in)));
  if (o.format == "tsv") {
    out << format_frame_rows(f.frames, o.label);
    return kExitOk;
  }
  json rows = json::array();
  for (std::size_t r = 0; r < f.frames.rows(); ++r) {
    const auto row = f.frames.row(r);
    rows.push_back(std::vector<double>(row.begin(), row.end()));
  }
  emit(out, {{"frames", f.frames.rows()},
             {"bands", f.frames.cols()},
             {"frame_shift_samples", f.frame_shift_samples},
             {"window_samples", f.window_samples},
             {"data", rows}});
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out, std::ostream& err) {
  const net::Dataset data = parse_frame_dataset(read_text(o.data));
  int max_label = -1;
  for (int y : data.labels) {
    if (y < 0) throw Error(Errc::kInvalidArgument, "training frames must be labelled");
    max_label = std::max(max_label, y);
  }

  net::Model model;
  std::size_t classes = o.classes;
  if (o.topology) {
    model.topology = net::HmmTopology::from_inventory();
    classes = model.topology->total_states();
  }
  if (classes == 0) classes = static_cast<std::size_t>(max_label) + 1;
  if (static_cast<std::size_t>(max_label) >= classes)
    throw Error(Errc::kInvalidArgument, "label " + std::to_string(max_label) +
                                            " exceeds the class count " + std::to_string(classes));

  const std::size_t dim = data.features.cols();
  const net::NetSpec spec = net::NetSpec::aligner(dim, classes, o.hidden);
  net::NetState net = net::NetState::init(spec, o.train.seed);

  const net::Vector mean = net::column_means(data.features);
  net::Vector stddev(dim, 0.0);
  for (std::size_t r = 0; r < data.features.rows(); ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      const double d = data.features(r, c) - mean[c];
      stddev[c] += d * d;
    }
  for (double& s : stddev) s = std::max(std::sqrt(s / static_cast<double>(data.features.rows())), 1e-8);
  net.set_input_normalization(mean, stddev);

  net::TrainResult result = net::train(std::move(net), data, o.train);
  json epochs = json::array();
  for (const auto& m : result.metrics) {
    err << "epoch " << m.epoch << " loss " << m.loss << " accuracy " << m.accuracy << '\n';
    epochs.push_back({{"epoch", m.epoch}, {"loss", m.loss}, {"accuracy", m.accuracy}});
  }
  model.net = std::move(result.net);
  if (!o.no_prior)
    model.prior = net::collect_prior(model.net, data.features, net::default_monitored_layers(model.net));
  net::save_model(o.out, model);
  if (!o.prior_out.empty() && model.prior) net::write_file(o.prior_out, net::encode_prior(*model.prior));

  emit(out, {{"frames", data.features.rows()},
             {"classes", classes},
             {"layer_dims", spec.layer_dims},
             {"epochs", epochs},
             {"model", o.out}});
  return kExitOk;
}

int cmd_adapt(const Options& o, std::ostream& out) {
  net::Model model = net::load_model(o.model);
  const net::CoactPrior prior = !o.prior_out.empty()
                                    ? net::decode_prior(net::read_file(o.prior_out))
                                    : model.prior.value_or(net::CoactPrior{});
  if (prior.layers.empty())
    throw Error(Errc::kInvalidArgument, "model carries no co-activation prior; pass --prior");
  const net::Dataset data = parse_frame_dataset(read_text(o.data));

  std::vector<net::Matrix> batches;
  const std::size_t bs = std::max<std::size_t>(1, o.adapt_batch);
  for (std::size_t start = 0; start < data.features.rows(); start += bs) {
    std::vector<std::size_t> idx;
    for (std::size_t r = start; r < std::min(start + bs, data.features.rows()); ++r) idx.push_back(r);
    batches.push_back(net::gather_rows(data.features, idx));
  }

  net::AdaptResult result = net::adapt(model.net, batches, prior, o.adapt);
  std::size_t non_increasing = 0;
  for (std::size_t i = 1; i < result.penalty_trace.size(); ++i)
    if (result.penalty_trace[i] <= result.penalty_trace[i - 1]) ++non_increasing;
  const std::size_t steps = result.penalty_trace.empty() ? 0 : result.penalty_trace.size() - 1;

  model.net = std::move(result.net);
  net::save_model(o.out, model);
  emit(out, {{"steps", steps},
             {"penalty_before", result.penalty_trace.empty() ? 0.0 : result.penalty_trace.front()},
             {"penalty_after", result.penalty_trace.empty() ? 0.0 : result.penalty_trace.back()},
             {"non_increasing_steps", non_increasing},
             {"model", o.out}});
  return kExitOk;
}

int cmd_align(const Options& o, std::ostream& out) {
  const net::Model model = net::load_model(o.model);
  if (!model.topology) throw Error(Errc::kInvalidArgument, "model has no phone topology");
  if (o.phones.empty() == o.word.empty())
    throw CLI::ValidationError("align", "give exactly one of --phones or --word");
  const g2p::PhoneSeq phones = o.word.empty() ? split_ws(o.phones) : g2p::g2p(o.word);

  const net::FeatureMatrix f = net::extract_features(audio::to_mono_16k(read_wav(o.in)), model.features);
  const net::Activations acts = net::forward(model.net, f.frames);
  net::AlignOptions opts;
  opts.leading_silence = !o.no_leading;
  opts.trailing_silence = !o.no_trailing;
  const net::AlignmentResult r = net::viterbi_align(acts.posteriors(), phones, *model.topology, opts);

  // A phone starts whenever the path enters silence or a rising state.
  json segs = json::array();
  for (std::size_t t = 0; t < r.state_ids.size(); ++t) {
    const int s = r.state_ids[t];
    const bool starts = t == 0 || (s != r.state_ids[t - 1] &&
                                   (s == net::HmmTopology::kSilenceState ||
                                    (s - 1) % static_cast<int>(net::HmmTopology::kStatesPerPhone) == 0));
    if (starts)
      segs.push_back({{"phone", model.topology->state_phone(s)}, {"start_frame", t}, {"end_frame", t + 1}});
    else
      segs.back()["end_frame"] = t + 1;
  }
  emit(out, {{"frames", r.state_ids.size()},
             {"frame_shift_samples", f.frame_shift_samples},
             {"log_score", r.log_score},
             {"state_ids", r.state_ids},
             {"segments", segs}});
  return kExitOk;
}

int cmd_serve(const Options& o, std::ostream& err) {
  service::ServiceConfig cfg;
  cfg.data_dir = o.data;
  if (!o.model.empty()) cfg.model_path = o.model;
  cfg.vad = o.vad;
  service::CorpusService svc(cfg);

  service::HttpOptions http;
  http.host = o.host;
  http.port = o.port;
  if (!o.ui.empty()) http.ui_dir = o.ui;

  // Worker threads inherit the mask, so only sigwait below sees the signals.
  sigset_t set;
  sigemptyset(&set);
  sigaddset(&set, SIGINT);
  sigaddset(&set, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &set, nullptr);

  service::HttpServer server(svc, http);
  const int port = server.start();
  err << "listening on http://" << o.host << ':' << port << (svc.has_model() ? "" : " (no model)") << std::endl;
  int sig = 0;
  sigwait(&set, &sig);
  server.stop();
  pthread_sigmask(SIG_UNBLOCK, &set, nullptr);
  return kExitOk;
}

int cmd_useradd(const Options& o, std::ostream& out) {
  service::ServiceConfig cfg;
  cfg.data_dir = o.data;
  service::CorpusService svc(cfg);
  svc.add_user(o.user, o.password, o.language, o.iterations);
  emit(out, {{"user_id", o.user}, {"language_id", o.language}});
  return kExitOk;
}

int cmd_import(const Options& o, std::ostream& out) {
  service::ServiceConfig cfg;
  cfg.data_dir = o.data;
  service::CorpusService svc(cfg);
  emit(out, {{"imported", svc.import_manifest(o.manifest, o.language)}});
  return kExitOk;
}

void add_vad_options(CLI::App* cmd, Options& o) {
  cmd->add_option("--window", o.vad.window_size_samples, "Window length in samples")->capture_default_str();
  cmd->add_option("--threshold", o.vad.threshold, "Peak amplitude threshold")->capture_default_str();
  cmd->add_option("--hangover", o.vad.hangover_windows, "Windows kept after speech ends")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"asrwb: Hindi speech-corpus workbench", "asrwb"};
  app.require_subcommand(1);
  Options o;

  auto* resample = app.add_subcommand("resample", "Mix down and decimate a WAV file");
  resample->add_option("--in", o.in, "Input WAV")->required();
  resample->add_option("--out", o.out, "Output WAV");
  resample->add_option("--rate", o.rate, "Target sample rate")->capture_default_str();

  auto* vad_cmd = app.add_subcommand("vad", "Detect speech segments (input is converted to 16 kHz mono)");
  vad_cmd->add_option("--in", o.in, "Input WAV")->required();
  add_vad_options(vad_cmd, o);
  vad_cmd->add_option("--gate", o.gate, "Write the concatenated speech to this WAV");
  vad_cmd->add_option("--format", o.format, "json or tsv")->capture_default_str();

  auto* norm = app.add_subcommand("normalize", "Expand numbers and abbreviations into words");
  norm->add_option("--text", o.text, "Text to normalize");
  norm->add_option("--in", o.in, "UTF-8 file to normalize");
  norm->add_option("--kind", o.kind, "all, numbers or abbrev")->capture_default_str();
  norm->add_option("--format", o.format, "json or text")->capture_default_str();

  auto* g2p_cmd = app.add_subcommand("g2p", "Print the phone sequence of Devanagari words");
  g2p_cmd->add_option("--word", o.words, "Word (repeatable)")->required();
  g2p_cmd->add_option("--format", o.format, "text or json");

  auto* lex = app.add_subcommand("lexicon", "Build a pronunciation lexicon from a word list");
  lex->add_option("--in", o.in, "Whitespace-separated words")->required();
  lex->add_option("--out", o.out, "Also write word<TAB>phones lines here");
  lex->add_option("--format", o.format, "json or tsv")->capture_default_str();

  auto* feats = app.add_subcommand("features", "Log band-energy features of a WAV file");
  feats->add_option("--in", o.in, "Input WAV")->required();
  feats->add_option("--format", o.format, "json or tsv (frame dataset rows)")->capture_default_str();
  feats->add_option("--label", o.label, "Label written on tsv rows (-1 for unlabelled)");

  auto* train_cmd = app.add_subcommand("train", "Train the frame classifier");
  train_cmd->add_option("--data", o.data, "Frame dataset (label<TAB>features)")->required();
  train_cmd->add_option("--out", o.out, "Model file to write")->required();
  train_cmd->add_option("--classes", o.classes, "Output classes (default: max label + 1)");
  train_cmd->add_flag("--topology", o.topology, "Classes are the HMM states of the phone inventory");
  train_cmd->add_option("--hidden", o.hidden, "Hidden layer width")->capture_default_str();
  train_cmd->add_option("--epochs", o.train.epochs)->capture_default_str();
  train_cmd->add_option("--lr", o.train.learning_rate)->capture_default_str();
  train_cmd->add_option("--batch", o.train.batch_size)->capture_default_str();
  train_cmd->add_option("--seed", o.train.seed)->capture_default_str();
  train_cmd->add_flag("--no-prior", o.no_prior, "Do not record co-activation statistics");
  train_cmd->add_option("--prior-out", o.prior_out, "Also write the prior to its own file");

  auto* adapt_cmd = app.add_subcommand("adapt", "Adapt a model to unlabelled data with the co-activation prior");
  adapt_cmd->add_option("--model", o.model, "Model file")->required();
  adapt_cmd->add_option("--data", o.data, "Frame dataset; labels are ignored")->required();
  adapt_cmd->add_option("--out", o.out, "Adapted model file")->required();
  adapt_cmd->add_option("--prior", o.prior_out, "Prior file (default: the model's own)");
  adapt_cmd->add_option("--lambda", o.adapt.lambda)->capture_default_str();
  adapt_cmd->add_option("--steps", o.adapt.steps, "Steps per schedule stage")->capture_default_str();
  adapt_cmd->add_option("--lr", o.adapt.learning_rate)->capture_default_str();
  adapt_cmd->add_option("--batch", o.adapt_batch)->capture_default_str();
  adapt_cmd->add_option("--schedule", o.adapt.layer_schedule, "Layers to unfreeze, in order")->delimiter(',');

  auto* align_cmd = app.add_subcommand("align", "Force-align a WAV file to a phone sequence");
  align_cmd->add_option("--model", o.model, "Model file with a phone topology")->required();
  align_cmd->add_option("--in", o.in, "Input WAV")->required();
  align_cmd->add_option("--phones", o.phones, "Space-separated phones");
  align_cmd->add_option("--word", o.word, "Devanagari word, converted with g2p");
  align_cmd->add_flag("--no-leading-silence", o.no_leading);
  align_cmd->add_flag("--no-trailing-silence", o.no_trailing);

  auto* serve = app.add_subcommand("serve", "Run the corpus service");
  serve->add_option("--data", o.data, "Data directory")->required();
  serve->add_option("--model", o.model, "Model file for /api/recognize");
  serve->add_option("--host", o.host)->capture_default_str();
  serve->add_option("--port", o.port)->capture_default_str();
  serve->add_option("--ui", o.ui, "Directory with the browser client");
  add_vad_options(serve, o);

  auto* useradd = app.add_subcommand("useradd", "Create or reset a user account");
  useradd->add_option("--data", o.data, "Data directory")->required();
  useradd->add_option("--user", o.user)->required();
  useradd->add_option("--password", o.password)->required();
  useradd->add_option("--language", o.language)->capture_default_str();
  useradd->add_option("--iterations", o.iterations, "PBKDF2 iterations (0: default)");

  auto* import = app.add_subcommand("import", "Import transcripts from a corpus manifest");
  import->add_option("--data", o.data, "Data directory")->required();
  import->add_option("--manifest", o.manifest, "doc_id<TAB>audio_filename<TAB>transcript_path")->required();
  import->add_option("--language", o.language)->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    // g2p defaults to plain phones; the others default to JSON.
    if (!args.empty() && args.front() == "g2p") o.format = "text";
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return kExitOk;
    err << '\n' << app.help();
    return kExitUsage;
  }

  try {
    if (resample->parsed()) return cmd_resample(o, out);
    if (vad_cmd->parsed()) return cmd_vad(o, out);
    if (norm->parsed()) return cmd_normalize(o, out);
    if (g2p_cmd->parsed()) return cmd_g2p(o, out);
    if (lex->parsed()) return cmd_lexicon(o, out, err);
    if (feats->parsed()) return cmd_features(o, out);
    if (train_cmd->parsed()) return cmd_train(o, out, err);
    if (adapt_cmd->parsed()) return cmd_adapt(o, out);
    if (align_cmd->parsed()) return cmd_align(o, out);
    if (serve->parsed()) return cmd_serve(o, err);
    if (useradd->parsed()) return cmd_useradd(o, out);
    if (import->parsed()) return cmd_import(o, out);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    err << "error (" << errc_name(e.code()) << "): " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace asrwb::cli
