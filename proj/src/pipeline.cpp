#include "adprompt/pipeline.hpp"

#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

#include "adprompt/chat.hpp"
#include "adprompt/config.hpp"
#include "adprompt/error.hpp"
#include "adprompt/report.hpp"
#include "adprompt/text.hpp"
#include "adprompt/toy_backend.hpp"
#include "adprompt/wer.hpp"

namespace adprompt {

std::string_view variant_name(InputVariant v) {
  switch (v) {
    case InputVariant::Subjects:
      return "subjects";
    case InputVariant::Pauses:
      return "pauses";
    case InputVariant::Interviewer:
      return "interviewer";
    case InputVariant::Asr:
      return "asr";
  }
  return "subjects";
}

InputVariant parse_variant(std::string_view s) {
  for (auto v : {InputVariant::Subjects, InputVariant::Pauses, InputVariant::Interviewer,
                 InputVariant::Asr}) {
    if (text::iequals(s, variant_name(v))) return v;
  }
  throw ParseError("unknown input variant '" + std::string(s) +
                   "' (expected subjects, pauses, interviewer or asr)");
}

void check_variant_inputs(std::span<const Sample> samples, std::span<const InputVariant> variants) {
  std::vector<std::string> problems;
  auto need = [&](const Sample& s, const std::filesystem::path* p, std::string_view what) {
    if (p == nullptr) {
      problems.push_back(s.sample_id + ": no " + std::string(what));
    } else if (!std::filesystem::exists(*p)) {
      problems.push_back(s.sample_id + ": " + std::string(what) + " not found at " + p->string());
    }
  };
  for (const auto& s : samples) {
    std::set<std::string_view> kinds;
    for (auto v : variants) {
      if (v == InputVariant::Asr) {
        kinds.insert("asr_path");
      } else {
        kinds.insert("transcript_path");
        if (v == InputVariant::Pauses) kinds.insert("alignment_path");
      }
    }
    if (kinds.contains("transcript_path")) need(s, &s.transcript_path, "transcript_path");
    if (kinds.contains("alignment_path")) {
      need(s, s.alignment_path ? &*s.alignment_path : nullptr, "alignment_path");
    }
    if (kinds.contains("asr_path")) need(s, s.asr_path ? &*s.asr_path : nullptr, "asr_path");
  }
  if (!problems.empty()) {
    std::string msg = "missing inputs:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ValidationError(msg);
  }
}

VariantInputs load_variant_inputs(std::span<const Sample> samples, InputVariant variant,
                                  AlignmentFormat alignment_format) {
  const InputVariant requested[] = {variant};
  check_variant_inputs(samples, requested);
  VariantInputs out;
  for (const auto& s : samples) {
    try {
      if (variant == InputVariant::Asr) {
        out[s.sample_id] = normalize_for_wer(text::read_file(*s.asr_path));
        continue;
      }
      const auto doc = parse_chat(text::read_file(s.transcript_path), s.sample_id);
      const auto filter = variant == InputVariant::Interviewer
                              ? SpeakerFilter::ParticipantAndInterviewer
                              : SpeakerFilter::ParticipantOnly;
      auto transcript = extract_transcript(doc, filter);
      if (variant == InputVariant::Pauses) {
        const auto track =
            load_alignment(text::read_file(*s.alignment_path), alignment_format);
        out[s.sample_id] = encode_pauses(transcript, track).items;
      } else {
        out[s.sample_id] = std::move(transcript.words);
      }
    } catch (const Error& e) {
      throw Error("sample " + s.sample_id + ": " + e.what());
    }
  }
  return out;
}

std::unique_ptr<EncoderBackend> make_backend(std::string_view name, const VariantInputs& inputs,
                                             const PromptSpec& prompt, std::uint64_t seed,
                                             double init_scale) {
  if (name != "toy") {
    throw ConfigurationError("backend '" + std::string(name) +
                             "' is not built in; pre-trained checkpoints run through the Python "
                             "adapter (adprompt.hf_backend)");
  }
  std::vector<std::vector<std::string>> docs;
  docs.reserve(inputs.size());
  for (const auto& [id, items] : inputs) docs.push_back(items);
  std::vector<std::string> extra = {prompt.template_text, prompt.verbalizer[0],
                                    prompt.verbalizer[1]};
  return std::make_unique<BagOfTokensBackend>(
      BagOfTokensBackend::from_corpus(docs, extra, seed, init_scale));
}

RunIdentity TrainJob::identity() const {
  RunIdentity id;
  id.paradigm = paradigm;
  id.backend = backend;
  if (paradigm == Paradigm::PBFT) id.position = prompt.position;
  id.seed = train.seed;
  id.fold = fold;
  id.variant = std::string(variant_name(variant));
  return id;
}

TrainJob TrainJob::from_config(std::string_view input) {
  const auto cfg = KeyValueConfig::parse(
      input, {"paradigm", "backend", "template", "position", "epochs", "lr", "weight_decay",
              "batch_size", "max_len", "seed", "fold", "variant", "init_scale"});
  TrainJob job;
  job.paradigm = parse_paradigm(cfg.get_or("paradigm", "pbft"));
  job.backend = cfg.get_or("backend", "toy");
  job.prompt.template_text = cfg.get_or("template", kDefaultTemplate);
  job.prompt.position = parse_position(cfg.get_or("position", "after"));
  job.train = TrainConfig::defaults_for(job.paradigm);
  job.train.epochs = cfg.get_int("epochs", job.train.epochs);
  job.train.learning_rate = cfg.get_double("lr", job.train.learning_rate);
  job.train.weight_decay = cfg.get_double("weight_decay", job.train.weight_decay);
  job.train.batch_size = cfg.get_int("batch_size", job.train.batch_size);
  job.train.max_len = static_cast<std::size_t>(cfg.get_int("max_len", static_cast<int>(job.train.max_len)));
  job.train.seed = cfg.get_u64("seed", 0);
  const auto fold = cfg.get_or("fold", "test");
  job.fold = fold == "test" ? kTestFold : cfg.get_int("fold", kTestFold);
  job.variant = parse_variant(cfg.get_or("variant", "subjects"));
  job.init_scale = cfg.get_double("init_scale", 0.0);
  job.train.validate();
  return job;
}

void split_for_fold(std::span<const Sample> samples, const FoldAssignment& folds, int fold,
                    const VariantInputs& inputs, std::vector<LabeledExample>& train,
                    std::vector<LabeledExample>& eval) {
  if (fold != kTestFold && (fold < 0 || fold >= folds.k)) {
    throw ValidationError("fold " + std::to_string(fold) + " outside [0, " +
                          std::to_string(folds.k) + ")");
  }
  train.clear();
  eval.clear();
  for (const auto& s : samples) {
    const auto it = inputs.find(s.sample_id);
    if (it == inputs.end()) throw ValidationError("no input loaded for sample " + s.sample_id);
    LabeledExample ex{s.sample_id, it->second, s.label};
    if (fold == kTestFold) {
      (s.split == Split::Train ? train : eval).push_back(std::move(ex));
      continue;
    }
    if (s.split != Split::Train) continue;
    const auto f = folds.assignment.find(s.sample_id);
    if (f == folds.assignment.end()) {
      throw ValidationError("training sample " + s.sample_id + " has no fold assignment");
    }
    (f->second == fold ? eval : train).push_back(std::move(ex));
  }
}

std::vector<PredictionRecord> run_train_job(const TrainJob& job, std::span<const Sample> samples,
                                            const FoldAssignment& folds,
                                            const VariantInputs& inputs) {
  std::vector<LabeledExample> train;
  std::vector<LabeledExample> eval;
  split_for_fold(samples, folds, job.fold, inputs, train, eval);
  auto backend = make_backend(job.backend, inputs, job.prompt, job.train.seed, job.init_scale);
  return train_run(job.train, job.identity(),
                   job.paradigm == Paradigm::PBFT ? &job.prompt : nullptr, train, eval, *backend);
}

void SweepSpec::validate() const {
  if (paradigms.empty()) throw ConfigurationError("sweep needs at least one paradigm");
  if (backends.empty()) throw ConfigurationError("sweep needs at least one backend");
  if (variants.empty()) throw ConfigurationError("sweep needs at least one input variant");
  if (seeds.empty()) throw ConfigurationError("sweep needs at least one seed");
  if (std::set<std::uint64_t>(seeds.begin(), seeds.end()).size() != seeds.size()) {
    throw ConfigurationError("sweep seed list has duplicates");
  }
  for (auto p : paradigms) {
    if (p == Paradigm::PBFT && positions.empty()) {
      throw ConfigurationError("PBFT sweeps need at least one prompt position");
    }
  }
  if (k < 2) throw ConfigurationError("sweep needs k >= 2 folds");
  if (workers < 1) throw ConfigurationError("workers must be positive");
  if (last_k < 1) throw ConfigurationError("last_k must be positive");
}

SweepSpec SweepSpec::from_config(std::string_view input) {
  const auto cfg = KeyValueConfig::parse(
      input, {"paradigms", "backends", "positions", "seeds", "variants", "k", "fold_seed",
              "epochs", "lr", "weight_decay", "batch_size_tft", "batch_size_pbft", "max_len",
              "template", "last_k", "workers", "init_scale"});
  SweepSpec spec;
  if (cfg.has("paradigms")) {
    spec.paradigms.clear();
    for (const auto& p : cfg.get_list("paradigms")) spec.paradigms.push_back(parse_paradigm(p));
  }
  if (cfg.has("backends")) spec.backends = cfg.get_list("backends");
  if (cfg.has("positions")) {
    spec.positions.clear();
    for (const auto& p : cfg.get_list("positions")) spec.positions.push_back(parse_position(p));
  }
  if (cfg.has("seeds")) {
    spec.seeds.clear();
    for (const auto& s : cfg.get_list("seeds")) {
      KeyValueConfig one = KeyValueConfig::parse("seed=" + s);
      spec.seeds.push_back(one.get_u64("seed", 0));
    }
  }
  if (cfg.has("variants")) {
    spec.variants.clear();
    for (const auto& v : cfg.get_list("variants")) spec.variants.push_back(parse_variant(v));
  }
  spec.k = cfg.get_int("k", spec.k);
  spec.fold_seed = cfg.get_u64("fold_seed", spec.fold_seed);
  spec.epochs = cfg.get_int("epochs", spec.epochs);
  spec.learning_rate = cfg.get_double("lr", spec.learning_rate);
  spec.weight_decay = cfg.get_double("weight_decay", spec.weight_decay);
  spec.batch_size_tft = cfg.get_int("batch_size_tft", spec.batch_size_tft);
  spec.batch_size_pbft = cfg.get_int("batch_size_pbft", spec.batch_size_pbft);
  spec.max_len = static_cast<std::size_t>(cfg.get_int("max_len", static_cast<int>(spec.max_len)));
  spec.template_text = cfg.get_or("template", spec.template_text);
  spec.last_k = cfg.get_int("last_k", spec.last_k);
  spec.workers = cfg.get_int("workers", spec.workers);
  spec.init_scale = cfg.get_double("init_scale", spec.init_scale);
  spec.validate();
  return spec;
}

std::size_t SweepSpec::run_count() const {
  std::size_t per_seed = 0;
  for (auto p : paradigms) per_seed += p == Paradigm::PBFT ? positions.size() : 1;
  return per_seed * backends.size() * seeds.size() * variants.size() *
         (static_cast<std::size_t>(k) + 1);
}

std::vector<PlannedRun> plan_runs(const SweepSpec& spec) {
  spec.validate();
  std::vector<PlannedRun> runs;
  for (auto paradigm : spec.paradigms) {
    std::vector<PromptPosition> positions = spec.positions;
    if (paradigm == Paradigm::TFT) positions = {PromptPosition::After};  // ignored for TFT
    for (const auto& backend : spec.backends) {
      for (auto position : positions) {
        for (auto seed : spec.seeds) {
          for (auto variant : spec.variants) {
            for (int fold = kTestFold; fold < spec.k; ++fold) {
              TrainJob job;
              job.paradigm = paradigm;
              job.backend = backend;
              job.prompt.template_text = spec.template_text;
              job.prompt.position = position;
              job.train = TrainConfig::defaults_for(paradigm);
              job.train.epochs = spec.epochs;
              job.train.learning_rate = spec.learning_rate;
              job.train.weight_decay = spec.weight_decay;
              job.train.batch_size =
                  paradigm == Paradigm::TFT ? spec.batch_size_tft : spec.batch_size_pbft;
              job.train.max_len = spec.max_len;
              job.train.seed = seed;
              job.fold = fold;
              job.variant = variant;
              job.init_scale = spec.init_scale;
              runs.push_back({job.identity(), job});
            }
          }
        }
      }
    }
  }
  return runs;
}

SweepResult run_sweep(const SweepSpec& spec, std::span<const Sample> samples,
                      const FoldAssignment& folds, const std::filesystem::path& out_dir) {
  spec.validate();
  if (folds.k != spec.k) {
    throw ConfigurationError("fold file has k=" + std::to_string(folds.k) + " but the sweep asks for k=" +
                             std::to_string(spec.k));
  }
  check_variant_inputs(samples, spec.variants);
  for (const auto& b : spec.backends) {
    if (b != "toy") {
      throw ConfigurationError("backend '" + b +
                               "' is not built in; use the Python adapter for pre-trained "
                               "checkpoints");
    }
  }

  std::map<InputVariant, VariantInputs> inputs;
  for (auto v : spec.variants) inputs[v] = load_variant_inputs(samples, v);

  const auto runs = plan_runs(spec);
  const auto records_dir = out_dir / "records";
  std::filesystem::create_directories(records_dir);
  auto record_path = [&](const RunIdentity& id) { return records_dir / (id.run_id() + ".jsonl"); };

  std::vector<const PlannedRun*> pending;
  for (const auto& r : runs) {
    if (!std::filesystem::exists(record_path(r.identity))) pending.push_back(&r);
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= pending.size()) return;
      {
        std::lock_guard lock(failure_mutex);
        if (failure) return;
      }
      try {
        const auto& run = *pending[i];
        const auto records = run_train_job(run.job, samples, folds, inputs.at(run.job.variant));
        text::write_file_atomic(record_path(run.identity), to_jsonl(records));
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const auto n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(spec.workers), std::max<std::size_t>(pending.size(), 1));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n_workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  std::vector<PredictionRecord> all;
  std::set<std::string> ids;
  for (const auto& r : runs) ids.insert(r.identity.run_id());
  for (const auto& id : ids) {
    auto recs = parse_jsonl(text::read_file(records_dir / (id + ".jsonl")));
    all.insert(all.end(), std::make_move_iterator(recs.begin()), std::make_move_iterator(recs.end()));
  }

  SweepResult result;
  result.runs_total = runs.size();
  result.runs_executed = pending.size();
  result.summary = evaluate_records(all, samples, EvaluationScheme::All, spec.last_k);
  std::set<InputVariant> ordered(spec.variants.begin(), spec.variants.end());
  std::vector<std::string> variant_names;
  for (auto v : ordered) variant_names.emplace_back(variant_name(v));
  const auto report = render_report(result.summary, variant_names);
  text::write_file_atomic(out_dir / "summary.csv", summary_to_csv(result.summary));
  text::write_file_atomic(out_dir / "report.txt", report.text);
  text::write_file_atomic(out_dir / "report.csv", report.csv);
  return result;
}

}  // namespace adprompt
