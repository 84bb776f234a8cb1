#include "job_store.hpp"

#include <system_error>

namespace speechlift::app {

namespace fs = std::filesystem;

std::string to_string(JobState s) {
  switch (s) {
    case JobState::kQueued: return "queued";
    case JobState::kRunning: return "running";
    case JobState::kDone: return "done";
    case JobState::kFailed: return "failed";
  }
  return "unknown";
}

void Job::advance(JobState next) {
  const bool legal = (state == JobState::kQueued && next == JobState::kRunning) ||
                     (state == JobState::kRunning && (next == JobState::kDone || next == JobState::kFailed));
  if (!legal) throw JobStateError("job " + id + ": cannot go from " + to_string(state) + " to " + to_string(next));
  state = next;
}

namespace {

std::map<std::string, std::string> absolute_artifacts(const fs::path& dir, const Manifest& m) {
  std::map<std::string, std::string> out;
  for (const auto& [role, name] : m.artifacts) out[role] = (dir / name).string();
  return out;
}

}  // namespace

JobStore::JobStore(fs::path root, PresetRegistry presets) : root_(std::move(root)), presets_(std::move(presets)) {
  std::error_code ec;
  fs::create_directories(root_, ec);
  if (ec || !fs::is_directory(root_)) throw ProcessingError("cannot use artifact directory " + root_.string());
  rebuild_index();
  worker_ = std::thread([this] { worker_loop(); });
}

JobStore::~JobStore() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  wake_.notify_all();
  worker_.join();
}

// The directory is the source of truth: every subdirectory with a readable
// manifest is a finished program. Leftover staging directories are removed.
void JobStore::rebuild_index() {
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_directory()) continue;
    const std::string name = entry.path().filename().string();
    if (name.starts_with(".")) {
      std::error_code ec;
      fs::remove_all(entry.path(), ec);
      continue;
    }
    try {
      const Manifest m = load_manifest(entry.path() / artifact::kManifest);
      Job job;
      job.id = name;
      job.request.input = m.input;
      job.request.preset = m.preset.name;
      job.request.program = m.program;
      job.state = JobState::kDone;
      job.artifacts = absolute_artifacts(entry.path(), m);
      jobs_[name] = std::move(job);
    } catch (const ManifestError&) {
    }
  }
}

std::string JobStore::submit(const ProcessRequest& submitted) {
  ProcessRequest req = submitted;
  if (req.program.empty()) req.program = req.input.stem().string();
  check_request(req, presets_);
  if (!fs::is_regular_file(req.input)) throw UsageError("input file " + req.input.string() + " does not exist");
  const std::string id = job_id_for(req);
  {
    std::lock_guard lock(mutex_);
    if (jobs_.contains(id)) throw DuplicateJob("job " + id + " was already submitted");
    Job job;
    job.id = id;
    job.request = req;
    jobs_[id] = std::move(job);
    queue_.push_back(id);
  }
  wake_.notify_one();
  return id;
}

std::optional<Job> JobStore::job(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> JobStore::program_ids() const {
  std::lock_guard lock(mutex_);
  std::vector<std::string> ids;
  for (const auto& [id, job] : jobs_)
    if (job.state == JobState::kDone) ids.push_back(id);
  return ids;
}

void JobStore::wait_idle() {
  std::unique_lock lock(mutex_);
  idle_.wait(lock, [this] { return queue_.empty() && !busy_; });
}

void JobStore::worker_loop() {
  std::unique_lock lock(mutex_);
  while (true) {
    wake_.wait(lock, [this] { return stopping_ || !queue_.empty(); });
    if (stopping_) return;
    const std::string id = queue_.front();
    queue_.pop_front();
    busy_ = true;
    jobs_.at(id).advance(JobState::kRunning);
    lock.unlock();
    run(id);
    lock.lock();
    busy_ = false;
    if (queue_.empty()) idle_.notify_all();
  }
}

void JobStore::run(const std::string& id) {
  ProcessRequest req;
  {
    std::lock_guard lock(mutex_);
    req = jobs_.at(id).request;
  }
  const fs::path staging = root_ / ("." + id + ".partial");
  const fs::path target = program_dir(id);
  std::error_code ec;
  fs::remove_all(staging, ec);
  try {
    const Manifest m = process_program(req, presets_, staging, id);
    fs::rename(staging, target);
    std::lock_guard lock(mutex_);
    Job& job = jobs_.at(id);
    job.artifacts = absolute_artifacts(target, m);
    job.advance(JobState::kDone);
  } catch (const std::exception& e) {
    fs::remove_all(staging, ec);
    std::lock_guard lock(mutex_);
    Job& job = jobs_.at(id);
    job.error = e.what();
    job.advance(JobState::kFailed);
  }
}

}  // namespace speechlift::app
