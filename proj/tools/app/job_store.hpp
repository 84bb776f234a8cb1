#pragma once

#include <condition_variable>
#include <deque>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pipeline.hpp"

namespace speechlift::app {

enum class JobState { kQueued, kRunning, kDone, kFailed };

std::string to_string(JobState s);

// Raised on an illegal state change; the only legal path is
// queued -> running -> done | failed.
class JobStateError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

struct Job {
  std::string id;
  ProcessRequest request;
  JobState state = JobState::kQueued;
  std::map<std::string, std::string> artifacts;  // role -> absolute path, set when done
  std::string error;                             // set when failed

  void advance(JobState next);
};

class DuplicateJob : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Owns the artifact directory. A program lives in <root>/<job id>/ and is
// staged in a hidden sibling directory, then renamed into place, so a
// program directory only ever appears complete. Jobs run one at a time on a
// single worker thread.
class JobStore {
 public:
  JobStore(std::filesystem::path root, PresetRegistry presets);
  ~JobStore();
  JobStore(const JobStore&) = delete;
  JobStore& operator=(const JobStore&) = delete;

  // Throws UsageError for an invalid spec, DuplicateJob when the same spec
  // was already submitted (or its program already exists on disk).
  std::string submit(const ProcessRequest& req);

  std::optional<Job> job(const std::string& id) const;
  std::vector<std::string> program_ids() const;
  std::filesystem::path program_dir(const std::string& id) const { return root_ / id; }
  const PresetRegistry& presets() const { return presets_; }
  const std::filesystem::path& root() const { return root_; }

  // Blocks until no job is queued or running.
  void wait_idle();

 private:
  void rebuild_index();
  void worker_loop();
  void run(const std::string& id);

  std::filesystem::path root_;
  PresetRegistry presets_;
  mutable std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable idle_;
  std::map<std::string, Job> jobs_;
  std::deque<std::string> queue_;
  bool busy_ = false;
  bool stopping_ = false;
  std::thread worker_;
};

}  // namespace speechlift::app
