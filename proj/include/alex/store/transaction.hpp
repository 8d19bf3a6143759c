#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace alex::store {

// Called at each stage boundary of a write; throwing aborts the write.
using StageHook = std::function<void(std::string_view stage)>;

// A set of file replacements and deletions under one root that become
// visible together or not at all. A journal makes the swap recoverable
// when the process dies part way; recover() rolls it back.
class FileTransaction {
 public:
  explicit FileTransaction(std::filesystem::path root);
  ~FileTransaction();
  FileTransaction(const FileTransaction&) = delete;
  FileTransaction& operator=(const FileTransaction&) = delete;

  // Paths are relative to the root.
  void put(const std::filesystem::path& relative, std::string content);
  void remove(const std::filesystem::path& relative);

  // The hook sees "staged:<path>" after each new file is written aside and
  // "swapped:<path>" after each target is replaced or removed.
  void commit(const StageHook& hook = {});

  // Undoes an interrupted commit found under `root`.
  static void recover(const std::filesystem::path& root);

 private:
  struct Op {
    std::filesystem::path target;
    std::optional<std::string> content;
    bool staged = false;
    bool backed_up = false;
    bool swapped = false;
  };
  void rollback() noexcept;

  std::filesystem::path root_;
  std::vector<Op> ops_;
  bool done_ = false;
};

// Exclusive advisory lock on `<root>/.lock`, held for the object's lifetime.
class RootLock {
 public:
  explicit RootLock(const std::filesystem::path& root);
  ~RootLock();
  RootLock(const RootLock&) = delete;
  RootLock& operator=(const RootLock&) = delete;

 private:
  int fd_ = -1;
};

}  // namespace alex::store
