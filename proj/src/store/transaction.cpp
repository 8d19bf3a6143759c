#include "alex/store/transaction.hpp"

#include <fcntl.h>
#include <sys/file.h>
#include <unistd.h>

#include <system_error>

#include "alex/error.hpp"
#include "alex/fsutil.hpp"

namespace alex::store {

namespace fs = std::filesystem;

namespace {

constexpr std::string_view kTemp = ".txn-new";
constexpr std::string_view kBackup = ".txn-old";
constexpr std::string_view kJournal = "txn.journal";

fs::path with_suffix(const fs::path& p, std::string_view suffix) { return fs::path(p.string() + std::string(suffix)); }

void must(bool ok, const std::string& what) {
  if (!ok) throw Error(Errc::storage, what);
}

void rename_or_throw(const fs::path& from, const fs::path& to) {
  std::error_code ec;
  fs::rename(from, to, ec);
  must(!ec, "cannot rename " + from.string() + " to " + to.string() + ": " + ec.message());
}

}  // namespace

FileTransaction::FileTransaction(fs::path root) : root_(std::move(root)) {}

FileTransaction::~FileTransaction() {
  if (!done_) rollback();
}

void FileTransaction::put(const fs::path& relative, std::string content) {
  ops_.push_back({root_ / relative, std::move(content)});
}

void FileTransaction::remove(const fs::path& relative) { ops_.push_back({root_ / relative, std::nullopt}); }

void FileTransaction::commit(const StageHook& hook) {
  try {
    for (auto& op : ops_) {
      if (!op.content) continue;
      fs::create_directories(op.target.parent_path());
      write_file_atomic(with_suffix(op.target, kTemp), *op.content);
      op.staged = true;
      if (hook) hook("staged:" + fs::relative(op.target, root_).string());
    }

    std::string journal;
    for (const auto& op : ops_) {
      journal += (op.content ? "put " : "del ") + fs::relative(op.target, root_).string() + "\n";
    }
    write_file_atomic(root_ / kJournal, journal);

    for (auto& op : ops_) {
      if (fs::exists(op.target)) {
        rename_or_throw(op.target, with_suffix(op.target, kBackup));
        op.backed_up = true;
      }
      if (op.content) rename_or_throw(with_suffix(op.target, kTemp), op.target);
      op.swapped = true;
      if (hook) hook("swapped:" + fs::relative(op.target, root_).string());
    }
  } catch (...) {
    rollback();
    done_ = true;
    throw;
  }

  // Past this point the new state is in place; cleanup failures are harmless.
  std::error_code ec;
  fs::remove(root_ / kJournal, ec);
  for (const auto& op : ops_) {
    if (op.backed_up) fs::remove(with_suffix(op.target, kBackup), ec);
  }
  done_ = true;
}

void FileTransaction::rollback() noexcept {
  std::error_code ec;
  for (auto it = ops_.rbegin(); it != ops_.rend(); ++it) {
    auto& op = *it;
    if (op.swapped && op.content) fs::remove(op.target, ec);
    if (op.backed_up) fs::rename(with_suffix(op.target, kBackup), op.target, ec);
    if (op.staged) fs::remove(with_suffix(op.target, kTemp), ec);
  }
  fs::remove(root_ / kJournal, ec);
}

void FileTransaction::recover(const fs::path& root) {
  std::error_code ec;
  auto journal = root / kJournal;
  if (fs::exists(journal)) {
    auto text = read_file(journal);
    std::size_t start = 0;
    while (start < text.size()) {
      auto nl = text.find('\n', start);
      auto line = text.substr(start, nl - start);
      start = nl == std::string::npos ? text.size() : nl + 1;
      if (line.size() < 5) continue;
      bool put = line.starts_with("put ");
      auto target = root / line.substr(4);
      auto backup = with_suffix(target, kBackup);
      auto temp = with_suffix(target, kTemp);
      if (fs::exists(backup)) {
        fs::rename(backup, target, ec);
      } else if (put && !fs::exists(temp)) {
        // Swapped in without a predecessor: a new file, so undo it.
        fs::remove(target, ec);
      }
      fs::remove(temp, ec);
    }
    fs::remove(journal, ec);
  }
  // Temporaries from a commit that died before its journal was written.
  if (fs::exists(root)) {
    for (auto it = fs::recursive_directory_iterator(root, ec); it != fs::recursive_directory_iterator(); ++it) {
      if (it->is_regular_file() && it->path().string().ends_with(kTemp)) fs::remove(it->path(), ec);
    }
  }
}

RootLock::RootLock(const fs::path& root) {
  fs::create_directories(root);
  auto path = (root / ".lock").string();
  fd_ = ::open(path.c_str(), O_RDWR | O_CREAT | O_CLOEXEC, 0644);
  must(fd_ >= 0, "cannot open lock file " + path);
  while (::flock(fd_, LOCK_EX) != 0) {
    if (errno != EINTR) {
      ::close(fd_);
      throw Error(Errc::storage, "cannot lock " + path);
    }
  }
}

RootLock::~RootLock() {
  if (fd_ >= 0) {
    ::flock(fd_, LOCK_UN);
    ::close(fd_);
  }
}

}  // namespace alex::store
