#ifndef IFL_VFS_FILE_SYSTEM_H_
#define IFL_VFS_FILE_SYSTEM_H_

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace ifl::vfs {

// Distinguished actor that bypasses every permission check (rooted device).
inline constexpr int kRootUid = 0;
// First uid handed out to an installed app.
inline constexpr int kFirstAppUid = 10000;
inline constexpr std::string_view kPublicStorageDir = "/sdcard/";
inline constexpr std::string_view kAndroidDataDir = "/data/data/";
inline constexpr std::string_view kRandomizedDataDir =
    "/var/mobile/Containers/Data/Application/";

enum class ZoneKind { kPrivate, kPublicStorage };

struct FileNode {
  std::string path;
  int owner_uid = 0;
  bool world_readable = false;
  std::string content;
};

struct AppZone {
  std::string app_id;
  int uid = 0;
  // Absolute, always ends with '/'.
  std::string base_dir;
  ZoneKind zone_kind = ZoneKind::kPrivate;
};

struct DirPolicy {
  bool randomized = false;
  uint64_t seed = 0;
};

// True for absolute paths with no empty, "." or ".." segments.
bool IsNormalizedPath(std::string_view path);

// 32 lowercase hex characters: BLAKE2b-128 over
//   seed (u64 little endian) || install_counter (u64 little endian) || app_id
// where install_counter is the number of installs the file system performed
// before this one.
std::string RandomizedDirName(uint64_t seed, std::string_view app_id,
                              uint64_t install_counter);

// Per-app sandboxed file zones plus one shared public storage zone.
//
// Not thread-safe. A FileSystem belongs to exactly one simulated world.
class FileSystem {
 public:
  FileSystem() = default;

  // Throws Error(kDuplicateApp) if |app_id| is already installed.
  const AppZone& InstallApp(const std::string& app_id, const DirPolicy& policy);
  // Removes the zone and every file in it. The uid is never reused.
  void UninstallApp(const std::string& app_id);

  const AppZone* FindApp(std::string_view app_id) const;
  // Private zone whose base_dir prefixes |path|, or nullptr.
  const AppZone* ZoneForPath(std::string_view path) const;
  static bool IsPublicPath(std::string_view path);

  // Errors: kInvalidPath (checked first), kNotFound, kPermissionDenied.
  std::string Read(std::string_view path, int actor_uid) const;
  // Creates or replaces a file. Replacing keeps the existing owner and mode.
  const FileNode& Write(std::string_view path, int actor_uid,
                        std::string content);
  const FileNode& Append(std::string_view path, int actor_uid,
                         std::string_view content);
  const FileNode& Chmod(std::string_view path, int actor_uid,
                        bool world_readable);

  bool Exists(std::string_view path) const;
  // Unchecked lookup for harness bookkeeping; never used on an attack path.
  const FileNode* Stat(std::string_view path) const;
  // Every path starting with |prefix|, sorted.
  std::vector<std::string> List(std::string_view prefix) const;

  const std::map<std::string, AppZone, std::less<>>& apps() const {
    return apps_;
  }
  const std::map<std::string, FileNode, std::less<>>& files() const {
    return files_;
  }
  uint64_t install_counter() const { return install_counter_; }

  // One line per file, sorted by path:
  //   <path>\t<uid>\t<mode>\t<base64 content>
  // where mode is 0644 for world-readable files and 0600 otherwise.
  std::string Dump() const;

 private:
  bool MayRead(const FileNode& node, int actor_uid) const;
  bool MayWrite(std::string_view path, int actor_uid) const;

  std::map<std::string, FileNode, std::less<>> files_;
  std::map<std::string, AppZone, std::less<>> apps_;
  int next_uid_ = kFirstAppUid;
  uint64_t install_counter_ = 0;
};

}  // namespace ifl::vfs

#endif  // IFL_VFS_FILE_SYSTEM_H_
