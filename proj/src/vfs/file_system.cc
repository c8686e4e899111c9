#include "ifl/vfs/file_system.h"

#include "ifl/base/codec.h"
#include "ifl/base/error.h"

namespace ifl::vfs {

namespace {

void RequireNormalized(std::string_view path) {
  if (!IsNormalizedPath(path))
    throw Error(Errc::kInvalidPath, std::string(path));
}

void AppendLittleEndian(std::string& out, uint64_t value) {
  for (int i = 0; i < 8; ++i)
    out.push_back(static_cast<char>((value >> (8 * i)) & 0xFF));
}

}  // namespace

bool IsNormalizedPath(std::string_view path) {
  if (path.empty() || path.front() != '/')
    return false;
  size_t pos = 1;
  while (pos <= path.size()) {
    size_t next = path.find('/', pos);
    if (next == std::string_view::npos)
      next = path.size();
    std::string_view segment = path.substr(pos, next - pos);
    bool last = next == path.size();
    // A trailing slash leaves one empty final segment, which is fine.
    if (segment.empty() && !last)
      return false;
    if (segment == "." || segment == "..")
      return false;
    pos = next + 1;
  }
  return true;
}

std::string RandomizedDirName(uint64_t seed, std::string_view app_id,
                              uint64_t install_counter) {
  std::string message;
  AppendLittleEndian(message, seed);
  AppendLittleEndian(message, install_counter);
  message.append(app_id);
  return codec::HexEncode(codec::Blake2b(message, 16));
}

const AppZone& FileSystem::InstallApp(const std::string& app_id,
                                      const DirPolicy& policy) {
  if (apps_.contains(app_id))
    throw Error(Errc::kDuplicateApp, app_id);
  AppZone zone;
  zone.app_id = app_id;
  zone.uid = next_uid_++;
  zone.zone_kind = ZoneKind::kPrivate;
  if (policy.randomized) {
    zone.base_dir = std::string(kRandomizedDataDir) +
                    RandomizedDirName(policy.seed, app_id, install_counter_) +
                    "/";
  } else {
    zone.base_dir = std::string(kAndroidDataDir) + app_id + "/";
  }
  ++install_counter_;
  return apps_.emplace(app_id, std::move(zone)).first->second;
}

void FileSystem::UninstallApp(const std::string& app_id) {
  auto it = apps_.find(app_id);
  if (it == apps_.end())
    throw Error(Errc::kUnknownApp, app_id);
  const std::string& base = it->second.base_dir;
  for (auto f = files_.lower_bound(base);
       f != files_.end() && f->first.starts_with(base);) {
    f = files_.erase(f);
  }
  apps_.erase(it);
}

const AppZone* FileSystem::FindApp(std::string_view app_id) const {
  auto it = apps_.find(app_id);
  return it == apps_.end() ? nullptr : &it->second;
}

const AppZone* FileSystem::ZoneForPath(std::string_view path) const {
  for (const auto& [id, zone] : apps_) {
    if (path.starts_with(zone.base_dir))
      return &zone;
  }
  return nullptr;
}

bool FileSystem::IsPublicPath(std::string_view path) {
  return path.starts_with(kPublicStorageDir);
}

bool FileSystem::MayRead(const FileNode& node, int actor_uid) const {
  return actor_uid == kRootUid || actor_uid == node.owner_uid ||
         node.world_readable || IsPublicPath(node.path);
}

bool FileSystem::MayWrite(std::string_view path, int actor_uid) const {
  if (actor_uid == kRootUid || IsPublicPath(path))
    return true;
  const AppZone* zone = ZoneForPath(path);
  return zone != nullptr && zone->uid == actor_uid;
}

std::string FileSystem::Read(std::string_view path, int actor_uid) const {
  RequireNormalized(path);
  auto it = files_.find(path);
  if (it == files_.end())
    throw Error(Errc::kNotFound, std::string(path));
  if (!MayRead(it->second, actor_uid))
    throw Error(Errc::kPermissionDenied, std::string(path));
  return it->second.content;
}

const FileNode& FileSystem::Write(std::string_view path, int actor_uid,
                                  std::string content) {
  RequireNormalized(path);
  if (path.back() == '/')
    throw Error(Errc::kInvalidPath, std::string(path));
  if (!MayWrite(path, actor_uid))
    throw Error(Errc::kPermissionDenied, std::string(path));

  auto it = files_.find(path);
  if (it != files_.end()) {
    it->second.content = std::move(content);
    return it->second;
  }
  FileNode node;
  node.path = std::string(path);
  node.content = std::move(content);
  if (IsPublicPath(path)) {
    node.owner_uid = actor_uid;
    node.world_readable = true;
  } else if (const AppZone* zone = ZoneForPath(path)) {
    // Root writing into a zone still yields a file owned by that zone.
    node.owner_uid = zone->uid;
  } else {
    node.owner_uid = actor_uid;
  }
  return files_.emplace(node.path, std::move(node)).first->second;
}

const FileNode& FileSystem::Append(std::string_view path, int actor_uid,
                                   std::string_view content) {
  RequireNormalized(path);
  std::string current;
  if (auto it = files_.find(path); it != files_.end()) {
    if (!MayRead(it->second, actor_uid))
      throw Error(Errc::kPermissionDenied, std::string(path));
    current = it->second.content;
  }
  current.append(content);
  return Write(path, actor_uid, std::move(current));
}

const FileNode& FileSystem::Chmod(std::string_view path, int actor_uid,
                                  bool world_readable) {
  RequireNormalized(path);
  auto it = files_.find(path);
  if (it == files_.end())
    throw Error(Errc::kNotFound, std::string(path));
  FileNode& node = it->second;
  if (actor_uid != kRootUid && actor_uid != node.owner_uid)
    throw Error(Errc::kPermissionDenied, std::string(path));
  // Public storage stays world-readable whatever the mode bits say.
  node.world_readable = world_readable || IsPublicPath(path);
  return node;
}

bool FileSystem::Exists(std::string_view path) const {
  return files_.contains(path);
}

const FileNode* FileSystem::Stat(std::string_view path) const {
  auto it = files_.find(path);
  return it == files_.end() ? nullptr : &it->second;
}

std::vector<std::string> FileSystem::List(std::string_view prefix) const {
  std::vector<std::string> out;
  for (auto it = files_.lower_bound(prefix);
       it != files_.end() && it->first.starts_with(prefix); ++it) {
    out.push_back(it->first);
  }
  return out;
}

std::string FileSystem::Dump() const {
  std::string out;
  for (const auto& [path, node] : files_) {
    out += path;
    out += '\t';
    out += std::to_string(node.owner_uid);
    out += '\t';
    out += node.world_readable ? "0644" : "0600";
    out += '\t';
    out += codec::Base64Encode(node.content);
    out += '\n';
  }
  return out;
}

}  // namespace ifl::vfs
